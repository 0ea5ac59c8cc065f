//! Command-line front end. Every command renders library results through
//! [`crate::format`].

use std::collections::BTreeSet;
use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::crossed::CrossedProduct;
use crate::error::{Error, Result};
use crate::format;
use crate::hecke::HeckeAlgebra;
use crate::oracle::Bridge;
use crate::pair::{Ball, CrossSection, Descriptor, GaussPair, HeckePair, LinearPair};
use crate::selftest::{self, Config};

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Exact Hecke algebras and their crossed-product presentation")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Instance descriptor: bc, bc:<primes>, gl:<1..3> or gauss. Defaults to
    /// the header of the first input file, else bc. For selftest, restricts
    /// the run to one of bc, gl:2, gl:3, gauss.
    #[arg(long, global = true)]
    pub instance: Option<String>,
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Ball overrides, e.g. `n_den=4,primes=2:3`.
    #[arg(long, global = true)]
    pub ball: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    /// Cross-section used by the Gaussian instance.
    #[arg(long, global = true, value_enum, default_value_t = Section::Canonical)]
    pub cross_section: Section,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Machine,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Section {
    Canonical,
    Alternate,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Double-coset key, R, L and coset representatives of an element.
    Decompose { element: String },
    /// Convolution of two element files (`-` reads standard input).
    Convolve { f: String, g: String },
    /// Crossed-product arithmetic.
    #[command(subcommand)]
    Cp(CpCommand),
    /// Runs the property suites; exit status 1 on any failure.
    Selftest {
        /// Run a single suite.
        #[arg(long)]
        suite: Option<String>,
        /// List the suites and exit.
        #[arg(long)]
        list: bool,
    },
    /// Products of basis elements generated by the given elements.
    Table {
        generators: Vec<String>,
        /// Number of multiplication rounds used to grow the basis set.
        #[arg(long, default_value_t = 1)]
        bound: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum CpCommand {
    /// Product of two crossed-product files.
    Mul { a: String, b: String },
    /// Adjoint of a crossed-product file.
    Star { a: String },
    /// Crossed-product file to Hecke element file.
    Embed { a: String },
    /// Hecke element file to crossed-product file.
    Unembed { h: String },
    /// `α_s` applied to an element file supported in N.
    Alpha { s: String, h: String },
    /// Left inverse of `α_s` on its corner.
    AlphaInv { s: String, h: String },
    /// Checks relation h1 (s, t), h2 (x, y) or h3 (s, x); exit status 1 if it fails.
    Verify {
        #[arg(value_parser = ["h1", "h2", "h3"])]
        relation: String,
        first: String,
        second: String,
    },
}

/// Standard output and exit status of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

/// Runs a parsed command line; errors map to exit codes 2, 3 and 4.
pub fn execute(cli: &Cli) -> std::result::Result<Outcome, Error> {
    let ball = match &cli.global.ball {
        Some(spec) => Ball::default().with_overrides(spec)?,
        None => Ball::default(),
    };
    if let Command::Selftest { suite, list } = &cli.command {
        return selftest_cmd(&cli.global, ball, suite.as_deref(), *list);
    }
    let desc: Descriptor = match (&cli.global.instance, first_file(&cli.command)) {
        (Some(i), _) => i.parse()?,
        (None, Some(path)) if path != "-" => format::peek_instance(&read_input(path)?)?,
        _ => Descriptor::Bc { primes: None },
    };
    match desc {
        Descriptor::Gauss => {
            let section = match cli.global.cross_section {
                Section::Canonical => CrossSection::Canonical,
                Section::Alternate => CrossSection::Alternate,
            };
            Runner::new(GaussPair::new(section), &cli.global).run(&cli.command)
        }
        other => Runner::new(LinearPair::new(other)?, &cli.global).run(&cli.command),
    }
}

fn selftest_cmd(g: &Global, ball: Ball, suite: Option<&str>, list: bool) -> Result<Outcome> {
    if list {
        let mut out = String::new();
        for (name, about) in selftest::SUITES {
            out.push_str(&format!("{name:<20} {about}\n"));
        }
        return Ok(Outcome { stdout: out, code: 0 });
    }
    let report = selftest::run(&Config { seed: g.seed, ball, only_instance: g.instance.clone() }, suite)?;
    let stdout = match g.format {
        OutputFormat::Human => report.render_human(),
        OutputFormat::Machine => format!("{}\n", report.to_json()),
    };
    Ok(Outcome { stdout, code: if report.passed() { 0 } else { 1 } })
}

/// The first element file a command reads.
fn first_file(cmd: &Command) -> Option<&str> {
    match cmd {
        Command::Convolve { f, .. } => Some(f),
        Command::Cp(CpCommand::Mul { a, .. } | CpCommand::Star { a } | CpCommand::Embed { a }) => Some(a),
        Command::Cp(CpCommand::Unembed { h } | CpCommand::Alpha { h, .. } | CpCommand::AlphaInv { h, .. }) => Some(h),
        _ => None,
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))
    }
}

struct Runner<'g, P: HeckePair> {
    h: HeckeAlgebra<P>,
    g: &'g Global,
}

impl<'g, P: Bridge> Runner<'g, P> {
    fn new(pair: P, g: &'g Global) -> Self {
        Runner { h: HeckeAlgebra::new(pair), g }
    }

    fn p(&self) -> &P {
        self.h.pair()
    }

    fn machine(&self) -> bool {
        self.g.format == OutputFormat::Machine
    }

    fn ok(stdout: String) -> Result<Outcome> {
        Ok(Outcome { stdout, code: 0 })
    }

    fn emit_element(&self, e: &crate::hecke::HeckeElement<P>) -> Result<Outcome> {
        if self.machine() {
            Self::ok(format!("{}\n", format::element_json(self.p(), e)))
        } else {
            Self::ok(format::render_element(self.p(), e))
        }
    }

    fn emit_cp(&self, a: &crate::crossed::CpElement<P>) -> Result<Outcome> {
        if self.machine() {
            Self::ok(format!("{}\n", format::cp_json(self.p(), a)))
        } else {
            Self::ok(format::render_cp(self.p(), a))
        }
    }

    fn element_file(&self, path: &str) -> Result<crate::hecke::HeckeElement<P>> {
        format::parse_element(self.p(), &read_input(path)?)
    }

    fn run(&self, cmd: &Command) -> Result<Outcome> {
        match cmd {
            Command::Decompose { element } => self.decompose(element),
            Command::Convolve { f, g } => {
                let (f, g) = (self.element_file(f)?, self.element_file(g)?);
                self.emit_element(&self.h.convolve(&f, &g)?)
            }
            Command::Cp(c) => self.cp(c),
            Command::Table { generators, bound } => self.table(generators, *bound),
            Command::Selftest { .. } => unreachable!("handled before instance selection"),
        }
    }

    fn decompose(&self, text: &str) -> Result<Outcome> {
        let p = self.p();
        let g = p.parse_elem(text)?;
        let k = p.key(&g);
        let right: Vec<String> = p.right_coset_reps(&k).iter().map(|e| p.render_elem(e)).collect();
        let left: Vec<String> = p.left_coset_reps(&k).iter().map(|e| p.render_elem(e)).collect();
        let (r, l) = (p.r_count(&k), p.l_count(&k));
        if self.machine() {
            let v = json!({
                "instance": p.descriptor().to_string(),
                "element": p.render_elem(&g),
                "key": p.render_key(&k),
                "R": r,
                "L": l,
                "right": right,
                "left": left,
            });
            return Self::ok(format!("{v}\n"));
        }
        let mut out = format!(
            "instance {}\nelement {}\nkey {}\nR {r}\nL {l}\nright cosets\n",
            p.descriptor(),
            p.render_elem(&g),
            p.render_key(&k)
        );
        for e in &right {
            out.push_str(&format!("  {e}\n"));
        }
        out.push_str("left cosets\n");
        for e in &left {
            out.push_str(&format!("  {e}\n"));
        }
        Self::ok(out)
    }

    fn cp(&self, cmd: &CpCommand) -> Result<Outcome> {
        let cp = CrossedProduct::new(&self.h);
        let cp_file = |path: &str| format::parse_cp(&cp, &read_input(path)?);
        match cmd {
            CpCommand::Mul { a, b } => self.emit_cp(&cp.cp_mul(&cp_file(a)?, &cp_file(b)?)?),
            CpCommand::Star { a } => self.emit_cp(&cp.cp_star(&cp_file(a)?)),
            CpCommand::Embed { a } => self.emit_element(&cp.embed(&cp_file(a)?)?),
            CpCommand::Unembed { h } => self.emit_cp(&cp.unembed(&self.element_file(h)?)?),
            CpCommand::Alpha { s, h } => self.emit_element(&cp.alpha(&self.p().parse_s(s)?, &self.element_file(h)?)?),
            CpCommand::AlphaInv { s, h } => {
                self.emit_element(&cp.alpha_inv(&self.p().parse_s(s)?, &self.element_file(h)?)?)
            }
            CpCommand::Verify { relation, first, second } => {
                let p = self.p();
                let n_key = |t: &str| -> Result<P::Key> {
                    let k = p.parse_key(t)?;
                    if p.key_in_n(&k) {
                        Ok(k)
                    } else {
                        Err(Error::NotInN)
                    }
                };
                let holds = match relation.as_str() {
                    "h1" => cp.verify_relation_h1(&p.parse_s(first)?, &p.parse_s(second)?)?,
                    "h2" => cp.verify_relation_h2(&n_key(first)?, &n_key(second)?)?,
                    _ => cp.verify_relation_h3(&p.parse_s(first)?, &n_key(second)?)?,
                };
                let stdout = if self.machine() {
                    format!("{}\n", json!({ "relation": relation, "holds": holds }))
                } else {
                    format!("{relation} {}\n", if holds { "holds" } else { "fails" })
                };
                Ok(Outcome { stdout, code: if holds { 0 } else { 1 } })
            }
        }
    }

    fn table(&self, generators: &[String], bound: u32) -> Result<Outcome> {
        let p = self.p();
        let gens: Vec<P::Key> = generators.iter().map(|t| p.parse_key(t)).collect::<Result<_>>()?;
        let mut basis: BTreeSet<P::Key> = gens.iter().cloned().collect();
        for _ in 1..bound {
            let mut next = basis.clone();
            for a in &basis {
                for g in &gens {
                    next.extend(self.h.basis_product(a, g).iter().map(|(k, _)| k.clone()));
                }
            }
            basis = next;
        }
        let basis: Vec<P::Key> = basis.into_iter().collect();
        let mut rows = Vec::new();
        let mut out = format!("instance {}\n", p.descriptor());
        for a in &basis {
            for b in &basis {
                let prod = self.h.convolve(&self.h.basis_key(a.clone()), &self.h.basis_key(b.clone()))?;
                let terms: Vec<String> =
                    prod.terms().iter().map(|(k, c)| format!("{c} [{}]", p.render_key(k))).collect();
                out.push_str(&format!(
                    "[{}] * [{}] = {}\n",
                    p.render_key(a),
                    p.render_key(b),
                    if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
                ));
                rows.push(json!({
                    "left": p.render_key(a),
                    "right": p.render_key(b),
                    "product": format::element_json(p, &prod)["terms"].clone(),
                }));
            }
        }
        if self.machine() {
            let basis: Vec<Value> = basis.iter().map(|k| Value::from(p.render_key(k))).collect();
            let v = json!({ "instance": p.descriptor().to_string(), "basis": basis, "products": rows });
            return Self::ok(format!("{v}\n"));
        }
        Self::ok(out)
    }
}

/// Entry point of the `hecke` binary.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
