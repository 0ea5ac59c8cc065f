//! Seeded property suites over the instance families.
//!
//! Every case draws from its own generator, derived from the seed, the
//! suite, the instance and the case index, so reports are identical for a
//! given seed whatever the thread count.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::crossed::{CpElement, CrossedProduct, Monomial};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::lattice::{lattice_index, IntMatrix, Lattice};
use crate::oracle::{self, Bridge, CosetCache, CosetSet};
use crate::pair::{Ball, CrossSection, Descriptor, GaussPair, HeckePair, LinearPair};
use crate::quad::QuadScalar;
use crate::rational::Rational;

/// Seed and sampling bounds.
#[derive(Clone, Debug, Default)]
pub struct Config {
    pub seed: u64,
    pub ball: Ball,
    /// Restricts every suite to one built-in instance label.
    pub only_instance: Option<String>,
}

impl Config {
    fn wants(&self, label: &str) -> bool {
        self.only_instance.as_deref().is_none_or(|o| o == label)
    }
}

/// Outcome of one suite on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub instance: String,
    pub cases: u64,
    pub failures: u64,
    pub counterexample: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    pub fn render_human(&self) -> String {
        let mut out = format!("selftest seed {}\n", self.seed);
        for s in &self.suites {
            let tag = if s.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{tag}] {}", s.name);
            for c in &s.checks {
                let _ = writeln!(out, "       {:<8} {:>6} cases {:>4} failures", c.instance, c.cases, c.failures);
                if let Some(e) = &c.counterexample {
                    let _ = writeln!(out, "       first counterexample: {e}");
                }
            }
        }
        let passed = self.suites.iter().filter(|s| s.passed()).count();
        let _ = writeln!(out, "{passed}/{} suites passed", self.suites.len());
        out
    }

    pub fn to_json(&self) -> Value {
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                let checks: Vec<Value> = s
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "instance": c.instance,
                            "cases": c.cases,
                            "failures": c.failures,
                            "counterexample": c.counterexample,
                        })
                    })
                    .collect();
                json!({ "name": s.name, "passed": s.passed(), "checks": checks })
            })
            .collect();
        json!({ "seed": self.seed, "passed": self.passed(), "suites": suites })
    }
}

/// Suite names with a one-line description, sorted by name.
pub const SUITES: &[(&str, &str)] = &[
    ("basis-well-defined", "equal Γ-keys embed as R(key)⁻¹·weight·[key]; identical in normal instances"),
    ("corner", "α_s(1) is a projection, α_s is an injective *-endomorphism and α_s∘α_t = α_st"),
    ("coset-counts", "R and L agree with the oracle; coset sets factor as R × residues"),
    ("cp-axioms", "crossed-product associativity, star, unit and Ore-pair independence"),
    ("cross-section", "α_s is the same under both Gaussian cross-sections"),
    ("gauss-r-bound", "Gaussian elements of N have at most four right cosets"),
    ("h-relations", "relations h1, h2, h3 through embed"),
    ("hecke-axioms", "associativity, unit and anti-multiplicative involution"),
    ("isomorphism", "embed and unembed are inverse; embed is multiplicative"),
    ("k-scaling", "K(γσ, γτ) = R(γ)·K(σ, τ), by convolution and by the oracle"),
    ("non-normality", "e(x)∗e(y) = e(xy) on N-balls exactly when Γ₀ is normal"),
    ("oracle-convolution", "convolution agrees with brute-force counting"),
    ("r-det", "R(s) = det(s) = [Z^d : sᵗZ^d]"),
    ("r-multiplicative", "R is multiplicative on Σ"),
    ("single-term", "[γ][σ] and [σ]*[γ] are positive integer multiples of one double coset"),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

/// Runs every suite, or only `only`. Unknown names are a parse error.
pub fn run(cfg: &Config, only: Option<&str>) -> Result<Report> {
    if let Some(i) = &cfg.only_instance {
        if !INSTANCES.contains(&i.as_str()) {
            return Err(Error::Parse(format!("selftest instances are {}, not `{i}`", INSTANCES.join(", "))));
        }
    }
    let names: Vec<&'static str> = match only {
        None => suite_names().collect(),
        Some(name) => {
            vec![suite_names().find(|n| *n == name).ok_or_else(|| Error::Parse(format!("unknown suite `{name}`")))?]
        }
    };
    let mut suites: Vec<SuiteReport> = names.par_iter().map(|n| run_suite(n, cfg)).collect();
    suites.sort_by_key(|s| s.name);
    Ok(Report { seed: cfg.seed, suites })
}

pub fn run_suite(name: &str, cfg: &Config) -> SuiteReport {
    let (name, checks) = match name {
        "basis-well-defined" => ("basis-well-defined", on_all(cfg, WELL_DEFINED)),
        "coset-counts" => ("coset-counts", on_all(cfg, COSET_COUNTS)),
        "cp-axioms" => ("cp-axioms", on_all(cfg, CP_AXIOMS)),
        "cross-section" => ("cross-section", gauss_only(cfg, cross_section)),
        "corner" => ("corner", on_all(cfg, CORNER)),
        "gauss-r-bound" => ("gauss-r-bound", gauss_only(cfg, gauss_r_bound)),
        "h-relations" => ("h-relations", on_all(cfg, H_RELATIONS)),
        "hecke-axioms" => ("hecke-axioms", on_all(cfg, HECKE_AXIOMS)),
        "isomorphism" => ("isomorphism", on_all(cfg, ISOMORPHISM)),
        "k-scaling" => ("k-scaling", on_all(cfg, K_SCALING)),
        "non-normality" => ("non-normality", on_all(cfg, NON_NORMALITY)),
        "oracle-convolution" => ("oracle-convolution", oracle_convolution(cfg)),
        "r-det" => ("r-det", r_det(cfg)),
        "r-multiplicative" => ("r-multiplicative", on_all(cfg, R_MULTIPLICATIVE)),
        "single-term" => ("single-term", on_all(cfg, SINGLE_TERM)),
        other => panic!("unknown suite `{other}`"),
    };
    SuiteReport { name, checks }
}

fn gauss_only(cfg: &Config, f: fn(&Config) -> Check) -> Vec<Check> {
    if cfg.wants("gauss") {
        vec![f(cfg)]
    } else {
        Vec::new()
    }
}

/// Instances every structural suite runs on.
pub const INSTANCES: &[&str] = &["bc", "gl:2", "gl:3", "gauss"];

fn on_list<F>(cfg: &Config, list: &[&str], f: F) -> Vec<Check>
where
    F: Fn(&str) -> Check + Sync + Send,
{
    list.par_iter().filter(|d| cfg.wants(d)).map(|d| f(d)).collect()
}

fn on_all(cfg: &Config, body: SuiteBody) -> Vec<Check> {
    on_list(cfg, INSTANCES, |d| body.run(cfg, d))
}

/// A generic suite body, monomorphised once per family.
#[derive(Clone, Copy)]
struct SuiteBody {
    linear: fn(&Cx<LinearPair>) -> Check,
    gauss: fn(&Cx<GaussPair>) -> Check,
}

impl SuiteBody {
    fn run(&self, cfg: &Config, desc: &str) -> Check {
        let d: Descriptor = desc.parse().expect("built-in descriptor");
        match d {
            Descriptor::Gauss => (self.gauss)(&Cx::new(GaussPair::default(), cfg, desc)),
            other => (self.linear)(&Cx::new(LinearPair::new(other).expect("built-in descriptor"), cfg, desc)),
        }
    }
}

macro_rules! body {
    ($f:ident) => {
        SuiteBody { linear: $f::<LinearPair>, gauss: $f::<GaussPair> }
    };
}

type CaseResult = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn case_rng(seed: u64, tag: &str, case: u64) -> ChaCha8Rng {
    // FNV-1a of the tag keeps streams of different suites apart
    let h = tag.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(case);
    rng
}

fn tally(instance: &str, results: Vec<CaseResult>) -> Check {
    let cases = results.len() as u64;
    let mut failures = 0;
    let mut counterexample = None;
    for r in results {
        if let Err(e) = r {
            failures += 1;
            counterexample.get_or_insert(e);
        }
    }
    Check { instance: instance.to_string(), cases, failures, counterexample }
}

/// Per-instance state shared by the cases of one suite.
pub struct Cx<'c, P: HeckePair> {
    pub h: HeckeAlgebra<P>,
    pub cfg: &'c Config,
    pub label: &'c str,
}

impl<'c, P: Bridge> Cx<'c, P> {
    fn new(pair: P, cfg: &'c Config, label: &'c str) -> Self {
        Cx { h: HeckeAlgebra::new(pair), cfg, label }
    }

    fn p(&self) -> &P {
        self.h.pair()
    }

    fn ball(&self) -> &Ball {
        &self.cfg.ball
    }

    fn cp(&self) -> CrossedProduct<'_, P> {
        CrossedProduct::new(&self.h)
    }

    fn sampled<F>(&self, suite: &str, cases: u64, f: F) -> Check
    where
        F: Fn(&mut ChaCha8Rng) -> CaseResult + Sync + Send,
    {
        let tag = format!("{suite}/{}", self.label);
        let results = (0..cases).into_par_iter().map(|i| f(&mut case_rng(self.cfg.seed, &tag, i))).collect();
        tally(self.label, results)
    }

    fn exhaustive<T: Sync, F>(&self, items: &[T], f: F) -> Check
    where
        F: Fn(&T) -> CaseResult + Sync + Send,
    {
        tally(self.label, items.par_iter().map(f).collect())
    }

    fn coeff(&self, rng: &mut ChaCha8Rng) -> QuadScalar {
        let num = loop {
            let k: i64 = rng.gen_range(-4..=4);
            if k != 0 {
                break k;
            }
        };
        QuadScalar::from_rational(Rational::new(num.into(), rng.gen_range(1..=3i64).into()))
    }

    fn key(&self, rng: &mut ChaCha8Rng) -> P::Key {
        self.p().key(&self.p().sample_elem(rng, self.ball()))
    }

    fn n_key(&self, rng: &mut ChaCha8Rng) -> P::Key {
        self.p().key(&self.p().sample_n(rng, self.ball()))
    }

    /// Ball for semigroup samples in crossed-product suites; Ore pairs of
    /// matrices multiply determinants, so those stay small.
    fn s_ball(&self) -> Ball {
        let mut b = self.ball().clone();
        match self.p().descriptor() {
            Descriptor::Gauss => b.s_bound = b.norm,
            Descriptor::Gl(d) if *d > 1 => b.s_bound = b.s_bound.min(4),
            _ => {}
        }
        b
    }

    fn s(&self, rng: &mut ChaCha8Rng) -> P::S {
        self.p().sample_s(rng, &self.s_ball())
    }

    /// Semigroup sample up to the full bound (norm for Gaussian).
    fn s_full(&self, rng: &mut ChaCha8Rng) -> P::S {
        let mut b = self.ball().clone();
        if matches!(self.p().descriptor(), Descriptor::Gauss) {
            b.s_bound = b.norm;
        }
        self.p().sample_s(rng, &b)
    }

    /// Semigroup sample for chained crossed-product products.
    fn s_cp(&self, rng: &mut ChaCha8Rng) -> P::S {
        let mut b = self.ball().clone();
        // adjugate Ore pairs raise det(s) to the power d per product
        b.s_bound = match self.p().descriptor() {
            Descriptor::Gl(2) => b.cp_s_bound.min(3),
            Descriptor::Gl(3) => b.cp_s_bound.min(2),
            _ => b.cp_s_bound,
        };
        self.p().sample_s(rng, &b)
    }

    fn sigma(&self, rng: &mut ChaCha8Rng) -> P::Elem {
        self.p().sample_sigma(rng, self.ball())
    }

    fn element(&self, rng: &mut ChaCha8Rng, in_n: bool) -> HeckeElement<P> {
        let mut h = self.h.zero();
        for _ in 0..rng.gen_range(1..=3) {
            let k = if in_n { self.n_key(rng) } else { self.key(rng) };
            h.add_term(k, self.coeff(rng));
        }
        h
    }

    fn monomial(&self, rng: &mut ChaCha8Rng) -> Monomial<P> {
        Monomial { t: self.s(rng), x: self.n_key(rng), s: self.s(rng) }
    }

    fn cp_monomial(&self, rng: &mut ChaCha8Rng) -> Monomial<P> {
        Monomial { t: self.s_cp(rng), x: self.n_key(rng), s: self.s_cp(rng) }
    }

    fn cp_element(&self, rng: &mut ChaCha8Rng, terms: usize) -> CpElement<P> {
        let cp = self.cp();
        let mut a = cp.zero();
        for _ in 0..terms {
            let m = self.cp_monomial(rng);
            cp.add_monomial(&mut a, m, self.coeff(rng));
        }
        a
    }

    fn show_elem(&self, g: &P::Elem) -> String {
        self.p().render_elem(g)
    }

    fn show_key(&self, k: &P::Key) -> String {
        self.p().render_key(k)
    }

    fn show_s(&self, s: &P::S) -> String {
        self.p().render_s(s)
    }

    fn show(&self, h: &HeckeElement<P>) -> String {
        if h.is_zero() {
            return "0".into();
        }
        h.terms().iter().map(|(k, c)| format!("({c})[{}]", self.show_key(k))).collect::<Vec<_>>().join(" + ")
    }

    fn show_cp(&self, a: &CpElement<P>) -> String {
        a.terms()
            .map(|(_, m, c)| format!("({c}) {}", crate::format::render_monomial(self.p(), m)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn r_det(cfg: &Config) -> Vec<Check> {
    (1..=3usize)
        .into_par_iter()
        .filter(|d| cfg.wants(&format!("gl:{d}")) || (*d == 1 && cfg.wants("bc")))
        .map(|d| {
            let label = format!("gl:{d}");
            let cx = Cx::new(LinearPair::gl(d).expect("d <= 3"), cfg, &label);
            cx.sampled("r-det", 50, |rng| {
                let s = loop {
                    let data: Vec<i64> = if d == 1 {
                        vec![rng.gen_range(1..=60)]
                    } else {
                        (0..d * d).map(|_| rng.gen_range(-5..=5)).collect()
                    };
                    let m = IntMatrix::from_i64(d, d, &data);
                    let det = m.det().expect("square");
                    if det.is_positive() && det <= 60.into() {
                        break m;
                    }
                };
                let det = s.det().expect("square");
                let r = cx.p().r_of(&cx.p().s_embed(&s));
                let sub = lib(Lattice::standard(d).image(&s.transpose().to_rational()))?;
                let index = lib(lattice_index(&sub, &Lattice::standard(d)))?;
                ensure!(
                    num_bigint::BigInt::from(r) == det && index == det,
                    "s = {}: R = {r}, det = {det}, index = {index}",
                    cx.show_s(&s)
                );
                Ok(())
            })
        })
        .collect()
}

fn r_multiplicative<P: Bridge>(cx: &Cx<P>) -> Check {
    let p = cx.p();
    cx.sampled("r-multiplicative", 100, |rng| {
        let (a, b) = (cx.sigma(rng), cx.sigma(rng));
        let ab = p.multiply(&a, &b);
        ensure!(p.in_sigma(&a) && p.in_sigma(&b) && p.in_sigma(&ab), "Σ not closed at {}", cx.show_elem(&ab));
        let (ra, rb, rab) = (p.r_of(&a), p.r_of(&b), p.r_of(&ab));
        ensure!(rab == ra * rb, "R({}) = {rab} but R·R = {ra}·{rb}", cx.show_elem(&ab));
        Ok(())
    })
}
const R_MULTIPLICATIVE: SuiteBody = body!(r_multiplicative);

/// `[γ][σ] = c·[γσ]` and `[σ]*[γ] = c'·[σ⁻¹γ]` with positive integers
/// `c, c'`; the coset counts then satisfy `c·L(γσ) = L(γ)` and
/// `c'·R(σ⁻¹γ) = R(γ)`.
fn single_term<P: Bridge>(cx: &Cx<P>) -> Check {
    let (p, h) = (cx.p(), &cx.h);
    cx.sampled("single-term", 100, |rng| {
        let g = p.sample_elem(rng, cx.ball());
        let s = cx.sigma(rng);
        let gs = p.multiply(&g, &s);
        let prod = lib(h.convolve(&h.basis(&g), &h.basis(&s)))?;
        let c = prod.single_term().filter(|(k, _)| *k == &p.key(&gs)).and_then(|(_, c)| c.as_positive_integer());
        let Some(c) = c else {
            return Err(format!("[{}][{}] = {}", cx.show_elem(&g), cx.show_elem(&s), cx.show(&prod)));
        };
        ensure!(
            c * p.l_of(&gs) == p.l_of(&g),
            "γ = {}, σ = {}: c = {c}, L(γσ) = {}, L(γ) = {}",
            cx.show_elem(&g),
            cx.show_elem(&s),
            p.l_of(&gs),
            p.l_of(&g)
        );
        let s_inv_g = p.multiply(&p.invert(&s), &g);
        let dual = lib(h.convolve(&h.involution(&h.basis(&s)), &h.basis(&g)))?;
        let c = dual.single_term().filter(|(k, _)| *k == &p.key(&s_inv_g)).and_then(|(_, c)| c.as_positive_integer());
        let Some(c) = c else {
            return Err(format!("[{}]*[{}] = {}", cx.show_elem(&s), cx.show_elem(&g), cx.show(&dual)));
        };
        ensure!(
            c * p.r_of(&s_inv_g) == p.r_of(&g),
            "γ = {}, σ = {}: c' = {c}, R(σ⁻¹γ) = {}, R(γ) = {}",
            cx.show_elem(&g),
            cx.show_elem(&s),
            p.r_of(&s_inv_g),
            p.r_of(&g)
        );
        Ok(())
    })
}
const SINGLE_TERM: SuiteBody = body!(single_term);

/// Hecke product re-indexed by oracle coset sets.
fn product_by_oracle<P: Bridge>(
    cx: &Cx<P>,
    o: &CosetCache<P::Oracle>,
    prod: &HeckeElement<P>,
) -> std::result::Result<BTreeMap<CosetSet, u64>, String> {
    prod.terms()
        .iter()
        .map(|(k, c)| {
            let c = c
                .as_positive_integer()
                .ok_or_else(|| format!("coefficient {c} at [{}] is not a positive integer", cx.show_key(k)))?;
            let rep = cx.p().to_oracle(&cx.p().key_rep(k));
            Ok(((*o.double_coset(&rep)).clone(), c))
        })
        .collect()
}

fn compare_product<P: Bridge>(cx: &Cx<P>, o: &CosetCache<P::Oracle>, a: &P::Key, b: &P::Key) -> CaseResult {
    let h = &cx.h;
    let prod = lib(h.convolve(&h.basis_key(a.clone()), &h.basis_key(b.clone())))?;
    let mine = product_by_oracle(cx, o, &prod)?;
    let p = cx.p();
    let theirs = oracle::oracle_product_cached(o, &p.to_oracle(&p.key_rep(a)), &p.to_oracle(&p.key_rep(b)));
    ensure!(
        mine == theirs,
        "[{}]∗[{}] = {} disagrees with the oracle ({} vs {} support cosets)",
        cx.show_key(a),
        cx.show_key(b),
        cx.show(&prod),
        mine.len(),
        theirs.len()
    );
    Ok(())
}

fn oracle_bc<P: Bridge>(cx: &Cx<P>, keys: &[P::Key]) -> Check {
    let o = cx.p().oracle();
    let cache = CosetCache::new(&o);
    let pairs: Vec<(&P::Key, &P::Key)> = keys.iter().flat_map(|a| keys.iter().map(move |b| (a, b))).collect();
    cx.exhaustive(&pairs, |(a, b)| compare_product(cx, &cache, a, b))
}

fn oracle_sampled<P: Bridge>(cx: &Cx<P>) -> Check {
    let o = cx.p().oracle();
    let cache = CosetCache::new(&o);
    cx.sampled("oracle-convolution", 500, |rng| {
        let (a, b) = (cx.key(rng), cx.key(rng));
        compare_product(cx, &cache, &a, &b)
    })
}
const ORACLE_SAMPLED: SuiteBody = body!(oracle_sampled);

fn oracle_convolution(cfg: &Config) -> Vec<Check> {
    let mut out = Vec::new();
    if cfg.wants("bc") {
        let cx = Cx::new(LinearPair::bc(), cfg, "bc");
        let keys = cx.p().ball_keys_1d(cx.ball());
        out.push(oracle_bc(&cx, &keys));
    }
    out.extend(on_list(cfg, &["gl:2", "gauss"], |d| ORACLE_SAMPLED.run(cfg, d)));
    out
}

fn coset_counts<P: Bridge>(cx: &Cx<P>) -> Check {
    let (p, o) = (cx.p(), cx.p().oracle());
    let per_right = if matches!(p.descriptor(), Descriptor::Gauss) { 4 } else { 1 };
    cx.sampled("coset-counts", 100, |rng| {
        let g = if rng.gen_bool(0.5) { p.sample_elem(rng, cx.ball()) } else { p.sample_n(rng, cx.ball()) };
        let k = p.key(&g);
        let og = p.to_oracle(&g);
        let cs = oracle::oracle_double_coset(&o, &og);
        let (r, l) = (p.r_count(&k), p.l_count(&k));
        ensure!(
            r == cs.right_count() && l == oracle::oracle_l(&o, &og),
            "{}: R = {r}, L = {l}, oracle R = {}, L = {}",
            cx.show_elem(&g),
            cs.right_count(),
            oracle::oracle_l(&o, &og)
        );
        ensure!(cs.residues.len() as u64 == r * per_right, "{}: residues do not factor", cx.show_elem(&g));
        let reps = p.right_coset_reps(&k);
        ensure!(reps.len() as u64 == r, "{}: {} right representatives", cx.show_elem(&g), reps.len());
        let mut rights = std::collections::BTreeSet::new();
        for rep in &reps {
            let rc = oracle::Oracle::right_coset(&o, &p.to_oracle(rep));
            ensure!(cs.contains_right(&rc), "{}: representative outside the double coset", cx.show_elem(rep));
            rights.insert(rc);
        }
        ensure!(rights.len() == reps.len(), "{}: repeated right cosets", cx.show_elem(&g));
        let lefts = p.left_coset_reps(&k);
        ensure!(lefts.len() as u64 == l, "{}: {} left representatives", cx.show_elem(&g), lefts.len());
        Ok(())
    })
}
const COSET_COUNTS: SuiteBody = body!(coset_counts);

fn k_scaling<P: Bridge>(cx: &Cx<P>) -> Check {
    let (p, h, o) = (cx.p(), &cx.h, cx.p().oracle());
    cx.sampled("k-scaling", 50, |rng| {
        let (g, s, t) = (cx.sigma(rng), cx.sigma(rng), cx.sigma(rng));
        let (gs, gt) = (p.multiply(&g, &s), p.multiply(&g, &t));
        let k = lib(h.k_constant(&s, &t))?;
        let k_scaled = lib(h.k_constant(&gs, &gt))?;
        let ok_k = lib(oracle::oracle_k(&o, &p.to_oracle(&s), &p.to_oracle(&t)))?;
        let ok_scaled = lib(oracle::oracle_k(&o, &p.to_oracle(&gs), &p.to_oracle(&gt)))?;
        let r = p.r_of(&g);
        ensure!(
            k_scaled == r * k && k == ok_k && k_scaled == ok_scaled,
            "γ = {}, σ = {}, τ = {}: K = {k} (oracle {ok_k}), K(γσ, γτ) = {k_scaled} (oracle {ok_scaled}), R(γ) = {r}",
            cx.show_elem(&g),
            cx.show_elem(&s),
            cx.show_elem(&t)
        );
        Ok(())
    })
}
const K_SCALING: SuiteBody = body!(k_scaling);

fn h_relations<P: Bridge>(cx: &Cx<P>) -> Check {
    let cp = cx.cp();
    cx.sampled("h-relations", 50, |rng| {
        let (s, t) = (cx.s_full(rng), cx.s_full(rng));
        let (x, y) = (cx.n_key(rng), cx.n_key(rng));
        ensure!(lib(cp.verify_relation_h1(&s, &t))?, "h1 fails at s = {}, t = {}", cx.show_s(&s), cx.show_s(&t));
        ensure!(lib(cp.verify_relation_h2(&x, &y))?, "h2 fails at x = {}, y = {}", cx.show_key(&x), cx.show_key(&y));
        ensure!(lib(cp.verify_relation_h3(&s, &x))?, "h3 fails at s = {}, x = {}", cx.show_s(&s), cx.show_key(&x));
        Ok(())
    })
}
const H_RELATIONS: SuiteBody = body!(h_relations);

fn well_defined<P: Bridge>(cx: &Cx<P>) -> Check {
    let (p, cp) = (cx.p(), cx.cp());
    cx.sampled("basis-well-defined", 50, |rng| {
        let m1 = cx.monomial(rng);
        let key = cp.monomial_key(&m1);
        // alternate between rescaling by a common left factor and
        // refactoring the Γ-representative
        let m2 = if rng.gen_bool(0.5) {
            loop {
                let c = cx.s(rng);
                let ce = p.s_embed(&c);
                let x = p.key(&p.multiply(&p.multiply(&ce, &p.key_rep(&m1.x)), &p.invert(&ce)));
                let m = Monomial { t: p.s_mul(&c, &m1.t), x, s: p.s_mul(&c, &m1.s) };
                if m != m1 {
                    break m;
                }
            }
        } else {
            let (t, n, s) = p.factor_tns(&p.key_rep(&key));
            let m = Monomial { t, x: p.key(&n), s };
            if m == m1 {
                let c = loop {
                    let c = cx.s(rng);
                    if c != p.s_identity() {
                        break c;
                    }
                };
                let ce = p.s_embed(&c);
                let x = p.key(&p.multiply(&p.multiply(&ce, &p.key_rep(&m.x)), &p.invert(&ce)));
                Monomial { t: p.s_mul(&c, &m.t), x, s: p.s_mul(&c, &m.s) }
            } else {
                m
            }
        };
        let show = |m: &Monomial<P>| crate::format::render_monomial(p, m);
        ensure!(cp.monomial_key(&m2) == key, "{} and {} have different keys", show(&m1), show(&m2));
        let (e1, e2) = (lib(cp.embed_monomial(&m1))?, lib(cp.embed_monomial(&m2))?);
        // equal keys fix the embedding up to the weight; identical when
        // Γ₀ is normal in N, proportional otherwise
        let per_weight = QuadScalar::from_rational(Rational::new(1.into(), p.r_count(&key).into()));
        for (m, e) in [(&m1, &e1), (&m2, &e2)] {
            let want = cx.h.basis_key(key.clone()).scale(&(&cp.weight(m) * &per_weight));
            ensure!(e == &want, "{} ↦ {}, weight predicts {}", show(m), cx.show(e), cx.show(&want));
        }
        let normal = !matches!(p.descriptor(), Descriptor::Gauss);
        ensure!(!normal || e1 == e2, "{} ↦ {} but {} ↦ {}", show(&m1), cx.show(&e1), show(&m2), cx.show(&e2));
        Ok(())
    })
}
const WELL_DEFINED: SuiteBody = body!(well_defined);

fn isomorphism<P: Bridge>(cx: &Cx<P>) -> Check {
    let (h, cp) = (&cx.h, cx.cp());
    cx.sampled("isomorphism", 50, |rng| {
        let terms = rng.gen_range(1..=3);
        let a = cx.cp_element(rng, terms);
        let ea = lib(cp.embed(&a))?;
        ensure!(lib(cp.unembed(&ea))? == a, "unembed∘embed moves {}", cx.show_cp(&a));
        let f = cx.element(rng, false);
        ensure!(lib(cp.embed(&lib(cp.unembed(&f))?))? == f, "embed∘unembed moves {}", cx.show(&f));
        let (a, b) = (cx.cp_element(rng, 1), cx.cp_element(rng, 1));
        let lhs = lib(cp.embed(&lib(cp.cp_mul(&a, &b))?))?;
        let rhs = lib(h.convolve(&lib(cp.embed(&a))?, &lib(cp.embed(&b))?))?;
        ensure!(lhs == rhs, "embed is not multiplicative on {} and {}", cx.show_cp(&a), cx.show_cp(&b));
        Ok(())
    })
}
const ISOMORPHISM: SuiteBody = body!(isomorphism);

fn corner<P: Bridge>(cx: &Cx<P>) -> Check {
    let (p, h, cp) = (cx.p(), &cx.h, cx.cp());
    cx.sampled("corner", 50, |rng| {
        let (s, t) = (cx.s(rng), cx.s(rng));
        let (f, g) = (cx.element(rng, true), cx.element(rng, true));
        let proj = cp.alpha_one(&s);
        ensure!(lib(h.convolve(&proj, &proj))? == proj, "α_{}(1) is not idempotent", cx.show_s(&s));
        ensure!(h.involution(&proj) == proj, "α_{}(1) is not self-adjoint", cx.show_s(&s));
        let af = lib(cp.alpha(&s, &f))?;
        ensure!(
            lib(h.convolve(&lib(h.convolve(&proj, &af))?, &proj))? == af,
            "α_{}({}) is outside the corner",
            cx.show_s(&s),
            cx.show(&f)
        );
        ensure!(lib(cp.alpha_inv(&s, &af))? == f, "alpha_inv does not undo α_{} on {}", cx.show_s(&s), cx.show(&f));
        let st = p.s_mul(&s, &t);
        ensure!(
            lib(cp.alpha(&s, &lib(cp.alpha(&t, &f))?))? == lib(cp.alpha(&st, &f))?,
            "α_{}∘α_{} ≠ α_st on {}",
            cx.show_s(&s),
            cx.show_s(&t),
            cx.show(&f)
        );
        let ag = lib(cp.alpha(&s, &g))?;
        ensure!(
            lib(cp.alpha(&s, &lib(h.convolve(&f, &g))?))? == lib(h.convolve(&af, &ag))?,
            "α_{} is not multiplicative on {} and {}",
            cx.show_s(&s),
            cx.show(&f),
            cx.show(&g)
        );
        ensure!(
            lib(cp.alpha(&s, &h.involution(&f)))? == h.involution(&af),
            "α_{} does not commute with * on {}",
            cx.show_s(&s),
            cx.show(&f)
        );
        Ok(())
    })
}
const CORNER: SuiteBody = body!(corner);

fn non_normality<P: Bridge>(cx: &Cx<P>) -> Check {
    let (p, h) = (cx.p(), &cx.h);
    let mut ball = cx.ball().clone();
    if matches!(p.descriptor(), Descriptor::Gl(3)) {
        // 1728 keys at denominator 6; pairs grow with the square of that
        ball.n_den = ball.n_den.min(4);
    }
    let keys = p.n_ball_keys(&ball);
    let pairs: Vec<(&P::Key, &P::Key)> = keys.iter().flat_map(|a| keys.iter().map(move |b| (a, b))).collect();
    let deviates = |(x, y): &(&P::Key, &P::Key)| -> std::result::Result<bool, String> {
        let prod = lib(h.convolve(&h.basis_key((*x).clone()), &h.basis_key((*y).clone())))?;
        let xy = p.key(&p.multiply(&p.key_rep(x), &p.key_rep(y)));
        Ok(prod.single_term().is_none_or(|(k, c)| k != &xy || c != &QuadScalar::one()))
    };
    if matches!(p.descriptor(), Descriptor::Gauss) {
        // non-normal: a deviating pair must exist
        let found: Vec<bool> = pairs.par_iter().map(|q| deviates(q).unwrap_or(true)).collect();
        let witnesses = found.iter().filter(|b| **b).count();
        let failures = u64::from(witnesses == 0);
        Check {
            instance: cx.label.to_string(),
            cases: pairs.len() as u64,
            failures,
            counterexample: (witnesses == 0).then(|| "no pair with e(x)∗e(y) ≠ e(xy)".to_string()),
        }
    } else {
        cx.exhaustive(&pairs, |q| {
            ensure!(!deviates(q)?, "e({})∗e({}) ≠ e(xy)", cx.show_key(q.0), cx.show_key(q.1));
            Ok(())
        })
    }
}
const NON_NORMALITY: SuiteBody = body!(non_normality);

fn cross_section(cfg: &Config) -> Check {
    let cx = Cx::new(GaussPair::new(CrossSection::Canonical), cfg, "gauss");
    let alt = HeckeAlgebra::new(GaussPair::new(CrossSection::Alternate));
    let (cp, cp_alt) = (cx.cp(), CrossedProduct::new(&alt));
    cx.sampled("cross-section", 20, |rng| {
        let s = cx.s(rng);
        let x = cx.n_key(rng);
        let a = lib(cp.alpha(&s, &cx.h.basis_key(x.clone())))?;
        let b = lib(cp_alt.alpha(&s, &alt.basis_key(x.clone())))?;
        ensure!(a == b, "α_{}(e({})) depends on the cross-section", cx.show_s(&s), cx.show_key(&x));
        Ok(())
    })
}

fn gauss_r_bound(cfg: &Config) -> Check {
    let cx = Cx::new(GaussPair::default(), cfg, "gauss");
    let o = cx.p().oracle();
    cx.sampled("gauss-r-bound", 100, |rng| {
        let n = cx.p().sample_n(rng, cx.ball());
        let r = cx.p().r_of(&n);
        let or = oracle::oracle_r(&o, &cx.p().to_oracle(&n));
        ensure!(r <= 4 && r == or, "{}: R = {r}, oracle R = {or}", cx.show_elem(&n));
        Ok(())
    })
}

fn hecke_axioms<P: Bridge>(cx: &Cx<P>) -> Check {
    let h = &cx.h;
    cx.sampled("hecke-axioms", 50, |rng| {
        let (a, b, c) = (cx.element(rng, false), cx.element(rng, false), cx.element(rng, false));
        let ab_c = lib(h.convolve(&lib(h.convolve(&a, &b))?, &c))?;
        let a_bc = lib(h.convolve(&a, &lib(h.convolve(&b, &c))?))?;
        ensure!(ab_c == a_bc, "not associative on {}, {}, {}", cx.show(&a), cx.show(&b), cx.show(&c));
        ensure!(
            lib(h.convolve(&h.identity(), &a))? == a && lib(h.convolve(&a, &h.identity()))? == a,
            "identity fails on {}",
            cx.show(&a)
        );
        let star = h.involution(&lib(h.convolve(&a, &b))?);
        ensure!(
            star == lib(h.convolve(&h.involution(&b), &h.involution(&a)))?,
            "(ab)* ≠ b*a* on {}, {}",
            cx.show(&a),
            cx.show(&b)
        );
        ensure!(h.involution(&h.involution(&a)) == a, "* is not involutive on {}", cx.show(&a));
        Ok(())
    })
}
const HECKE_AXIOMS: SuiteBody = body!(hecke_axioms);

fn cp_axioms<P: Bridge>(cx: &Cx<P>) -> Check {
    let (p, h, cp) = (cx.p(), &cx.h, cx.cp());
    cx.sampled("cp-axioms", 100, |rng| {
        let (a, b, c) = (cx.cp_element(rng, 1), cx.cp_element(rng, 1), cx.cp_element(rng, 1));
        let ab = lib(cp.cp_mul(&a, &b))?;
        let ab_c = lib(cp.cp_mul(&ab, &c))?;
        let a_bc = lib(cp.cp_mul(&a, &lib(cp.cp_mul(&b, &c))?))?;
        let show3 = || format!("{}; {}; {}", cx.show_cp(&a), cx.show_cp(&b), cx.show_cp(&c));
        ensure!(ab_c == a_bc, "not associative on {}", show3());
        let (ea, eb, ec) = (lib(cp.embed(&a))?, lib(cp.embed(&b))?, lib(cp.embed(&c))?);
        let via = lib(h.convolve(&lib(h.convolve(&ea, &eb))?, &ec))?;
        ensure!(lib(cp.embed(&ab_c))? == via, "associativity through embed fails on {}", show3());
        ensure!(cp.cp_star(&ab) == lib(cp.cp_mul(&cp.cp_star(&b), &cp.cp_star(&a)))?, "(ab)* ≠ b*a* on {}", show3());
        ensure!(
            lib(cp.embed(&cp.cp_star(&a)))? == h.involution(&ea),
            "embed does not commute with * on {}",
            cx.show_cp(&a)
        );
        ensure!(cp.cp_star(&cp.cp_star(&a)) == a, "* is not involutive on {}", cx.show_cp(&a));
        ensure!(lib(cp.cp_mul(&cp.identity(), &a))? == a, "identity fails on {}", cx.show_cp(&a));
        // a second Ore pair: scale the canonical one by a common factor
        let m = cx.s_cp(rng);
        let scaled = |s: &P::S, t: &P::S| {
            let (x, y) = p.ore(s, t);
            (p.s_mul(&m, &x), p.s_mul(&m, &y))
        };
        ensure!(
            lib(cp.cp_mul_with(&a, &b, &scaled))? == ab,
            "product depends on the Ore pair (extra factor {}) on {}",
            cx.show_s(&m),
            show3()
        );
        Ok(())
    })
}
const CP_AXIOMS: SuiteBody = body!(cp_axioms);
