//! Acceptance run: one pass/fail line per criterion, exact arithmetic.
//!
//! Two criteria are known to be false as stated and stay red: the literal
//! coset-count clause of the single-term lemma (every instance), and
//! literal equality of equal-key embeddings on the Gaussian instance. For
//! those the run only fails if the failure is not of the known shape.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use hecke_core::crossed::{CrossedProduct, Monomial};
use hecke_core::hecke::HeckeAlgebra;
use hecke_core::pair::{Ball, Descriptor, GaussPair, HeckePair, LinearPair};
use hecke_core::selftest::{self, Check, Config, INSTANCES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0;

enum Verdict {
    Pass(String),
    Fail(String),
    /// Red, with a failure of the known shape.
    KnownRed(String),
}

struct Outcome {
    number: u32,
    title: &'static str,
    verdict: Verdict,
    elapsed: Duration,
}

fn config() -> Config {
    Config { seed: SEED, ..Config::default() }
}

fn summarise(checks: &[Check]) -> std::result::Result<String, String> {
    let cases: u64 = checks.iter().map(|c| c.cases).sum();
    match checks.iter().find(|c| !c.passed()) {
        None => Ok(format!(
            "{cases} cases on {}",
            checks.iter().map(|c| c.instance.as_str()).collect::<Vec<_>>().join(", ")
        )),
        Some(c) => Err(format!(
            "{}: {} of {} failed, e.g. {}",
            c.instance,
            c.failures,
            c.cases,
            c.counterexample.as_deref().unwrap_or("?")
        )),
    }
}

fn suite(names: &[&str]) -> Verdict {
    let cfg = config();
    let checks: Vec<Check> = names.iter().flat_map(|n| selftest::run_suite(n, &cfg).checks).collect();
    if checks.is_empty() {
        return Verdict::Fail("no checks ran".into());
    }
    match summarise(&checks) {
        Ok(s) => Verdict::Pass(s),
        Err(e) => Verdict::Fail(e),
    }
}

fn within(v: Verdict, elapsed: Duration, limit: Duration) -> Verdict {
    match v {
        Verdict::Pass(_) if elapsed >= limit => Verdict::Fail(format!("took {elapsed:.1?}, limit {limit:?}")),
        other => other,
    }
}

fn for_each_instance<F>(mut f: F) -> Vec<(String, Tally)>
where
    F: FnMut(&str, Instance) -> Tally,
{
    INSTANCES
        .iter()
        .map(|label| {
            let d: Descriptor = label.parse().expect("built-in label");
            let inst = match d {
                Descriptor::Gauss => Instance::Gauss(GaussPair::default()),
                other => Instance::Linear(LinearPair::new(other).expect("built-in label")),
            };
            (label.to_string(), f(label, inst))
        })
        .collect()
}

enum Instance {
    Linear(LinearPair),
    Gauss(GaussPair),
}

#[derive(Default)]
struct Tally {
    cases: u64,
    /// Failures of the statement exactly as written.
    literal: u64,
    /// Failures that are not of the known shape.
    unexpected: u64,
    example: Option<String>,
}

impl Tally {
    fn record(&mut self, literal_ok: bool, expected_ok: bool, show: impl FnOnce() -> String) {
        self.cases += 1;
        if !literal_ok {
            self.literal += 1;
        }
        if !expected_ok {
            self.unexpected += 1;
        }
        if (!literal_ok || !expected_ok) && self.example.is_none() {
            self.example = Some(show());
        }
    }
}

/// `[γ]∗[σ]` is one term with a positive-integer coefficient and
/// `L(γσ) = L(γ)`; dually `[σ]*∗[γ]` and `R(σ⁻¹γ) = R(γ)`.
fn single_term_literal<P: HeckePair>(pair: P, label: &str) -> Tally {
    let h = HeckeAlgebra::new(pair);
    let p = h.pair();
    let ball = Ball::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut t = Tally::default();
    for _ in 0..100 {
        let g = p.sample_elem(&mut rng, &ball);
        let s = p.sample_sigma(&mut rng, &ball);
        let gs = p.multiply(&g, &s);
        let si_g = p.multiply(&p.invert(&s), &g);
        let prod = h.convolve(&h.basis(&g), &h.basis(&s)).expect("same instance");
        let dual = h.convolve(&h.involution(&h.basis(&s)), &h.basis(&g)).expect("same instance");
        let coeff = |e: &hecke_core::hecke::HeckeElement<P>, k: &P::Key| {
            e.single_term().filter(|(kk, _)| *kk == k).and_then(|(_, c)| c.as_positive_integer())
        };
        let (c, c_dual) = (coeff(&prod, &p.key(&gs)), coeff(&dual, &p.key(&si_g)));
        let shape = c.is_some() && c_dual.is_some();
        let literal = shape && p.l_of(&gs) == p.l_of(&g) && p.r_of(&si_g) == p.r_of(&g);
        // the count clause holds up to the coefficient: c·L(γσ) = L(γ)
        let corrected =
            shape && c.unwrap() * p.l_of(&gs) == p.l_of(&g) && c_dual.unwrap() * p.r_of(&si_g) == p.r_of(&g);
        t.record(literal, corrected, || {
            format!(
                "{label}: γ = {}, σ = {}: coefficient {c:?}, L(γσ) = {}, L(γ) = {}, R(σ⁻¹γ) = {}, R(γ) = {}",
                p.render_elem(&g),
                p.render_elem(&s),
                p.l_of(&gs),
                p.l_of(&g),
                p.r_of(&si_g),
                p.r_of(&g)
            )
        });
    }
    t
}

/// Distinct triples with the same Γ-key embed to the identical element.
fn well_defined_literal<P: HeckePair>(pair: P, label: &str) -> Tally {
    let h = HeckeAlgebra::new(pair);
    let p = h.pair();
    let cp = CrossedProduct::new(&h);
    let mut ball = Ball::default();
    ball.s_bound = match p.descriptor() {
        Descriptor::Gauss => ball.norm,
        Descriptor::Gl(d) if *d > 1 => ball.s_bound.min(4),
        _ => ball.s_bound,
    };
    let normal = !matches!(p.descriptor(), Descriptor::Gauss);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut t = Tally::default();
    while t.cases < 50 {
        let m1 = Monomial {
            t: p.sample_s(&mut rng, &ball),
            x: p.key(&p.sample_n(&mut rng, &ball)),
            s: p.sample_s(&mut rng, &ball),
        };
        let c = p.sample_s(&mut rng, &ball);
        if c == p.s_identity() {
            continue;
        }
        let ce = p.s_embed(&c);
        let x = p.key(&p.multiply(&p.multiply(&ce, &p.key_rep(&m1.x)), &p.invert(&ce)));
        let m2 = Monomial { t: p.s_mul(&c, &m1.t), x, s: p.s_mul(&c, &m1.s) };
        let key = cp.monomial_key(&m1);
        assert_eq!(cp.monomial_key(&m2), key, "{label}: rescaled triple changed key");
        let (e1, e2) = (cp.embed_monomial(&m1).unwrap(), cp.embed_monomial(&m2).unwrap());
        // known shape off the normal case: each side is R(key)⁻¹·weight·[key]
        let by_weight = |m: &Monomial<P>, e: &hecke_core::hecke::HeckeElement<P>| {
            let w = cp.weight(m).scale(&hecke_core::rational::Rational::new(1.into(), p.r_count(&key).into()));
            *e == h.basis_key(key.clone()).scale(&w)
        };
        let literal = e1 == e2;
        let expected = if normal { literal } else { by_weight(&m1, &e1) && by_weight(&m2, &e2) };
        t.record(literal, expected, || {
            format!(
                "{label}: {} and {} share a key but embed to {:?} and {:?}",
                hecke_core::format::render_monomial(p, &m1),
                hecke_core::format::render_monomial(p, &m2),
                e1.terms().values().collect::<Vec<_>>(),
                e2.terms().values().collect::<Vec<_>>()
            )
        });
    }
    t
}

fn literal_verdict(tallies: Vec<(String, Tally)>, red_allowed: &[&str]) -> Verdict {
    let cases: u64 = tallies.iter().map(|(_, t)| t.cases).sum();
    if let Some((_, t)) = tallies.iter().find(|(_, t)| t.unexpected > 0) {
        return Verdict::Fail(t.example.clone().unwrap_or_default());
    }
    let red: Vec<&(String, Tally)> = tallies.iter().filter(|(_, t)| t.literal > 0).collect();
    if red.is_empty() {
        return Verdict::Pass(format!("{cases} cases"));
    }
    if let Some((l, t)) = red.iter().find(|(l, _)| !red_allowed.contains(&l.as_str())) {
        return Verdict::Fail(format!("{l}: {}", t.example.clone().unwrap_or_default()));
    }
    let detail = red.iter().map(|(l, t)| format!("{l} {}/{}", t.literal, t.cases)).collect::<Vec<_>>().join(", ");
    Verdict::KnownRed(format!("literal failures {detail}; e.g. {}", red[0].1.example.clone().unwrap_or_default()))
}

fn run(number: u32, title: &'static str, f: impl FnOnce() -> Verdict) -> Outcome {
    let start = Instant::now();
    let verdict = f();
    let elapsed = start.elapsed();
    let verdict = match number {
        1 => within(verdict, elapsed, Duration::from_secs(10)),
        4 => within(verdict, elapsed, Duration::from_secs(120)),
        10 => within(verdict, elapsed, Duration::from_secs(60)),
        _ => verdict,
    };
    let o = Outcome { number, title, verdict, elapsed };
    let line = match &o.verdict {
        Verdict::Pass(d) => format!("PASS ({d})"),
        Verdict::Fail(e) => format!("FAIL: {e}"),
        Verdict::KnownRed(e) => format!("FAIL (known): {e}"),
    };
    println!("criterion {:>2} {:<34} {line} [{:.1?}]", o.number, o.title, o.elapsed);
    o
}

fn main() -> ExitCode {
    let outcomes = vec![
        run(1, "R(s) = det(s)", || suite(&["r-det"])),
        run(2, "R multiplicative on Σ", || suite(&["r-multiplicative"])),
        run(3, "single-term lemma, literal counts", || {
            let t = for_each_instance(|label, inst| match inst {
                Instance::Linear(p) => single_term_literal(p, label),
                Instance::Gauss(p) => single_term_literal(p, label),
            });
            literal_verdict(t, INSTANCES)
        }),
        run(4, "convolution matches the oracle", || suite(&["oracle-convolution"])),
        run(5, "K(γσ, γτ) = R(γ)·K(σ, τ)", || suite(&["k-scaling"])),
        run(6, "relations h1-h3 through embed", || suite(&["h-relations"])),
        run(7, "equal keys embed identically", || {
            let t = for_each_instance(|label, inst| match inst {
                Instance::Linear(p) => well_defined_literal(p, label),
                Instance::Gauss(p) => well_defined_literal(p, label),
            });
            literal_verdict(t, &["gauss"])
        }),
        run(8, "embed/unembed round trip", || suite(&["isomorphism"])),
        run(9, "corner endomorphisms", || suite(&["corner"])),
        run(10, "non-normality witness", || suite(&["non-normality"])),
        run(11, "cross-section independence", || suite(&["cross-section"])),
        run(12, "Gaussian right-coset bound", || suite(&["gauss-r-bound"])),
    ];
    let pass = outcomes.iter().filter(|o| matches!(o.verdict, Verdict::Pass(_))).count();
    let known = outcomes.iter().filter(|o| matches!(o.verdict, Verdict::KnownRed(_))).count();
    let failed = outcomes.len() - pass - known;
    println!("{pass} passed, {known} known red, {failed} failed");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
