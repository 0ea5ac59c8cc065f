//! `Γ = Q^d ⋊ GL_d⁺(Q)` with `g` acting on `N = Q^d` by `(gᵗ)⁻¹`, and
//! `Γ₀ = Z^d`. For `d = 1` the group can be restricted to a set of primes
//! (`N = Z[1/P]`, `G` generated by `P`).

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{split_element, Ball, Descriptor, HeckePair};
use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, Lattice, RatMatrix, RatVector};
use crate::rational::{frac, parse_rational, render_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearElem {
    pub n: RatVector,
    pub g: RatMatrix,
}

impl LinearElem {
    pub fn new(n: RatVector, g: RatMatrix) -> Self {
        LinearElem { n, g }
    }
}

/// `(g, n mod Z^d + (gᵗ)⁻¹Z^d)`; ordered by `g`, then `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct LinearKey {
    pub g: RatMatrix,
    pub n: RatVector,
}

struct GData {
    lattice: Lattice,
    right: Vec<RatVector>,
    left: Vec<RatVector>,
}

type SData = (RatMatrix, Vec<RatVector>);

pub struct LinearPair {
    desc: Descriptor,
    d: usize,
    primes: Option<Vec<u64>>,
    transpose_inv: RwLock<HashMap<RatMatrix, Arc<RatMatrix>>>,
    gdata: RwLock<HashMap<RatMatrix, Arc<GData>>>,
    /// `s -> (sᵗ)⁻¹ and residues of sᵗZ^d in Z^d`.
    sdata: RwLock<HashMap<IntMatrix, Arc<SData>>>,
}

fn cached<K, V>(map: &RwLock<HashMap<K, Arc<V>>>, k: &K, make: impl FnOnce() -> V) -> Arc<V>
where
    K: std::hash::Hash + Eq + Clone,
{
    if let Some(v) = map.read().expect("cache lock").get(k) {
        return v.clone();
    }
    let v = Arc::new(make());
    map.write().expect("cache lock").entry(k.clone()).or_insert(v).clone()
}

impl LinearPair {
    pub fn new(desc: Descriptor) -> Result<Self> {
        let (d, primes) = match &desc {
            Descriptor::Bc { primes } => (1, primes.clone()),
            Descriptor::Gl(d) => (*d, None),
            Descriptor::Gauss => return Err(Error::InvalidElement("gauss is not a linear instance".into())),
        };
        Ok(LinearPair {
            desc,
            d,
            primes,
            transpose_inv: RwLock::default(),
            gdata: RwLock::default(),
            sdata: RwLock::default(),
        })
    }

    pub fn bc() -> Self {
        Self::new(Descriptor::Bc { primes: None }).expect("bc")
    }

    pub fn bc_primes(primes: &[u64]) -> Result<Self> {
        let list: Vec<String> = primes.iter().map(u64::to_string).collect();
        Self::new(format!("bc:{}", list.join(",")).parse()?)
    }

    pub fn gl(d: usize) -> Result<Self> {
        Self::new(Descriptor::Gl(d))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Builds an element from integer-fraction data, e.g. `elem(&[(1, 2)], &[(2, 1)])`.
    pub fn elem(&self, n: &[(i64, i64)], g: &[(i64, i64)]) -> LinearElem {
        let q = |&(a, b): &(i64, i64)| Rational::new(a.into(), b.into());
        LinearElem {
            n: RatVector(n.iter().map(q).collect()),
            g: RatMatrix::new(self.d, self.d, g.iter().map(q).collect()).expect("square"),
        }
    }

    pub fn s_from_i64(&self, entries: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(self.d, self.d, entries)
    }

    fn supported(&self, x: &BigInt) -> bool {
        let Some(primes) = &self.primes else {
            return true;
        };
        let mut x = x.abs();
        if x.is_zero() {
            return true;
        }
        for &p in primes {
            let p = BigInt::from(p);
            while (&x % &p).is_zero() {
                x /= &p;
            }
        }
        x.is_one()
    }

    fn validate(&self, e: &LinearElem) -> Result<()> {
        if e.n.dim() != self.d || e.g.rows() != self.d || e.g.cols() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: e.n.dim() });
        }
        if !e.g.has_positive_det() {
            return Err(Error::InvalidElement("G-coordinate needs positive determinant".into()));
        }
        if self.primes.is_some() {
            let ok = e.n.0.iter().all(|q| self.supported(q.denom()))
                && self.supported(e.g[(0, 0)].numer())
                && self.supported(e.g[(0, 0)].denom());
            if !ok {
                return Err(Error::InvalidElement(format!(
                    "coordinates must only involve the primes of {}",
                    self.desc
                )));
            }
        }
        Ok(())
    }

    fn transpose_inverse(&self, g: &RatMatrix) -> Arc<RatMatrix> {
        cached(&self.transpose_inv, g, || g.transpose().inverse().expect("G-coordinate is invertible"))
    }

    fn gdata(&self, g: &RatMatrix) -> Arc<GData> {
        cached(&self.gdata, g, || {
            let ti = self.transpose_inverse(g);
            let id = RatMatrix::identity(self.d);
            let cols: Vec<RatVector> =
                (0..self.d).map(|j| id.column(j)).chain((0..self.d).map(|j| ti.column(j))).collect();
            let lattice = Lattice::from_generators(&RatMatrix::from_columns(&cols).expect("shape")).expect("full rank");
            let right = lattice.residues_of(&Lattice::standard(self.d)).expect("Z^d is a sublattice");
            let left = lattice
                .residues_of(&Lattice::from_basis(&ti).expect("nonsingular"))
                .expect("(g^t)^-1 Z^d is a sublattice");
            GData { lattice, right, left }
        })
    }

    fn sdata(&self, s: &IntMatrix) -> Arc<(RatMatrix, Vec<RatVector>)> {
        cached(&self.sdata, s, || {
            let st = s.transpose().to_rational();
            let inv = st.inverse().expect("nonsingular");
            let sub = Lattice::from_basis(&st).expect("nonsingular");
            let res = Lattice::standard(self.d).residues_of(&sub).expect("integral");
            (inv, res)
        })
    }

    fn n_key(&self, v: &RatVector) -> LinearKey {
        LinearKey { g: RatMatrix::identity(self.d), n: RatVector(v.0.iter().map(frac).collect()) }
    }

    fn g_primes(&self, ball: &Ball) -> Vec<u64> {
        match &self.primes {
            None => ball.primes.clone(),
            Some(ps) => {
                let both: Vec<u64> = ps.iter().copied().filter(|p| ball.primes.contains(p)).collect();
                if both.is_empty() {
                    ps.clone()
                } else {
                    both
                }
            }
        }
    }

    /// One-dimensional `G`-coordinates `p^e`, `|e| <= exp`, in the ball.
    pub fn ball_g_values(&self, ball: &Ball) -> Vec<Rational> {
        let mut out = BTreeSet::new();
        out.insert(Rational::one());
        for p in self.g_primes(ball) {
            for e in 1..=ball.exp {
                let pe = Rational::from_integer(BigInt::from(p).pow(e));
                out.insert(pe.recip());
                out.insert(pe);
            }
        }
        out.into_iter().collect()
    }

    /// Fractions `a/b` in `[0,1)` with `b <= n_den`, restricted to allowed
    /// primes.
    fn ball_fractions(&self, ball: &Ball) -> Vec<Rational> {
        let mut out = BTreeSet::new();
        for b in 1..=ball.n_den as i64 {
            if !self.supported(&BigInt::from(b)) {
                continue;
            }
            for a in 0..b {
                out.insert(Rational::new(a.into(), b.into()));
            }
        }
        out.into_iter().collect()
    }

    /// Every double-coset key `(g, n)` of the one-dimensional ball: `g` from
    /// [`Self::ball_g_values`] and `n` with denominator at most `n_den`.
    pub fn ball_keys_1d(&self, ball: &Ball) -> Vec<LinearKey> {
        assert_eq!(self.d, 1, "exhaustive ball only for d = 1");
        let mut keys = BTreeSet::new();
        for g in self.ball_g_values(ball) {
            for n in self.ball_fractions(ball) {
                let e = LinearElem::new(RatVector(vec![n]), RatMatrix::scalar(1, g.clone()));
                keys.insert(self.key(&e));
            }
        }
        keys.into_iter().collect()
    }

    fn random_int_matrix(&self, rng: &mut ChaCha8Rng, entry: i64, det_max: Option<u64>) -> IntMatrix {
        loop {
            let data: Vec<i64> = (0..self.d * self.d).map(|_| rng.gen_range(-entry..=entry)).collect();
            let m = IntMatrix::from_i64(self.d, self.d, &data);
            let det = m.det().expect("square");
            if det.is_positive() && det_max.is_none_or(|b| det <= BigInt::from(b)) {
                return m;
            }
        }
    }

    /// All semigroup elements of `d = 1` up to `bound`.
    fn small_s_1d(&self, ball: &Ball) -> Vec<u64> {
        let primes = self.g_primes(ball);
        (1..=ball.s_bound.max(1))
            .filter(|&k| {
                let mut k = k;
                for &p in &primes {
                    while k % p == 0 {
                        k /= p;
                    }
                }
                k == 1
            })
            .collect()
    }
}

fn render_list(xs: &[Rational]) -> String {
    xs.iter().map(render_rational).collect::<Vec<_>>().join(", ")
}

impl HeckePair for LinearPair {
    type Elem = LinearElem;
    type Key = LinearKey;
    type S = IntMatrix;

    fn descriptor(&self) -> &Descriptor {
        &self.desc
    }

    fn identity(&self) -> LinearElem {
        LinearElem::new(RatVector::zeros(self.d), RatMatrix::identity(self.d))
    }

    fn multiply(&self, a: &LinearElem, b: &LinearElem) -> LinearElem {
        let twisted = self.transpose_inverse(&a.g).mul_vec(&b.n).expect("dims");
        LinearElem::new(a.n.add(&twisted), a.g.mul(&b.g).expect("dims"))
    }

    fn invert(&self, a: &LinearElem) -> LinearElem {
        let n = a.g.transpose().mul_vec(&a.n).expect("dims").neg();
        LinearElem::new(n, a.g.inverse().expect("invertible"))
    }

    fn in_gamma0(&self, a: &LinearElem) -> bool {
        a.g.is_identity() && a.n.is_integral()
    }

    fn in_n(&self, a: &LinearElem) -> bool {
        a.g.is_identity()
    }

    fn key(&self, a: &LinearElem) -> LinearKey {
        if a.g.is_identity() {
            return self.n_key(&a.n);
        }
        let gd = self.gdata(&a.g);
        LinearKey { g: a.g.clone(), n: gd.lattice.reduce(&a.n).expect("dims") }
    }

    fn key_rep(&self, k: &LinearKey) -> LinearElem {
        LinearElem::new(k.n.clone(), k.g.clone())
    }

    fn key_in_n(&self, k: &LinearKey) -> bool {
        k.g.is_identity()
    }

    fn right_coset_reps(&self, k: &LinearKey) -> Vec<LinearElem> {
        let gd = self.gdata(&k.g);
        gd.right.iter().map(|r| LinearElem::new(k.n.add(r), k.g.clone())).collect()
    }

    fn left_coset_reps(&self, k: &LinearKey) -> Vec<LinearElem> {
        let gd = self.gdata(&k.g);
        gd.left.iter().map(|r| LinearElem::new(k.n.add(r), k.g.clone())).collect()
    }

    fn r_count(&self, k: &LinearKey) -> u64 {
        self.gdata(&k.g).right.len() as u64
    }

    fn l_count(&self, k: &LinearKey) -> u64 {
        self.gdata(&k.g).left.len() as u64
    }

    fn s_identity(&self) -> IntMatrix {
        IntMatrix::identity(self.d)
    }

    fn s_mul(&self, a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        a.mul(b).expect("dims")
    }

    fn s_embed(&self, s: &IntMatrix) -> LinearElem {
        LinearElem::new(RatVector::zeros(self.d), s.to_rational())
    }

    fn s_r(&self, s: &IntMatrix) -> u64 {
        s.det().expect("square").to_u64().expect("positive determinant")
    }

    fn ore(&self, s: &IntMatrix, t: &IntMatrix) -> (IntMatrix, IntMatrix) {
        let a = t.mul(&s.adjugate().expect("square")).expect("dims");
        let b = IntMatrix::scalar(self.d, s.det().expect("square"));
        (a, b)
    }

    fn s_left_gcd(&self, t: &IntMatrix, s: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
        // d·Z^d = t·Z^d + s·Z^d
        let (tr, sr) = (t.to_rational(), s.to_rational());
        let cols: Vec<RatVector> = (0..self.d).map(|j| tr.column(j)).chain((0..self.d).map(|j| sr.column(j))).collect();
        let sum = Lattice::from_generators(&RatMatrix::from_columns(&cols).expect("shape")).expect("full rank");
        let d = sum.basis();
        let d_inv = d.inverse().expect("nonsingular");
        let quo = |m: &RatMatrix| d_inv.mul(m).expect("dims").to_integer().expect("d divides on the left");
        (d.to_integer().expect("integral lattice"), quo(&tr), quo(&sr))
    }

    fn factor_tns(&self, g: &LinearElem) -> (IntMatrix, LinearElem, IntMatrix) {
        let m = g.g.common_denominator();
        let mq = Rational::from_integer(m.clone());
        let t = IntMatrix::scalar(self.d, m);
        let s = g.g.scale(&mq).to_integer().expect("cleared denominators");
        let n = LinearElem::new(g.n.scale(&mq.recip()), RatMatrix::identity(self.d));
        (t, n, s)
    }

    fn alpha_preimages(&self, s: &IntMatrix, x: &LinearKey) -> Result<Vec<LinearKey>> {
        if !self.key_in_n(x) {
            return Err(Error::NotInN);
        }
        let sd = self.sdata(s);
        let (inv, residues) = (&sd.0, &sd.1);
        Ok(residues.iter().map(|r| self.n_key(&inv.mul_vec(&x.n.add(r)).expect("dims"))).collect())
    }

    fn parse_elem(&self, text: &str) -> Result<LinearElem> {
        let (n, g) = split_element(text)?;
        if n.len() != self.d || g.len() != self.d * self.d {
            return Err(Error::Parse(format!(
                "`{text}` needs {} N-entries and {} G-entries for {}",
                self.d,
                self.d * self.d,
                self.desc
            )));
        }
        let n = n.into_iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
        let g = g.into_iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
        let e = LinearElem::new(RatVector(n), RatMatrix::new(self.d, self.d, g)?);
        self.validate(&e)?;
        Ok(e)
    }

    fn render_elem(&self, a: &LinearElem) -> String {
        format!("({}; {})", render_list(&a.n.0), render_list(a.g.entries()))
    }

    fn parse_s(&self, text: &str) -> Result<IntMatrix> {
        let text = text.trim();
        let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(text);
        let entries = inner
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad semigroup element `{text}`"))))
            .collect::<Result<Vec<_>>>()?;
        if entries.len() != self.d * self.d {
            return Err(Error::Parse(format!("`{text}` needs {} integer entries", self.d * self.d)));
        }
        let s = IntMatrix::new(self.d, self.d, entries)?;
        if !s.det()?.is_positive() {
            return Err(Error::InvalidElement(format!("`{text}` needs positive determinant")));
        }
        if self.d == 1 && !self.supported(&s[(0, 0)]) {
            return Err(Error::InvalidElement(format!("`{text}` must only involve the primes of {}", self.desc)));
        }
        Ok(s)
    }

    fn render_s(&self, s: &IntMatrix) -> String {
        s.entries().iter().map(BigInt::to_string).collect::<Vec<_>>().join(", ")
    }

    fn sample_elem(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> LinearElem {
        let g = if self.d == 1 {
            let values = self.ball_g_values(ball);
            let a = values.choose(rng).expect("nonempty").clone();
            let b = values.choose(rng).expect("nonempty").clone();
            RatMatrix::scalar(1, if rng.gen_bool(0.5) { a * b } else { a })
        } else {
            let m = self.random_int_matrix(rng, ball.entry, None);
            let q = rng.gen_range(1..=ball.g_den as i64);
            m.to_rational().scale(&Rational::new(BigInt::one(), q.into()))
        };
        let n = self.sample_n(rng, ball).n;
        LinearElem::new(n, g)
    }

    fn sample_n(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> LinearElem {
        let dens: Vec<i64> = (1..=ball.n_den as i64).filter(|b| self.supported(&BigInt::from(*b))).collect();
        let n = (0..self.d)
            .map(|_| {
                let b = *dens.choose(rng).expect("1 is always allowed");
                Rational::new(rng.gen_range(-b..2 * b).into(), b.into())
            })
            .collect();
        LinearElem::new(RatVector(n), RatMatrix::identity(self.d))
    }

    fn sample_s(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> IntMatrix {
        if self.d == 1 {
            let s = *self.small_s_1d(ball).choose(rng).expect("1 is always allowed");
            IntMatrix::from_i64(1, 1, &[s as i64])
        } else {
            self.random_int_matrix(rng, ball.entry, Some(ball.s_bound))
        }
    }

    fn sample_sigma(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> LinearElem {
        let s = self.sample_s(rng, ball);
        let n = self.sample_n(rng, ball).n;
        LinearElem::new(n, s.to_rational())
    }

    fn n_ball_keys(&self, ball: &Ball) -> Vec<LinearKey> {
        let fr = self.ball_fractions(ball);
        let mut out = vec![Vec::new()];
        for _ in 0..self.d {
            out = out
                .into_iter()
                .flat_map(|v: Vec<Rational>| {
                    fr.iter().map(move |q| {
                        let mut w = v.clone();
                        w.push(q.clone());
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(|v| self.n_key(&RatVector(v))).collect()
    }
}
