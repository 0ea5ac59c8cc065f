//! The `ax+b` group of `K = Q(i)` with `Γ₀ = O ⋊ O*`, `O = Z[i]`.
//!
//! Elements are matrices `[[1, Y], [0, X]]` with `X ∈ K*`, `Y ∈ K`, so that
//! `(Y₁,X₁)(Y₂,X₂) = (Y₂ + Y₁X₂, X₁X₂)`. With `N = {X ∈ O*}` and a cross
//! section `σ` of `K*/O*`, every element is `(y, u)·(0, σ(g))`, which gives
//! the stored coordinates `(y, u; g)` with `Y = y·σ(g)`, `X = u·σ(g)`.
//! `Γ₀` is not normal in `N`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{split_element, Ball, Descriptor, HeckePair};
use crate::error::{Error, Result};
use crate::gaussian::{canonical_fraction, canonical_generator, GaussInt, GaussRat, Unit};
use crate::lattice::Lattice;
use crate::rational::{frac, Rational};

/// Which associate represents a principal ideal when embedding `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossSection {
    /// `Re > 0, Im >= 0`.
    Canonical,
    /// `Re >= 0, Im < 0`.
    Alternate,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussElem {
    pub y: GaussRat,
    pub unit: Unit,
    /// Canonical generator `a/b` of the ideal class.
    pub g: GaussRat,
}

/// `(g, Y)` with `Y` the least representative (by real, then imaginary
/// part) of the unit orbit of the normalised translation part modulo
/// `O + gO`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaussKey {
    pub g: GaussRat,
    pub y: GaussRat,
}

struct CData {
    lattice: Lattice,
    right: Vec<GaussRat>,
    left: Vec<GaussRat>,
}

pub struct GaussPair {
    desc: Descriptor,
    cross: CrossSection,
    normal: RwLock<HashMap<GaussRat, (GaussRat, Unit)>>,
    cdata: RwLock<HashMap<GaussRat, Arc<CData>>>,
    /// Residues of `sO` in `O`.
    sdata: RwLock<HashMap<GaussInt, Arc<Vec<GaussRat>>>>,
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

fn frac_gauss(z: &GaussRat) -> GaussRat {
    GaussRat::new(frac(&z.re), frac(&z.im))
}

impl Default for GaussPair {
    fn default() -> Self {
        Self::new(CrossSection::Canonical)
    }
}

impl GaussPair {
    pub fn new(cross: CrossSection) -> Self {
        GaussPair {
            desc: Descriptor::Gauss,
            cross,
            normal: RwLock::default(),
            cdata: RwLock::default(),
            sdata: RwLock::default(),
        }
    }

    pub fn cross_section(&self) -> CrossSection {
        self.cross
    }

    /// `σ(s)` for the configured cross section.
    pub fn section(&self, s: &GaussInt) -> GaussRat {
        match self.cross {
            CrossSection::Canonical => GaussRat::from_gint(&s.first_quadrant()),
            CrossSection::Alternate => GaussRat::from_gint(&s.fourth_quadrant()),
        }
    }

    /// Affine coordinates `(Y, X)`.
    pub fn to_affine(&self, e: &GaussElem) -> (GaussRat, GaussRat) {
        (e.y.mul(&e.g), e.g.mul_unit(e.unit))
    }

    /// `X = u·c` with `c` the canonical generator of `XO`.
    fn split_x(&self, x: &GaussRat) -> (GaussRat, Unit) {
        if let Some(u) = Unit::from_value(x) {
            return (GaussRat::one(), u);
        }
        if let Some(v) = self.normal.read().expect("cache lock").get(x) {
            return v.clone();
        }
        let c = canonical_generator(x);
        let u = Unit::from_value(&x.div(&c)).expect("associates differ by a unit");
        self.normal.write().expect("cache lock").insert(x.clone(), (c.clone(), u));
        (c, u)
    }

    pub fn from_affine(&self, y: &GaussRat, x: &GaussRat) -> GaussElem {
        let (c, u) = self.split_x(x);
        let yy = if c.is_one() { y.clone() } else { y.div(&c) };
        GaussElem { y: yy, unit: u, g: c }
    }

    fn cdata(&self, c: &GaussRat) -> Arc<CData> {
        cached(&self.cdata, c, || {
            let o = Lattice::standard(2);
            let c_lat = Lattice::from_basis(&c.ideal_basis()).expect("nonzero generator");
            let lattice = o.sum(&c_lat).expect("dims");
            let res = |sub: &Lattice| -> Vec<GaussRat> {
                lattice.residues_of(sub).expect("sublattice").iter().map(GaussRat::from_vector).collect()
            };
            CData { right: res(&c_lat), left: res(&o), lattice }
        })
    }

    fn reduce(&self, c: &GaussRat, z: &GaussRat) -> GaussRat {
        if c.is_one() {
            return frac_gauss(z);
        }
        GaussRat::from_vector(&self.cdata(c).lattice.reduce(&z.to_vector()).expect("dims"))
    }

    /// Distinct residues of `{w·y : w ∈ O*}` modulo `O + cO`, sorted.
    fn orbit(&self, c: &GaussRat, y: &GaussRat) -> Vec<GaussRat> {
        let set: BTreeSet<GaussRat> = Unit::ALL.iter().map(|&w| self.reduce(c, &y.mul_unit(w))).collect();
        set.into_iter().collect()
    }

    fn key_from_normalised(&self, c: GaussRat, y: &GaussRat) -> GaussKey {
        let y = self.orbit(&c, y).into_iter().next().expect("orbit is nonempty");
        GaussKey { g: c, y }
    }

    pub fn elem(&self, y: GaussRat, unit: Unit, g: GaussRat) -> GaussElem {
        GaussElem { y, unit, g }
    }

    /// First-quadrant Gaussian integers of norm in `1..=bound`.
    pub fn gauss_ints(bound: u64) -> Vec<GaussInt> {
        let r = (bound as f64).sqrt() as i64 + 1;
        let mut out = Vec::new();
        for a in 1..=r {
            for b in 0..=r {
                let z = GaussInt::from_i64(a, b);
                if z.norm() <= BigInt::from(bound) {
                    out.push(z);
                }
            }
        }
        out.sort_by_key(|z| (z.norm(), z.clone()));
        out
    }

    /// Canonical `G`-coordinates `a/b` with `N(a)·N(b) <= norm`.
    pub fn ball_g_values(ball: &Ball) -> Vec<GaussRat> {
        let ints = Self::gauss_ints(ball.norm);
        let mut out = BTreeSet::new();
        for a in &ints {
            for b in &ints {
                if a.norm() * b.norm() > BigInt::from(ball.norm) {
                    continue;
                }
                let g = a.gcd(b);
                if g.norm().is_one() {
                    out.insert(GaussRat::from_gint(a).div(&GaussRat::from_gint(b)));
                }
            }
        }
        out.into_iter().collect()
    }

    fn random_small(rng: &mut ChaCha8Rng, den: u64) -> GaussRat {
        let den = den as i64;
        let q = |n: i64| Rational::new(n.into(), den.into());
        GaussRat::new(q(rng.gen_range(-den..2 * den)), q(rng.gen_range(-den..2 * den)))
    }
}

impl HeckePair for GaussPair {
    type Elem = GaussElem;
    type Key = GaussKey;
    type S = GaussInt;

    fn descriptor(&self) -> &Descriptor {
        &self.desc
    }

    fn identity(&self) -> GaussElem {
        GaussElem { y: GaussRat::zero(), unit: Unit::ONE, g: GaussRat::one() }
    }

    fn multiply(&self, a: &GaussElem, b: &GaussElem) -> GaussElem {
        let (y1, x1) = self.to_affine(a);
        let (y2, x2) = self.to_affine(b);
        self.from_affine(&y2.add(&y1.mul(&x2)), &x1.mul(&x2))
    }

    fn invert(&self, a: &GaussElem) -> GaussElem {
        let (y, x) = self.to_affine(a);
        let xi = x.inv();
        self.from_affine(&y.mul(&xi).neg(), &xi)
    }

    fn in_gamma0(&self, a: &GaussElem) -> bool {
        a.g.is_one() && a.y.is_integral()
    }

    fn in_n(&self, a: &GaussElem) -> bool {
        a.g.is_one()
    }

    fn key(&self, a: &GaussElem) -> GaussKey {
        // (Y, uc)·(0, u⁻¹) = (Y/u, c)
        let yn = a.y.mul(&a.g).mul_unit(a.unit.inv());
        self.key_from_normalised(a.g.clone(), &yn)
    }

    fn key_rep(&self, k: &GaussKey) -> GaussElem {
        self.from_affine(&k.y, &k.g)
    }

    fn key_in_n(&self, k: &GaussKey) -> bool {
        k.g.is_one()
    }

    fn right_coset_reps(&self, k: &GaussKey) -> Vec<GaussElem> {
        let cd = self.cdata(&k.g);
        let mut out = Vec::new();
        for z in self.orbit(&k.g, &k.y) {
            for r in &cd.right {
                out.push(self.from_affine(&z.add(r), &k.g));
            }
        }
        out
    }

    fn left_coset_reps(&self, k: &GaussKey) -> Vec<GaussElem> {
        let cd = self.cdata(&k.g);
        let mut out = Vec::new();
        for z in self.orbit(&k.g, &k.y) {
            for r in &cd.left {
                out.push(self.from_affine(&z.add(r), &k.g));
            }
        }
        out
    }

    fn r_count(&self, k: &GaussKey) -> u64 {
        (self.orbit(&k.g, &k.y).len() * self.cdata(&k.g).right.len()) as u64
    }

    fn l_count(&self, k: &GaussKey) -> u64 {
        (self.orbit(&k.g, &k.y).len() * self.cdata(&k.g).left.len()) as u64
    }

    fn s_identity(&self) -> GaussInt {
        GaussInt::from_i64(1, 0)
    }

    fn s_mul(&self, a: &GaussInt, b: &GaussInt) -> GaussInt {
        a.mul(b).first_quadrant()
    }

    fn s_embed(&self, s: &GaussInt) -> GaussElem {
        self.from_affine(&GaussRat::zero(), &self.section(s))
    }

    fn s_r(&self, s: &GaussInt) -> u64 {
        s.norm().to_u64().expect("small norm")
    }

    fn ore(&self, s: &GaussInt, t: &GaussInt) -> (GaussInt, GaussInt) {
        (t.clone(), s.clone())
    }

    fn s_left_gcd(&self, t: &GaussInt, s: &GaussInt) -> (GaussInt, GaussInt, GaussInt) {
        let d = t.gcd(s).first_quadrant();
        (d.clone(), t.div_exact(&d).first_quadrant(), s.div_exact(&d).first_quadrant())
    }

    fn factor_tns(&self, g: &GaussElem) -> (GaussInt, GaussElem, GaussInt) {
        let (y, x) = self.to_affine(g);
        let (a, b) = canonical_fraction(&x);
        let (ss, st) = (self.section(&a), self.section(&b));
        let n = self.from_affine(&y.div(&ss), &x.mul(&st).div(&ss));
        (b, n, a)
    }

    fn alpha_preimages(&self, s: &GaussInt, x: &GaussKey) -> Result<Vec<GaussKey>> {
        if !self.key_in_n(x) {
            return Err(Error::NotInN);
        }
        let residues = cached(&self.sdata, s, || {
            let sub = Lattice::from_basis(&GaussRat::from_gint(s).ideal_basis()).expect("nonzero");
            Lattice::standard(2).residues_of(&sub).expect("integral ideal").iter().map(GaussRat::from_vector).collect()
        });
        // s⁻¹(Y, w)s = (σ(s)Y, w), so Y = (v·x + r)/σ(s).
        let inv = self.section(s).inv();
        let mut keys = BTreeSet::new();
        for v in Unit::ALL {
            let vx = x.y.mul_unit(v);
            for r in residues.iter() {
                let y = vx.add(r).mul(&inv);
                keys.insert(self.key_from_normalised(GaussRat::one(), &y));
            }
        }
        Ok(keys.into_iter().collect())
    }

    fn parse_elem(&self, text: &str) -> Result<GaussElem> {
        let (n, g) = split_element(text)?;
        if n.len() != 2 || g.len() != 1 {
            return Err(Error::Parse(format!("`{text}` needs the form (y, u; g) for gauss")));
        }
        let y = GaussRat::parse(n[0])?;
        let u = GaussRat::parse(n[1])?;
        let unit =
            Unit::from_value(&u).ok_or_else(|| Error::InvalidElement(format!("`{}` is not a unit of Z[i]", n[1])))?;
        let g = GaussRat::parse(g[0])?;
        if g.is_zero() {
            return Err(Error::InvalidElement("G-coordinate must be nonzero".into()));
        }
        let c = canonical_generator(&g);
        if c != g {
            return Err(Error::InvalidElement(format!(
                "G-coordinate `{g}` is not the canonical generator of its ideal (use `{c}`)"
            )));
        }
        Ok(GaussElem { y, unit, g })
    }

    fn render_elem(&self, a: &GaussElem) -> String {
        format!("({}, {}; {})", a.y, a.unit.value(), a.g)
    }

    fn parse_s(&self, text: &str) -> Result<GaussInt> {
        let text = text.trim();
        let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(text);
        let z = GaussRat::parse(inner)?;
        match z.to_gint() {
            Some(z) if !z.is_zero() => Ok(z.first_quadrant()),
            _ => Err(Error::InvalidElement(format!("`{text}` is not a nonzero Gaussian integer"))),
        }
    }

    fn render_s(&self, s: &GaussInt) -> String {
        s.to_string()
    }

    fn sample_elem(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> GaussElem {
        let gs = Self::ball_g_values(ball);
        let g = gs.choose(rng).expect("1 is in the ball").clone();
        let n = self.sample_n(rng, ball);
        GaussElem { y: n.y, unit: n.unit, g }
    }

    fn sample_n(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> GaussElem {
        let y = Self::random_small(rng, ball.gauss_den);
        let unit = Unit::new(rng.gen_range(0..4));
        GaussElem { y, unit, g: GaussRat::one() }
    }

    fn sample_s(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> GaussInt {
        Self::gauss_ints(ball.s_bound).choose(rng).expect("1 has norm 1").clone()
    }

    fn sample_sigma(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> GaussElem {
        // Σ = {(Y, X) : X ∈ O \ 0, Y ∈ ((1+i)/2)·O}
        let s = self.sample_s(rng, ball);
        let z = GaussRat::from_ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let half = GaussRat::new(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into()));
        let x = GaussRat::from_gint(&s).mul_unit(Unit::new(rng.gen_range(0..4)));
        self.from_affine(&z.mul(&half), &x)
    }

    fn n_ball_keys(&self, ball: &Ball) -> Vec<GaussKey> {
        let den = ball.gauss_den as i64;
        let mut keys = BTreeSet::new();
        for a in 0..den {
            for b in 0..den {
                let y = GaussRat::new(Rational::new(a.into(), den.into()), Rational::new(b.into(), den.into()));
                keys.insert(self.key_from_normalised(GaussRat::one(), &y));
            }
        }
        keys.into_iter().collect()
    }
}
