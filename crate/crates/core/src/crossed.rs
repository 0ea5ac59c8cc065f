//! The semigroup crossed product `H(N, Γ₀) ⋊_α S` in normal form
//! `μ_t* e(x) μ_s`, and its isomorphism onto `H(Γ, Γ₀)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::pair::{Descriptor, HeckePair};
use crate::quad::QuadScalar;
use crate::rational::Rational;

/// `μ_t* e(x) μ_s` with `x` a double coset inside `N`.
pub struct Monomial<P: HeckePair> {
    pub t: P::S,
    pub x: P::Key,
    pub s: P::S,
}

impl<P: HeckePair> Clone for Monomial<P> {
    fn clone(&self) -> Self {
        Monomial { t: self.t.clone(), x: self.x.clone(), s: self.s.clone() }
    }
}

impl<P: HeckePair> PartialEq for Monomial<P> {
    fn eq(&self, o: &Self) -> bool {
        self.t == o.t && self.x == o.x && self.s == o.s
    }
}

impl<P: HeckePair> fmt::Debug for Monomial<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu*({:?}) e[{:?}] mu({:?})", self.t, self.x, self.s)
    }
}

/// One term: a witness monomial, its coefficient, and the weight
/// `R(x)·√(R(s)/R(t))` of the witness.
struct Term<P: HeckePair> {
    m: Monomial<P>,
    c: QuadScalar,
    w: QuadScalar,
}

impl<P: HeckePair> Clone for Term<P> {
    fn clone(&self) -> Self {
        Term { m: self.m.clone(), c: self.c.clone(), w: self.w.clone() }
    }
}

impl<P: HeckePair> Term<P> {
    /// Coefficient rescaled to weight one, independent of the witness.
    fn normalised(&self) -> QuadScalar {
        &self.c * &self.w
    }
}

/// Sparse combination of monomials, keyed by the double coset of
/// `t⁻¹x̂s`.
///
/// Monomials with the same key are proportional, not always equal: both
/// embed to `R(key)⁻¹·weight·[key]`. Each entry keeps the first witness
/// seen and converts later coefficients by the weight ratio, so equality
/// compares keys and normalised coefficients.
pub struct CpElement<P: HeckePair> {
    instance: Descriptor,
    terms: BTreeMap<P::Key, Term<P>>,
}

impl<P: HeckePair> Clone for CpElement<P> {
    fn clone(&self) -> Self {
        CpElement { instance: self.instance.clone(), terms: self.terms.clone() }
    }
}

impl<P: HeckePair> PartialEq for CpElement<P> {
    fn eq(&self, o: &Self) -> bool {
        self.instance == o.instance
            && self.terms.len() == o.terms.len()
            && self
                .terms
                .iter()
                .zip(&o.terms)
                .all(|((k1, t1), (k2, t2))| k1 == k2 && t1.normalised() == t2.normalised())
    }
}

impl<P: HeckePair> Eq for CpElement<P> {}

impl<P: HeckePair> fmt::Debug for CpElement<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.terms.values().map(|t| (&t.c, &t.m))).finish()
    }
}

impl<P: HeckePair> CpElement<P> {
    pub fn zero(instance: Descriptor) -> Self {
        CpElement { instance, terms: BTreeMap::new() }
    }

    pub fn instance(&self) -> &Descriptor {
        &self.instance
    }

    pub fn terms(&self) -> impl Iterator<Item = (&P::Key, &Monomial<P>, &QuadScalar)> {
        self.terms.iter().map(|(k, t)| (k, &t.m, &t.c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, key: P::Key, term: Term<P>) {
        if term.c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(term);
            }
            Entry::Occupied(mut o) => {
                let held = o.get();
                let ratio = &term.w * &held.w.inverse().expect("weights are nonzero");
                let sum = &held.c + &(&term.c * &ratio);
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.get_mut().c = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.instance != other.instance {
            return Err(Error::InstanceMismatch { left: self.instance.to_string(), right: other.instance.to_string() });
        }
        let mut out = self.clone();
        for (k, t) in &other.terms {
            out.add_term(k.clone(), t.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &QuadScalar) -> Self {
        let mut out = Self::zero(self.instance.clone());
        for (k, t) in &self.terms {
            out.add_term(k.clone(), Term { c: &t.c * c, ..t.clone() });
        }
        out
    }
}

/// Chooses `(a, b)` with `a·s = b·t`.
pub type OrePair<'f, P> =
    dyn Fn(&<P as HeckePair>::S, &<P as HeckePair>::S) -> (<P as HeckePair>::S, <P as HeckePair>::S) + 'f;

/// Crossed-product operations over a Hecke algebra.
pub struct CrossedProduct<'a, P: HeckePair> {
    h: &'a HeckeAlgebra<P>,
}

impl<'a, P: HeckePair> CrossedProduct<'a, P> {
    pub fn new(h: &'a HeckeAlgebra<P>) -> Self {
        CrossedProduct { h }
    }

    pub fn algebra(&self) -> &HeckeAlgebra<P> {
        self.h
    }

    fn pair(&self) -> &P {
        self.h.pair()
    }

    fn desc(&self) -> Descriptor {
        self.h.descriptor().clone()
    }

    fn check(&self, d: &Descriptor) -> Result<()> {
        self.pair().check_same(d)
    }

    /// Key of `Γ₀ t⁻¹ x̂ s Γ₀`.
    pub fn monomial_key(&self, m: &Monomial<P>) -> P::Key {
        let p = self.pair();
        let t_inv = p.invert(&p.s_embed(&m.t));
        let g = p.multiply(&t_inv, &p.multiply(&p.key_rep(&m.x), &p.s_embed(&m.s)));
        p.key(&g)
    }

    pub fn zero(&self) -> CpElement<P> {
        CpElement::zero(self.desc())
    }

    /// `R(x)·√(R(s)/R(t))`; equal-key monomials are proportional with
    /// this ratio.
    pub fn weight(&self, m: &Monomial<P>) -> QuadScalar {
        let p = self.pair();
        let (rt, rs) = (p.s_r(&m.t), p.s_r(&m.s));
        QuadScalar::sqrt(rt * rs).scale(&Rational::new(p.r_count(&m.x).into(), rt.into()))
    }

    /// A same-key monomial with `t` and `s` left-coprime:
    /// `μ_{dt}* e(x) μ_{ds}` is a multiple of `μ_t* e(d⁻¹x̂d) μ_s`.
    fn reduced(&self, m: Monomial<P>) -> Monomial<P> {
        let p = self.pair();
        let (d, t, s) = p.s_left_gcd(&m.t, &m.s);
        if d == p.s_identity() {
            return m;
        }
        let de = p.s_embed(&d);
        let x = p.key(&p.multiply(&p.invert(&de), &p.multiply(&p.key_rep(&m.x), &de)));
        Monomial { t, x, s }
    }

    fn add_keyed(&self, out: &mut CpElement<P>, key: P::Key, m: Monomial<P>, c: QuadScalar) {
        if c.is_zero() {
            return;
        }
        let before = self.weight(&m);
        let m = self.reduced(m);
        let w = self.weight(&m);
        let c = if before == w { c } else { &c * &(&before * &w.inverse().expect("weights are nonzero")) };
        out.add_term(key, Term { m, c, w });
    }

    pub fn add_monomial(&self, out: &mut CpElement<P>, m: Monomial<P>, c: QuadScalar) {
        let key = self.monomial_key(&m);
        self.add_keyed(out, key, m, c);
    }

    pub fn monomial(&self, t: P::S, x: P::Key, s: P::S) -> Result<CpElement<P>> {
        if !self.pair().key_in_n(&x) {
            return Err(Error::NotInN);
        }
        let mut out = self.zero();
        self.add_monomial(&mut out, Monomial { t, x, s }, QuadScalar::one());
        Ok(out)
    }

    fn e1(&self) -> P::Key {
        self.pair().key(&self.pair().identity())
    }

    pub fn identity(&self) -> CpElement<P> {
        let one = self.pair().s_identity();
        self.monomial(one.clone(), self.e1(), one).expect("identity lies in N")
    }

    pub fn gen_mu(&self, s: &P::S) -> CpElement<P> {
        self.monomial(self.pair().s_identity(), self.e1(), s.clone()).expect("identity lies in N")
    }

    pub fn gen_e(&self, x: &P::Key) -> Result<CpElement<P>> {
        let one = self.pair().s_identity();
        self.monomial(one.clone(), x.clone(), one)
    }

    /// `Σ c_x e(x)` for an element of `H(N, Γ₀)`.
    pub fn from_n_element(&self, h: &HeckeElement<P>) -> Result<CpElement<P>> {
        self.check(h.instance())?;
        let mut out = self.zero();
        for (k, c) in h.terms() {
            if !self.pair().key_in_n(k) {
                return Err(Error::NotInN);
            }
            let one = self.pair().s_identity();
            self.add_monomial(&mut out, Monomial { t: one.clone(), x: k.clone(), s: one }, c.clone());
        }
        Ok(out)
    }

    /// `α_s(e(x)) = R(s)⁻¹ Σ e(y)` over the distinct `[y]` with
    /// `[s⁻¹ y s] = [x]`, extended linearly.
    pub fn alpha(&self, s: &P::S, h: &HeckeElement<P>) -> Result<HeckeElement<P>> {
        self.check(h.instance())?;
        let p = self.pair();
        let scale = QuadScalar::from_rational(Rational::new(1.into(), p.s_r(s).into()));
        let mut out = HeckeElement::zero(self.desc());
        for (x, c) in h.terms() {
            let cs = c * &scale;
            for y in p.alpha_preimages(s, x)? {
                out.add_term(y, cs.clone());
            }
        }
        Ok(out)
    }

    /// The corner projection `α_s(1)`.
    pub fn alpha_one(&self, s: &P::S) -> HeckeElement<P> {
        self.alpha(s, &self.h.identity()).expect("identity lies in N")
    }

    /// `X ↦ μ_s* X μ_s` on the corner `α_s(1) H α_s(1)`; `NotInCorner` if
    /// `h` is not in the image of `α_s`.
    pub fn alpha_inv(&self, s: &P::S, h: &HeckeElement<P>) -> Result<HeckeElement<P>> {
        let x = self.from_n_element(h)?;
        let mu = self.gen_mu(s);
        let conj = self.cp_mul(&self.cp_mul(&self.cp_star(&mu), &x)?, &mu)?;
        let back = self.embed(&conj)?;
        if back.terms().keys().any(|k| !self.pair().key_in_n(k)) {
            return Err(Error::NotInCorner);
        }
        if &self.alpha(s, &back)? != h {
            return Err(Error::NotInCorner);
        }
        Ok(back)
    }

    /// Product of two monomials using the Ore pair `(a, b)` with
    /// `a·s = b·v`:
    /// `μ_t* e(x) μ_s · μ_v* e(y) μ_w = μ_{at}* [α_a(e(x)) α_{as}(1) α_b(e(y))] μ_{bw}`.
    fn mono_mul(
        &self,
        m1: &Monomial<P>,
        m2: &Monomial<P>,
        ore: &OrePair<'_, P>,
        out: &mut CpElement<P>,
        c: &QuadScalar,
    ) -> Result<()> {
        let p = self.pair();
        let (a, b) = ore(&m1.s, &m2.t);
        let as_ = p.s_mul(&a, &m1.s);
        if as_ != p.s_mul(&b, &m2.t) {
            return Err(Error::InvalidElement("Ore pair does not satisfy a·s = b·t".into()));
        }
        let ex = self.alpha(&a, &self.h.basis_key(m1.x.clone()))?;
        let proj = self.alpha_one(&as_);
        let ey = self.alpha(&b, &self.h.basis_key(m2.x.clone()))?;
        let bracket = self.h.convolve(&self.h.convolve(&ex, &proj)?, &ey)?;
        let at = p.s_mul(&a, &m1.t);
        let bw = p.s_mul(&b, &m2.s);
        for (z, cz) in bracket.terms() {
            let m = Monomial { t: at.clone(), x: z.clone(), s: bw.clone() };
            self.add_monomial(out, m, cz * c);
        }
        Ok(())
    }

    /// Multiplication with a caller-chosen Ore pair for each monomial
    /// product.
    pub fn cp_mul_with(&self, a: &CpElement<P>, b: &CpElement<P>, ore: &OrePair<'_, P>) -> Result<CpElement<P>> {
        self.check(a.instance())?;
        self.check(b.instance())?;
        let mut out = self.zero();
        for (_, m1, c1) in a.terms() {
            for (_, m2, c2) in b.terms() {
                self.mono_mul(m1, m2, ore, &mut out, &(c1 * c2))?;
            }
        }
        Ok(out)
    }

    pub fn cp_mul(&self, a: &CpElement<P>, b: &CpElement<P>) -> Result<CpElement<P>> {
        let p = self.pair();
        self.cp_mul_with(a, b, &|s, t| p.ore(s, t))
    }

    /// `(μ_t* e(x) μ_s)* = μ_s* e(x⁻¹) μ_t`.
    pub fn cp_star(&self, a: &CpElement<P>) -> CpElement<P> {
        let p = self.pair();
        let mut out = CpElement::zero(a.instance().clone());
        for (_, m, c) in a.terms() {
            let x_inv = p.key(&p.invert(&p.key_rep(&m.x)));
            let star = Monomial { t: m.s.clone(), x: x_inv, s: m.t.clone() };
            self.add_monomial(&mut out, star, c.clone());
        }
        out
    }

    /// `(R(t)R(s))^{-1/2} [t⁻¹]∗[x]∗[s]`.
    pub fn embed_monomial(&self, m: &Monomial<P>) -> Result<HeckeElement<P>> {
        let p = self.pair();
        let t_inv = self.h.basis(&p.invert(&p.s_embed(&m.t)));
        let x = self.h.basis_key(m.x.clone());
        let s = self.h.basis(&p.s_embed(&m.s));
        let prod = self.h.convolve(&self.h.convolve(&t_inv, &x)?, &s)?;
        Ok(prod.scale(&QuadScalar::inv_sqrt(p.s_r(&m.t) * p.s_r(&m.s))))
    }

    /// The scalar `λ` with `embed(m) = λ·[t⁻¹x̂s]`.
    pub fn monomial_scalar(&self, m: &Monomial<P>) -> Result<QuadScalar> {
        let e = self.embed_monomial(m)?;
        let (k, c) = e.single_term().expect("a monomial embeds as a single double coset");
        debug_assert_eq!(k, &self.monomial_key(m));
        Ok(c.clone())
    }

    pub fn embed(&self, a: &CpElement<P>) -> Result<HeckeElement<P>> {
        self.check(a.instance())?;
        let mut out = HeckeElement::zero(self.desc());
        for (_, m, c) in a.terms() {
            for (k, v) in self.embed_monomial(m)?.terms() {
                out.add_term(k.clone(), v * c);
            }
        }
        Ok(out)
    }

    pub fn unembed(&self, h: &HeckeElement<P>) -> Result<CpElement<P>> {
        self.check(h.instance())?;
        let p = self.pair();
        let mut out = self.zero();
        for (k, c) in h.terms() {
            let (t, n, s) = p.factor_tns(&p.key_rep(k));
            let m = Monomial { t, x: p.key(&n), s };
            let lambda = self.monomial_scalar(&m)?;
            let coeff = c * &lambda.inverse()?;
            self.add_keyed(&mut out, k.clone(), m, coeff);
        }
        Ok(out)
    }

    /// `μ_s*μ_s = 1` and `μ_sμ_t = μ_{st}`, both through `embed`.
    pub fn verify_relation_h1(&self, s: &P::S, t: &P::S) -> Result<bool> {
        let h = self.h;
        let ws = self.embed(&self.gen_mu(s))?;
        let wt = self.embed(&self.gen_mu(t))?;
        let wst = self.embed(&self.gen_mu(&self.pair().s_mul(s, t)))?;
        let isometry = h.convolve(&h.involution(&ws), &ws)? == h.identity();
        let multiplicative = h.convolve(&ws, &wt)? == wst;
        Ok(isometry && multiplicative)
    }

    /// `e(1) = 1`, `e(x)* = e(x⁻¹)`, and `e(x)e(y)` as in `H(N, Γ₀)`.
    pub fn verify_relation_h2(&self, x: &P::Key, y: &P::Key) -> Result<bool> {
        let h = self.h;
        let p = self.pair();
        let unit = self.embed(&self.gen_e(&self.e1())?)? == h.identity();
        let ex = self.gen_e(x)?;
        let ey = self.gen_e(y)?;
        let x_inv = p.key(&p.invert(&p.key_rep(x)));
        let star = self.embed(&self.cp_star(&ex))? == self.embed(&self.gen_e(&x_inv)?)?;
        let in_n = h.convolve(&h.basis_key(x.clone()), &h.basis_key(y.clone()))?;
        let product =
            self.embed(&self.cp_mul(&ex, &ey)?)? == in_n && h.convolve(&self.embed(&ex)?, &self.embed(&ey)?)? == in_n;
        Ok(unit && star && product)
    }

    /// `μ_s e(x) μ_s* = α_s(e(x))` through `embed`.
    pub fn verify_relation_h3(&self, s: &P::S, x: &P::Key) -> Result<bool> {
        let h = self.h;
        let ws = self.embed(&self.gen_mu(s))?;
        let lhs = h.convolve(&h.convolve(&ws, &h.basis_key(x.clone()))?, &h.involution(&ws))?;
        Ok(lhs == self.alpha(s, &h.basis_key(x.clone()))?)
    }
}
