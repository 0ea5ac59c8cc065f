//! The Hecke algebra `H(Γ, Γ₀)`: finitely supported functions on double
//! cosets with convolution and involution.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::pair::{Descriptor, HeckePair};
use crate::quad::QuadScalar;

/// Sparse combination of basis elements `[γ]`; never stores zero terms.
pub struct HeckeElement<P: HeckePair> {
    instance: Descriptor,
    terms: BTreeMap<P::Key, QuadScalar>,
}

impl<P: HeckePair> Clone for HeckeElement<P> {
    fn clone(&self) -> Self {
        HeckeElement { instance: self.instance.clone(), terms: self.terms.clone() }
    }
}

impl<P: HeckePair> PartialEq for HeckeElement<P> {
    fn eq(&self, other: &Self) -> bool {
        self.instance == other.instance && self.terms == other.terms
    }
}

impl<P: HeckePair> Eq for HeckeElement<P> {}

impl<P: HeckePair> fmt::Debug for HeckeElement<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<P: HeckePair> HeckeElement<P> {
    pub fn zero(instance: Descriptor) -> Self {
        HeckeElement { instance, terms: BTreeMap::new() }
    }

    pub fn from_terms(instance: Descriptor, terms: impl IntoIterator<Item = (P::Key, QuadScalar)>) -> Self {
        let mut out = Self::zero(instance);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn instance(&self) -> &Descriptor {
        &self.instance
    }

    pub fn terms(&self) -> &BTreeMap<P::Key, QuadScalar> {
        &self.terms
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

    pub fn coefficient(&self, k: &P::Key) -> QuadScalar {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    /// The unique term, if there is exactly one.
    pub fn single_term(&self) -> Option<(&P::Key, &QuadScalar)> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some(t), None) => Some(t),
            _ => None,
        }
    }

    pub fn add_term(&mut self, k: P::Key, c: QuadScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.instance == other.instance {
            Ok(())
        } else {
            Err(Error::InstanceMismatch { left: self.instance.to_string(), right: other.instance.to_string() })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&QuadScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &QuadScalar) -> Self {
        let mut out = Self::zero(self.instance.clone());
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }
}

type Product<K> = Arc<Vec<(K, u64)>>;

type ProductCache<K> = HashMap<(K, K), Product<K>>;

/// A pair together with a memo of basis products.
pub struct HeckeAlgebra<P: HeckePair> {
    pair: P,
    products: RwLock<ProductCache<P::Key>>,
}

impl<P: HeckePair> HeckeAlgebra<P> {
    pub fn new(pair: P) -> Self {
        HeckeAlgebra { pair, products: RwLock::default() }
    }

    pub fn pair(&self) -> &P {
        &self.pair
    }

    pub fn descriptor(&self) -> &Descriptor {
        self.pair.descriptor()
    }

    pub fn zero(&self) -> HeckeElement<P> {
        HeckeElement::zero(self.descriptor().clone())
    }

    pub fn basis_key(&self, k: P::Key) -> HeckeElement<P> {
        HeckeElement::from_terms(self.descriptor().clone(), [(k, QuadScalar::one())])
    }

    /// `[γ]`, the characteristic function of `Γ₀γΓ₀`.
    pub fn basis(&self, g: &P::Elem) -> HeckeElement<P> {
        self.basis_key(self.pair.key(g))
    }

    pub fn identity(&self) -> HeckeElement<P> {
        self.basis(&self.pair.identity())
    }

    /// `[α]∗[β]` as `(key, coefficient)` pairs sorted by key.
    ///
    /// Candidates are `[α̂·b]` for the left representatives `b` of `[β]`,
    /// since `Γ₀αΓ₀βΓ₀ = ∪ Γ₀α̂bΓ₀`. The coefficient at `x` is the number
    /// of right representatives `β_j` with `x·β_j⁻¹ ∈ Γ₀αΓ₀`.
    pub fn basis_product(&self, a: &P::Key, b: &P::Key) -> Product<P::Key> {
        let memo_key = (a.clone(), b.clone());
        if let Some(p) = self.products.read().expect("cache lock").get(&memo_key) {
            return p.clone();
        }
        let p = &self.pair;
        let a_hat = p.key_rep(a);
        let candidates: BTreeSet<P::Key> =
            p.left_coset_reps(b).iter().map(|lb| p.key(&p.multiply(&a_hat, lb))).collect();
        let inverses: Vec<P::Elem> = p.right_coset_reps(b).iter().map(|r| p.invert(r)).collect();
        let out: Vec<(P::Key, u64)> = candidates
            .into_iter()
            .map(|mu| {
                let x = p.key_rep(&mu);
                let count = inverses.iter().filter(|bi| &p.key(&p.multiply(&x, bi)) == a).count() as u64;
                debug_assert!(count > 0, "candidate outside the support");
                (mu, count)
            })
            .collect();
        let out = Arc::new(out);
        self.products.write().expect("cache lock").insert(memo_key, out.clone());
        out
    }

    pub fn convolve(&self, f: &HeckeElement<P>, g: &HeckeElement<P>) -> Result<HeckeElement<P>> {
        self.pair.check_same(f.instance())?;
        self.pair.check_same(g.instance())?;
        let mut out = self.zero();
        for (ka, ca) in f.terms() {
            for (kb, cb) in g.terms() {
                let c = ca * cb;
                for (k, n) in self.basis_product(ka, kb).iter() {
                    out.add_term(k.clone(), c.scale(&crate::rational::int(*n as i64)));
                }
            }
        }
        Ok(out)
    }

    /// `f*(γ) = conj f(γ⁻¹)`; scalars are real.
    pub fn involution(&self, f: &HeckeElement<P>) -> HeckeElement<P> {
        let p = &self.pair;
        HeckeElement::from_terms(
            f.instance().clone(),
            f.terms().iter().map(|(k, c)| (p.key(&p.invert(&p.key_rep(k))), c.clone())),
        )
    }

    /// `W_σ = R(σ)^{-1/2} [σ]` for `σ ∈ Σ`.
    pub fn isometry_w(&self, sigma: &P::Elem) -> Result<HeckeElement<P>> {
        let k = self.pair.key(sigma);
        let l = self.pair.l_count(&k);
        if l != 1 {
            return Err(Error::NotInSigma(l));
        }
        let r = self.pair.r_count(&k);
        Ok(HeckeElement::from_terms(self.descriptor().clone(), [(k, QuadScalar::inv_sqrt(r))]))
    }

    /// `K` with `[τ]*∗[σ] = K·[τ⁻¹σ]`, for `σ, τ ∈ Σ`.
    pub fn k_constant(&self, sigma: &P::Elem, tau: &P::Elem) -> Result<u64> {
        let p = &self.pair;
        for g in [sigma, tau] {
            let l = p.l_of(g);
            if l != 1 {
                return Err(Error::NotInSigma(l));
            }
        }
        let prod = self.convolve(&self.involution(&self.basis(tau)), &self.basis(sigma))?;
        let at = p.key(&p.multiply(&p.invert(tau), sigma));
        Ok(prod.coefficient(&at).as_positive_integer().expect("K is a positive integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::{Ball, GaussPair, LinearPair};
    use crate::rational::ratio;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bc() -> HeckeAlgebra<LinearPair> {
        HeckeAlgebra::new(LinearPair::bc())
    }

    fn el<P: HeckePair>(h: &HeckeAlgebra<P>, text: &str) -> HeckeElement<P> {
        h.basis(&h.pair().parse_elem(text).unwrap())
    }

    #[test]
    fn bc_examples() {
        let h = bc();
        let two = el(&h, "(0; 2)");
        let three = el(&h, "(0; 3)");
        assert_eq!(h.convolve(&two, &three).unwrap(), el(&h, "(0; 6)"));
        let half = el(&h, "(0; 1/2)");
        let prod = h.convolve(&half, &two).unwrap();
        assert_eq!(prod, h.identity().scale(&QuadScalar::from_int(2)));
        assert_eq!(h.involution(&two), half);
        let w = h.isometry_w(&h.pair().parse_elem("(0; 2)").unwrap()).unwrap();
        assert_eq!(w.single_term().unwrap().1, &QuadScalar::term(ratio(1, 2), 2));
        let not_sigma = h.pair().parse_elem("(0; 1/2)").unwrap();
        assert_eq!(h.isometry_w(&not_sigma), Err(Error::NotInSigma(2)));
        let p = h.pair();
        let s2 = p.parse_elem("(0; 2)").unwrap();
        let s3 = p.parse_elem("(0; 3)").unwrap();
        assert_eq!(h.k_constant(&s2, &s3).unwrap(), 1);
        assert_eq!(h.k_constant(&s2, &s2).unwrap(), 2);
        assert_eq!(h.k_constant(&s2, &p.identity()).unwrap(), 1);
    }

    #[test]
    fn identity_is_two_sided() {
        let h = bc();
        let f = el(&h, "(1/3; 4/9)").add(&el(&h, "(1/2; 5)").scale(&QuadScalar::sqrt(2))).unwrap();
        assert_eq!(h.convolve(&h.identity(), &f).unwrap(), f);
        assert_eq!(h.convolve(&f, &h.identity()).unwrap(), f);
    }

    #[test]
    fn instance_mismatch() {
        let a = bc();
        let b = HeckeAlgebra::new(LinearPair::gl(1).unwrap());
        let f = a.identity();
        let g = b.identity();
        assert!(matches!(b.convolve(&f, &g), Err(Error::InstanceMismatch { .. })));
        assert!(matches!(f.add(&g), Err(Error::InstanceMismatch { .. })));
    }

    /// `Σ_μ c_μ R(μ) = R(α) R(β)`: every right coset of the product set is
    /// counted with its multiplicity.
    fn mass_check<P: HeckePair>(h: &HeckeAlgebra<P>, a: &P::Key, b: &P::Key) {
        let p = h.pair();
        let total: u64 = h.basis_product(a, b).iter().map(|(k, c)| c * p.r_count(k)).sum();
        assert_eq!(total, p.r_count(a) * p.r_count(b), "{a:?} * {b:?}");
    }

    #[test]
    fn products_have_full_mass() {
        let ball = Ball::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = bc();
        for _ in 0..40 {
            let a = h.pair().key(&h.pair().sample_elem(&mut rng, &ball));
            let b = h.pair().key(&h.pair().sample_elem(&mut rng, &ball));
            mass_check(&h, &a, &b);
        }
        let h = HeckeAlgebra::new(LinearPair::gl(2).unwrap());
        let ball2 = Ball { entry: 2, g_den: 2, n_den: 3, ..Ball::default() };
        for _ in 0..15 {
            let a = h.pair().key(&h.pair().sample_elem(&mut rng, &ball2));
            let b = h.pair().key(&h.pair().sample_elem(&mut rng, &ball2));
            mass_check(&h, &a, &b);
        }
        let h = HeckeAlgebra::new(GaussPair::default());
        for _ in 0..30 {
            let a = h.pair().key(&h.pair().sample_elem(&mut rng, &ball));
            let b = h.pair().key(&h.pair().sample_elem(&mut rng, &ball));
            mass_check(&h, &a, &b);
        }
    }

    #[test]
    fn gaussian_n_is_not_a_group_algebra() {
        let h = HeckeAlgebra::new(GaussPair::default());
        let x = el(&h, "(1/2, 1; 1)");
        let sq = h.convolve(&x, &x).unwrap();
        // [1/2]∗[1/2] = 2[0] + 2[(1+i)/2]
        let want = h.identity().add(&el(&h, "(1/2+1/2*i, 1; 1)")).unwrap();
        assert_eq!(sq, want.scale(&QuadScalar::from_int(2)));
    }
}
