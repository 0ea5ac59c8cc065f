//! Brute-force reference path: double cosets as explicit finite sets of
//! reduced residues and convolution by direct counting.
//!
//! Nothing here touches the lattice, Gaussian or pair code; only the
//! `Rational` type is shared. Elements of the main path are handed over as
//! raw coordinates through [`Bridge`].

mod gauss;
mod linear;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::pair::{GaussPair, HeckePair, LinearPair};
use crate::rational::Rational;

pub use gauss::GaussOracle;
pub use linear::LinearOracle;

/// Flattened rational coordinates.
pub type Coords = Vec<Rational>;

/// Canonical form `(g-coordinate, residue)` of a right coset `Γ₀γ`.
pub type RightCoset = (Coords, Coords);

/// One double coset `Γ₀γΓ₀` as explicit finite sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CosetSet {
    /// Canonical `G`-coordinate shared by every element.
    pub g: Coords,
    /// Canonical residues of the right cosets it contains.
    pub right: BTreeSet<Coords>,
    /// Every reduced `N`-residue of the double coset.
    pub residues: BTreeSet<Coords>,
}

impl CosetSet {
    pub fn right_count(&self) -> u64 {
        self.right.len() as u64
    }

    pub fn contains_right(&self, rc: &RightCoset) -> bool {
        rc.0 == self.g && self.right.contains(&rc.1)
    }
}

/// Primitive operations one instance must supply.
pub trait Oracle: Sync {
    type Elem: Clone + Send + Sync;

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn in_gamma0(&self, a: &Self::Elem) -> bool;
    /// A generating set of `Γ₀`.
    fn gamma0_generators(&self) -> Vec<Self::Elem>;
    fn right_coset(&self, a: &Self::Elem) -> RightCoset;
    /// Representatives of every right coset of `Γ₀aΓ₀`, possibly repeated,
    /// from the closed-form description of the double coset.
    fn double_coset_elements(&self, a: &Self::Elem) -> Vec<Self::Elem>;
    /// Reduced `N`-residues of the right coset `Γ₀a`.
    fn right_coset_residues(&self, a: &Self::Elem) -> Vec<Coords>;
    /// Elements of `σΓ₀σ⁻¹`, covering every right `Γ₀`-coset in it.
    fn conjugate_elements(&self, sigma: &Self::Elem) -> Vec<Self::Elem>;
}

/// Distinct right-coset representatives of `Γ₀aΓ₀`.
pub fn right_reps<O: Oracle>(o: &O, a: &O::Elem) -> Vec<O::Elem> {
    let mut seen = BTreeSet::new();
    o.double_coset_elements(a).into_iter().filter(|e| seen.insert(o.right_coset(e))).collect()
}

pub fn oracle_double_coset<O: Oracle>(o: &O, a: &O::Elem) -> CosetSet {
    let g = o.right_coset(a).0;
    let mut right = BTreeSet::new();
    let mut residues = BTreeSet::new();
    for e in o.double_coset_elements(a) {
        let (eg, r) = o.right_coset(&e);
        debug_assert_eq!(eg, g);
        if right.insert(r) {
            residues.extend(o.right_coset_residues(&e));
        }
    }
    CosetSet { g, right, residues }
}

/// Double-coset sets memoised by the right coset of the argument, for
/// sweeps that meet the same double cosets many times.
pub struct CosetCache<'o, O: Oracle> {
    oracle: &'o O,
    sets: Mutex<HashMap<RightCoset, Arc<CosetSet>>>,
}

impl<'o, O: Oracle> CosetCache<'o, O> {
    pub fn new(oracle: &'o O) -> Self {
        CosetCache { oracle, sets: Mutex::new(HashMap::new()) }
    }

    pub fn oracle(&self) -> &'o O {
        self.oracle
    }

    pub fn double_coset(&self, a: &O::Elem) -> Arc<CosetSet> {
        let key = self.oracle.right_coset(a);
        if let Some(s) = self.sets.lock().expect("cache lock").get(&key) {
            return s.clone();
        }
        let s = Arc::new(oracle_double_coset(self.oracle, a));
        self.sets.lock().expect("cache lock").insert(key, s.clone());
        s
    }
}

pub fn oracle_r<O: Oracle>(o: &O, a: &O::Elem) -> u64 {
    oracle_double_coset(o, a).right_count()
}

pub fn oracle_l<O: Oracle>(o: &O, a: &O::Elem) -> u64 {
    oracle_r(o, &o.inv(a))
}

/// `([α]∗[β])(x) = |Γ₀\(Γ₀α⁻¹Γ₀x ∩ Γ₀βΓ₀)|`.
pub fn oracle_convolve<O: Oracle>(o: &O, alpha: &O::Elem, beta: &O::Elem, x: &O::Elem) -> u64 {
    count_hits(o, &right_reps(o, &o.inv(alpha)), &oracle_double_coset(o, beta), x)
}

fn count_hits<O: Oracle>(o: &O, inv_reps: &[O::Elem], target: &CosetSet, x: &O::Elem) -> u64 {
    inv_reps.iter().filter(|c| target.contains_right(&o.right_coset(&o.mul(c, x)))).count() as u64
}

/// Full product `[α]∗[β]`, indexed by the double cosets of its support.
/// Candidates are the products `a_i·b_j` of right-coset representatives.
pub fn oracle_product<O: Oracle>(o: &O, alpha: &O::Elem, beta: &O::Elem) -> BTreeMap<CosetSet, u64> {
    oracle_product_cached(&CosetCache::new(o), alpha, beta)
}

pub fn oracle_product_cached<O: Oracle>(
    cache: &CosetCache<O>,
    alpha: &O::Elem,
    beta: &O::Elem,
) -> BTreeMap<CosetSet, u64> {
    let o = cache.oracle();
    let inv_reps = right_reps(o, &o.inv(alpha));
    let target = cache.double_coset(beta);
    let b_reps = right_reps(o, beta);
    let mut seen: BTreeSet<RightCoset> = BTreeSet::new();
    let mut found: Vec<(Arc<CosetSet>, O::Elem)> = Vec::new();
    for a in right_reps(o, alpha) {
        for b in &b_reps {
            let x = o.mul(&a, b);
            if seen.contains(&o.right_coset(&x)) {
                continue;
            }
            let cs = cache.double_coset(&x);
            for r in &cs.right {
                seen.insert((cs.g.clone(), r.clone()));
            }
            found.push((cs, x));
        }
    }
    found
        .into_iter()
        .filter_map(|(cs, x)| {
            let c = count_hits(o, &inv_reps, &target, &x);
            (c > 0).then(|| ((*cs).clone(), c))
        })
        .collect()
}

/// Whether `σ⁻¹Γ₀σ ⊆ Γ₀`, tested on generators.
pub fn oracle_in_sigma<O: Oracle>(o: &O, sigma: &O::Elem) -> bool {
    let s_inv = o.inv(sigma);
    o.gamma0_generators().iter().all(|g| o.in_gamma0(&o.mul(&o.mul(&s_inv, g), sigma)))
}

/// `|Γ₀\(τΓ₀τ⁻¹ ∩ σΓ₀σ⁻¹)|` for `σ, τ ∈ Σ`.
pub fn oracle_k<O: Oracle>(o: &O, sigma: &O::Elem, tau: &O::Elem) -> Result<u64> {
    for e in [sigma, tau] {
        if !oracle_in_sigma(o, e) {
            return Err(Error::NotInSigma(oracle_l(o, e)));
        }
    }
    let t_inv = o.inv(tau);
    let mut seen = BTreeSet::new();
    for h in o.conjugate_elements(sigma) {
        if o.in_gamma0(&o.mul(&o.mul(&t_inv, &h), tau)) {
            seen.insert(o.right_coset(&h));
        }
    }
    Ok(seen.len() as u64)
}

/// Hands main-path elements to an oracle as raw coordinates.
pub trait Bridge: HeckePair {
    type Oracle: Oracle;
    fn oracle(&self) -> Self::Oracle;
    fn to_oracle(&self, e: &Self::Elem) -> <Self::Oracle as Oracle>::Elem;
}

impl Bridge for LinearPair {
    type Oracle = LinearOracle;

    fn oracle(&self) -> LinearOracle {
        LinearOracle::new(self.dim())
    }

    fn to_oracle(&self, e: &Self::Elem) -> linear::Elem {
        let d = self.dim();
        let entries = e.g.entries();
        linear::Elem { n: e.n.0.clone(), g: (0..d).map(|i| entries[i * d..(i + 1) * d].to_vec()).collect() }
    }
}

impl Bridge for GaussPair {
    type Oracle = GaussOracle;

    fn oracle(&self) -> GaussOracle {
        GaussOracle
    }

    fn to_oracle(&self, e: &Self::Elem) -> gauss::Elem {
        let g = gauss::C::new(e.g.re.clone(), e.g.im.clone());
        let y = gauss::C::new(e.y.re.clone(), e.y.im.clone());
        let u = gauss::C::unit(e.unit.index());
        gauss::Elem { y: y.mul(&g), x: u.mul(&g) }
    }
}

/// `q - floor(q)`.
pub(crate) fn fract(q: &Rational) -> Rational {
    q - q.floor()
}

/// Least common multiple of the denominators.
pub(crate) fn denominator_lcm<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> num_bigint::BigInt {
    qs.into_iter().fold(num_bigint::BigInt::from(1), |acc, q| acc.lcm(q.denom()))
}

pub(crate) fn is_integer(q: &Rational) -> bool {
    q.is_integer() || q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn lin(n: (i64, i64), g: (i64, i64)) -> linear::Elem {
        linear::Elem { n: vec![ratio(n.0, n.1)], g: vec![vec![ratio(g.0, g.1)]] }
    }

    #[test]
    fn bc_double_cosets() {
        let o = LinearOracle::new(1);
        let id = lin((0, 1), (1, 1));
        let cs = oracle_double_coset(&o, &id);
        assert_eq!(cs.residues.len(), 1);
        assert_eq!(oracle_double_coset(&o, &lin((1, 2), (1, 1))).residues.len(), 1);
        assert_eq!(oracle_r(&o, &lin((0, 1), (2, 1))), 2);
        assert_eq!(oracle_l(&o, &lin((0, 1), (2, 1))), 1);
        assert_eq!(oracle_convolve(&o, &id, &id, &id), 1);
    }

    #[test]
    fn bc_convolution_value() {
        // ([1/2]∗[2])(identity) counts two right cosets
        let o = LinearOracle::new(1);
        let half = lin((0, 1), (1, 2));
        let two = lin((0, 1), (2, 1));
        let id = lin((0, 1), (1, 1));
        assert_eq!(oracle_convolve(&o, &half, &two, &id), 2);
        let six = lin((0, 1), (6, 1));
        let prod = oracle_product(&o, &two, &lin((0, 1), (3, 1)));
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.get(&oracle_double_coset(&o, &six)), Some(&1));
    }

    #[test]
    fn gaussian_double_coset() {
        let o = GaussOracle;
        let half = gauss::Elem { y: gauss::C::new(ratio(1, 2), ratio(0, 1)), x: gauss::C::unit(0) };
        let cs = oracle_double_coset(&o, &half);
        assert_eq!(cs.residues.len(), 8);
        assert_eq!(cs.right_count(), 2);
        assert_eq!(cs.residues.len() as u64, cs.right_count() * 4);
    }

    #[test]
    fn k_basics() {
        let o = LinearOracle::new(1);
        let two = lin((0, 1), (2, 1));
        let three = lin((1, 3), (3, 1));
        assert_eq!(oracle_k(&o, &two, &two).unwrap(), oracle_r(&o, &two));
        assert_eq!(oracle_k(&o, &two, &three).unwrap(), 1);
        assert_eq!(oracle_k(&o, &lin((0, 1), (4, 1)), &lin((0, 1), (6, 1))).unwrap(), 2);
        assert_eq!(oracle_k(&o, &lin((0, 1), (1, 2)), &two), Err(Error::NotInSigma(2)));
    }
}
