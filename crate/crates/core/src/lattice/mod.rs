//! Exact integer and rational linear algebra: normal forms, full-rank lattices
//! in `Q^d`, indices, and residue enumeration for finite quotients.

mod matrix;
mod normal_form;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub use matrix::{IntMatrix, RatMatrix, RatVector};
pub use normal_form::{hnf, hnf_rational, invariant_factors, is_hnf, snf};

use crate::error::{Error, Result};
use crate::rational::{frac, Rational};

/// Full-rank lattice `(1/denom) * basis * Z^d` with `basis` in Hermite normal
/// form. The pair is kept primitive (no common factor between the basis
/// content and `denom`), which makes the representation canonical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    basis: IntMatrix,
    denom: BigInt,
}

impl Lattice {
    /// `Z^d`.
    pub fn standard(d: usize) -> Self {
        Lattice { basis: IntMatrix::identity(d), denom: BigInt::one() }
    }

    /// Lattice spanned by the columns of `gens`, which must span `Q^d`.
    pub fn from_generators(gens: &RatMatrix) -> Result<Self> {
        let d = gens.rows();
        let (m, denom) = gens.clear_denominators();
        let e = normal_form::column_echelon(&m);
        if e.pivots.len() < d {
            return Err(Error::RankDeficient);
        }
        let k = m.cols();
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in k - d..k {
                data.push(e.h[(i, j)].clone());
            }
        }
        let basis = IntMatrix::new(d, d, data)?;
        Ok(Self::primitive(basis, denom))
    }

    fn primitive(basis: IntMatrix, denom: BigInt) -> Self {
        let g = basis.entries().iter().fold(denom.clone(), |acc, x| acc.gcd(x));
        if g.is_one() {
            return Lattice { basis, denom };
        }
        let d = basis.rows();
        let data = basis.entries().iter().map(|x| x / &g).collect();
        Lattice { basis: IntMatrix::new(d, d, data).expect("same shape"), denom: denom / g }
    }

    /// Image of `Z^d` under a nonsingular rational matrix.
    pub fn from_basis(basis: &RatMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch { expected: basis.rows(), found: basis.cols() });
        }
        Self::from_generators(basis)
    }

    /// Image of this lattice under a nonsingular matrix.
    pub fn image(&self, m: &RatMatrix) -> Result<Self> {
        Self::from_basis(&m.mul(&self.basis())?)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Basis columns as a rational matrix (upper triangular, positive diagonal).
    pub fn basis(&self) -> RatMatrix {
        let inv = Rational::new(BigInt::one(), self.denom.clone());
        self.basis.to_rational().scale(&inv)
    }

    /// Covolume `|det(basis)|`.
    pub fn covolume(&self) -> Rational {
        let diag = (0..self.dim()).fold(BigInt::one(), |acc, i| acc * &self.basis[(i, i)]);
        Rational::new(diag, num_traits::pow(self.denom.clone(), self.dim()))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: n })
        }
    }

    /// Coordinates of `v` in the basis (back-substitution).
    pub fn coordinates(&self, v: &RatVector) -> Result<RatVector> {
        self.check_dim(v.dim())?;
        let n = self.dim();
        let scale = Rational::from_integer(self.denom.clone());
        let mut c = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut w = &v[i] * &scale;
            for (j, cj) in c.iter().enumerate().skip(i + 1) {
                let b = &self.basis[(i, j)];
                if !b.is_zero() {
                    w -= cj * Rational::from_integer(b.clone());
                }
            }
            c[i] = w / Rational::from_integer(self.basis[(i, i)].clone());
        }
        Ok(RatVector(c))
    }

    pub fn contains(&self, v: &RatVector) -> Result<bool> {
        Ok(self.coordinates(v)?.is_integral())
    }

    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool> {
        self.check_dim(other.dim())?;
        let b = other.basis();
        for j in 0..other.dim() {
            if !self.contains(&b.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Smallest lattice containing both.
    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.dim())?;
        let mut cols: Vec<RatVector> = Vec::with_capacity(2 * self.dim());
        let (a, b) = (self.basis(), other.basis());
        for j in 0..self.dim() {
            cols.push(a.column(j));
            cols.push(b.column(j));
        }
        Self::from_generators(&RatMatrix::from_columns(&cols)?)
    }

    /// `[self : sub]`, for `sub` contained in `self`.
    pub fn index_of(&self, sub: &Lattice) -> Result<BigInt> {
        if !self.contains_lattice(sub)? {
            return Err(Error::NotSublattice);
        }
        let q = sub.covolume() / self.covolume();
        if !q.is_integer() {
            return Err(Error::NonIntegralIndex);
        }
        Ok(q.numer().clone())
    }

    /// Canonical representative of `v + self`: coordinates reduced into `[0, 1)`.
    pub fn reduce(&self, v: &RatVector) -> Result<RatVector> {
        let c = self.coordinates(v)?;
        let f = RatVector(c.0.iter().map(frac).collect());
        self.basis().mul_vec(&f)
    }

    /// Canonical representatives of `self / sub`, ordered lexicographically in
    /// Smith coordinates.
    pub fn residues_of(&self, sub: &Lattice) -> Result<Vec<RatVector>> {
        if !self.contains_lattice(sub)? {
            return Err(Error::NotSublattice);
        }
        let n = self.dim();
        let sb = sub.basis();
        let mut coords = Vec::with_capacity(n);
        for j in 0..n {
            coords.push(self.coordinates(&sb.column(j))?);
        }
        let rel = RatMatrix::from_columns(&coords)?.to_integer().ok_or(Error::NonIntegralIndex)?;
        let (s, u, _v) = snf(&rel)?;
        // self / sub ~ sum Z/s_i in the basis  self.basis * u^-1.
        let u_inv = u.to_rational().inverse()?;
        let frame = self.basis().mul(&u_inv)?;
        let factors: Vec<u64> = (0..n)
            .map(|i| {
                use num_traits::ToPrimitive;
                s[(i, i)].to_u64().ok_or(Error::NonIntegralIndex)
            })
            .collect::<Result<_>>()?;
        let total: u64 = factors.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        let mut k = vec![0u64; n];
        for _ in 0..total {
            let kv = RatVector(k.iter().map(|&x| Rational::from_integer(x.into())).collect());
            out.push(sub.reduce(&frame.mul_vec(&kv)?)?);
            for i in (0..n).rev() {
                k[i] += 1;
                if k[i] < factors[i] {
                    break;
                }
                k[i] = 0;
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lattice({:?})", self.basis())
    }
}

/// `a + b`.
pub fn lattice_sum(a: &Lattice, b: &Lattice) -> Result<Lattice> {
    a.sum(b)
}

/// `[sup : sub]`.
pub fn lattice_index(sub: &Lattice, sup: &Lattice) -> Result<BigInt> {
    sup.index_of(sub)
}

/// Canonical representative of `v` modulo `l`.
pub fn reduce_mod_lattice(v: &RatVector, l: &Lattice) -> Result<RatVector> {
    l.reduce(v)
}

/// Representatives of `sup / sub`.
pub fn enumerate_residues(sub: &Lattice, sup: &Lattice) -> Result<Vec<RatVector>> {
    sup.residues_of(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn diag(xs: &[Rational]) -> Lattice {
        let n = xs.len();
        let mut m = RatMatrix::zeros(n, n);
        for (i, x) in xs.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        Lattice::from_basis(&m).unwrap()
    }

    fn vecq(xs: &[Rational]) -> RatVector {
        RatVector(xs.to_vec())
    }

    #[test]
    fn sums() {
        assert_eq!(lattice_sum(&Lattice::standard(2), &Lattice::standard(2)).unwrap(), Lattice::standard(2));
        let half = diag(&[ratio(1, 2)]);
        assert_eq!(lattice_sum(&Lattice::standard(1), &half).unwrap(), half);
        let a = diag(&[int(2), int(1)]);
        let b = diag(&[int(1), int(3)]);
        let s = lattice_sum(&a, &b).unwrap();
        for l in [&a, &b] {
            let basis = l.basis();
            for j in 0..2 {
                assert!(s.contains(&basis.column(j)).unwrap());
            }
        }
        assert_eq!(lattice_index(&Lattice::standard(2), &s).unwrap(), BigInt::one());
        assert_eq!(s, Lattice::standard(2));
    }

    #[test]
    fn indices() {
        let z2 = Lattice::standard(2);
        assert_eq!(lattice_index(&diag(&[int(2), int(2)]), &z2).unwrap(), BigInt::from(4));
        let s = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]).to_rational();
        let st = z2.image(&s.transpose()).unwrap();
        assert_eq!(lattice_index(&st, &z2).unwrap(), BigInt::from(6));
        assert_eq!(lattice_index(&z2, &z2).unwrap(), BigInt::one());
        assert_eq!(lattice_index(&z2, &st).unwrap_err(), Error::NotSublattice);
    }

    #[test]
    fn reductions() {
        let z1 = Lattice::standard(1);
        assert_eq!(reduce_mod_lattice(&vecq(&[ratio(3, 2)]), &z1).unwrap(), vecq(&[ratio(1, 2)]));
        let z2 = Lattice::standard(2);
        assert_eq!(reduce_mod_lattice(&vecq(&[int(3), int(-7)]), &z2).unwrap(), RatVector::zeros(2));
        assert_eq!(
            reduce_mod_lattice(&vecq(&[ratio(5, 4), ratio(-1, 3)]), &z2).unwrap(),
            vecq(&[ratio(1, 4), ratio(2, 3)])
        );
    }

    #[test]
    fn residue_enumeration() {
        let z1 = Lattice::standard(1);
        let two = diag(&[int(2)]);
        assert_eq!(enumerate_residues(&two, &z1).unwrap(), vec![vecq(&[int(0)]), vecq(&[int(1)])]);
        let z2 = Lattice::standard(2);
        assert_eq!(enumerate_residues(&diag(&[int(2), int(3)]), &z2).unwrap().len(), 6);

        let s = IntMatrix::from_i64(2, 2, &[2, 1, 0, 3]).to_rational();
        let sub = z2.image(&s.transpose()).unwrap();
        let res = enumerate_residues(&sub, &z2).unwrap();
        assert_eq!(res.len(), 6);
        for (i, a) in res.iter().enumerate() {
            assert!(z2.contains(a).unwrap());
            for b in &res[i + 1..] {
                assert!(!sub.contains(&a.sub(b)).unwrap());
            }
        }
    }

    fn lattice_strategy(d: usize) -> impl Strategy<Value = Lattice> {
        (proptest::collection::vec(-4i64..=4, d * d), 1i64..=4).prop_filter_map("nonsingular", move |(v, q)| {
            let m = IntMatrix::from_i64(d, d, &v).to_rational().scale(&ratio(1, q));
            Lattice::from_basis(&m).ok()
        })
    }

    fn vector_strategy(d: usize) -> impl Strategy<Value = RatVector> {
        proptest::collection::vec((-20i64..=20, 1i64..=7), d)
            .prop_map(|v| RatVector(v.into_iter().map(|(n, q)| ratio(n, q)).collect()))
    }

    proptest! {
        #[test]
        fn hnf_basis_is_canonical(l in lattice_strategy(3)) {
            let rebuilt = Lattice::from_basis(&l.basis()).unwrap();
            prop_assert_eq!(&rebuilt, &l);
            let (m, _) = l.basis().clear_denominators();
            prop_assert!(is_hnf(&m));
        }

        #[test]
        fn reduction_is_constant_on_cosets(l in lattice_strategy(2), v in vector_strategy(2),
                                           k in proptest::collection::vec(-3i64..=3, 2)) {
            let r = l.reduce(&v).unwrap();
            prop_assert_eq!(l.reduce(&r).unwrap(), r.clone());
            prop_assert!(l.contains(&r.sub(&v)).unwrap());
            let w = l.basis().mul_vec(&RatVector(k.iter().map(|&x| int(x)).collect())).unwrap();
            prop_assert_eq!(l.reduce(&v.add(&w)).unwrap(), r);
        }

        #[test]
        fn index_is_multiplicative_on_chains(l in lattice_strategy(2),
                                             a in proptest::collection::vec(-3i64..=3, 4),
                                             b in proptest::collection::vec(-3i64..=3, 4)) {
            let ma = IntMatrix::from_i64(2, 2, &a).to_rational();
            let mb = IntMatrix::from_i64(2, 2, &b).to_rational();
            prop_assume!(!ma.det().unwrap().is_zero() && !mb.det().unwrap().is_zero());
            // l ⊇ l·A ⊇ l·A·B, realised through integer matrices acting on basis coordinates.
            let mid = Lattice::from_basis(&l.basis().mul(&ma).unwrap()).unwrap();
            let low = Lattice::from_basis(&l.basis().mul(&ma).unwrap().mul(&mb).unwrap()).unwrap();
            let total = lattice_index(&low, &l).unwrap();
            prop_assert_eq!(total, lattice_index(&low, &mid).unwrap() * lattice_index(&mid, &l).unwrap());
        }

        #[test]
        fn residues_are_complete_and_distinct(l in lattice_strategy(2),
                                              a in proptest::collection::vec(-3i64..=3, 4)) {
            let ma = IntMatrix::from_i64(2, 2, &a).to_rational();
            prop_assume!(!ma.det().unwrap().is_zero());
            let sub = Lattice::from_basis(&l.basis().mul(&ma).unwrap()).unwrap();
            let res = enumerate_residues(&sub, &l).unwrap();
            let idx = lattice_index(&sub, &l).unwrap();
            prop_assert_eq!(BigInt::from(res.len()), idx);
            for (i, x) in res.iter().enumerate() {
                prop_assert!(l.contains(x).unwrap());
                prop_assert_eq!(&sub.reduce(x).unwrap(), x);
                for y in &res[i + 1..] {
                    prop_assert!(!sub.contains(&x.sub(y)).unwrap());
                }
            }
        }
    }
}
