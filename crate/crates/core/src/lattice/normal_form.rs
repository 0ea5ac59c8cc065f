//! Hermite and Smith normal forms over the integers.
//!
//! Column convention throughout: lattices are spanned by matrix columns and
//! unimodular transforms act on the right. The Hermite form places pivots in
//! the rightmost columns, walking rows bottom-up, so a square nonsingular
//! input comes out upper triangular with positive diagonal and every entry to
//! the right of a pivot reduced into `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, RatMatrix};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Result of a column echelon reduction `h = m * u`.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `(row, col)` of every pivot, bottom row first.
    pub pivots: Vec<(usize, usize)>,
}

/// Extended gcd with a nonnegative gcd: returns `(g, p, q)` with `p*x + q*y = g`.
fn ext_gcd(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = x.extended_gcd(y);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub(crate) fn column_echelon(m: &IntMatrix) -> Echelon {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(cols);
    let mut pivots = Vec::new();
    let mut next = cols;
    for r in (0..rows).rev() {
        if next == 0 {
            break;
        }
        let c = next - 1;
        for j in 0..c {
            if h[(r, j)].is_zero() {
                continue;
            }
            if h[(r, c)].is_zero() {
                h.swap_cols(j, c);
                u.swap_cols(j, c);
                continue;
            }
            let x = h[(r, c)].clone();
            let y = h[(r, j)].clone();
            let (g, p, q) = ext_gcd(&x, &y);
            let r_ = -(&y / &g);
            let s_ = &x / &g;
            h.combine_cols(c, j, [&p, &q, &r_, &s_]);
            u.combine_cols(c, j, [&p, &q, &r_, &s_]);
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        pivots.push((r, c));
        next = c;
    }
    for &(pr, pc) in &pivots {
        let pivot = h[(pr, pc)].clone();
        for l in pc + 1..cols {
            let q = h[(pr, l)].div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                h.add_col_multiple(l, pc, &nq);
                u.add_col_multiple(l, pc, &nq);
            }
        }
    }
    Echelon { h, u, pivots }
}

/// Hermite normal form of an integer matrix with full column rank.
///
/// Returns `(h, u)` with `h = m * u` and `det(u) = ±1`.
pub fn hnf(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let e = column_echelon(m);
    if e.pivots.len() < m.cols() {
        return Err(Error::RankDeficient);
    }
    Ok((e.h, e.u))
}

/// Hermite normal form of a rational matrix with full column rank, computed on
/// the integer matrix obtained by clearing the common denominator.
pub fn hnf_rational(m: &RatMatrix) -> Result<(RatMatrix, IntMatrix)> {
    let (im, d) = m.clear_denominators();
    let (h, u) = hnf(&im)?;
    let inv = Rational::new(BigInt::one(), d);
    Ok((h.to_rational().scale(&inv), u))
}

/// Checks the shape produced by [`hnf`]: pivots are positive, sit in the
/// rightmost columns with strictly increasing rows, have only zeros below them,
/// and every entry to the right of a pivot lies in `[0, pivot)`.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let rows = h.rows();
    let cols = h.cols();
    if cols > rows {
        return false;
    }
    let mut last_row = None;
    let offset = rows - cols;
    for c in 0..cols {
        let Some(pr) = (0..rows).rev().find(|&r| !h[(r, c)].is_zero()) else {
            return false;
        };
        if let Some(prev) = last_row {
            if pr <= prev {
                return false;
            }
        }
        // Square case: pivot of column c is row c.
        if offset == 0 && pr != c {
            return false;
        }
        let pivot = &h[(pr, c)];
        if !pivot.is_positive() {
            return false;
        }
        for l in c + 1..cols {
            let e = &h[(pr, l)];
            if e.is_negative() || e >= pivot {
                return false;
            }
        }
        last_row = Some(pr);
    }
    true
}

/// Smith normal form of a square nonsingular integer matrix.
///
/// Returns `(s, u, v)` with `s = u * m * v` diagonal, positive, and each
/// diagonal entry dividing the next.
pub fn snf(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut v = IntMatrix::identity(n);
    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => a[(i, j)].abs() < a[(bi, bj)].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let (pi, pj) = best.ok_or(Error::Singular)?;
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..n {
                let q = a[(i, t)].div_floor(&pivot);
                if !q.is_zero() {
                    let nq = -q;
                    a.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = a[(t, j)].div_floor(&pivot);
                if !q.is_zero() {
                    let nq = -q;
                    a.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    Ok((a, u, v))
}

/// Diagonal of a Smith form.
pub fn invariant_factors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    let (s, _, _) = snf(m)?;
    Ok((0..s.rows()).map(|i| s[(i, i)].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det_pm1(u: &IntMatrix) -> bool {
        u.det().unwrap().abs().is_one()
    }

    #[test]
    fn hnf_identity() {
        let id = IntMatrix::identity(2);
        let (h, u) = hnf(&id).unwrap();
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn hnf_small_upper_triangular() {
        let m = IntMatrix::from_i64(2, 2, &[2, 1, 0, 3]);
        let (h, u) = hnf(&m).unwrap();
        assert!(is_hnf(&h));
        assert_eq!(m.mul(&u).unwrap(), h);
        assert_eq!(h.det().unwrap().abs(), BigInt::from(6));
    }

    #[test]
    fn hnf_rank_deficient() {
        let m = IntMatrix::from_i64(2, 2, &[1, 2, 2, 4]);
        assert_eq!(hnf(&m).unwrap_err(), Error::RankDeficient);
    }

    #[test]
    fn hnf_tall_matrix() {
        let m = IntMatrix::from_i64(3, 2, &[1, 2, 3, 4, 5, 7]);
        let (h, u) = hnf(&m).unwrap();
        assert!(is_hnf(&h));
        assert_eq!(m.mul(&u).unwrap(), h);
        assert!(det_pm1(&u));
    }

    #[test]
    fn snf_examples() {
        let d = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        assert_eq!(invariant_factors(&m).unwrap(), d(&[1, 6]));
        let m = IntMatrix::from_i64(2, 2, &[2, 1, 0, 3]);
        assert_eq!(invariant_factors(&m).unwrap(), d(&[1, 6]));
        assert_eq!(invariant_factors(&IntMatrix::identity(3)).unwrap(), d(&[1, 1, 1]));
        let m = IntMatrix::from_i64(2, 2, &[2, 4, 4, 8]);
        assert_eq!(snf(&m).unwrap_err(), Error::Singular);
    }

    /// Determinantal divisors: gcd of all k×k minors, for k = 1..n.
    fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in subsets(n, k - 1) {
                    if rest.first().is_none_or(|&r| r > first) {
                        rest.insert(0, first);
                        out.push(rest);
                    }
                }
            }
            out
        }
        let n = m.rows();
        (1..=n)
            .map(|k| {
                let mut g = BigInt::zero();
                for rs in subsets(n, k) {
                    for cs in subsets(n, k) {
                        let data = rs.iter().flat_map(|&i| cs.iter().map(move |&j| m[(i, j)].clone())).collect();
                        let minor = IntMatrix::new(k, k, data).unwrap();
                        g = g.gcd(&minor.det().unwrap());
                    }
                }
                g
            })
            .collect()
    }

    #[test]
    fn snf_matches_minor_gcds_on_fixed_matrix() {
        let m = IntMatrix::from_i64(3, 3, &[4, 6, 2, 8, 2, 6, 2, 4, 10]);
        let dd = determinantal_divisors(&m);
        let f = invariant_factors(&m).unwrap();
        let mut prod = BigInt::one();
        for (k, fk) in f.iter().enumerate() {
            prod *= fk;
            assert_eq!(prod, dd[k]);
        }
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-6i64..=6, n * n)
            .prop_map(move |v| IntMatrix::from_i64(n, n, &v))
            .prop_filter("nonsingular", |m| !m.det().unwrap().is_zero())
    }

    proptest! {
        #[test]
        fn hnf_is_canonical_and_unimodular(m in small_matrix(3)) {
            let (h, u) = hnf(&m).unwrap();
            prop_assert!(is_hnf(&h));
            prop_assert!(det_pm1(&u));
            prop_assert_eq!(m.mul(&u).unwrap(), h.clone());
            // Right-multiplying by a unimodular matrix does not change the form.
            let w = IntMatrix::from_i64(3, 3, &[1, 2, 0, 0, 1, -1, 0, 0, 1]);
            let (h2, _) = hnf(&m.mul(&w).unwrap()).unwrap();
            prop_assert_eq!(h2, h);
        }

        #[test]
        fn snf_divisibility_and_transform(m in small_matrix(3)) {
            let (s, u, v) = snf(&m).unwrap();
            prop_assert_eq!(u.mul(&m).unwrap().mul(&v).unwrap(), s.clone());
            prop_assert!(det_pm1(&u) && det_pm1(&v));
            for i in 0..3 {
                prop_assert!(s[(i, i)].is_positive());
                for j in 0..3 {
                    if i != j { prop_assert!(s[(i, j)].is_zero()); }
                }
                if i + 1 < 3 {
                    prop_assert!(s[(i + 1, i + 1)].is_multiple_of(&s[(i, i)]));
                }
            }
            let dd = determinantal_divisors(&m);
            let mut prod = BigInt::one();
            for i in 0..3 {
                prod *= &s[(i, i)];
                prop_assert_eq!(&prod, &dd[i]);
            }
        }
    }
}
