//! The `ax+b` group of `Q(i)` over `Z[i] ⋊ Z[i]*`, in affine coordinates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{denominator_lcm, fract, is_integer, Coords, Oracle, RightCoset};
use crate::rational::Rational;

/// `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct C {
    pub re: Rational,
    pub im: Rational,
}

impl C {
    pub fn new(re: Rational, im: Rational) -> Self {
        C { re, im }
    }

    fn int(re: i64, im: i64) -> Self {
        C::new(Rational::from_integer(re.into()), Rational::from_integer(im.into()))
    }

    /// `i^k`.
    pub fn unit(k: u8) -> Self {
        match k % 4 {
            0 => C::int(1, 0),
            1 => C::int(0, 1),
            2 => C::int(-1, 0),
            _ => C::int(0, -1),
        }
    }

    fn zero() -> Self {
        C::int(0, 0)
    }

    pub fn add(&self, o: &C) -> C {
        C::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn neg(&self) -> C {
        C::new(-&self.re, -&self.im)
    }

    pub fn mul(&self, o: &C) -> C {
        C::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    fn inv(&self) -> C {
        let n = &self.re * &self.re + &self.im * &self.im;
        C::new(&self.re / &n, -&self.im / &n)
    }

    fn is_integral(&self) -> bool {
        is_integer(&self.re) && is_integer(&self.im)
    }

    fn is_unit(&self) -> bool {
        (0..4).any(|k| self == &C::unit(k))
    }

    fn fract(&self) -> C {
        C::new(fract(&self.re), fract(&self.im))
    }

    /// Least of the four associates `i^k·z`.
    fn min_associate(&self) -> C {
        (0..4).map(|k| C::unit(k).mul(self)).min().expect("four units")
    }

    fn coords(&self) -> Coords {
        vec![self.re.clone(), self.im.clone()]
    }
}

/// `(Y, X)` with `(Y₁, X₁)(Y₂, X₂) = (Y₂ + Y₁X₂, X₁X₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Elem {
    pub y: C,
    pub x: C,
}

pub struct GaussOracle;

/// Gaussian integer `(re, im)`.
type Zi = (BigInt, BigInt);

fn zi_mul(a: &Zi, b: &Zi) -> Zi {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn zi_norm(a: &Zi) -> BigInt {
    &a.0 * &a.0 + &a.1 * &a.1
}

/// Nearest integer to `p / q`, `q > 0`.
fn round_div(p: &BigInt, q: &BigInt) -> BigInt {
    Integer::div_floor(&(p * 2 + q), &(q * 2))
}

fn zi_rem(a: &Zi, b: &Zi) -> Zi {
    let n = zi_norm(b);
    let num = zi_mul(a, &(b.0.clone(), -&b.1));
    let q = (round_div(&num.0, &n), round_div(&num.1, &n));
    let qb = zi_mul(&q, b);
    (&a.0 - &qb.0, &a.1 - &qb.1)
}

fn zi_gcd(mut a: Zi, mut b: Zi) -> Zi {
    while !(b.0.is_zero() && b.1.is_zero()) {
        let r = zi_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Representatives of `Z[i] / (x·Z[i] ∩ Z[i])`. With `x = u/v` in lowest
/// terms the intersection is `u·Z[i]`; writing `u = g·u'` with `u'`
/// primitive, the quotient has representatives `a + bi + g·k` for
/// `0 <= a, b < g` and `0 <= k < N(u')`.
fn residues_mod(x: &C) -> Vec<C> {
    let m = denominator_lcm([&x.re, &x.im]);
    let z: Zi = ((&x.re * &m).to_integer(), (&x.im * &m).to_integer());
    let d = zi_gcd(z.clone(), (m, BigInt::zero()));
    let dn = zi_norm(&d);
    let zd = zi_mul(&z, &(d.0.clone(), -&d.1));
    let u: Zi = (&zd.0 / &dn, &zd.1 / &dn);
    let g = u.0.gcd(&u.1);
    let primitive_norm = zi_norm(&u) / (&g * &g);
    let mut out = Vec::new();
    let mut a = BigInt::zero();
    while a < g {
        let mut b = BigInt::zero();
        while b < g {
            let mut k = BigInt::zero();
            while k < primitive_norm {
                out.push(C::new(Rational::from_integer(&a + &g * &k), Rational::from_integer(b.clone())));
                k += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

impl Oracle for GaussOracle {
    type Elem = Elem;

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        Elem { y: b.y.add(&a.y.mul(&b.x)), x: a.x.mul(&b.x) }
    }

    fn inv(&self, a: &Elem) -> Elem {
        let xi = a.x.inv();
        Elem { y: a.y.mul(&xi).neg(), x: xi }
    }

    fn in_gamma0(&self, a: &Elem) -> bool {
        a.y.is_integral() && a.x.is_unit()
    }

    fn gamma0_generators(&self) -> Vec<Elem> {
        vec![
            Elem { y: C::unit(0), x: C::unit(0) },
            Elem { y: C::unit(1), x: C::unit(0) },
            Elem { y: C::zero(), x: C::unit(1) },
        ]
    }

    /// `Γ₀(Y, X) = {(Y + bX, vX)}`: keyed by the least associate `X*` and
    /// `Y/X*` modulo `Z[i]`.
    fn right_coset(&self, a: &Elem) -> RightCoset {
        let xs = a.x.min_associate();
        (xs.coords(), a.y.mul(&xs.inv()).fract().coords())
    }

    /// `Γ₀(Y, X)Γ₀ ∋ (c + Yw, X*)` for units `w` and `c ∈ Z[i]`.
    fn double_coset_elements(&self, a: &Elem) -> Vec<Elem> {
        let xs = a.x.min_associate();
        let cs = residues_mod(&xs);
        (0..4)
            .flat_map(|k| {
                let yw = a.y.mul(&C::unit(k));
                let xs = xs.clone();
                cs.iter().map(move |c| Elem { y: c.add(&yw), x: xs.clone() })
            })
            .collect()
    }

    /// Stored coordinates `(Y/X* mod Z[i], X/X*)` of the four residues.
    fn right_coset_residues(&self, a: &Elem) -> Vec<Coords> {
        let xs = a.x.min_associate();
        let r = a.y.mul(&xs.inv()).fract();
        (0..4u8).map(|k| vec![r.re.clone(), r.im.clone(), Rational::from_integer(k.into())]).collect()
    }

    /// `(Y, X)(b, v)(Y, X)⁻¹ = ((b + Y(v - 1))/X, v)`.
    fn conjugate_elements(&self, sigma: &Elem) -> Vec<Elem> {
        let xi = sigma.x.inv();
        let bs = residues_mod(&sigma.x);
        (0..4)
            .flat_map(|k| {
                let v = C::unit(k);
                let shift = sigma.y.mul(&v.add(&C::unit(2)));
                let xi = xi.clone();
                bs.iter().map(move |b| Elem { y: b.add(&shift).mul(&xi), x: v.clone() })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn c(a: (i64, i64), b: (i64, i64)) -> C {
        C::new(ratio(a.0, a.1), ratio(b.0, b.1))
    }

    #[test]
    fn group_law() {
        let o = GaussOracle;
        let a = Elem { y: c((1, 2), (1, 3)), x: c((1, 1), (2, 1)) };
        let b = Elem { y: c((0, 1), (3, 4)), x: c((1, 3), (-1, 1)) };
        let id = Elem { y: C::zero(), x: C::unit(0) };
        assert_eq!(o.mul(&a, &o.inv(&a)), id);
        assert_eq!(o.mul(&o.inv(&a), &a), id);
        assert_eq!(o.mul(&o.mul(&a, &b), &o.inv(&b)), a);
    }

    #[test]
    fn residue_counts_are_norms() {
        // (1 + i)²/5 = 2i/5 → u = 2i, index 4; 3 + 4i primitive → 25
        assert_eq!(residues_mod(&c((0, 1), (2, 5))).len(), 4);
        assert_eq!(residues_mod(&c((3, 1), (4, 1))).len(), 25);
        assert_eq!(residues_mod(&c((1, 7), (0, 1))).len(), 1);
        assert_eq!(residues_mod(&c((6, 1), (0, 1))).len(), 36);
    }

    #[test]
    fn at_most_four_right_cosets_in_n() {
        let o = GaussOracle;
        for (p, q) in [(1, 2), (1, 3), (1, 4), (3, 4)] {
            for (r, s) in [(0, 1), (1, 2), (1, 4)] {
                let e = Elem { y: c((p, q), (r, s)), x: C::unit(0) };
                let cs = super::super::oracle_double_coset(&o, &e);
                assert!(cs.right_count() <= 4);
                assert_eq!(cs.residues.len() as u64, 4 * cs.right_count());
            }
        }
    }
}
