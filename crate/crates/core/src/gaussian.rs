//! Arithmetic in `Q(i)` and `Z[i]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{RatMatrix, RatVector};
use crate::rational::{parse_rational, render_rational, Rational};

/// Element `re + im*i` of `Q(i)`. Orders by real part, then imaginary part.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

/// Unit `i^k`, `k` in `0..4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Unit(u8);

impl std::ops::Mul for Unit {
    type Output = Unit;

    fn mul(self, other: Unit) -> Unit {
        Unit((self.0 + other.0) % 4)
    }
}

impl Unit {
    pub const ONE: Unit = Unit(0);
    pub const ALL: [Unit; 4] = [Unit(0), Unit(1), Unit(2), Unit(3)];

    pub fn new(k: u8) -> Self {
        Unit(k % 4)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> Unit {
        Unit((4 - self.0) % 4)
    }

    pub fn value(self) -> GaussRat {
        let (re, im) = match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        GaussRat::from_ints(re, im)
    }

    pub fn from_value(z: &GaussRat) -> Option<Unit> {
        Unit::ALL.into_iter().find(|u| &u.value() == z)
    }
}

impl GaussRat {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat { re: Rational::from_integer(re.into()), im: Rational::from_integer(im.into()) }
    }

    pub fn from_gint(z: &GaussInt) -> Self {
        GaussRat { re: Rational::from_integer(z.re.clone()), im: Rational::from_integer(z.im.clone()) }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn to_gint(&self) -> Option<GaussInt> {
        self.is_integral().then(|| GaussInt { re: self.re.numer().clone(), im: self.im.numer().clone() })
    }

    pub fn add(&self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat::new(-&self.re, -&self.im)
    }

    pub fn mul(&self, o: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn mul_unit(&self, u: Unit) -> GaussRat {
        match u.0 {
            0 => self.clone(),
            1 => GaussRat::new(-&self.im, self.re.clone()),
            2 => self.neg(),
            _ => GaussRat::new(self.im.clone(), -&self.re),
        }
    }

    pub fn conj(&self) -> GaussRat {
        GaussRat::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> GaussRat {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        let c = self.conj();
        GaussRat::new(c.re / &n, c.im / &n)
    }

    pub fn div(&self, o: &GaussRat) -> GaussRat {
        self.mul(&o.inv())
    }

    pub fn scale(&self, q: &Rational) -> GaussRat {
        GaussRat::new(&self.re * q, &self.im * q)
    }

    /// Coordinates `(re, im)` in the Z-basis `{1, i}`.
    pub fn to_vector(&self) -> RatVector {
        RatVector(vec![self.re.clone(), self.im.clone()])
    }

    pub fn from_vector(v: &RatVector) -> GaussRat {
        GaussRat::new(v[0].clone(), v[1].clone())
    }

    /// Z-basis `{z, i z}` of the principal fractional ideal `z O`, as columns.
    pub fn ideal_basis(&self) -> RatMatrix {
        let iz = self.mul_unit(Unit(1));
        RatMatrix::new(2, 2, vec![self.re.clone(), iz.re, self.im.clone(), iz.im]).expect("2x2")
    }

    /// Parses `a/b+c/d*i` style expressions (`i`, `-i`, `3/4*i`, `1-2*i`, ...).
    pub fn parse(s: &str) -> Result<GaussRat> {
        let bad = || Error::Parse(format!("bad Gaussian rational `{s}`"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let mut out = GaussRat::zero();
        let mut start = 0;
        let bytes = t.as_bytes();
        let mut pieces = Vec::new();
        for k in 1..=bytes.len() {
            if k == bytes.len() || ((bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'*') {
                pieces.push(&t[start..k]);
                start = k;
            }
        }
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'+' => (Rational::one(), &piece[1..]),
                b'-' => (-Rational::one(), &piece[1..]),
                _ => (Rational::one(), piece),
            };
            if body.is_empty() {
                return Err(bad());
            }
            if let Some(coef) = body.strip_suffix('i') {
                let coef = coef.strip_suffix('*').unwrap_or(coef);
                let c = if coef.is_empty() { Rational::one() } else { parse_rational(coef).map_err(|_| bad())? };
                out.im += sign * c;
            } else {
                out.re += sign * parse_rational(body).map_err(|_| bad())?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |c: &Rational| -> String {
            if c.is_one() {
                "i".to_string()
            } else if (-c).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", render_rational(c))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", render_rational(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", render_rational(&self.re), im)
                } else {
                    write!(f, "{}+{}", render_rational(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Gaussian integer.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussInt::new(re.into(), im.into())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    pub fn mul_unit(&self, u: Unit) -> GaussInt {
        match u.0 {
            0 => self.clone(),
            1 => GaussInt::new(-&self.im, self.re.clone()),
            2 => GaussInt::new(-&self.re, -&self.im),
            _ => GaussInt::new(self.im.clone(), -&self.re),
        }
    }

    /// Remainder of Euclidean division with nearest-integer quotient.
    fn rem(&self, d: &GaussInt) -> GaussInt {
        let n = d.norm();
        // self * conj(d) / N(d), rounded componentwise.
        let num_re = &self.re * &d.re + &self.im * &d.im;
        let num_im = &self.im * &d.re - &self.re * &d.im;
        let round = |x: &BigInt| -> BigInt {
            let two = BigInt::from(2);
            (x * &two + &n).div_floor(&(&n * &two))
        };
        let q = GaussInt::new(round(&num_re), round(&num_im));
        let qd = q.mul(d);
        GaussInt::new(&self.re - &qd.re, &self.im - &qd.im)
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &GaussInt) -> GaussInt {
        let q = GaussRat::from_gint(self).div(&GaussRat::from_gint(d));
        q.to_gint().expect("exact Gaussian division")
    }

    pub fn gcd(&self, o: &GaussInt) -> GaussInt {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// The associate with `re > 0, im >= 0`.
    pub fn first_quadrant(&self) -> GaussInt {
        assert!(!self.is_zero(), "zero has no associate class");
        Unit::ALL
            .into_iter()
            .map(|u| self.mul_unit(u))
            .find(|z| z.re.is_positive() && !z.im.is_negative())
            .expect("exactly one associate lies in the first quadrant")
    }

    /// The associate with `re >= 0, im < 0`.
    pub fn fourth_quadrant(&self) -> GaussInt {
        assert!(!self.is_zero(), "zero has no associate class");
        Unit::ALL
            .into_iter()
            .map(|u| self.mul_unit(u))
            .find(|z| !z.re.is_negative() && z.im.is_negative())
            .expect("exactly one associate lies in the fourth quadrant")
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", GaussRat::from_gint(self))
    }
}

/// Writes a nonzero `q` as `u * a / b` with `a`, `b` coprime first-quadrant
/// Gaussian integers and `u` a unit. Returns `(a, b)`.
pub fn canonical_fraction(q: &GaussRat) -> (GaussInt, GaussInt) {
    assert!(!q.is_zero(), "zero is not in K*");
    let m = q.re.denom().lcm(q.im.denom());
    let mq = Rational::from_integer(m.clone());
    let num = GaussInt::new((&q.re * &mq).numer().clone(), (&q.im * &mq).numer().clone());
    let den = GaussInt::new(m, BigInt::zero());
    let g = num.gcd(&den);
    let a = num.div_exact(&g).first_quadrant();
    let b = den.div_exact(&g).first_quadrant();
    (a, b)
}

/// Canonical generator of the fractional ideal `q O`: `a / b` from
/// [`canonical_fraction`].
pub fn canonical_generator(q: &GaussRat) -> GaussRat {
    let (a, b) = canonical_fraction(q);
    GaussRat::from_gint(&a).div(&GaussRat::from_gint(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn parse_render() {
        for (text, re, im) in [
            ("1/2", ratio(1, 2), ratio(0, 1)),
            ("i", ratio(0, 1), ratio(1, 1)),
            ("-i", ratio(0, 1), ratio(-1, 1)),
            ("3/4*i", ratio(0, 1), ratio(3, 4)),
            ("1/2+1/3*i", ratio(1, 2), ratio(1, 3)),
            ("1-2*i", ratio(1, 1), ratio(-2, 1)),
            ("-1/2-i", ratio(-1, 2), ratio(-1, 1)),
        ] {
            let z = GaussRat::parse(text).unwrap();
            assert_eq!(z, GaussRat::new(re, im), "{text}");
            assert_eq!(GaussRat::parse(&z.to_string()).unwrap(), z);
        }
        assert!(GaussRat::parse("").is_err());
        assert!(GaussRat::parse("1+").is_err());
        assert!(GaussRat::parse("j").is_err());
    }

    #[test]
    fn associates() {
        let z = GaussInt::from_i64(-3, 2);
        let c = z.first_quadrant();
        assert!(c.re > BigInt::zero() && c.im >= BigInt::zero());
        assert_eq!(c.norm(), z.norm());
        let f = z.fourth_quadrant();
        assert!(f.re >= BigInt::zero() && f.im < BigInt::zero());
        assert_eq!(GaussInt::from_i64(0, 5).first_quadrant(), GaussInt::from_i64(5, 0));
        assert_eq!(GaussInt::from_i64(1, 0).fourth_quadrant(), GaussInt::from_i64(0, -1));
    }

    #[test]
    fn gcd_and_fraction() {
        let a = GaussInt::from_i64(1, 1).mul(&GaussInt::from_i64(2, 1));
        let b = GaussInt::from_i64(1, 1).mul(&GaussInt::from_i64(3, 0));
        assert_eq!(a.gcd(&b).first_quadrant(), GaussInt::from_i64(1, 1));
        // (2i)/(1+i) = 1+i, i.e. the integral ideal (1+i)
        let q = GaussRat::from_ints(0, 2).div(&GaussRat::from_ints(1, 1));
        assert_eq!(canonical_fraction(&q), (GaussInt::from_i64(1, 1), GaussInt::from_i64(1, 0)));
        // -1/2 and 1/2 and i/2 generate the same ideal
        let c = canonical_generator(&GaussRat::new(ratio(0, 1), ratio(1, 2)));
        assert_eq!(c, canonical_generator(&GaussRat::new(ratio(-1, 2), ratio(0, 1))));
        // 2 = -i (1+i)^2, so 1/2 has denominator (1+i)^2 = 2i ~ 2
        let (a, b) = canonical_fraction(&GaussRat::new(ratio(1, 2), ratio(0, 1)));
        assert_eq!(a, GaussInt::from_i64(1, 0));
        assert_eq!(b, GaussInt::from_i64(2, 0));
    }

    #[test]
    fn unit_arithmetic() {
        for u in Unit::ALL {
            assert_eq!(u * u.inv(), Unit::ONE);
            assert_eq!(Unit::from_value(&u.value()), Some(u));
            let z = GaussRat::from_ints(2, -3);
            assert_eq!(z.mul_unit(u), z.mul(&u.value()));
        }
    }
}
