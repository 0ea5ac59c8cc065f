//! Exact real scalars of the form `sum c_n * sqrt(n)` with rational `c_n` and
//! squarefree `n`. This is enough to carry the `R^{-1/2}` normalisations of the
//! isometries without leaving exact arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, render_rational, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadScalar {
    /// squarefree radicand -> coefficient; never stores a zero coefficient.
    terms: BTreeMap<u64, Rational>,
}

/// Splits `n = k^2 * m` with `m` squarefree.
pub fn squarefree_split(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "radicand must be positive");
    let mut k = 1u64;
    let mut m = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += 1;
    }
    m *= n;
    (k, m)
}

impl QuadScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::term(q, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_u64(n: u64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// `c * sqrt(n)` for any positive `n`.
    pub fn term(c: Rational, n: u64) -> Self {
        let mut s = Self::zero();
        if c.is_zero() {
            return s;
        }
        let (k, m) = squarefree_split(n);
        s.terms.insert(m, c * Rational::from_integer(k.into()));
        s
    }

    pub fn sqrt(n: u64) -> Self {
        Self::term(Rational::one(), n)
    }

    /// `1 / sqrt(n)`.
    pub fn inv_sqrt(n: u64) -> Self {
        Self::term(Rational::new(BigInt::one(), n.into()), n)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(&n, c)| (n, c))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// The value as a positive integer, if it is one.
    pub fn as_positive_integer(&self) -> Option<u64> {
        self.as_rational().and_then(|q| crate::rational::to_u64(&q))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        QuadScalar { terms: self.terms.iter().map(|(&n, c)| (n, c * q)).collect() }
    }

    fn add_term(&mut self, n: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(n).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&n);
        }
    }

    /// Multiplicative inverse when the scalar is a single radical term.
    pub fn inverse(&self) -> Result<Self> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((&n, c)), None) => {
                // (c sqrt n)^-1 = sqrt n / (c n)
                let inv = (c * Rational::from_integer(n.into())).recip();
                Ok(Self::term(inv, n))
            }
            _ => Err(Error::NotInvertible(self.to_string())),
        }
    }

    /// Sign of a single-term scalar; `None` for sums of several radicals.
    pub fn signum_single(&self) -> Option<i8> {
        let mut it = self.terms.values();
        match (it.next(), it.next()) {
            (None, _) => Some(0),
            (Some(c), None) => Some(if c.is_positive() { 1 } else { -1 }),
            _ => None,
        }
    }
}

impl Add for &QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: &QuadScalar) -> QuadScalar {
        let mut out = self.clone();
        for (&n, c) in &rhs.terms {
            out.add_term(n, c.clone());
        }
        out
    }
}

impl Add for QuadScalar {
    type Output = QuadScalar;
    fn add(self, rhs: QuadScalar) -> QuadScalar {
        &self + &rhs
    }
}

impl Sub for &QuadScalar {
    type Output = QuadScalar;
    fn sub(self, rhs: &QuadScalar) -> QuadScalar {
        self + &(-rhs)
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { terms: self.terms.iter().map(|(&n, c)| (n, -c)).collect() }
    }
}

impl Mul for &QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: &QuadScalar) -> QuadScalar {
        let mut out = QuadScalar::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                // sqrt(a) sqrt(b) = g sqrt(ab/g^2) for squarefree a, b.
                let g = a.gcd(&b);
                let m = (a / g) * (b / g);
                out.add_term(m, ca * cb * Rational::from_integer(g.into()));
            }
        }
        out
    }
}

impl Mul for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, rhs: QuadScalar) -> QuadScalar {
        &self * &rhs
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&n, c)) in self.terms.iter().enumerate() {
            let magnitude = if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                c.abs()
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
                c.abs()
            };
            match (n, magnitude.is_one()) {
                (1, _) => write!(f, "{}", render_rational(&magnitude))?,
                (_, true) => write!(f, "sqrt({n})")?,
                (_, false) => write!(f, "{}*sqrt({n})", render_rational(&magnitude))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for QuadScalar {
    type Err = Error;

    /// Accepts sums like `1/2*sqrt(2) - 3 + sqrt(6)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        let b = s.as_bytes();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < b.len() && b[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        let mut out = QuadScalar::zero();
        let mut first = true;
        loop {
            skip_ws(&mut i);
            if i == b.len() {
                break;
            }
            let mut negative = false;
            if b[i] == b'+' || b[i] == b'-' {
                negative = b[i] == b'-';
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(bad());
            }
            first = false;
            // A term is an optional rational, optionally followed by `*sqrt(n)`.
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'/') {
                i += 1;
            }
            let coeff_text = &s[start..i];
            let mut coeff = if coeff_text.is_empty() { Rational::one() } else { parse_rational(coeff_text)? };
            skip_ws(&mut i);
            let mut radicand = 1u64;
            let rest = &s[i..];
            let rest_trim = rest.strip_prefix('*').map(str::trim_start);
            let sqrt_part = match (coeff_text.is_empty(), rest_trim) {
                (_, Some(r)) => Some(r),
                (true, None) => Some(rest),
                (false, None) => None,
            };
            if let Some(r) = sqrt_part {
                let inner = r.strip_prefix("sqrt(").ok_or_else(bad)?;
                let close = inner.find(')').ok_or_else(bad)?;
                radicand = inner[..close].trim().parse().map_err(|_| bad())?;
                if radicand == 0 {
                    return Err(bad());
                }
                i = s.len() - inner.len() + close + 1;
            }
            if negative {
                coeff = -coeff;
            }
            let t = QuadScalar::term(coeff, radicand);
            out = &out + &t;
        }
        if first {
            return Err(bad());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    #[test]
    fn radicals_normalise() {
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(QuadScalar::sqrt(8), QuadScalar::term(Rational::from_integer(2.into()), 2));
        assert_eq!(QuadScalar::sqrt(4), QuadScalar::from_int(2));
        let w = QuadScalar::inv_sqrt(2);
        assert_eq!(w.to_string(), "1/2*sqrt(2)");
        assert_eq!(&w * &w, QuadScalar::from_rational(ratio(1, 2)));
        assert_eq!(&QuadScalar::sqrt(6) * &QuadScalar::sqrt(10), QuadScalar::term(ratio(2, 1), 15));
    }

    #[test]
    fn inverse_of_single_term() {
        let x = QuadScalar::term(ratio(3, 2), 5);
        assert_eq!(&x * &x.inverse().unwrap(), QuadScalar::one());
        let y = &QuadScalar::one() + &QuadScalar::sqrt(2);
        assert!(y.inverse().is_err());
    }

    #[test]
    fn parse_forms() {
        let x: QuadScalar = "1/2*sqrt(2) - 3 + sqrt(6)".parse().unwrap();
        assert_eq!(x.to_string(), "-3 + 1/2*sqrt(2) + sqrt(6)");
        assert_eq!("0".parse::<QuadScalar>().unwrap(), QuadScalar::zero());
        assert_eq!("-sqrt(8)".parse::<QuadScalar>().unwrap(), QuadScalar::term(ratio(-2, 1), 2));
        assert!("".parse::<QuadScalar>().is_err());
        assert!("1/2 sqrt(2)".parse::<QuadScalar>().is_err());
        assert!("sqrt(0)".parse::<QuadScalar>().is_err());
    }

    fn scalar() -> impl Strategy<Value = QuadScalar> {
        proptest::collection::vec((-9i64..=9, 1i64..=5, 1u64..=30), 0..4).prop_map(|ts| {
            ts.into_iter().fold(QuadScalar::zero(), |acc, (n, d, r)| &acc + &QuadScalar::term(ratio(n, d), r))
        })
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(x in scalar()) {
            prop_assert_eq!(x.to_string().parse::<QuadScalar>().unwrap(), x);
        }

        #[test]
        fn ring_laws(a in scalar(), b in scalar(), c in scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }
    }
}
