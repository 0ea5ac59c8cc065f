use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Bounds for sampled and enumerated elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    /// Largest denominator of an `N`-coordinate (linear families). The
    /// Gaussian family uses denominators dividing `gauss_den`.
    pub n_den: u64,
    /// Matrix entries of `G`-coordinates lie in `[-entry, entry]`.
    pub entry: i64,
    /// Largest scalar denominator `q` in `g = M / q`.
    pub g_den: u64,
    /// One-dimensional family: `g = p^e` with `|e| <= exp`.
    pub exp: u32,
    /// One-dimensional family: primes used for `G`-coordinates.
    pub primes: Vec<u64>,
    /// Gaussian `N`-coordinates have denominators dividing this.
    pub gauss_den: u64,
    /// Gaussian `g = a/b` with `N(a)·N(b) <= norm`.
    pub norm: u64,
    /// Semigroup samples have `det` (or norm) at most this.
    pub s_bound: u64,
    /// Tighter `det` (or norm) bound for samples whose crossed-product
    /// products are chained; index sizes multiply along the chain.
    pub cp_s_bound: u64,
}

impl Default for Ball {
    fn default() -> Self {
        Ball {
            n_den: 6,
            entry: 3,
            g_den: 4,
            exp: 2,
            primes: vec![2, 3, 5, 7],
            gauss_den: 4,
            norm: 25,
            s_bound: 12,
            cp_s_bound: 6,
        }
    }
}

impl Ball {
    /// Applies `key=value` overrides separated by commas or whitespace,
    /// e.g. `n_den=4,s_bound=6`. Primes are given as `primes=2:3`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split([',', ' ']).filter(|s| !s.is_empty()) {
            let bad = || Error::Parse(format!("bad ball override `{item}`"));
            let (k, v) = item.split_once('=').ok_or_else(bad)?;
            let num = || v.parse::<u64>().map_err(|_| bad());
            match k {
                "n_den" => self.n_den = num()?.max(1),
                "entry" => self.entry = num()?.max(1) as i64,
                "g_den" => self.g_den = num()?.max(1),
                "exp" => self.exp = num()? as u32,
                "gauss_den" => self.gauss_den = num()?.max(1),
                "norm" => self.norm = num()?.max(1),
                "s_bound" => self.s_bound = num()?.max(1),
                "cp_s_bound" => self.cp_s_bound = num()?.max(1),
                "primes" => {
                    self.primes = v.split(':').map(|p| p.parse::<u64>().map_err(|_| bad())).collect::<Result<_>>()?;
                }
                _ => return Err(bad()),
            }
        }
        Ok(self)
    }
}

impl FromStr for Ball {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ball::default().with_overrides(s)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let primes: Vec<String> = self.primes.iter().map(u64::to_string).collect();
        write!(
            f,
            "n_den={},entry={},g_den={},exp={},primes={},gauss_den={},norm={},s_bound={},cp_s_bound={}",
            self.n_den,
            self.entry,
            self.g_den,
            self.exp,
            primes.join(":"),
            self.gauss_den,
            self.norm,
            self.s_bound,
            self.cp_s_bound
        )
    }
}
