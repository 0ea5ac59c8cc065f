//! Concrete Hecke pairs `(N ⋊ G, Γ₀)` with `Γ₀ ⊆ N`.
//!
//! A [`HeckePair`] supplies the group law, canonical double-coset keys, coset
//! representatives, the semigroup `S ⊆ G` with `s⁻¹Γ₀s ⊆ Γ₀`, and the
//! text grammar for elements. Two families are provided: [`LinearPair`]
//! (`Q^d ⋊ GL_d⁺(Q)` over `Z^d`, with the one-dimensional localisations as
//! a special case) and [`GaussPair`] (the `ax+b` group of `Q(i)` over
//! `Z[i] ⋊ Z[i]*`).

mod ball;
mod gauss;
mod linear;

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use ball::Ball;
pub use gauss::{CrossSection, GaussElem, GaussKey, GaussPair};
pub use linear::{LinearElem, LinearKey, LinearPair};

/// Family tag plus parameters, e.g. `bc`, `bc:2,3`, `gl:2`, `gauss`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Descriptor {
    /// `d = 1` over `Q`; `primes = None` means every prime is allowed.
    Bc {
        primes: Option<Vec<u64>>,
    },
    Gl(usize),
    Gauss,
}

impl Descriptor {
    /// Ambient dimension of `N` over `Q`.
    pub fn dim(&self) -> usize {
        match self {
            Descriptor::Bc { .. } => 1,
            Descriptor::Gl(d) => *d,
            Descriptor::Gauss => 2,
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k))
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::Parse(format!("bad instance `{s}`: {why}"));
        match s.split_once(':') {
            None if s == "bc" => Ok(Descriptor::Bc { primes: None }),
            None if s == "gauss" => Ok(Descriptor::Gauss),
            Some(("bc", list)) => {
                let mut primes = list
                    .split(',')
                    .map(|p| {
                        let p: u64 = p.trim().parse().map_err(|_| bad("expected primes"))?;
                        if is_prime(p) {
                            Ok(p)
                        } else {
                            Err(bad("not a prime"))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                primes.sort_unstable();
                primes.dedup();
                Ok(Descriptor::Bc { primes: Some(primes) })
            }
            Some(("gl", d)) => match d.trim() {
                "1" => Ok(Descriptor::Gl(1)),
                "2" => Ok(Descriptor::Gl(2)),
                "3" => Ok(Descriptor::Gl(3)),
                _ => Err(bad("dimension must be 1, 2 or 3")),
            },
            _ => Err(bad("expected bc, bc:<primes>, gl:<d> or gauss")),
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Bc { primes: None } => write!(f, "bc"),
            Descriptor::Bc { primes: Some(ps) } => {
                let list: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "bc:{}", list.join(","))
            }
            Descriptor::Gl(d) => write!(f, "gl:{d}"),
            Descriptor::Gauss => write!(f, "gauss"),
        }
    }
}

/// A Hecke pair `(Γ, Γ₀)` with `Γ = N ⋊ G`, `Γ₀ ⊆ N`, and an Ore
/// subsemigroup `S ⊆ G` with `S⁻¹S = G` and `s⁻¹Γ₀s ⊆ Γ₀`.
///
/// Implementations memoise internally; caches never change observable
/// results.
pub trait HeckePair: Send + Sync {
    type Elem: Clone + Eq + Hash + fmt::Debug + Send + Sync;
    type Key: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;
    type S: Clone + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn descriptor(&self) -> &Descriptor;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn in_gamma0(&self, a: &Self::Elem) -> bool;
    fn in_n(&self, a: &Self::Elem) -> bool;

    /// Canonical key of `Γ₀ a Γ₀`.
    fn key(&self, a: &Self::Elem) -> Self::Key;
    /// A representative of the double coset with this key.
    fn key_rep(&self, k: &Self::Key) -> Self::Elem;
    /// Whether the double coset lies inside `N`.
    fn key_in_n(&self, k: &Self::Key) -> bool;

    /// `γ_j` with `Γ₀γΓ₀ = ⊔ Γ₀γ_j`.
    fn right_coset_reps(&self, k: &Self::Key) -> Vec<Self::Elem>;
    /// `γ_j` with `Γ₀γΓ₀ = ⊔ γ_jΓ₀`.
    fn left_coset_reps(&self, k: &Self::Key) -> Vec<Self::Elem>;
    fn r_count(&self, k: &Self::Key) -> u64;
    fn l_count(&self, k: &Self::Key) -> u64;

    fn s_identity(&self) -> Self::S;
    fn s_mul(&self, a: &Self::S, b: &Self::S) -> Self::S;
    /// The group element `(0, s)`.
    fn s_embed(&self, s: &Self::S) -> Self::Elem;
    /// `R(s) = [Γ₀ : s⁻¹Γ₀s]`.
    fn s_r(&self, s: &Self::S) -> u64;
    /// `(a, b)` in `S` with `a·s = b·t`.
    fn ore(&self, s: &Self::S, t: &Self::S) -> (Self::S, Self::S);
    /// `(d, t', s')` with `t = d·t'`, `s = d·s'` and `d` a greatest common
    /// left divisor of `t` and `s` in `S`.
    fn s_left_gcd(&self, t: &Self::S, s: &Self::S) -> (Self::S, Self::S, Self::S);
    /// `(t, n, s)` with `γ = (0,t)⁻¹ · n · (0,s)` and `n ∈ N`.
    fn factor_tns(&self, g: &Self::Elem) -> (Self::S, Self::Elem, Self::S);
    /// Distinct `N`-keys `[y]` with `[s⁻¹ y s] = [x]`.
    fn alpha_preimages(&self, s: &Self::S, x: &Self::Key) -> Result<Vec<Self::Key>>;

    fn parse_elem(&self, text: &str) -> Result<Self::Elem>;
    fn render_elem(&self, a: &Self::Elem) -> String;
    fn parse_s(&self, text: &str) -> Result<Self::S>;
    fn render_s(&self, s: &Self::S) -> String;

    fn sample_elem(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> Self::Elem;
    fn sample_n(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> Self::Elem;
    fn sample_s(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> Self::S;
    /// A random element of `Σ = {σ : L(σ) = 1}`.
    fn sample_sigma(&self, rng: &mut ChaCha8Rng, ball: &Ball) -> Self::Elem;
    /// Every `N`-key whose representatives have coordinates in the ball.
    fn n_ball_keys(&self, ball: &Ball) -> Vec<Self::Key>;

    fn same_right_coset(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.in_gamma0(&self.multiply(a, &self.invert(b)))
    }

    fn same_left_coset(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.in_gamma0(&self.multiply(&self.invert(a), b))
    }

    fn in_sigma(&self, a: &Self::Elem) -> bool {
        self.l_count(&self.key(a)) == 1
    }

    fn r_of(&self, a: &Self::Elem) -> u64 {
        self.r_count(&self.key(a))
    }

    fn l_of(&self, a: &Self::Elem) -> u64 {
        self.l_count(&self.key(a))
    }

    fn parse_key(&self, text: &str) -> Result<Self::Key> {
        Ok(self.key(&self.parse_elem(text)?))
    }

    fn render_key(&self, k: &Self::Key) -> String {
        self.render_elem(&self.key_rep(k))
    }

    fn check_same(&self, other: &Descriptor) -> Result<()> {
        if self.descriptor() == other {
            Ok(())
        } else {
            Err(Error::InstanceMismatch { left: self.descriptor().to_string(), right: other.to_string() })
        }
    }
}

/// Splits `(n-part; g-part)` into its two comma-separated lists.
pub(crate) fn split_element(text: &str) -> Result<(Vec<&str>, Vec<&str>)> {
    let bad = || Error::Parse(format!("bad element `{text}`: expected `(n-part; g-part)`"));
    let inner = text.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (n, g) = inner.split_once(';').ok_or_else(bad)?;
    fn list(s: &str) -> Vec<&str> {
        s.split(',').map(str::trim).collect()
    }
    let (n, g) = (list(n), list(g));
    if n.iter().chain(&g).any(|t| t.is_empty()) {
        return Err(bad());
    }
    Ok((n, g))
}
