//! `Q^d ⋊ GL_d(Q)` over `Z^d` with dense rational matrices.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{fract, is_integer, Coords, Oracle, RightCoset};
use crate::rational::Rational;

/// `(n, g)` with the product `(n, g)(m, h) = (n + (gᵗ)⁻¹m, gh)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Elem {
    pub n: Vec<Rational>,
    /// Row-major.
    pub g: Vec<Vec<Rational>>,
}

type Mat = Vec<Vec<Rational>>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

fn mat_vec(a: &Mat, v: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (x, y)| acc + x * y)).collect()
}

fn transpose(a: &Mat) -> Mat {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| a[j][i].clone()).collect()).collect()
}

/// Gauss-Jordan inverse; the input must be invertible.
fn inverse(a: &Mat) -> Mat {
    let d = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&r| !m[r][c].is_zero()).expect("invertible matrix");
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..d {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    m.into_iter().map(|r| r[d..].to_vec()).collect()
}

fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

/// The finite group `(M·Z^d + Z^d) / Z^d`, by closing `{0}` under the
/// columns of `M` modulo 1.
fn column_group(m: &Mat) -> Vec<Vec<Rational>> {
    let d = m.len();
    let gens: Vec<Vec<Rational>> = (0..d).map(|j| (0..d).map(|i| fract(&m[i][j])).collect()).collect();
    let zero = vec![Rational::zero(); d];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut frontier = vec![zero];
    while let Some(v) = frontier.pop() {
        for g in &gens {
            let w: Vec<Rational> = v.iter().zip(g).map(|(a, b)| fract(&(a + b))).collect();
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    seen.into_iter().collect()
}

pub struct LinearOracle {
    d: usize,
}

impl LinearOracle {
    pub fn new(d: usize) -> Self {
        LinearOracle { d }
    }

    fn inv_transpose(g: &Mat) -> Mat {
        transpose(&inverse(g))
    }

    fn flat(g: &Mat) -> Coords {
        g.iter().flatten().cloned().collect()
    }
}

impl Oracle for LinearOracle {
    type Elem = Elem;

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let shift = mat_vec(&Self::inv_transpose(&a.g), &b.n);
        Elem { n: a.n.iter().zip(&shift).map(|(x, y)| x + y).collect(), g: mat_mul(&a.g, &b.g) }
    }

    fn inv(&self, a: &Elem) -> Elem {
        let n = mat_vec(&transpose(&a.g), &a.n).into_iter().map(|x| -x).collect();
        Elem { n, g: inverse(&a.g) }
    }

    fn in_gamma0(&self, a: &Elem) -> bool {
        a.g == identity(self.d) && a.n.iter().all(is_integer)
    }

    fn gamma0_generators(&self) -> Vec<Elem> {
        (0..self.d)
            .map(|i| Elem {
                n: (0..self.d).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect(),
                g: identity(self.d),
            })
            .collect()
    }

    fn right_coset(&self, a: &Elem) -> RightCoset {
        (Self::flat(&a.g), a.n.iter().map(fract).collect())
    }

    /// `Γ₀(n, g)Γ₀ = {(n + a + (gᵗ)⁻¹b, g)}`; the shifts `(gᵗ)⁻¹b` matter
    /// modulo `Z^d` only.
    fn double_coset_elements(&self, a: &Elem) -> Vec<Elem> {
        column_group(&Self::inv_transpose(&a.g))
            .into_iter()
            .map(|shift| Elem { n: a.n.iter().zip(&shift).map(|(x, y)| x + y).collect(), g: a.g.clone() })
            .collect()
    }

    fn right_coset_residues(&self, a: &Elem) -> Vec<Coords> {
        vec![a.n.iter().map(fract).collect()]
    }

    /// `(n, g)(b, 1)(n, g)⁻¹ = ((gᵗ)⁻¹b, 1)`.
    fn conjugate_elements(&self, sigma: &Elem) -> Vec<Elem> {
        column_group(&Self::inv_transpose(&sigma.g)).into_iter().map(|n| Elem { n, g: identity(self.d) }).collect()
    }
}
