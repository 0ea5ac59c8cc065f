use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hecke_core::crossed::CrossedProduct;
use hecke_core::format;
use hecke_core::hecke::{HeckeAlgebra, HeckeElement};
use hecke_core::lattice::{lattice_index, Lattice};
use hecke_core::pair::{Ball, GaussPair, HeckePair, LinearPair};
use hecke_core::quad::QuadScalar;
use hecke_core::rational::ratio;

fn bc() -> HeckeAlgebra<LinearPair> {
    HeckeAlgebra::new(LinearPair::bc())
}

fn gl2() -> HeckeAlgebra<LinearPair> {
    HeckeAlgebra::new(LinearPair::gl(2).unwrap())
}

fn gauss() -> HeckeAlgebra<GaussPair> {
    HeckeAlgebra::new(GaussPair::default())
}

/// `(a/b; 2^i 3^j / 5^k)` in the BC instance.
fn bc_elem() -> impl Strategy<Value = String> {
    (-5i64..=5, 1i64..=6, 0u32..=2, 0u32..=1, 0u32..=1)
        .prop_map(|(a, b, i, j, k)| format!("({a}/{b}; {}/{})", 2i64.pow(i) * 3i64.pow(j), 5i64.pow(k)))
}

fn small_coeff() -> impl Strategy<Value = QuadScalar> {
    (-3i64..=3, 1i64..=3)
        .prop_filter("non-zero", |(a, _)| *a != 0)
        .prop_map(|(a, b)| QuadScalar::from_rational(ratio(a, b)))
}

fn bc_element() -> impl Strategy<Value = HeckeElement<LinearPair>> {
    prop::collection::vec((bc_elem(), small_coeff()), 1..=3).prop_map(|terms| {
        let h = bc();
        let mut out = h.zero();
        for (g, c) in terms {
            out.add_term(h.pair().parse_key(&g).unwrap(), c);
        }
        out
    })
}

fn sampled<P: HeckePair>(h: &HeckeAlgebra<P>, seed: u64, in_n: bool) -> HeckeElement<P> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ball = Ball::default();
    let mut out = h.zero();
    for i in 0..=(seed % 3) {
        let g = if in_n { h.pair().sample_n(&mut rng, &ball) } else { h.pair().sample_elem(&mut rng, &ball) };
        out.add_term(h.pair().key(&g), QuadScalar::from_int(i as i64 + 1));
    }
    out
}

/// `Σ c·R(key)` of a product equals the product of the masses.
fn mass<P: HeckePair>(h: &HeckeAlgebra<P>, f: &HeckeElement<P>) -> QuadScalar {
    f.terms().iter().fold(QuadScalar::zero(), |acc, (k, c)| &acc + &(c * &QuadScalar::from_u64(h.pair().r_count(k))))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn bc_convolution_is_associative(a in bc_element(), b in bc_element(), c in bc_element()) {
        let h = bc();
        let left = h.convolve(&h.convolve(&a, &b).unwrap(), &c).unwrap();
        let right = h.convolve(&a, &h.convolve(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bc_involution_reverses_products(a in bc_element(), b in bc_element()) {
        let h = bc();
        let lhs = h.involution(&h.convolve(&a, &b).unwrap());
        let rhs = h.convolve(&h.involution(&b), &h.involution(&a)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(h.involution(&h.involution(&a)), a);
    }

    #[test]
    fn mass_is_multiplicative(a in bc_element(), b in bc_element(), seed in any::<u64>()) {
        let h = bc();
        let ab = h.convolve(&a, &b).unwrap();
        prop_assert_eq!(mass(&h, &ab), &mass(&h, &a) * &mass(&h, &b));
        let g = gauss();
        let (x, y) = (sampled(&g, seed, false), sampled(&g, seed ^ 1, false));
        let xy = g.convolve(&x, &y).unwrap();
        prop_assert_eq!(mass(&g, &xy), &mass(&g, &x) * &mass(&g, &y));
    }

    #[test]
    fn identity_is_neutral(a in bc_element()) {
        let h = bc();
        prop_assert_eq!(h.convolve(&h.identity(), &a).unwrap(), a.clone());
        prop_assert_eq!(h.convolve(&a, &h.identity()).unwrap(), a);
    }

    #[test]
    fn element_files_round_trip(seed in any::<u64>()) {
        let h = gl2();
        let f = sampled(&h, seed, false);
        let text = format::render_element(h.pair(), &f);
        prop_assert_eq!(format::parse_element(h.pair(), &text).unwrap(), f);
        let g = gauss();
        let f = sampled(&g, seed, false);
        let text = format::render_element(g.pair(), &f);
        prop_assert_eq!(format::parse_element(g.pair(), &text).unwrap(), f);
    }

    #[test]
    fn keys_are_canonical(seed in any::<u64>()) {
        // two representatives of one double coset share the key
        let h = gl2();
        let p = h.pair();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ball = Ball::default();
        let g = p.sample_elem(&mut rng, &ball);
        let k = p.key(&g);
        for r in p.right_coset_reps(&k).iter().chain(p.left_coset_reps(&k).iter()) {
            prop_assert_eq!(&p.key(r), &k);
        }
        prop_assert_eq!(p.key(&p.key_rep(&k)), k);
    }

    #[test]
    fn r_is_multiplicative_on_sigma(seed in any::<u64>()) {
        let p = GaussPair::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ball = Ball::default();
        let (a, b) = (p.sample_sigma(&mut rng, &ball), p.sample_sigma(&mut rng, &ball));
        prop_assert_eq!(p.r_of(&p.multiply(&a, &b)), p.r_of(&a) * p.r_of(&b));
    }

    #[test]
    fn unembed_inverts_embed(seed in any::<u64>()) {
        let h = bc();
        let cp = CrossedProduct::new(&h);
        let f = sampled(&h, seed, false);
        let a = cp.unembed(&f).unwrap();
        prop_assert_eq!(cp.embed(&a).unwrap(), f);
    }

    #[test]
    fn alpha_one_is_a_projection(s in 1u64..=12) {
        let h = bc();
        let cp = CrossedProduct::new(&h);
        let s = h.pair().parse_s(&s.to_string()).unwrap();
        let q = cp.alpha_one(&s);
        prop_assert_eq!(h.convolve(&q, &q).unwrap(), q.clone());
        prop_assert_eq!(h.involution(&q), q);
    }

    #[test]
    fn lattice_index_is_determinant(a in -4i64..=4, b in -4i64..=4, c in -4i64..=4, d in -4i64..=4) {
        let det = a * d - b * c;
        prop_assume!(det != 0);
        let m = hecke_core::lattice::IntMatrix::from_i64(2, 2, &[a, b, c, d]);
        let sub = Lattice::standard(2).image(&m.to_rational()).unwrap();
        prop_assert_eq!(lattice_index(&sub, &Lattice::standard(2)).unwrap(), det.abs().into());
    }

    #[test]
    fn quad_scalars_form_a_field(a in -6i64..=6, b in 1i64..=5, n in 1u64..=12, m in 1u64..=12) {
        let x = QuadScalar::sqrt(n).scale(&ratio(a, b));
        let y = QuadScalar::sqrt(m);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) * &y, &(&x * &y) + &(&y * &y));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), QuadScalar::one());
        }
    }
}
