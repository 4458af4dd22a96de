use metice::scalar::{eval_frac_mod_p, eval_mod_p, frac_eq, gauss_eval, Assignment, DEFAULT_PRIME};
use metice::{Frac, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Term = (i64, i64, [i64; 3], Option<i64>);

fn build(terms: &[Term], nq: u32) -> Scalar {
    let mut x = Scalar::zero();
    for (c, v, z, g) in terms {
        let mut t = Scalar::int(*c) * Scalar::v_pow(*v) * Scalar::z_monomial(z);
        if let Some(a) = g {
            t = t * Scalar::gauss(*a, nq);
        }
        x += t;
    }
    x.with_nq(nq)
}

fn terms() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(
        (-4i64..5, -2i64..3, prop::array::uniform3(-2i64..3), prop::option::of(-6i64..7)),
        0..5,
    )
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

proptest! {
    #[test]
    fn addition_is_a_group(nq in 1u32..6, a in terms(), b in terms(), c in terms()) {
        let (x, y, z) = (build(&a, nq), build(&b, nq), build(&c, nq));
        prop_assert_eq!(x.clone() + y.clone(), y.clone() + x.clone());
        prop_assert_eq!((x.clone() + y.clone()) + z.clone(), x.clone() + (y + z));
        prop_assert!((x.clone() - x.clone()).is_zero());
        prop_assert_eq!(x.clone() + Scalar::zero(), x);
    }

    #[test]
    fn multiplication_is_commutative_and_distributive(nq in 1u32..6, a in terms(), b in terms(), c in terms()) {
        let (x, y, z) = (build(&a, nq), build(&b, nq), build(&c, nq));
        prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
        prop_assert_eq!((x.clone() * y.clone()) * z.clone(), x.clone() * (y.clone() * z.clone()));
        prop_assert_eq!(x.clone() * (y.clone() + z.clone()), x.clone() * y + x.clone() * z);
        prop_assert_eq!((x.clone() * Scalar::one()).with_nq(nq), x);
    }

    #[test]
    fn gauss_symbols_normalize(nq in 1u32..8, a in -20i64..20, k in 1u32..4) {
        let g = Scalar::gauss(a, nq);
        let r = a.rem_euclid(nq as i64);
        if r == 0 {
            prop_assert_eq!(g.clone(), -Scalar::v());
        } else {
            let pair = g.clone() * Scalar::gauss(nq as i64 - r, nq);
            prop_assert_eq!(pair, Scalar::v());
        }
        prop_assert_eq!(Scalar::gauss(a + nq as i64 * k as i64, nq), g);
        // the two-argument form depends only on residues and the second argument
        prop_assert_eq!(gauss_eval(a, -1, nq), Scalar::gauss(a, nq));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(nq in 1u32..6, a in terms(), b in terms(), seed in 0u64..1000) {
        let (x, y) = (build(&a, nq), build(&b, nq));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let asg = Assignment::random(nq, 3, DEFAULT_PRIME, &mut rng);
        let p = DEFAULT_PRIME;
        let ex = eval_mod_p(&x, &asg).unwrap();
        let ey = eval_mod_p(&y, &asg).unwrap();
        prop_assert_eq!(eval_mod_p(&(x.clone() + y.clone()), &asg).unwrap(), (ex + ey) % p);
        prop_assert_eq!(eval_mod_p(&(x * y), &asg).unwrap(), mul_mod(ex, ey, p));
    }

    #[test]
    fn fractions_cancel_common_factors(nq in 1u32..5, a in terms(), b in terms(), c in terms()) {
        let (x, y, w) = (build(&a, nq), build(&b, nq), build(&c, nq));
        prop_assume!(!y.is_zero() && !w.is_zero());
        let f = Frac::new(x.clone(), y.clone());
        let g = Frac::new(x * w.clone(), y * w);
        prop_assert!(frac_eq(&f, &g));
        prop_assert!(frac_eq(&f, &f));
    }

    #[test]
    fn fraction_evaluation_agrees_with_equality(nq in 1u32..4, a in terms(), b in terms(), seed in 0u64..100) {
        let (x, y) = (build(&a, nq), build(&b, nq));
        prop_assume!(!y.is_zero());
        let f = Frac::new(x.clone() * y.clone() * y.clone(), y.clone() * y);
        let g = Frac::from_scalar(x);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let asg = Assignment::random(nq, 3, DEFAULT_PRIME, &mut rng);
        if let (Ok(u), Ok(v)) = (eval_frac_mod_p(&f, &asg), eval_frac_mod_p(&g, &asg)) {
            prop_assert_eq!(u, v);
        }
    }

    #[test]
    fn json_round_trip(nq in 1u32..6, a in terms()) {
        let x = build(&a, nq);
        let j = serde_json::to_value(&x).unwrap();
        prop_assert_eq!(Scalar::from_json(&j, nq).unwrap(), x);
    }
}
