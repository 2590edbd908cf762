use melnikov_core::polyalg::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn seeded(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        ..Config::default()
    }
}

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 0..=max_deg + 1)
        .prop_map(|c| Poly::from_coeffs(c.into_iter().map(|(a, b)| rat(a, b)).collect()))
}

fn int_poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-10i64..=10, 1..=max_deg + 1).prop_map(|c| Poly::from_i64s(&c))
}

fn sign_scan(p: &Poly, lo: f64, hi: f64, steps: usize) -> usize {
    let f = p.to_f64();
    let mut count = 0;
    let mut prev = f.eval(lo);
    for i in 1..=steps {
        let v = f.eval(lo + (hi - lo) * i as f64 / steps as f64);
        if v != 0.0 {
            if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                count += 1;
            }
            prev = v;
        }
    }
    count
}

proptest! {
    #![proptest_config(seeded(128, 0xa1_9eb4a))]

    #[test]
    fn ring_axioms(a in poly_strategy(6), b in poly_strategy(6), c in poly_strategy(6)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn leibniz_and_chain_rule(a in poly_strategy(6), b in poly_strategy(4)) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
        let chain = &a.derivative().compose(&b) * &b.derivative();
        prop_assert_eq!(a.compose(&b).derivative(), chain);
    }

    #[test]
    fn division_identity(a in poly_strategy(8), b in poly_strategy(4)) {
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a.clone());
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let g = a.gcd(&b);
        prop_assert!(a.div_rem(&g).1.is_zero() && b.div_rem(&g).1.is_zero());
    }

    #[test]
    fn ratfunc_quotient_rule(a in poly_strategy(4), b in poly_strategy(3)) {
        prop_assume!(!b.is_zero());
        let f = RatFunc::new(a.clone(), b.clone()).unwrap();
        let num = &(&a.derivative() * &b) - &(&a * &b.derivative());
        let expected = RatFunc::new(num, &b * &b).unwrap();
        prop_assert_eq!(f.derivative(), expected);
    }

    #[test]
    fn text_round_trip(a in poly_strategy(8)) {
        let back = Poly::from_strings(&a.to_strings()).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(seeded(48, 0x57_0e4))]

    #[test]
    fn sturm_count_matches_sign_scan(p in int_poly_strategy(8)) {
        prop_assume!(!p.is_zero() && !p.is_constant());
        let roots = real_roots_in(&p, -3.0, 3.0).unwrap();
        let odd = roots.iter().filter(|r| r.multiplicity % 2 == 1).count();
        prop_assert_eq!(odd, sign_scan(&p, -3.0, 3.0, 600_000));
        for r in &roots {
            prop_assert!(r.value > -3.0 && r.value < 3.0);
        }
    }
}

#[test]
fn degree_five_example() {
    // (k − 1/3)(k + 1/2)(k − 0.9)(k² + 1): three real roots in (−1, 1)
    let p = &(&(&Poly::from_ratios(&[(-1, 3), (1, 1)]) * &Poly::from_ratios(&[(1, 2), (1, 1)]))
        * &Poly::from_ratios(&[(-9, 10), (1, 1)]))
        * &Poly::from_i64s(&[1, 0, 1]);
    let r = real_roots_in(&p, -1.0, 1.0).unwrap();
    let v: Vec<f64> = r.iter().map(|x| x.value).collect();
    assert_eq!(v.len(), 3);
    for (got, want) in v.iter().zip([-0.5, 1.0 / 3.0, 0.9]) {
        assert!((got - want).abs() < 1e-14);
    }
}
