use melnikov_core::reduction::{
    degree_bounds, identity_sides, interpolate_zeros, psi_bound, psi_bound_rational, reduce,
    MuSpec, ReductionCase, ReductionInput,
};
use melnikov_core::picard_fuchs::MuFunction;
use melnikov_core::polyalg::{rat, real_roots_in, Poly};
use melnikov_core::sampling;

const CASES: [ReductionCase; 4] = [
    ReductionCase::PolySGe2,
    ReductionCase::PolySEq1,
    ReductionCase::ConstantMu,
    ReductionCase::RationalSpecial,
];

fn sample_points(input: &ReductionInput) -> Vec<f64> {
    // Five points in 0.05 < |k| ≤ 0.35, at least 0.05 from every zero of r
    // (the difference quotient of I/r is useless next to a pole).
    let roots = if input.r.is_constant() {
        Vec::new()
    } else {
        real_roots_in(&input.r, -1.0, 1.0).unwrap()
    };
    let cands = [-0.33, -0.27, -0.19, -0.11, 0.07, 0.13, 0.21, 0.29, 0.34];
    cands
        .iter()
        .copied()
        .filter(|&k| roots.iter().all(|z| (z.value - k).abs() >= 0.05))
        .take(5)
        .collect()
}

#[test]
fn identity_holds_for_random_inputs() {
    let mut rng = sampling::rng(7);
    for case in CASES {
        for _ in 0..10 {
            let input = sampling::reduction_input(&mut rng, case, 3);
            let form = reduce(&input).unwrap();
            assert!(form.degrees_ok(), "{case:?}: degree caps violated");
            let pts = sample_points(&input);
            assert_eq!(pts.len(), 5);
            for k in pts {
                let (lhs, rhs) = identity_sides(&input, &form, k, 1e-3).unwrap();
                let rel = (lhs - rhs).abs() / rhs.abs().max(lhs.abs()).max(1e-12);
                assert!(rel < 1e-5, "{case:?} k={k}: lhs {lhs} rhs {rhs} rel {rel}");
            }
        }
    }
}

#[test]
fn identity_at_spec_points() {
    // s ≥ 2 with μ = k² + 2 is symbolic only (Π undefined for μ > 1); use a
    // nearby admissible μ = 1/2 + k²/4 for the numeric check at k ∈ {0.2, 0.5, 0.8}.
    let input = ReductionInput::new(
        Poly::from_i64s(&[1, -2]),
        Poly::from_i64s(&[0, 1, 3]),
        Poly::from_i64s(&[2, 0, 1]),
        MuSpec::Poly(Poly::from_ratios(&[(1, 2), (0, 1), (1, 4)])),
    );
    let form = reduce(&input).unwrap();
    for k in [0.2, 0.5, 0.8] {
        let (lhs, rhs) = identity_sides(&input, &form, k, 1e-4).unwrap();
        assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0), "k={k}: {lhs} vs {rhs}");
    }
    let input = ReductionInput::new(Poly::x(), Poly::one(), Poly::from_i64s(&[0, 0, 1]), MuSpec::Special);
    let form = reduce(&input).unwrap();
    for k in [0.3, 0.6] {
        let (lhs, rhs) = identity_sides(&input, &form, k, 1e-4).unwrap();
        assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0), "k={k}: {lhs} vs {rhs}");
    }
}

#[test]
fn special_case_gauge_in_closed_form() {
    // d/dk[(1−k²) I /(r √(1+k²))] = (M₂K + N₂E)/(r² k (1+k²)^{3/2}), X evaluated directly.
    let input = ReductionInput::new(
        Poly::from_i64s(&[1, 1]),
        Poly::from_i64s(&[-2, 0, 1]),
        Poly::from_i64s(&[1, 3]),
        MuSpec::Special,
    );
    let form = reduce(&input).unwrap();
    let mu = MuFunction::special();
    let lhs_fn = |k: f64| {
        (1.0 - k * k) * input.eval_i(&mu, k).unwrap() / (input.r.eval_f64(k) * (1.0 + k * k).sqrt())
    };
    for k in [0.3, 0.6] {
        let h = 1e-3;
        let d = (lhs_fn(k - 2.0 * h) - 8.0 * lhs_fn(k - h) + 8.0 * lhs_fn(k + h) - lhs_fn(k + 2.0 * h))
            / (12.0 * h);
        let t = melnikov_core::EllipticTriple::new(mu.value(k), k).unwrap();
        let r = input.r.eval_f64(k);
        let rhs = (form.m1.eval_f64(k) * t.K + form.n1.eval_f64(k) * t.E)
            / (r * r * k * (1.0 + k * k).powf(1.5));
        assert!((d - rhs).abs() < 1e-6 * rhs.abs().max(1.0), "k={k}: {d} vs {rhs}");
    }
}

#[test]
fn const_mu_gauge_in_closed_form() {
    // X = √|k² − μ| evaluated directly; μ > k² on the sample points.
    let mu_c = 0.6;
    let input = ReductionInput::new(
        Poly::from_i64s(&[2, -1]),
        Poly::from_i64s(&[1, 0, 2]),
        Poly::from_i64s(&[3, 1]),
        MuSpec::Poly(Poly::constant(rat(3, 5))),
    );
    let form = reduce(&input).unwrap();
    let mu = input.mu.to_function();
    let f = |k: f64| {
        (k * k - mu_c).abs().sqrt() * input.eval_i(&mu, k).unwrap() / input.r.eval_f64(k)
    };
    for k in [0.2, 0.5] {
        let h = 1e-3;
        let d = (f(k - 2.0 * h) - 8.0 * f(k - h) + 8.0 * f(k + h) - f(k + 2.0 * h)) / (12.0 * h);
        let t = melnikov_core::EllipticTriple::new(mu_c, k).unwrap();
        let r = input.r.eval_f64(k);
        let x = (k * k - mu_c).abs().sqrt();
        let rhs = (form.m1.eval_f64(k) * t.K + form.n1.eval_f64(k) * t.E)
            / (r * r * k * (1.0 - k * k) * x);
        assert!((d - rhs).abs() < 1e-6 * rhs.abs().max(1.0), "k={k}: {d} vs {rhs}");
    }
}

#[test]
fn degree_caps_over_many_inputs() {
    let mut rng = sampling::rng(11);
    for case in CASES {
        for _ in 0..50 {
            let input = sampling::reduction_input(&mut rng, case, 4);
            let form = reduce(&input).unwrap();
            let (m, n, l, s) = input.degrees();
            assert_eq!((form.deg_bound_m, form.deg_bound_n), degree_bounds(case, m, n, l, s));
            assert!(form.degrees_ok(), "{case:?} {m} {n} {l} {s}");
        }
    }
}

// Chain used in the proofs: zeros ≤ (deg M + deg N + 2) + l + 1 with the
// degree caps at m = n = max{m, n}.
fn chained(case: ReductionCase, mx: usize, l: usize, s: usize) -> u64 {
    let (dm, dn) = degree_bounds(case, mx, mx, l, s);
    (dm + dn + 2 + l + 1) as u64
}

#[test]
fn psi_tables_dominate_the_degree_chain() {
    for m in 0..=6u64 {
        for n in 0..=6u64 {
            for l in 0..=6u64 {
                let mx = m.max(n) as usize;
                let lu = l as usize;
                for s in 0..=6u64 {
                    let case = match s {
                        0 => ReductionCase::ConstantMu,
                        1 => ReductionCase::PolySEq1,
                        _ => ReductionCase::PolySGe2,
                    };
                    let chain = chained(case, mx, lu, s as usize);
                    let psi = psi_bound(m, n, l, s);
                    assert!(psi >= chain, "({m},{n},{l},{s}) psi {psi} chain {chain}");
                    // Equality everywhere except the second s = 1 branch, where the
                    // stated bound is one larger than the chain gives.
                    if !(s == 1 && l > m.max(n) + 1) {
                        assert_eq!(psi, chain, "({m},{n},{l},{s})");
                    } else {
                        assert_eq!(psi, chain + 1);
                    }
                }
                let chain = (degree_bounds(ReductionCase::RationalSpecial, mx, mx, lu, 0).0
                    + degree_bounds(ReductionCase::RationalSpecial, mx, mx, lu, 0).1
                    + 2
                    + lu
                    + 1) as u64;
                assert_eq!(psi_bound_rational(m, n, l), chain, "({m},{n},{l})");
            }
        }
    }
}

#[test]
fn psi_monotone_within_branches() {
    for s in 0..=6u64 {
        for m in 0..6u64 {
            for n in 0..=6u64 {
                for l in 0..=6u64 {
                    let same_branch = |a: (u64, u64, u64)| {
                        let mx = a.0.max(a.1);
                        let lim = match s {
                            0 => mx + 2,
                            1 => mx + 1,
                            _ => mx + s,
                        };
                        let lim0 = match s {
                            0 => m.max(n) + 2,
                            1 => m.max(n) + 1,
                            _ => m.max(n) + s,
                        };
                        (a.2 <= lim) == (l <= lim0)
                    };
                    let base = psi_bound(m, n, l, s);
                    for next in [(m + 1, n, l), (m, n + 1, l), (m, n, l + 1)] {
                        if same_branch(next) {
                            assert!(psi_bound(next.0, next.1, next.2, s) >= base);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn interpolation_examples() {
    let mu = MuFunction::special();
    let it = interpolate_zeros(&[-0.5, 0.5], 0, 0, 0, &mu).unwrap();
    // Every function here is even in k, so the two rows coincide.
    assert_eq!(it.corank, 2);
    let input = ReductionInput::new(it.p.clone(), it.q.clone(), it.r.clone(), MuSpec::Special);
    for k in [-0.5, 0.5] {
        assert!(input.eval_i(&mu, k).unwrap().abs() <= 1e-10);
    }
    let it = interpolate_zeros(&[-0.6, -0.2, 0.7], 1, 0, 0, &mu).unwrap();
    assert_eq!(it.corank, 1);
    let input = ReductionInput::new(it.p.clone(), it.q.clone(), it.r.clone(), MuSpec::Special);
    for k in [-0.6, -0.2, 0.7] {
        assert!(input.eval_i(&mu, k).unwrap().abs() <= 1e-9);
    }
    let norm: f64 = [&it.p, &it.q, &it.r]
        .iter()
        .flat_map(|p| p.to_f64().0)
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    assert!(norm >= 1.0);
}
