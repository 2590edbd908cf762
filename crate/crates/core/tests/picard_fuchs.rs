use std::f64::consts::PI;

use melnikov_core::elliptic::EllipticTriple;
use melnikov_core::picard_fuchs::*;
use melnikov_core::polyalg::{rat, Poly};
use melnikov_core::Error;

fn linear() -> MuFunction {
    MuFunction::poly(Poly::from_ratios(&[(1, 4), (1, 4)]))
}

fn quarter() -> MuFunction {
    MuFunction::constant(rat(1, 4))
}

// μ = 1/4 equals k² at ±1/2, so the constant case moves those two nodes.
fn grid(mu: &MuFunction) -> [f64; 6] {
    if mu.is_constant() {
        [-0.8, -0.55, -0.2, 0.2, 0.55, 0.8]
    } else {
        [-0.8, -0.5, -0.2, 0.2, 0.5, 0.8]
    }
}

fn all_mu() -> [(&'static str, MuFunction); 3] {
    [("special", MuFunction::special()), ("linear", linear()), ("quarter", quarter())]
}

#[test]
fn residuals_on_grid() {
    for (name, mu) in all_mu() {
        for k in grid(&mu) {
            let (r1, _) = pf_residual(&mu, k, 1e-4).unwrap();
            let (_, r2) = pf_residual(&mu, k, 1e-3).unwrap();
            assert!(r1 <= 1e-6, "{name} k={k}: first-order residual {r1}");
            assert!(r2 <= 1e-3, "{name} k={k}: second-order residual {r2}");
        }
    }
}

#[test]
fn wronskian_matches_finite_differences() {
    for (name, mu) in all_mu() {
        for k in grid(&mu) {
            let w = wronskian(&mu, k).unwrap();
            let fd = wronskian_fd(&mu, k, 1e-3).unwrap();
            assert!((w - fd).abs() <= 1e-4 * fd.abs(), "{name} k={k}: {w} vs {fd}");
        }
    }
}

#[test]
fn wronskian_limit_at_zero() {
    let mu = linear();
    let lim = wronskian_limit_zero(&mu).unwrap();
    let w = wronskian(&mu, 0.01).unwrap();
    assert!((w - lim).abs() <= 0.01 * lim.abs(), "{w} vs {lim}");
    // And the approach tightens as k shrinks.
    let w2 = wronskian(&mu, 1e-3).unwrap();
    assert!((w2 - lim).abs() < (w - lim).abs());
}

// Printed KEΠ coefficient ½ replaced by 2; every other constant-μ term kept.
#[allow(non_snake_case)]
fn constant_mu_closed_form(mu: f64, k: f64) -> f64 {
    let t = EllipticTriple::new(mu, k).unwrap();
    let (K, E, P) = (t.K, t.E, t.Pi);
    let k2 = k * k;
    let k4 = k2 * k2;
    let m = mu;
    let m2 = m * m;
    1.0 / (k * (k2 - m).powi(2) * (k2 - 1.0).powi(2))
        * ((1.0 - k2) * (k2 - m) * K.powi(3) - ((3.0 * k2 - 5.0) * m + 2.0 * k2) * K * K * E
            + ((2.0 * k2 - 7.0) * m + 4.0 * k4 + k2) * K * E * E
            + 3.0 * m * E.powi(3)
            + ((k2 - 1.0) * (m2 + 2.0 * (1.0 - 2.0 * k2) * m + k2) * K * K
                + 2.0 * ((2.0 - k2) * m2 + 2.0 * (2.0 * k4 - 4.0 * k2 + 1.0) * m + k2) * K * E
                - (3.0 * m2 + 2.0 * (1.0 - 5.0 * k2) * m + 4.0 * k4 + k2) * E * E)
                * P)
}

#[test]
fn printed_wronskian_disagrees_with_determinant() {
    let mu = quarter();
    let w = wronskian(&mu, 0.2).unwrap();
    let printed = wronskian_printed(&mu, 0.2).unwrap();
    assert!((w - printed).abs() > 1.0 * w.abs());
    // One corrected coefficient recovers the determinant for constant μ.
    for mu_c in [0.25, 0.6, -0.3] {
        let f = MuFunction::constant(melnikov_core::polyalg::rat_from_f64(mu_c).unwrap());
        for k in [-0.8, -0.3, 0.2, 0.7] {
            let exact = wronskian(&f, k).unwrap();
            let cf = constant_mu_closed_form(mu_c, k);
            assert!((exact - cf).abs() <= 1e-9 * exact.abs(), "mu={mu_c} k={k}: {exact} vs {cf}");
        }
    }
}

#[test]
fn wronskian_keeps_sign_near_origin() {
    let mu = linear();
    let lim = wronskian_limit_zero(&mu).unwrap();
    for i in 1..=20 {
        let k = i as f64 * 5e-3;
        assert!(wronskian(&mu, k).unwrap() * lim > 0.0);
        assert!(wronskian(&mu, -k).unwrap() * lim > 0.0);
    }
    assert!((lim - PI.powi(3) / (64.0 * 0.75f64.powf(1.5))).abs() < 1e-14);
}

#[test]
fn matrices_share_the_first_two_rows() {
    for (_, mu) in all_mu() {
        let m = pf_matrices(&mu, 0.3).unwrap();
        assert_eq!(m.a[0][2], 0.0);
        assert_eq!(m.a[1][2], 0.0);
        assert_eq!(m.b[0][2], 0.0);
        assert_eq!(m.a[1], [-1.0 / 0.3, 1.0 / 0.3, 0.0]);
    }
}

#[test]
fn singular_and_domain_errors() {
    let mu = quarter();
    assert!(matches!(matrix_a(&mu, 0.5), Err(Error::Singular(_))));
    assert!(matches!(matrix_a(&mu, 0.0), Err(Error::Singular(_))));
    assert!(matches!(matrix_b(&mu, 1.0), Err(Error::Domain(_))));
    assert!(matches!(wronskian(&MuFunction::constant(rat(0, 1)), 0.3), Err(Error::Singular(_))));
    assert!(matches!(pf_residual(&mu, 0.9999, 1e-3), Err(Error::Domain(_))));
    assert!(matches!(wronskian_limit_zero(&mu), Err(Error::Degenerate(_))));
    let above = MuFunction::poly(Poly::from_ratios(&[(3, 2), (1, 1)]));
    assert!(matches!(wronskian_limit_zero(&above), Err(Error::Degenerate(_))));
}
