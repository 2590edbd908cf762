//! First- and second-order Picard–Fuchs systems for `V(k) = (K, E, Π(μ(k), k))`
//! and the Wronskian of `V`.

use std::f64::consts::PI;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::elliptic::EllipticTriple;
use crate::error::{domain, Error, Result};
use crate::polyalg::{rat, rat_to_f64, FloatPoly, Poly, RatFunc, Rational};

pub type Mat3 = [[f64; 3]; 3];

/// A parameter function `μ(k)` with its first two derivatives precomputed.
#[derive(Clone, Debug)]
pub struct MuFunction {
    f: RatFunc,
    d1: RatFunc,
    d2: RatFunc,
    fl: [(FloatPoly, FloatPoly); 3],
}

/// `μ`, `μ'`, `μ''` at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MuValues {
    pub mu: f64,
    pub d1: f64,
    pub d2: f64,
}

impl MuFunction {
    pub fn new(f: RatFunc) -> Self {
        let d1 = f.derivative();
        let d2 = d1.derivative();
        let fl = [&f, &d1, &d2].map(|r| (r.num().to_f64(), r.den().to_f64()));
        MuFunction { f, d1, d2, fl }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(RatFunc::constant(c))
    }

    pub fn poly(p: Poly) -> Self {
        Self::new(RatFunc::from_poly(p))
    }

    /// `μ(k) = 2k²/(1+k²)`.
    pub fn special() -> Self {
        Self::new(
            RatFunc::new(Poly::from_i64s(&[0, 0, 2]), Poly::from_i64s(&[1, 0, 1]))
                .expect("nonzero denominator"),
        )
    }

    pub fn rational(&self) -> &RatFunc {
        &self.f
    }

    pub fn derivative(&self) -> &RatFunc {
        &self.d1
    }

    pub fn second_derivative(&self) -> &RatFunc {
        &self.d2
    }

    pub fn is_constant(&self) -> bool {
        self.d1.is_zero()
    }

    pub fn eval(&self, k: f64) -> MuValues {
        let e = |i: usize| self.fl[i].0.eval(k) / self.fl[i].1.eval(k);
        MuValues {
            mu: e(0),
            d1: e(1),
            d2: e(2),
        }
    }

    pub fn value(&self, k: f64) -> f64 {
        self.fl[0].0.eval(k) / self.fl[0].1.eval(k)
    }
}

/// Shared pole check for every matrix entry.
fn check_point(m: &MuValues, k: f64) -> Result<()> {
    if !k.is_finite() || k.abs() >= 1.0 {
        return Err(domain(format!("k = {k} must lie in (-1, 1)")));
    }
    if k == 0.0 {
        return Err(Error::Singular("k = 0 is a pole of A(k)".into()));
    }
    let tol = 1e-12;
    if !m.mu.is_finite() || !m.d1.is_finite() || !m.d2.is_finite() {
        return Err(Error::Singular(format!("mu has a pole at k = {k}")));
    }
    if m.mu.abs() < tol {
        return Err(Error::Singular(format!("mu(k) = 0 at k = {k}")));
    }
    if (1.0 - m.mu).abs() < tol {
        return Err(Error::Singular(format!("mu(k) = 1 at k = {k}")));
    }
    if (m.mu - k * k).abs() < tol {
        return Err(Error::Singular(format!("mu(k) = k^2 at k = {k}")));
    }
    Ok(())
}

fn a_at(m: &MuValues, k: f64) -> Mat3 {
    let (mu, d1) = (m.mu, m.d1);
    let k2 = k * k;
    let a31 = -d1 / (2.0 * mu * (1.0 - mu));
    let a32 = k / ((mu - k2) * (k2 - 1.0)) + d1 / (2.0 * (1.0 - mu) * (mu - k2));
    let a33 = k / (mu - k2) + (mu * mu - k2) * d1 / (2.0 * mu * (1.0 - mu) * (mu - k2));
    [
        [-1.0 / k, 1.0 / (k * (1.0 - k2)), 0.0],
        [-1.0 / k, 1.0 / k, 0.0],
        [a31, a32, a33],
    ]
}

fn b_at(m: &MuValues, k: f64) -> Mat3 {
    let (mu, d1, d2) = (m.mu, m.d1, m.d2);
    let k2 = k * k;
    let k4 = k2 * k2;
    let omk2 = 1.0 - k2;
    let mmk = mu - k2;
    let mm1 = mu - 1.0;
    let b31 = ((mu * mu - mu) * d2 - (2.0 * mu - 1.0) * d1 * d1) / (2.0 * mu * mu * mm1 * mm1);
    let b32 = (3.0 * k4 - mu * (k2 + 1.0) - k2) / (omk2 * omk2 * mmk * mmk)
        + d2 / (2.0 * (1.0 - mu) * mmk)
        + (2.0 * mu - k2 - 1.0) / (2.0 * mm1 * mm1 * mmk * mmk) * d1 * d1
        - k * (k2 + mu - 2.0) / ((k2 - 1.0) * mmk * mmk * mm1) * d1;
    let b33 = (mu + k2) / (mmk * mmk)
        - (k2 - mu * mu) / (2.0 * mu * mm1 * (k2 - mu)) * d2
        + ((2.0 * mu - 1.0) * k4 - 2.0 * (2.0 * mu * mu - mu) * k2 + mu.powi(4))
            / (2.0 * mu * mu * mm1 * mm1 * mmk * mmk)
            * d1
            * d1
        - 2.0 * k / (mmk * mmk) * d1;
    [
        [1.0 / k2, (3.0 * k2 - 1.0) / (k2 * omk2 * omk2), 0.0],
        [1.0 / k2, -1.0 / k2, 0.0],
        [b31, b32, b33],
    ]
}

/// `A(k)` with `V' = A V`.
pub fn matrix_a(mu: &MuFunction, k: f64) -> Result<Mat3> {
    let m = mu.eval(k);
    check_point(&m, k)?;
    Ok(a_at(&m, k))
}

/// `B(k)` with `V'' = A V' + B V`.
pub fn matrix_b(mu: &MuFunction, k: f64) -> Result<Mat3> {
    let m = mu.eval(k);
    check_point(&m, k)?;
    Ok(b_at(&m, k))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PfMatrices {
    pub a: Mat3,
    pub b: Mat3,
}

pub fn pf_matrices(mu: &MuFunction, k: f64) -> Result<PfMatrices> {
    let m = mu.eval(k);
    check_point(&m, k)?;
    Ok(PfMatrices {
        a: a_at(&m, k),
        b: b_at(&m, k),
    })
}

fn mat_vec(a: &Mat3, v: &[f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2])
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|l| a[i][l] * b[l][j]).sum()))
}

fn det3(r0: &[f64; 3], r1: &[f64; 3], r2: &[f64; 3]) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

/// `V(k)` with `μ = μ(k)`.
pub fn v_at(mu: &MuFunction, k: f64) -> Result<[f64; 3]> {
    Ok(EllipticTriple::new(mu.value(k), k)?.as_array())
}

fn fd_window(k: f64, step: f64, reach: f64) -> Result<()> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(domain(format!("step {step} must be positive")));
    }
    if (k - reach * step) <= -1.0 || (k + reach * step) >= 1.0 {
        return Err(domain(format!(
            "stencil [k - {reach}h, k + {reach}h] leaves (-1, 1) at k = {k}"
        )));
    }
    Ok(())
}

/// Finite-difference residuals of the two Picard–Fuchs systems:
/// `r1 = ‖V'_fd − A V‖∞`, `r2 = ‖V''_fd − A V'_fd − B V‖∞` (five-point central differences).
pub fn pf_residual(mu: &MuFunction, k: f64, step: f64) -> Result<(f64, f64)> {
    fd_window(k, step, 2.0)?;
    let m = pf_matrices(mu, k)?;
    let (d1, d2) = fd_derivatives(mu, k, step)?;
    let v0 = v_at(mu, k)?;
    let av = mat_vec(&m.a, &v0);
    let ad = mat_vec(&m.a, &d1);
    let bv = mat_vec(&m.b, &v0);
    let r1 = (0..3).map(|i| (d1[i] - av[i]).abs()).fold(0.0, f64::max);
    let r2 = (0..3)
        .map(|i| (d2[i] - ad[i] - bv[i]).abs())
        .fold(0.0, f64::max);
    Ok((r1, r2))
}

/// Wronskian `W(k) = det(V, V', V'')` in closed form.
///
/// The rows are `V`, `A V` and `(B + A²) V`, so the value is an exact
/// algebraic expression in K, E, Π and μ, μ', μ'' with no differencing.
pub fn wronskian(mu: &MuFunction, k: f64) -> Result<f64> {
    let m = pf_matrices(mu, k)?;
    let v = v_at(mu, k)?;
    let v1 = mat_vec(&m.a, &v);
    let a2 = mat_mul(&m.a, &m.a);
    let c: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| m.b[i][j] + a2[i][j]));
    let v2 = mat_vec(&c, &v);
    Ok(det3(&v, &v1, &v2))
}

/// The printed closed form of `W(k)` from the literature, transcribed verbatim.
///
/// It does not agree with `det(V, V', V'')`; it is kept so the discrepancy
/// stays reproducible (see `wronskian` for the value actually used).
pub fn wronskian_printed(mu: &MuFunction, k: f64) -> Result<f64> {
    let mv = mu.eval(k);
    check_point(&mv, k)?;
    let t = EllipticTriple::new(mv.mu, k)?;
    Ok(printed_w(t.K, t.E, t.Pi, k, mv.mu, mv.d1, mv.d2))
}

#[allow(non_snake_case)]
fn printed_w(K: f64, E: f64, P: f64, k: f64, m: f64, d1: f64, d2: f64) -> f64 {
    let k2 = k * k;
    let k4 = k2 * k2;
    let k6 = k4 * k2;
    let m2 = m * m;
    let t1 = 1.0 / (k * (k2 - m).powi(2) * (k2 - 1.0).powi(2))
        * ((1.0 - k2) * (k2 - m) * K.powi(3) - ((3.0 * k2 - 5.0) * m + 2.0 * k2) * K * K * E
            + ((2.0 * k2 - 7.0) * m + 4.0 * k4 + k2) * K * E * E
            + 3.0 * m * E.powi(3)
            + ((k2 - 1.0) * (m2 + 2.0 * (1.0 - 2.0 * k2) * m + k2) * K * K
                + 0.5 * ((2.0 - k2) * m2 + 2.0 * (2.0 * k4 - 4.0 * k2 + 1.0) * m + k2) * K * E
                - (3.0 * m2 + 2.0 * (1.0 - 5.0 * k2) * m + 4.0 * k4 + k2) * E * E)
                * P);
    let c = (1.0 - k2) * (K * K - 2.0 * K * E) + E * E;
    let t2 = c / (2.0 * k * (k2 - 1.0) * m * (k2 - m) * (m - 1.0))
        * ((k2 - m) * K + m * E + (m2 - k2) * P)
        * d2;
    let t3 = c / (2.0 * k * (k2 - 1.0) * m2 * (k2 - m).powi(2) * (m - 1.0).powi(2))
        * (0.5 * (k2 - m) * (5.0 * m2 - 2.0 * (2.0 * k2 + 1.0) * m + k2) * K
            + m / 2.0 * (5.0 * m2 - 2.0 * (k2 + 1.0) * m + k2) * E
            + 0.5 * (3.0 * m2 * m2 - 10.0 * k2 * m2 + 4.0 * k2 * (k2 + 1.0) * m - k4) * P)
        * d1
        * d1;
    let t4 = -d1 / (2.0 * k2 * (k2 - 1.0).powi(2) * m2 * (k2 - m).powi(2) * (m - 1.0))
        * ((k2 - 1.0).powi(2) * (k4 - m2) * K.powi(3)
            + (k2 - 1.0) * ((7.0 * k2 - 3.0) * m2 + (k4 - 5.0 * k2) * m - 2.0 * k6 + 2.0 * k4)
                * K
                * K
                * E
            - (k2 - 1.0)
                * ((10.0 * k4 - 15.0 * k2 + 3.0) * m2 + (2.0 * k6 - 8.0 * k4 + 10.0 * k2) * m
                    - k6
                    - k4)
                * K
                * E
                * E
            + ((k2 - 1.0).powi(2)
                * (m2 * m + 5.0 * k2 * m2 - 5.0 * k2 * m - k4)
                * (K * K - 2.0 * K * E)
                - ((3.0 * k2 - 1.0) * m2 * m + (3.0 * k4 - 5.0 * k2) * m2
                    - (7.0 * k4 - 5.0 * k2) * m
                    + k6
                    + k4)
                    * E
                    * E)
                * P);
    t1 + t2 + t3 + t4
}

/// `V'` and `V''` by five-point central differences.
fn fd_derivatives(mu: &MuFunction, k: f64, step: f64) -> Result<([f64; 3], [f64; 3])> {
    let v = |t: f64| v_at(mu, t);
    let (vm2, vm1, v0, vp1, vp2) = (
        v(k - 2.0 * step)?,
        v(k - step)?,
        v(k)?,
        v(k + step)?,
        v(k + 2.0 * step)?,
    );
    let d1: [f64; 3] =
        std::array::from_fn(|i| (vm2[i] - 8.0 * vm1[i] + 8.0 * vp1[i] - vp2[i]) / (12.0 * step));
    let d2: [f64; 3] = std::array::from_fn(|i| {
        (-vm2[i] + 16.0 * vm1[i] - 30.0 * v0[i] + 16.0 * vp1[i] - vp2[i]) / (12.0 * step * step)
    });
    Ok((d1, d2))
}

/// Oracle: `det(V, V'_fd, V''_fd)` with five-point central differences.
pub fn wronskian_fd(mu: &MuFunction, k: f64, step: f64) -> Result<f64> {
    fd_window(k, step, 2.0)?;
    let (d1, d2) = fd_derivatives(mu, k, step)?;
    Ok(det3(&v_at(mu, k)?, &d1, &d2))
}

/// `lim_{k→0} W(k) = π³ μ'(0) / (16 (1 − μ(0))^{3/2})`.
pub fn wronskian_limit_zero(mu: &MuFunction) -> Result<f64> {
    let zero = Rational::zero();
    let m0 = mu.rational().eval(&zero)?;
    let d0 = mu.derivative().eval(&zero)?;
    if d0.is_zero() {
        return Err(Error::Degenerate("mu'(0) = 0, the limit formula does not apply".into()));
    }
    if m0 >= rat(1, 1) {
        return Err(Error::Degenerate("mu(0) must be below 1".into()));
    }
    let m0 = rat_to_f64(&m0);
    let d0 = rat_to_f64(&d0);
    Ok(PI.powi(3) * d0 / (16.0 * (1.0 - m0).powf(1.5)))
}
