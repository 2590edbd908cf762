//! Carlson symmetric integrals and the Legendre elliptic integrals built from them.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

// Duplication stops once all arguments agree to this relative spread; the
// Taylor tails below then leave a truncation error far under 1e-16.
const SPREAD: f64 = 1e-8;

fn check_args(name: &str, args: &[f64]) -> Result<()> {
    for &a in args {
        if !a.is_finite() || a < 0.0 {
            return Err(domain(format!("{name}: argument {a} must be finite and non-negative")));
        }
    }
    Ok(())
}

/// `R_C(x, y) = ½∫₀^∞ (t+x)^{-1/2} (t+y)^{-1} dt` for `x ≥ 0`, `y > 0`.
pub fn carlson_rc(x: f64, y: f64) -> Result<f64> {
    check_args("R_C", &[x, y])?;
    if y == 0.0 {
        return Err(domain("R_C: y must be positive"));
    }
    let (mut x, mut y) = (x, y);
    let mut a;
    loop {
        a = (x + 2.0 * y) / 3.0;
        if ((y - a) / a).abs() < SPREAD {
            break;
        }
        let lam = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
    }
    let s = (y - a) / a;
    Ok((1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / a.sqrt())
}

/// `R_F(x, y, z) = ½∫₀^∞ dt/√((t+x)(t+y)(t+z))`.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    check_args("R_F", &[x, y, z])?;
    if [x, y, z].iter().filter(|&&v| v == 0.0).count() > 1 {
        return Err(domain("R_F: at most one argument may be zero"));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let mut a;
    loop {
        a = (x + y + z) / 3.0;
        let spread = (a - x).abs().max((a - y).abs()).max((a - z).abs()) / a;
        if spread < SPREAD {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    let dx = (a - x) / a;
    let dy = (a - y) / a;
    let dz = -(dx + dy);
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt())
}

// Common sixth-order tail shared by R_D and R_J.
fn rj_tail(e2: f64, e3: f64, e4: f64, e5: f64) -> f64 {
    1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
}

/// `R_D(x, y, z) = R_J(x, y, z, z)`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    check_args("R_D", &[x, y, z])?;
    if z == 0.0 {
        return Err(domain("R_D: z must be positive"));
    }
    if x == 0.0 && y == 0.0 {
        return Err(domain("R_D: x and y cannot both be zero"));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let mut a;
    loop {
        a = (x + y + 3.0 * z) / 5.0;
        let spread = (a - x).abs().max((a - y).abs()).max((a - z).abs()) / a;
        if spread < SPREAD {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
    }
    let dx = (a - x) / a;
    let dy = (a - y) / a;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let z2 = dz * dz;
    let e2 = xy - 6.0 * z2;
    let e3 = (3.0 * xy - 8.0 * z2) * dz;
    let e4 = 3.0 * (xy - z2) * z2;
    let e5 = xy * z2 * dz;
    Ok(3.0 * sum + fac * rj_tail(e2, e3, e4, e5) / (a * a.sqrt()))
}

/// `R_J(x, y, z, p) = (3/2)∫₀^∞ dt / ((t+p)√((t+x)(t+y)(t+z)))` for `p > 0`.
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    check_args("R_J", &[x, y, z])?;
    if !(p > 0.0) || !p.is_finite() {
        return Err(domain(format!("R_J: p = {p} must be positive")));
    }
    if [x, y, z].iter().filter(|&&v| v == 0.0).count() > 1 {
        return Err(domain("R_J: at most one of x, y, z may be zero"));
    }
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let mut a;
    loop {
        a = (x + y + z + 2.0 * p) / 5.0;
        let spread = (a - x)
            .abs()
            .max((a - y).abs())
            .max((a - z).abs())
            .max((a - p).abs())
            / a;
        if spread < SPREAD {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lam).powi(2);
        sum += fac * carlson_rc(alpha, beta)?;
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
    }
    let dx = (a - x) / a;
    let dy = (a - y) / a;
    let dz = (a - z) / a;
    let dp = -(dx + dy + dz) / 2.0;
    let xyz = dx * dy * dz;
    let e2 = dx * dy + dx * dz + dy * dz - 3.0 * dp * dp;
    let e3 = xyz + 2.0 * e2 * dp + 4.0 * dp.powi(3);
    let e4 = (2.0 * xyz + e2 * dp + 3.0 * dp.powi(3)) * dp;
    let e5 = xyz * dp * dp;
    Ok(3.0 * sum + fac * rj_tail(e2, e3, e4, e5) / (a * a.sqrt()))
}

fn modulus(k: f64) -> Result<f64> {
    if !k.is_finite() || k.abs() >= 1.0 {
        return Err(domain(format!("modulus k = {k} must satisfy |k| < 1")));
    }
    Ok(k.abs())
}

fn third_kind_param(mu: f64) -> Result<f64> {
    if !mu.is_finite() || mu >= 1.0 {
        return Err(domain(format!("parameter mu = {mu} must be below 1")));
    }
    Ok(mu)
}

/// Complete integral of the first kind.
pub fn complete_k(k: f64) -> Result<f64> {
    let k = modulus(k)?;
    carlson_rf(0.0, 1.0 - k * k, 1.0)
}

/// Complete integral of the second kind.
pub fn complete_e(k: f64) -> Result<f64> {
    let k = modulus(k)?;
    let kc2 = 1.0 - k * k;
    Ok(carlson_rf(0.0, kc2, 1.0)? - k * k / 3.0 * carlson_rd(0.0, kc2, 1.0)?)
}

/// Complete integral of the third kind `Π(μ, k) = ∫₀¹ dz / ((1−μz²)√((1−z²)(1−k²z²)))`.
///
/// `μ ≥ 1` is rejected (the integral diverges or becomes a principal value).
pub fn complete_pi(mu: f64, k: f64) -> Result<f64> {
    let k = modulus(k)?;
    let mu = third_kind_param(mu)?;
    let kc2 = 1.0 - k * k;
    let kk = carlson_rf(0.0, kc2, 1.0)?;
    if mu == 0.0 {
        return Ok(kk);
    }
    Ok(kk + mu / 3.0 * carlson_rj(0.0, kc2, 1.0, 1.0 - mu)?)
}

/// `μ = k²` lies on the locus where Π collapses to `E/(1−k²)`.
pub fn is_degenerate_param(mu: f64, k: f64) -> bool {
    (mu - k * k).abs() <= 1e-14 * mu.abs().max(1.0)
}

/// `V(k) = (K, E, Π(μ, k))` evaluated together.
#[allow(non_snake_case)]
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticTriple {
    pub k: f64,
    pub K: f64,
    pub E: f64,
    pub Pi: f64,
    /// Set when `μ = k²`, where Π is reducible to E.
    pub degenerate: bool,
}

impl EllipticTriple {
    pub fn new(mu: f64, k: f64) -> Result<Self> {
        let ka = modulus(k)?;
        let mu = third_kind_param(mu)?;
        let kc2 = 1.0 - ka * ka;
        let kk = carlson_rf(0.0, kc2, 1.0)?;
        let e = kk - ka * ka / 3.0 * carlson_rd(0.0, kc2, 1.0)?;
        let pi = if mu == 0.0 {
            kk
        } else {
            kk + mu / 3.0 * carlson_rj(0.0, kc2, 1.0, 1.0 - mu)?
        };
        Ok(EllipticTriple {
            k,
            K: kk,
            E: e,
            Pi: pi,
            degenerate: is_degenerate_param(mu, k),
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.K, self.E, self.Pi]
    }
}

fn incomplete_args(z: f64, k: f64) -> Result<(f64, f64, f64)> {
    let k = modulus(k)?;
    if !z.is_finite() || z.abs() > 1.0 {
        return Err(domain(format!("amplitude z = {z} must satisfy |z| <= 1")));
    }
    Ok((z, 1.0 - z * z, 1.0 - k * k * z * z))
}

/// `F(z, k) = ∫₀^z dt/√((1−t²)(1−k²t²))`.
pub fn incomplete_f(z: f64, k: f64) -> Result<f64> {
    let (z, a, b) = incomplete_args(z, k)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    Ok(z * carlson_rf(a, b, 1.0)?)
}

/// `E(z, k) = ∫₀^z √(1−k²t²)/√(1−t²) dt`.
pub fn incomplete_e(z: f64, k: f64) -> Result<f64> {
    let (z, a, b) = incomplete_args(z, k)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    let k2 = k * k;
    Ok(z * carlson_rf(a, b, 1.0)? - k2 * z.powi(3) / 3.0 * carlson_rd(a, b, 1.0)?)
}

/// `Π(z, μ, k) = ∫₀^z dt / ((1−μt²)√((1−t²)(1−k²t²)))`, requires `μz² < 1`.
pub fn incomplete_pi(z: f64, mu: f64, k: f64) -> Result<f64> {
    let (z, a, b) = incomplete_args(z, k)?;
    if !mu.is_finite() || mu * z * z >= 1.0 {
        return Err(domain(format!("incomplete Pi needs mu*z^2 < 1 (mu = {mu}, z = {z})")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let f = z * carlson_rf(a, b, 1.0)?;
    if mu == 0.0 {
        return Ok(f);
    }
    Ok(f + mu * z.powi(3) / 3.0 * carlson_rj(a, b, 1.0, 1.0 - mu * z * z)?)
}

/// `T_n(z) = ∫₀^z t^{2n}/√((1−t²)(1−k²t²)) dt` by the three-term recursion.
pub fn t_n(z: f64, k: f64, n: usize) -> Result<f64> {
    let (z, a, b) = incomplete_args(z, k)?;
    if n >= 2 && k == 0.0 {
        return Err(domain("T_n recursion divides by k^2; k = 0 is excluded for n >= 2"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let t0 = z * carlson_rf(a, b, 1.0)?;
    if n == 0 {
        return Ok(t0);
    }
    // T_1 = (F − E)/k², written without the division so that k = 0 is fine.
    let t1 = z.powi(3) / 3.0 * carlson_rd(a, b, 1.0)?;
    let k2 = k * k;
    let root = (a * b).sqrt();
    let (mut prev, mut cur) = (t0, t1);
    for m in 2..=n {
        let mf = m as f64;
        let d = (2.0 * mf - 1.0) * k2;
        let next = z.powi(2 * m as i32 - 3) * root / d
            + 2.0 * (mf - 1.0) * (k2 + 1.0) / d * cur
            - (2.0 * mf - 3.0) / d * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
