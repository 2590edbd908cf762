//! Level curves of `H = x²y(1−x−y)` split by the line `y = (1−x)/2`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Upper limit of the energy range; the center `(1/2, 1/4)` sits at `h = 1/64`.
pub const H_MAX: f64 = 1.0 / 64.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub h: f64,
    pub u: f64,
    pub a: f64,
    pub b: f64,
    pub k: f64,
    pub x0: f64,
    pub x1: f64,
    /// `2√h`, kept separately because `h` itself loses digits near the center.
    pub two_sqrt_h: f64,
}

/// Arc above (`Upper`, Γ⁺) or below (`Lower`, Γ⁻) the switching line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Upper => 1,
            Branch::Lower => -1,
        }
    }

    pub fn both() -> [Branch; 2] {
        [Branch::Upper, Branch::Lower]
    }
}

pub fn hamiltonian(x: f64, y: f64) -> f64 {
    x * x * y * (1.0 - x - y)
}

pub fn level_params(h: f64) -> Result<LevelCurve> {
    if !(h > 0.0 && h < H_MAX) {
        return Err(domain(format!("energy h = {h} outside (0, 1/64)")));
    }
    let s8 = 8.0 * h.sqrt();
    Ok(build(h, (1.0 - s8).sqrt(), s8))
}

impl LevelCurve {
    /// Curve with `u = √(1−8√h)`; exact in `u`, which the scanners prefer.
    pub fn from_u(u: f64) -> Result<LevelCurve> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!("u = {u} outside (0, 1)")));
        }
        let s8 = (1.0 - u) * (1.0 + u);
        Ok(build(s8 * s8 / 64.0, u, s8))
    }
}

fn build(h: f64, u: f64, s8: f64) -> LevelCurve {
    LevelCurve {
        h,
        u,
        a: 2.0 / u,
        b: 2.0 / (1.0 + s8).sqrt(),
        k: u / (1.0 + s8).sqrt(),
        x0: 0.5 * (1.0 - u),
        x1: 0.5 * (1.0 + u),
        two_sqrt_h: 0.25 * s8,
    }
}

/// `u` as a function of `h`.
pub fn u_of_h(h: f64) -> f64 {
    (1.0 - 8.0 * h.sqrt()).sqrt()
}

/// `h` as a function of `u`.
pub fn h_of_u(u: f64) -> f64 {
    let s = (1.0 - u) * (1.0 + u) / 8.0;
    s * s
}

/// `x⁴ − 2x³ + x² − 4h`, factored to keep digits near the endpoints.
fn radicand(x: f64, c: &LevelCurve) -> f64 {
    let p = x * (1.0 - x);
    (p - c.two_sqrt_h) * (p + c.two_sqrt_h)
}

pub fn branch_y(x: f64, curve: &LevelCurve, branch: Branch) -> Result<f64> {
    let slack = 1e-14;
    if x < curve.x0 - slack || x > curve.x1 + slack {
        return Err(domain(format!("x = {x} outside [{}, {}]", curve.x0, curve.x1)));
    }
    let mut r = radicand(x, curve);
    if r < 0.0 {
        if r < -1e-14 {
            return Err(domain(format!("negative radicand {r:e} at x = {x}")));
        }
        r = 0.0;
    }
    let s = r.sqrt() / (2.0 * x);
    Ok(0.5 * (1.0 - x) + branch.sign() as f64 * s)
}

/// Point and tangent on a branch under `x = 1/2 + (u/2) sin θ`, θ ∈ [−π/2, π/2].
/// Returns `(x, y, dx/dθ, dy/dθ)`; all four are smooth in θ.
pub fn branch_point(curve: &LevelCurve, theta: f64, branch: Branch) -> (f64, f64, f64, f64) {
    let sg = branch.sign() as f64;
    let hu = 0.5 * curve.u;
    let x = 0.5 + hu * theta.sin();
    let c = theta.cos().max(0.0);
    let q = (x * (1.0 - x) + curve.two_sqrt_h).sqrt();
    // √R = (u/2) cos θ · √(x(1−x) + 2√h)
    let s = hu * c * q;
    let y = 0.5 * (1.0 - x) + sg * s / (2.0 * x);
    let dx = hu * c;
    let dy = dx * (-0.5 - sg * s / (2.0 * x * x)) + sg * (1.0 - x) * (1.0 - 2.0 * x) / (2.0 * q);
    (x, y, dx, dy)
}
