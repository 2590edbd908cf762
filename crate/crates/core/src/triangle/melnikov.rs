//! Generator values, Melnikov evaluation (closed form and direct quadrature)
//! and the zero report.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::engine::{generator_offsets, melnikov_decompose, Decomposition};
use super::geometry::{branch_point, h_of_u, level_params, u_of_h, Branch, LevelCurve, H_MAX};
use super::spec::{FloatSide, PerturbationSpec};
use crate::elliptic::EllipticTriple;
use crate::error::{Error, Result};
use crate::polyalg::FloatPoly;
use crate::quad::{integrate, QuadOptions};
use crate::zero_count::{melnikov_bound, scan, RootBracket, ZeroReport};

/// Margin kept from both ends of `(0, 1/64)` when scanning.
pub const ENERGY_MARGIN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorValues {
    pub i00: f64,
    pub i20: f64,
    pub i30: f64,
    pub j00: f64,
    pub j20: f64,
    pub j30: f64,
}

impl GeneratorValues {
    pub fn as_array(&self) -> [f64; 6] {
        [self.i00, self.i20, self.i30, self.j00, self.j20, self.j30]
    }
}

/// Full-loop integrals `(W_{−1}, W_1, W_2)`, `W_e = ∫_{x0}^{x1} x^e √(x⁴−2x³+x²−4h) dx`,
/// in terms of `K, E, Π(u², u/√(2−u²))`.
pub fn loop_integrals_closed(curve: &LevelCurve) -> Result<[f64; 3]> {
    let u2 = curve.u * curve.u;
    let v = 1.0 - u2;
    let s = (2.0 - u2).sqrt();
    let t = EllipticTriple::new(u2, curve.k)?;
    let w_m1 = ((2.0 - u2) * t.E - v * t.K - v * v * t.Pi) / (2.0 * s);
    let w1 = s / 12.0 * (t.E - v * t.K);
    let w2 = s / 40.0 * ((u2 * u2 - 2.0 * u2 + 3.0) * t.E - (u2 * u2 - 4.0 * u2 + 3.0) * t.K);
    Ok([w_m1, w1, w2])
}

pub fn generator_values_closed(curve: &LevelCurve) -> Result<GeneratorValues> {
    let w = loop_integrals_closed(curve)?;
    let up = generator_offsets(Branch::Upper);
    let lo = generator_offsets(Branch::Lower);
    let g = |i: usize, off: &[crate::polyalg::Poly; 3]| 0.5 * w[i] + off[i].eval_f64(curve.u);
    Ok(GeneratorValues {
        i00: g(0, up),
        i20: g(1, up),
        i30: g(2, up),
        j00: g(0, lo),
        j20: g(1, lo),
        j30: g(2, lo),
    })
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 2000,
    }
}

/// `∫_Γ F(x, y, dx, dy)` along one branch, counterclockwise, by θ-quadrature.
pub fn branch_integral<F: Fn(f64, f64, f64, f64) -> f64>(curve: &LevelCurve, branch: Branch, f: F) -> Result<f64> {
    let r = integrate(
        |th| {
            let (x, y, dx, dy) = branch_point(curve, th, branch);
            f(x, y, dx, dy)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        quad_opts(),
    )?;
    // Γ⁺ runs from x1 to x0 (θ decreasing), Γ⁻ from x0 to x1.
    Ok(-(branch.sign() as f64) * r.value)
}

/// `I_{i,j}` (upper) or `J_{i,j}` (lower) by quadrature: `(1/(i+1)) ∫_Γ x^{i+1} y^j dy`.
pub fn half_loop_quadrature(i: u32, j: u32, branch: Branch, curve: &LevelCurve) -> Result<f64> {
    let v = branch_integral(curve, branch, |x, y, _, dy| x.powi(i as i32 + 1) * y.powi(j as i32) * dy)?;
    Ok(v / (i as f64 + 1.0))
}

pub fn generator_values_quadrature(curve: &LevelCurve) -> Result<GeneratorValues> {
    let q = |i, b| half_loop_quadrature(i, 0, b, curve);
    Ok(GeneratorValues {
        i00: q(0, Branch::Upper)?,
        i20: q(2, Branch::Upper)?,
        i30: q(3, Branch::Upper)?,
        j00: q(0, Branch::Lower)?,
        j20: q(2, Branch::Lower)?,
        j30: q(3, Branch::Lower)?,
    })
}

/// Float evaluator for a decomposition.
pub struct MelnikovEvaluator {
    coeffs: [FloatPoly; 6],
    phi_h: FloatPoly,
    phi_0: FloatPoly,
    log: FloatPoly,
}

impl MelnikovEvaluator {
    pub fn new(d: &Decomposition) -> Self {
        MelnikovEvaluator {
            coeffs: [&d.alpha_p, &d.beta_p, &d.gamma_p, &d.alpha_m, &d.beta_m, &d.gamma_m].map(|p| p.to_f64()),
            phi_h: d.phi_h.to_f64(),
            phi_0: d.phi_0.to_f64(),
            log: d.log_coeff.to_f64(),
        }
    }

    pub fn eval_curve(&self, c: &LevelCurve) -> Result<f64> {
        let g = generator_values_closed(c)?.as_array();
        let mut s = 0.0;
        for (p, v) in self.coeffs.iter().zip(g) {
            s += p.eval(c.h) * v;
        }
        s += c.h * self.phi_h.eval(c.u) + self.phi_0.eval(c.u);
        // ln((1+u)/(1−u)) = 2 artanh u
        s += self.log.eval(c.h) * 2.0 * c.u.atanh();
        Ok(s)
    }

    pub fn eval_u(&self, u: f64) -> Result<f64> {
        self.eval_curve(&LevelCurve::from_u(u)?)
    }
}

pub fn melnikov_eval(dec: &Decomposition, h: f64) -> Result<f64> {
    MelnikovEvaluator::new(dec).eval_curve(&level_params(h)?)
}

fn side_integral(curve: &LevelCurve, branch: Branch, side: &FloatSide) -> Result<f64> {
    if side.f.is_empty() && side.g.is_empty() {
        return Ok(0.0);
    }
    branch_integral(curve, branch, |x, y, dx, dy| {
        let (f, g) = side.eval(x, y);
        g * dx - f * dy
    })
}

/// `∫_{Γ⁺} g⁺dx − f⁺dy + ∫_{Γ⁻} g⁻dx − f⁻dy` by direct quadrature.
pub fn melnikov_eval_quadrature(spec: &PerturbationSpec, h: f64) -> Result<f64> {
    let c = level_params(h)?;
    let (up, lo) = spec.float_sides();
    Ok(side_integral(&c, Branch::Upper, &up)? + side_integral(&c, Branch::Lower, &lo)?)
}

/// Sample values `(h, u, I(h))` on a uniform `u` grid, for plotting.
pub fn melnikov_sweep(dec: &Decomposition, points: usize) -> Result<Vec<(f64, f64, f64)>> {
    let ev = MelnikovEvaluator::new(dec);
    let (lo, hi) = u_range();
    let n = points.max(2);
    (0..n)
        .map(|i| {
            let u = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            Ok((h_of_u(u), u, ev.eval_u(u)?))
        })
        .collect()
}

/// `u` range corresponding to `h ∈ [ε, 1/64 − ε]`.
pub fn u_range() -> (f64, f64) {
    (u_of_h(H_MAX - ENERGY_MARGIN), u_of_h(ENERGY_MARGIN))
}

/// Zeros of `I(h)` on `(ε, 1/64 − ε)`, scanned uniformly in `u`; roots are
/// reported in `h`, in increasing order.
pub fn melnikov_zero_report(spec: &PerturbationSpec, grid: usize) -> Result<ZeroReport> {
    let dec = melnikov_decompose(spec)?;
    let ev = MelnikovEvaluator::new(&dec);
    let (lo, hi) = u_range();

    let probes = 64;
    let mut all_small = true;
    for i in 0..probes {
        let t = ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * probes) as f64).cos();
        let u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
        if ev.eval_u(u)?.abs() >= 1e-13 {
            all_small = false;
            break;
        }
    }
    if all_small {
        return Err(Error::PossiblyIdenticallyZero);
    }

    let s = scan(|u| ev.eval_u(u), lo, hi, grid)?;
    let mut roots: Vec<RootBracket> = s
        .roots
        .iter()
        .map(|r| {
            let a = h_of_u(r.location - 0.5 * r.bracket_width);
            let b = h_of_u(r.location + 0.5 * r.bracket_width);
            RootBracket {
                location: h_of_u(r.location),
                bracket_width: (a - b).abs(),
            }
        })
        .collect();
    roots.reverse();
    let mut touch: Vec<f64> = s.touch_points.iter().map(|&u| h_of_u(u)).collect();
    touch.reverse();
    let count = roots.len();
    let bound = melnikov_bound(spec.n as u64);
    Ok(ZeroReport {
        roots,
        count,
        bound: Some(bound),
        bound_satisfied: count as u64 <= bound,
        touch_points: touch,
        grid_used: s.grid_used,
        interval: (ENERGY_MARGIN, H_MAX - ENERGY_MARGIN),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rat;

    #[test]
    fn closed_generators_match_quadrature() {
        for h in [0.002, 0.005, 0.01, 0.014] {
            let c = level_params(h).unwrap();
            let a = generator_values_closed(&c).unwrap().as_array();
            let b = generator_values_quadrature(&c).unwrap().as_array();
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 1e-10 * y.abs().max(1e-3), "h={h}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn small_spec_matches_quadrature() {
        let mut s = PerturbationSpec::new(3);
        s.a_plus.insert((1, 1), rat(1, 2));
        s.b_plus.insert((0, 2), rat(-1, 3));
        s.a_minus.insert((2, 1), rat(2, 1));
        s.b_minus.insert((1, 0), rat(3, 4));
        let d = melnikov_decompose(&s).unwrap();
        for h in [0.003, 0.008, 0.013] {
            let a = melnikov_eval(&d, h).unwrap();
            let b = melnikov_eval_quadrature(&s, h).unwrap();
            assert!((a - b).abs() < 1e-10 * b.abs().max(1e-3), "h={h}: {a} vs {b}");
        }
    }
}
