//! Elimination of Π from `I(k) = pK + qE + rΠ(μ(k), k)`.
//!
//! With a gauge `X(k)` whose log-derivative is `g = X'/X`, the identity
//!
//! ```text
//! r² [(I/r)' + g·I/r] = (M·K + N·E) / D
//! ```
//!
//! holds with exact polynomials `M`, `N`, `D`; `X` itself never has to be evaluated.

use nalgebra::DMatrix;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::elliptic::EllipticTriple;
use crate::error::{domain, Error, Result};
use crate::picard_fuchs::MuFunction;
use crate::polyalg::{rat, rat_from_f64, rat_int, Poly, RatFunc, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionCase {
    PolySGe2,
    PolySEq1,
    ConstantMu,
    RationalSpecial,
}

/// The parameter of the third-kind integral as it enters the reduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuSpec {
    Poly(Poly),
    /// `μ = 2k²/(1+k²)`.
    Special,
}

impl MuSpec {
    pub fn to_function(&self) -> MuFunction {
        match self {
            MuSpec::Poly(p) => MuFunction::poly(p.clone()),
            MuSpec::Special => MuFunction::special(),
        }
    }

    pub fn case(&self) -> ReductionCase {
        match self {
            MuSpec::Special => ReductionCase::RationalSpecial,
            MuSpec::Poly(p) => match p.degree() {
                None | Some(0) => ReductionCase::ConstantMu,
                Some(1) => ReductionCase::PolySEq1,
                Some(_) => ReductionCase::PolySGe2,
            },
        }
    }

    /// Degree of μ (0 for the special rational case).
    pub fn degree(&self) -> usize {
        match self {
            MuSpec::Poly(p) => p.degree().unwrap_or(0),
            MuSpec::Special => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionInput {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
    pub mu: MuSpec,
}

impl ReductionInput {
    pub fn new(p: Poly, q: Poly, r: Poly, mu: MuSpec) -> Self {
        ReductionInput { p, q, r, mu }
    }

    pub fn case(&self) -> ReductionCase {
        self.mu.case()
    }

    /// `(m, n, l, s)`, taking the zero polynomial to have degree 0.
    pub fn degrees(&self) -> (usize, usize, usize, usize) {
        let d = |p: &Poly| p.degree().unwrap_or(0);
        (d(&self.p), d(&self.q), d(&self.r), self.mu.degree())
    }

    /// `I(k)` evaluated through the elliptic integrals.
    pub fn eval_i(&self, mu: &MuFunction, k: f64) -> Result<f64> {
        let t = EllipticTriple::new(mu.value(k), k)?;
        Ok(self.p.eval_f64(k) * t.K + self.q.eval_f64(k) * t.E + self.r.eval_f64(k) * t.Pi)
    }
}

/// The nonvanishing factor relating `d/dk(I·X/r)` to `M·K + N·E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleDescription {
    /// Closed form of the gauge `X(k)`, when one exists.
    pub gauge: String,
    /// `g = X'/X`.
    pub log_derivative: RatFunc,
    /// `D(k)` in `r²[(I/r)' + g I/r] = (M K + N E)/D`.
    pub denominator: Poly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedForm {
    pub case: ReductionCase,
    pub m1: Poly,
    pub n1: Poly,
    pub scale: ScaleDescription,
    pub deg_bound_m: usize,
    pub deg_bound_n: usize,
}

impl ReducedForm {
    pub fn degrees_ok(&self) -> bool {
        self.m1.degree().is_none_or(|d| d <= self.deg_bound_m)
            && self.n1.degree().is_none_or(|d| d <= self.deg_bound_n)
    }
}

/// Degree caps on the reduced numerators for the given case and degrees.
pub fn degree_bounds(case: ReductionCase, m: usize, n: usize, l: usize, s: usize) -> (usize, usize) {
    let mx = |v: &[usize]| v.iter().copied().max().unwrap_or(0);
    match case {
        ReductionCase::PolySGe2 => (
            mx(&[n + l + 3 * s + 2, m + l + 3 * s + 2, 2 * l + 2 * s + 2]),
            mx(&[n + l + 3 * s + 2, m + l + 3 * s, 2 * l + 2 * s + 2]),
        ),
        ReductionCase::PolySEq1 => (
            mx(&[n + l + 6, m + l + 6, 2 * l + 5]),
            mx(&[n + l + 6, m + l + 4, 2 * l + 4]),
        ),
        ReductionCase::ConstantMu => (
            mx(&[n + l + 4, m + l + 4]),
            mx(&[n + l + 4, m + l + 2, 2 * l + 2]),
        ),
        ReductionCase::RationalSpecial => (
            mx(&[n + l + 4, m + l + 4, 2 * l + 2]),
            mx(&[n + l + 4, m + l + 2, 2 * l + 2]),
        ),
    }
}

/// Zero-count bound for `pK + qE + rΠ` with polynomial `μ` of degree `s`.
pub fn psi_bound(m: u64, n: u64, l: u64, s: u64) -> u64 {
    let mx = m.max(n);
    match s {
        0 if l <= mx + 2 => 2 * mx + 3 * l + 11,
        0 => mx + 4 * l + 9,
        1 if l <= mx + 1 => 2 * mx + 3 * l + 15,
        1 => 5 * l + 13,
        _ if l <= mx + s => 2 * mx + 3 * l + 6 * s + 7,
        _ => 5 * l + 4 * s + 7,
    }
}

/// Zero-count bound for `μ = 2k²/(1+k²)`.
pub fn psi_bound_rational(m: u64, n: u64, l: u64) -> u64 {
    let mx = m.max(n);
    if l <= mx + 2 {
        2 * mx + 3 * l + 11
    } else {
        5 * l + 7
    }
}

/// Zero-count bound for `pK + qE` (no third-kind term).
pub fn two_kind_bound(m: u64, n: u64) -> u64 {
    m + n + 2
}

fn k_poly() -> Poly {
    Poly::x()
}

fn c(v: i64) -> Poly {
    Poly::constant(rat_int(v))
}

fn half() -> Rational {
    rat(1, 2)
}

fn check_r(input: &ReductionInput) -> Result<()> {
    if input.r.is_zero() {
        return Err(domain("r is identically zero; use the two-kind bound m + n + 2 instead"));
    }
    Ok(())
}

fn wronskian_pair(a: &Poly, r: &Poly) -> Poly {
    &(&a.derivative() * r) - &(a * &r.derivative())
}

/// Polynomial `μ` of degree `s ≥ 1`.
pub fn reduce_poly_mu(input: &ReductionInput) -> Result<ReducedForm> {
    check_r(input)?;
    let mu = match &input.mu {
        MuSpec::Poly(p) if p.degree().unwrap_or(0) >= 1 => p.clone(),
        _ => return Err(domain("reduce_poly_mu needs a non-constant polynomial mu")),
    };
    let k = k_poly();
    let k2 = &k * &k;
    if mu == k2 {
        return Err(Error::Singular("mu(k) = k^2 identically".into()));
    }
    let mu1 = mu.derivative();
    let (p, q, r) = (&input.p, &input.q, &input.r);
    let k_k3 = &k - &(&k2 * &k); // k − k³
    let omk2 = &c(1) - &k2; // 1 − k²
    let k2_mu = &k2 - &mu; // k² − μ
    let mu_mu2 = &mu - &(&mu * &mu); // μ − μ²
    // k(μ−μ²) + ½(μ²−k²)μ'
    let bracket = &(&k * &mu_mu2) + &(&(&mu * &mu) - &k2).scale(&half()) * &mu1;
    let lead = &(&k_k3 * &k2_mu) * &mu_mu2;
    let pr = p * r;
    let qr = q * r;
    let rr = r * r;

    let m1 = &(&(&(&lead * &wronskian_pair(p, r)) + &(&(&k_k3 * &bracket) * &pr))
        - &(&(&(&omk2 * &k2_mu) * &mu_mu2) * &(p + q)) * r)
        - &(&(&k_k3 * &k2_mu) * &mu1).scale(&half()) * &rr;

    let inner = &(&k * &(&c(1) - &mu)) - &(&omk2 * &mu1).scale(&half());
    let n1 = &(&(&(&lead * &wronskian_pair(q, r)) + &(&(&k_k3 * &bracket) * &qr))
        + &(&(&k2_mu * &mu_mu2) * &(p + &(&omk2 * q))) * r)
        + &(&(&k * &mu) * &inner) * &rr;

    // g = k/(k²−μ) + (μ²−k²)μ' / (2μ(1−μ)(k²−μ))
    let two_mu_1mmu_k2mu = (&mu_mu2 * &k2_mu).scale(&rat_int(2));
    let g = &RatFunc::new(k.clone(), k2_mu.clone())?
        + &RatFunc::new(&(&(&mu * &mu) - &k2) * &mu1, two_mu_1mmu_k2mu)?;
    let denom = &(&(&k * &omk2) * &mu_mu2) * &k2_mu;
    let (m, n, l, s) = input.degrees();
    let case = input.case();
    let (bm, bn) = degree_bounds(case, m, n, l, s);
    Ok(ReducedForm {
        case,
        m1,
        n1,
        scale: ScaleDescription {
            gauge: "exp(integral of g dk)".into(),
            log_derivative: g,
            denominator: denom,
        },
        deg_bound_m: bm,
        deg_bound_n: bn,
    })
}

/// Constant `μ ∈ (0, 1)`, gauge `X = √|k² − μ|`.
pub fn reduce_const_mu(input: &ReductionInput) -> Result<ReducedForm> {
    check_r(input)?;
    let mu = match &input.mu {
        MuSpec::Poly(p) if p.degree().unwrap_or(0) == 0 => p.coeff(0),
        _ => return Err(domain("reduce_const_mu needs a constant mu")),
    };
    if mu <= Rational::zero() || mu >= rat_int(1) {
        return Err(domain(format!("constant mu = {mu} must lie in (0, 1)")));
    }
    let k = k_poly();
    let k2 = &k * &k;
    let (p, q, r) = (&input.p, &input.q, &input.r);
    let muc = Poly::constant(mu.clone());
    let k_k3 = &k - &(&k2 * &k);
    let omk2 = &c(1) - &k2;
    let mu_k2 = &muc - &k2;
    let pr = p * r;
    let qr = q * r;
    let lead = &k_k3 * &mu_k2;

    let m1 = &(&(&lead * &wronskian_pair(p, r)) - &(&omk2 * &pr).scale(&mu))
        - &(&(&omk2 * &mu_k2) * &qr);
    // The pr term is +(μ − k²)pr; see the decisions ledger.
    let n1 = &(&(&(&lead * &wronskian_pair(q, r)) + &(&mu_k2 * &pr))
        + &(&(&omk2 * &(&muc - &k2.scale(&rat_int(2)))) * &qr))
        - &(&k2 * &(r * r));

    let g = RatFunc::new(k.clone(), &k2 - &muc)?;
    let denom = &(&k * &omk2) * &mu_k2;
    let (m, n, l, s) = input.degrees();
    let (bm, bn) = degree_bounds(ReductionCase::ConstantMu, m, n, l, s);
    Ok(ReducedForm {
        case: ReductionCase::ConstantMu,
        m1,
        n1,
        scale: ScaleDescription {
            gauge: format!("sqrt(|k^2 - {mu}|)"),
            log_derivative: g,
            denominator: denom,
        },
        deg_bound_m: bm,
        deg_bound_n: bn,
    })
}

/// `μ = 2k²/(1+k²)`, gauge `X = (1−k²)/√(1+k²)`.
pub fn reduce_special(input: &ReductionInput) -> Result<ReducedForm> {
    check_r(input)?;
    if input.mu != MuSpec::Special {
        return Err(domain("reduce_special needs mu = 2k^2/(1+k^2)"));
    }
    let k = k_poly();
    let k2 = &k * &k;
    let k4 = &k2 * &k2;
    let (p, q, r) = (&input.p, &input.q, &input.r);
    let k_k5 = &k - &(&k4 * &k);
    let k4_3k2 = &k4 + &k2.scale(&rat_int(3));
    let omk4 = &c(1) - &k4;
    let opk2 = &c(1) + &k2;
    let pr = p * r;
    let qr = q * r;
    let rr = r * r;

    let m2 = &(&(&(&(&k_k5 * &wronskian_pair(p, r)) - &(&k4_3k2 * &pr)) - &(&omk4 * &pr))
        - &(&omk4 * &qr))
        - &(&opk2 * &rr);
    let n2 = &(&(&(&(&k_k5 * &wronskian_pair(q, r)) - &(&k4_3k2 * &qr)) + &(&opk2 * &pr))
        + &(&omk4 * &qr))
        + &(&opk2 * &rr);

    // g = X'/X = −k(k² + 3)/(1 − k⁴)
    let g = RatFunc::new(-&(&k * &(&k2 + &c(3))), omk4.clone())?;
    let denom = &k * &omk4;
    let (m, n, l, _) = input.degrees();
    let (bm, bn) = degree_bounds(ReductionCase::RationalSpecial, m, n, l, 0);
    Ok(ReducedForm {
        case: ReductionCase::RationalSpecial,
        m1: m2,
        n1: n2,
        scale: ScaleDescription {
            gauge: "(1 - k^2)/sqrt(1 + k^2)".into(),
            log_derivative: g,
            denominator: denom,
        },
        deg_bound_m: bm,
        deg_bound_n: bn,
    })
}

/// Dispatches on the case of `input.mu`.
pub fn reduce(input: &ReductionInput) -> Result<ReducedForm> {
    match input.case() {
        ReductionCase::PolySGe2 | ReductionCase::PolySEq1 => reduce_poly_mu(input),
        ReductionCase::ConstantMu => reduce_const_mu(input),
        ReductionCase::RationalSpecial => reduce_special(input),
    }
}

/// Both sides of the reduction identity at `k`, with `(I/r)'` taken by a
/// five-point central difference of step `h`. Returns `(lhs, rhs)`.
pub fn identity_sides(
    input: &ReductionInput,
    form: &ReducedForm,
    k: f64,
    h: f64,
) -> Result<(f64, f64)> {
    let mu = input.mu.to_function();
    let f = |t: f64| -> Result<f64> {
        let rv = input.r.eval_f64(t);
        if rv == 0.0 {
            return Err(Error::Singular(format!("r vanishes at {t}")));
        }
        Ok(input.eval_i(&mu, t)? / rv)
    };
    let d = (f(k - 2.0 * h)? - 8.0 * f(k - h)? + 8.0 * f(k + h)? - f(k + 2.0 * h)?) / (12.0 * h);
    let g = form.scale.log_derivative.eval_f64(k);
    let rv = input.r.eval_f64(k);
    let lhs = rv * rv * (d + g * f(k)?);
    let t = EllipticTriple::new(mu.value(k), k)?;
    let den = form.scale.denominator.eval_f64(k);
    if den == 0.0 {
        return Err(Error::Singular(format!("reduction denominator vanishes at {k}")));
    }
    let rhs = (form.m1.eval_f64(k) * t.K + form.n1.eval_f64(k) * t.E) / den;
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interpolant {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
    /// Dimension of the numerical null space (≥ 1 by construction).
    pub corank: usize,
    /// Ratio of the smallest kept singular value to the largest.
    pub rank_gap: f64,
}

/// Nontrivial `(p, q, r)` of degrees `(m, n, l)` with `I(k_i) = 0` at every point.
pub fn interpolate_zeros(
    points: &[f64],
    m: usize,
    n: usize,
    l: usize,
    mu: &MuFunction,
) -> Result<Interpolant> {
    let rows = m + n + l + 2;
    let cols = rows + 1;
    if points.len() != rows {
        return Err(domain(format!("need exactly {rows} points, got {}", points.len())));
    }
    for (i, &a) in points.iter().enumerate() {
        if !(a.abs() < 1.0) {
            return Err(domain(format!("point {a} outside (-1, 1)")));
        }
        if points[..i].contains(&a) {
            return Err(domain(format!("duplicate point {a}")));
        }
    }
    // Square matrix: the extra zero row guarantees a full set of right singular vectors.
    let mut a = DMatrix::<f64>::zeros(cols, cols);
    for (i, &k) in points.iter().enumerate() {
        let t = EllipticTriple::new(mu.value(k), k)?;
        let mut col = 0;
        for (deg, val) in [(m, t.K), (n, t.E), (l, t.Pi)] {
            for j in 0..=deg {
                a[(i, col)] = k.powi(j as i32) * val;
                col += 1;
            }
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let smax = svd.singular_values[order[0]];
    if smax == 0.0 {
        return Err(Error::AmbiguousRank("all sample values vanish".into()));
    }
    let rel: Vec<f64> = order.iter().map(|&i| svd.singular_values[i] / smax).collect();
    let tol = 1e-10;
    let corank = rel.iter().filter(|&&s| s < tol).count();
    if rel.iter().any(|&s| (tol..1e-7).contains(&s)) {
        return Err(Error::AmbiguousRank(format!(
            "singular values {rel:?} straddle the rank threshold"
        )));
    }
    let rank_gap = rel.iter().filter(|&&s| s >= tol).fold(1.0f64, |a, &b| a.min(b));
    let idx = *order.last().expect("nonempty");
    let mut v: Vec<f64> = (0..cols).map(|j| v_t[(idx, j)]).collect();
    let big = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if big == 0.0 {
        return Err(Error::Structural("null vector vanished".into()));
    }
    // Normalize: largest entry +1 (sign fixed for determinism).
    let pivot = v.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    for x in &mut v {
        *x /= pivot;
    }
    let to_poly = |s: &[f64]| -> Result<Poly> {
        Ok(Poly::from_coeffs(s.iter().map(|&x| rat_from_f64(x)).collect::<Result<_>>()?))
    };
    Ok(Interpolant {
        p: to_poly(&v[..=m])?,
        q: to_poly(&v[m + 1..m + n + 2])?,
        r: to_poly(&v[m + n + 2..])?,
        corank,
        rank_gap,
    })
}
