//! Sign-change zero counting for `I(k) = pK + qE + rΠ` and general scalar functions.

use serde::{Deserialize, Serialize};

use crate::elliptic::EllipticTriple;
use crate::error::{domain, Error, Result};
use crate::picard_fuchs::MuFunction;
use crate::polyalg::{FloatPoly, Poly};
use crate::reduction::{psi_bound, psi_bound_rational, two_kind_bound, MuSpec};

/// Largest grid (in intervals) tried before giving up on stabilization.
pub const MAX_GRID: usize = 1 << 16;
/// Distance kept from the logarithmic singularities at k = ±1.
pub const EDGE_MARGIN: f64 = 1e-4;
const BRACKET_WIDTH: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootBracket {
    pub location: f64,
    pub bracket_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// Certified sign changes, in increasing order.
    pub roots: Vec<RootBracket>,
    /// Suspected even-multiplicity zeros; excluded from the count.
    pub touch_points: Vec<f64>,
    /// Grid (number of intervals) at which the count stabilized.
    pub grid_used: usize,
    /// Counts seen at each grid doubling.
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub roots: Vec<RootBracket>,
    pub count: usize,
    pub bound: Option<u64>,
    pub bound_satisfied: bool,
    pub touch_points: Vec<f64>,
    pub grid_used: usize,
    pub interval: (f64, f64),
}

impl ZeroReport {
    pub fn from_scan(scan: ScanResult, bound: Option<u64>, interval: (f64, f64)) -> Self {
        let count = scan.roots.len();
        ZeroReport {
            count,
            bound_satisfied: bound.is_none_or(|b| count as u64 <= b),
            roots: scan.roots,
            bound,
            touch_points: scan.touch_points,
            grid_used: scan.grid_used,
            interval,
        }
    }
}

/// Which published bound applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    Psi { m: u64, n: u64, l: u64, s: u64 },
    Rational { m: u64, n: u64, l: u64 },
    TwoKind { m: u64, n: u64 },
    Melnikov { n: u64 },
}

impl BoundCase {
    pub fn value(&self) -> u64 {
        match *self {
            BoundCase::Psi { m, n, l, s } => psi_bound(m, n, l, s),
            BoundCase::Rational { m, n, l } => psi_bound_rational(m, n, l),
            BoundCase::TwoKind { m, n } => two_kind_bound(m, n),
            BoundCase::Melnikov { n } => melnikov_bound(n),
        }
    }
}

/// `⌊11n/2⌋ + 43`.
pub fn melnikov_bound(n: u64) -> u64 {
    11 * n / 2 + 43
}

pub fn check_theorem_bound(report: &ZeroReport, case: BoundCase) -> bool {
    report.count as u64 <= case.value()
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

struct Grid {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

fn sample<F: Fn(f64) -> Result<f64>>(f: &F, x: f64) -> Result<f64> {
    let v = f(x)?;
    if !v.is_finite() {
        return Err(Error::NonFinite { at: x });
    }
    Ok(v)
}

fn grid_x(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64 / n as f64)
    }
}

/// Doubles `g`, reusing the existing samples at even indices.
fn refine_grid<F: Fn(f64) -> Result<f64>>(f: &F, g: &Grid, lo: f64, hi: f64) -> Result<Grid> {
    let n = 2 * (g.xs.len() - 1);
    let mut xs = Vec::with_capacity(n + 1);
    let mut fs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i % 2 == 0 {
            xs.push(g.xs[i / 2]);
            fs.push(g.fs[i / 2]);
        } else {
            let x = grid_x(lo, hi, n, i);
            xs.push(x);
            fs.push(sample(f, x)?);
        }
    }
    Ok(Grid { xs, fs })
}

#[derive(Clone, Copy)]
enum Crossing {
    Bracket(usize),
    ExactZero(usize),
}

fn crossings(g: &Grid) -> Vec<Crossing> {
    let mut out = Vec::new();
    let n = g.fs.len();
    for i in 0..n - 1 {
        let (a, b) = (sign(g.fs[i]), sign(g.fs[i + 1]));
        if a * b < 0 {
            out.push(Crossing::Bracket(i));
        }
        if b == 0 && i + 2 < n {
            // Exact zero at an interior sample: a crossing only if the
            // neighbours disagree in sign.
            let c = sign(g.fs[i + 2]);
            if a * c < 0 {
                out.push(Crossing::ExactZero(i + 1));
            }
        }
    }
    out
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> Result<RootBracket> {
    while b - a > BRACKET_WIDTH {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = sample(f, m)?;
        if fm == 0.0 {
            return Ok(RootBracket {
                location: m,
                bracket_width: 0.0,
            });
        }
        if sign(fm) == sign(fa) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(RootBracket {
        location: 0.5 * (a + b),
        bracket_width: b - a,
    })
}

/// Golden-section search for a near-zero minimum of |f| inside a same-sign dip.
fn probe_touch<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, scale: f64) -> Result<Option<f64>> {
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    let mut fc = sample(f, c)?.abs();
    let mut fd = sample(f, d)?.abs();
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = sample(f, c)?.abs();
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = sample(f, d)?.abs();
        }
        if b - a < 1e-12 {
            break;
        }
    }
    let (x, v) = if fc < fd { (c, fc) } else { (d, fd) };
    Ok((v <= 1e-10 * scale).then_some(x))
}

/// Counts sign changes of `f` on `[lo, hi]`, doubling the grid from `grid`
/// intervals until two consecutive counts agree.
pub fn scan<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64, grid: usize) -> Result<ScanResult> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(domain(format!("empty scan interval [{lo}, {hi}]")));
    }
    if grid < 2 {
        return Err(domain("grid needs at least 2 intervals"));
    }
    let mut g = Grid {
        xs: (0..=grid).map(|i| grid_x(lo, hi, grid, i)).collect(),
        fs: Vec::with_capacity(grid + 1),
    };
    for &x in &g.xs {
        g.fs.push(sample(&f, x)?);
    }
    let mut counts = vec![crossings(&g).len()];
    loop {
        let n = g.xs.len() - 1;
        if n * 2 > MAX_GRID.max(grid) {
            return Err(Error::CountUnstable {
                max_grid: MAX_GRID,
                counts,
            });
        }
        g = refine_grid(&f, &g, lo, hi)?;
        let c = crossings(&g).len();
        let stable = counts.last() == Some(&c);
        counts.push(c);
        if stable {
            break;
        }
    }

    let mut roots = Vec::new();
    for cr in crossings(&g) {
        match cr {
            Crossing::Bracket(i) => roots.push(bisect(&f, g.xs[i], g.xs[i + 1], g.fs[i])?),
            Crossing::ExactZero(i) => roots.push(RootBracket {
                location: g.xs[i],
                bracket_width: 0.0,
            }),
        }
    }

    let scale = g.fs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let mut touch_points = Vec::new();
    let n = g.fs.len();
    for i in 1..n - 1 {
        let (l, m, r) = (g.fs[i - 1], g.fs[i], g.fs[i + 1]);
        if m == 0.0 && sign(l) * sign(r) > 0 {
            touch_points.push(g.xs[i]);
            continue;
        }
        if sign(l) == sign(m) && sign(m) == sign(r) && m.abs() < l.abs() && m.abs() <= r.abs() {
            if let Some(x) = probe_touch(&f, g.xs[i - 1], g.xs[i + 1], scale)? {
                touch_points.push(x);
            }
        }
    }

    Ok(ScanResult {
        roots,
        touch_points,
        grid_used: g.xs.len() - 1,
        counts,
    })
}

/// Clamps an interval to stay `EDGE_MARGIN` inside (−1, 1).
pub fn clamp_interval(lo: f64, hi: f64) -> Result<(f64, f64)> {
    let a = lo.max(-1.0 + EDGE_MARGIN);
    let b = hi.min(1.0 - EDGE_MARGIN);
    if !(a < b) {
        return Err(domain(format!("interval ({lo}, {hi}) is empty after clamping")));
    }
    Ok((a, b))
}

/// The bound that applies to `pK + qE + rΠ(μ)`.
pub fn bound_case(p: &Poly, q: &Poly, r: &Poly, mu: &MuSpec) -> BoundCase {
    let d = |x: &Poly| x.degree().unwrap_or(0) as u64;
    let (m, n, l) = (d(p), d(q), d(r));
    if r.is_zero() {
        return BoundCase::TwoKind { m, n };
    }
    match mu {
        MuSpec::Special => BoundCase::Rational { m, n, l },
        MuSpec::Poly(mp) => BoundCase::Psi {
            m,
            n,
            l,
            s: mp.degree().unwrap_or(0) as u64,
        },
    }
}

/// Evaluator for `I(k)`; skips Π entirely when `r ≡ 0`.
pub struct IEvaluator {
    p: FloatPoly,
    q: FloatPoly,
    r: FloatPoly,
    r_zero: bool,
    mu: MuFunction,
}

impl IEvaluator {
    pub fn new(p: &Poly, q: &Poly, r: &Poly, mu: &MuSpec) -> Self {
        IEvaluator {
            p: p.to_f64(),
            q: q.to_f64(),
            r: r.to_f64(),
            r_zero: r.is_zero(),
            mu: mu.to_function(),
        }
    }

    pub fn eval(&self, k: f64) -> Result<f64> {
        if self.r_zero {
            let t = EllipticTriple::new(0.0, k)?;
            return Ok(self.p.eval(k) * t.K + self.q.eval(k) * t.E);
        }
        let t = EllipticTriple::new(self.mu.value(k), k)?;
        Ok(self.p.eval(k) * t.K + self.q.eval(k) * t.E + self.r.eval(k) * t.Pi)
    }
}

/// Zeros of `I(k)` on `interval` (clamped inside (−1, 1)), compared with the applicable bound.
pub fn count_zeros(
    p: &Poly,
    q: &Poly,
    r: &Poly,
    mu: &MuSpec,
    interval: (f64, f64),
    grid: usize,
) -> Result<ZeroReport> {
    if grid < 64 {
        return Err(domain(format!("grid = {grid} must be at least 64")));
    }
    let (lo, hi) = clamp_interval(interval.0, interval.1)?;
    let ev = IEvaluator::new(p, q, r, mu);
    let s = scan(|k| ev.eval(k), lo, hi, grid)?;
    let bound = bound_case(p, q, r, mu).value();
    Ok(ZeroReport::from_scan(s, Some(bound), (lo, hi)))
}
