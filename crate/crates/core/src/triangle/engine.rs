//! Exact reduction of half-loop integrals to the six generators.
//!
//! Every line integral over Γ± is turned into `∫_{x0}^{x1} x^a y±^m dx` by
//! integration by parts, and `y± = ((1−x) ± S/x)/2` with `S = √R`,
//! `R = x²(1−x)² − 4h`, is expanded binomially. Even powers of `S` give a
//! Laurent polynomial in `x` (integrated exactly; `x⁻¹` produces
//! `ln((1+u)/(1−u))`), odd powers give `W_e = ∫ x^e S dx`, which the
//! recurrence
//!
//!   (a+6)W_{a+3} − (2a+9)W_{a+2} + (a+3)W_{a+1} − 4ahW_{a−1} = 0
//!
//! together with `W_0 = 2W_1` reduces to `W_{−1}, W_1, W_2`.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::geometry::Branch;
use super::spec::PerturbationSpec;
use crate::error::{Error, Result};
use crate::polyalg::{rat, rat_int, Poly, Rational};

/// `h = ((1 − u²)/8)²` as a polynomial in `u`.
pub fn h_in_u() -> Poly {
    Poly::from_ratios(&[(1, 64), (0, 1), (-2, 64), (0, 1), (1, 64)])
}

fn x0_poly() -> Poly {
    Poly::from_ratios(&[(1, 2), (-1, 2)])
}

fn x1_poly() -> Poly {
    Poly::from_ratios(&[(1, 2), (1, 2)])
}

fn binom(n: u32, k: u32) -> Rational {
    rat_int(num_integer::binomial(n as i64, k as i64))
}

fn zero() -> Rational {
    rat_int(0)
}

/// Laurent polynomial in `h` (the recurrence divides by `h` going down).
#[derive(Clone, Debug, Default, PartialEq)]
struct HLaurent(BTreeMap<i64, Rational>);

impl HLaurent {
    fn monomial(c: Rational, e: i64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(e, c);
        HLaurent(m)
    }

    /// `self += c · h^shift · other`
    fn add_scaled(&mut self, other: &HLaurent, c: &Rational, shift: i64) {
        for (e, v) in &other.0 {
            let slot = self.0.entry(e + shift).or_insert_with(zero);
            *slot += c * v;
        }
        self.0.retain(|_, v| *v != zero());
    }

    /// `self += p(h) · other`
    fn add_poly_times(&mut self, p: &Poly, other: &HLaurent) {
        for (i, c) in p.coeffs().iter().enumerate() {
            if *c != zero() {
                self.add_scaled(other, c, i as i64);
            }
        }
    }

    fn to_poly(&self) -> Result<Poly> {
        if let Some((&e, _)) = self.0.iter().next() {
            if e < 0 {
                return Err(Error::Structural(format!(
                    "generator coefficient keeps a pole h^{e} at the center"
                )));
            }
        }
        let deg = self.0.keys().next_back().copied().unwrap_or(0).max(0) as usize;
        let mut c = vec![zero(); deg + 1];
        for (&e, v) in &self.0 {
            c[e as usize] = v.clone();
        }
        Ok(Poly::from_coeffs(c))
    }
}

type WRow = [HLaurent; 3];

/// `W_e` for `e ∈ [lo, hi]` in the basis `(W_{−1}, W_1, W_2)`.
struct WTable {
    rows: HashMap<i64, WRow>,
}

impl WTable {
    fn new(lo: i64, hi: i64) -> Self {
        let unit = |g: usize, c: Rational| {
            let mut r: WRow = Default::default();
            r[g] = HLaurent::monomial(c, 0);
            r
        };
        let mut rows = HashMap::new();
        rows.insert(-1, unit(0, rat_int(1)));
        rows.insert(0, unit(1, rat_int(2)));
        rows.insert(1, unit(1, rat_int(1)));
        rows.insert(2, unit(2, rat_int(1)));
        for e in 3..=hi.max(2) {
            let a = e - 3;
            let mut r: WRow = Default::default();
            let d = rat_int(a + 6);
            for g in 0..3 {
                r[g].add_scaled(&rows[&(e - 1)][g], &(rat_int(2 * a + 9) / &d), 0);
                r[g].add_scaled(&rows[&(e - 2)][g], &(rat_int(-(a + 3)) / &d), 0);
                r[g].add_scaled(&rows[&(e - 4)][g], &(rat_int(4 * a) / &d), 1);
            }
            rows.insert(e, r);
        }
        let mut e = -2;
        while e >= lo {
            let a = e + 1;
            let d = rat_int(4 * a);
            let mut r: WRow = Default::default();
            for g in 0..3 {
                r[g].add_scaled(&rows[&(a + 3)][g], &(rat_int(a + 6) / &d), -1);
                r[g].add_scaled(&rows[&(a + 2)][g], &(rat_int(-(2 * a + 9)) / &d), -1);
                r[g].add_scaled(&rows[&(a + 1)][g], &(rat_int(a + 3) / &d), -1);
            }
            rows.insert(e, r);
            e -= 1;
        }
        WTable { rows }
    }
}

/// Laurent polynomial in `x` with coefficients in `Q[h]`.
type XLaurent = BTreeMap<i64, Poly>;

fn add_x(m: &mut XLaurent, e: i64, c: Poly) {
    if c.is_zero() {
        return;
    }
    let slot = m.entry(e).or_insert_with(Poly::zero);
    *slot = &*slot + &c;
}

/// Integrand expansion: `plain + S · weighted`.
#[derive(Clone, Debug, Default)]
struct Expansion {
    plain: XLaurent,
    weighted: XLaurent,
}

impl Expansion {
    /// Adds `c · x^a · y^m` on `branch`.
    fn add_power(&mut self, c: &Rational, a: i64, m: u32, branch: Branch) {
        let sg = branch.sign();
        let base = c / rat_int(1i64 << m);
        for t in 0..=m {
            let s = t / 2;
            let mut ct = &base * binom(m, t);
            if t % 2 == 1 && sg < 0 {
                ct = -ct;
            }
            for r in 0..=s {
                // C(s,r) (−4h)^{s−r} x^{2r} (1−x)^{2r}
                let hc = Poly::monomial(&ct * binom(s, r) * rat_int((-4i64).pow(s - r)), (s - r) as usize);
                let p = m - t + 2 * r;
                let e0 = a - t as i64 + 2 * r as i64;
                for q in 0..=p {
                    let mut cq = binom(p, q);
                    if q % 2 == 1 {
                        cq = -cq;
                    }
                    let term = hc.scale(&cq);
                    let dst = if t % 2 == 0 { &mut self.plain } else { &mut self.weighted };
                    add_x(dst, e0 + q as i64, term);
                }
            }
        }
    }
}

/// Reduced value of a linear combination of integrals on one side.
#[derive(Clone, Debug, PartialEq, Default)]
struct Reduced {
    /// Coefficients of `W_{−1}, W_1, W_2`, polynomials in `h`.
    w: [Poly; 3],
    /// Polynomial part in `u`.
    poly: Poly,
    /// Coefficient of `ln((1+u)/(1−u))`, polynomial in `h`.
    log: Poly,
}

/// Exactly integrates an expansion over `[x0, x1]`, plus a boundary polynomial in `u`.
fn integrate(exp: &Expansion, boundary: &Poly) -> Result<Reduced> {
    let hu = h_in_u();
    let (x0, x1) = (x0_poly(), x1_poly());
    let one_minus_u2 = Poly::from_i64s(&[1, 0, -1]);

    let mut poly = boundary.clone();
    let mut log = Poly::zero();
    // numerators over (1 − u²)^p
    let mut fractions: BTreeMap<u32, Poly> = BTreeMap::new();
    for (&e, c) in &exp.plain {
        if e == -1 {
            log = &log + c;
            continue;
        }
        let cu = c.compose(&hu);
        if e >= 0 {
            let n = (e + 1) as u32;
            let prim = (&x1.pow(n) - &x0.pow(n)).scale(&rat(1, e + 1));
            poly = &poly + &(&cu * &prim);
        } else {
            // ∫ x^e = (x1^{e+1} − x0^{e+1})/(e+1), x0 = (1−u)/2, x1 = (1+u)/2
            let p = (-(e + 1)) as u32;
            let one_m = Poly::from_i64s(&[1, -1]).pow(p);
            let one_p = Poly::from_i64s(&[1, 1]).pow(p);
            let num = (&one_m - &one_p).scale(&(rat_int(1i64 << p) / rat_int(e + 1)));
            let slot = fractions.entry(p).or_insert_with(Poly::zero);
            *slot = &*slot + &(&cu * &num);
        }
    }
    if let Some(&pmax) = fractions.keys().next_back() {
        let mut num = Poly::zero();
        for (&p, f) in &fractions {
            num = &num + &(f * &one_minus_u2.pow(pmax - p));
        }
        let q = num
            .div_exact(&one_minus_u2.pow(pmax))
            .map_err(|_| Error::Structural("boundary terms leave a pole at u = ±1".into()))?;
        poly = &poly + &q;
    }

    let (lo, hi) = exp
        .weighted
        .keys()
        .fold((-1i64, 2i64), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    let table = WTable::new(lo, hi);
    let mut w: [HLaurent; 3] = Default::default();
    for (e, c) in &exp.weighted {
        let row = &table.rows[e];
        for g in 0..3 {
            w[g].add_poly_times(c, &row[g]);
        }
    }
    Ok(Reduced {
        w: [w[0].to_poly()?, w[1].to_poly()?, w[2].to_poly()?],
        poly,
        log,
    })
}

/// `x^i y^{j+1}/(j+1)` at `A` minus at `B`, as a polynomial in `u`.
fn endpoint_difference(i: u32, j: u32) -> Poly {
    let ya = Poly::from_ratios(&[(1, 4), (1, 4)]);
    let yb = Poly::from_ratios(&[(1, 4), (-1, 4)]);
    let c = rat(1, j as i64 + 1);
    let a = &x0_poly().pow(i) * &ya.pow(j + 1);
    let b = &x1_poly().pow(i) * &yb.pow(j + 1);
    (&a - &b).scale(&c)
}

/// One side's integrals in the form `Σ c_{a,m} ∫_{x0}^{x1} x^a y^m dx + boundary(u)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SideTerms {
    pub x_terms: BTreeMap<(i64, u32), Rational>,
    pub boundary: Poly,
}

impl SideTerms {
    fn add_x(&mut self, a: i64, m: u32, c: Rational) {
        let slot = self.x_terms.entry((a, m)).or_insert_with(zero);
        *slot += c;
    }

    /// `c · ∫_Γ x^i y^j dx` along `branch` (counterclockwise).
    pub fn add_dx(&mut self, branch: Branch, i: u32, j: u32, c: &Rational) {
        self.add_x(i as i64, j, -rat_int(branch.sign()) * c);
    }

    /// `c · ∫_Γ x^i y^j dy` along `branch`, integrated by parts.
    pub fn add_dy(&mut self, branch: Branch, i: u32, j: u32, c: &Rational) {
        let sg = rat_int(branch.sign());
        self.boundary = &self.boundary + &endpoint_difference(i, j).scale(&(&sg * c));
        if i > 0 {
            let w = &sg * c * rat(i as i64, j as i64 + 1);
            self.add_x(i as i64 - 1, j + 1, w);
        }
    }

    fn reduce(&self, branch: Branch) -> Result<Reduced> {
        let mut exp = Expansion::default();
        for (&(a, m), c) in &self.x_terms {
            if *c != zero() {
                exp.add_power(c, a, m, branch);
            }
        }
        integrate(&exp, &self.boundary)
    }
}

/// Per-monomial bookkeeping of a perturbation: dx-monomials of `g±` are kept
/// as x-integrals, dy-monomials of `f±` are integrated by parts.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MonomialReduction {
    pub upper: SideTerms,
    pub lower: SideTerms,
}

pub fn reduce_monomials(spec: &PerturbationSpec) -> MonomialReduction {
    let mut out = MonomialReduction::default();
    for (branch, f, g, side) in [
        (Branch::Upper, &spec.a_plus, &spec.b_plus, &mut out.upper),
        (Branch::Lower, &spec.a_minus, &spec.b_minus, &mut out.lower),
    ] {
        for (&(i, j), c) in g {
            side.add_dx(branch, i, j, c);
        }
        for (&(i, j), c) in f {
            side.add_dy(branch, i, j, &-c);
        }
    }
    out
}

/// `F(u) = (j/(i+1))∫x^{i+1}(1−x)^{j−1}dx − ∫x^i(1−x)^j dx` over `[x0, x1]`.
pub fn boundary_poly(i: u32, j: u32) -> Poly {
    // t = x − 1/2 turns the integrals into odd polynomials in u.
    let xt = Poly::from_ratios(&[(1, 2), (1, 1)]);
    let yt = Poly::from_ratios(&[(1, 2), (-1, 1)]);
    let over = |p: Poly| {
        let prim = p.integral();
        let half_u = Poly::from_ratios(&[(0, 1), (1, 2)]);
        &prim.compose(&half_u) - &prim.compose(&half_u.scale(&rat_int(-1)))
    };
    let second = over(&xt.pow(i) * &yt.pow(j));
    if j == 0 {
        return -second;
    }
    let first = over(&xt.pow(i + 1) * &yt.pow(j - 1)).scale(&rat(j as i64, i as i64 + 1));
    &first - &second
}

/// Half-loop integral expressed through one side's generators.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Fragment {
    /// Coefficient of `I00` (or `J00`), polynomial in `h`.
    pub alpha: Poly,
    pub beta: Poly,
    pub gamma: Poly,
    /// Odd polynomial in `u`.
    pub phi: Poly,
    /// Coefficient of `ln((1+u)/(1−u))`, polynomial in `h`.
    pub log: Poly,
}

/// Polynomial offsets `c` with `I00 = W_{−1}/2 + c0`, `I20 = W_1/2 + c2`, `I30 = W_2/2 + c3`
/// (and the same for `J` on the lower side).
pub fn generator_offsets(branch: Branch) -> &'static [Poly; 3] {
    static UPPER: OnceLock<[Poly; 3]> = OnceLock::new();
    static LOWER: OnceLock<[Poly; 3]> = OnceLock::new();
    let cell = match branch {
        Branch::Upper => &UPPER,
        Branch::Lower => &LOWER,
    };
    cell.get_or_init(|| {
        [0u32, 2, 3].map(|i| {
            let r = half_loop_terms(i, 0, branch).reduce(branch).expect("generators reduce");
            r.poly
        })
    })
}

fn half_loop_terms(i: u32, j: u32, branch: Branch) -> SideTerms {
    let mut t = SideTerms::default();
    t.add_dy(branch, i + 1, j, &rat(1, i as i64 + 1));
    t
}

fn to_fragment(r: Reduced, branch: Branch) -> Fragment {
    let off = generator_offsets(branch);
    let hu = h_in_u();
    let two = rat_int(2);
    let [w0, w1, w2] = r.w;
    let alpha = w0.scale(&two);
    let beta = w1.scale(&two);
    let gamma = w2.scale(&two);
    let mut phi = r.poly;
    for (c, o) in [(&alpha, &off[0]), (&beta, &off[1]), (&gamma, &off[2])] {
        phi = &phi - &(&c.compose(&hu) * o);
    }
    Fragment {
        alpha,
        beta,
        gamma,
        phi,
        log: r.log,
    }
}

/// `I_{i,j}` (upper) or `J_{i,j}` (lower) in terms of that side's generators.
pub fn reduce_to_generators(i: u32, j: u32, branch: Branch) -> Result<Fragment> {
    let r = half_loop_terms(i, j, branch).reduce(branch)?;
    Ok(to_fragment(r, branch))
}

/// The Melnikov function as generator combination plus an odd polynomial in
/// `u` and a logarithmic term. `phi_h` carries the part written as `h·φ(u)`;
/// this implementation folds everything into `phi_0` and leaves `phi_h = 0`,
/// since `h` is itself a polynomial in `u`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: u32,
    pub alpha_p: Poly,
    pub beta_p: Poly,
    pub gamma_p: Poly,
    pub alpha_m: Poly,
    pub beta_m: Poly,
    pub gamma_m: Poly,
    pub phi_h: Poly,
    pub phi_0: Poly,
    pub log_coeff: Poly,
}

/// Degree caps `[n/4], [(n−1)/4], [(n−3)/4]`; `None` means the coefficient must vanish.
pub fn generator_caps(n: u32) -> [Option<usize>; 3] {
    let cap = |s: i64| if s < 0 { None } else { Some((s / 4) as usize) };
    let n = n as i64;
    [cap(n), cap(n - 1), cap(n - 3)]
}

fn within(p: &Poly, cap: Option<usize>) -> bool {
    match (p.degree(), cap) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(d), Some(c)) => d <= c,
    }
}

impl Decomposition {
    pub fn is_zero(&self) -> bool {
        [
            &self.alpha_p,
            &self.beta_p,
            &self.gamma_p,
            &self.alpha_m,
            &self.beta_m,
            &self.gamma_m,
            &self.phi_h,
            &self.phi_0,
            &self.log_coeff,
        ]
        .iter()
        .all(|p| p.is_zero())
    }

    /// Whether the generator coefficients respect the degree caps for `n`.
    pub fn generator_caps_ok(&self) -> bool {
        let caps = generator_caps(self.n);
        [
            (&self.alpha_p, caps[0]),
            (&self.beta_p, caps[1]),
            (&self.gamma_p, caps[2]),
            (&self.alpha_m, caps[0]),
            (&self.beta_m, caps[1]),
            (&self.gamma_m, caps[2]),
        ]
        .iter()
        .all(|(p, c)| within(p, *c))
    }

    /// Degree cap `n + 1 + (1 − (−1)ⁿ)/2` for the total odd polynomial `h·φ_h + φ_0`.
    pub fn phi_cap(&self) -> usize {
        self.n as usize + 1 + if self.n % 2 == 1 { 1 } else { 0 }
    }

    /// `h·φ_h(u) + φ_0(u)` as one polynomial in `u`.
    pub fn total_phi(&self) -> Poly {
        &(&h_in_u() * &self.phi_h) + &self.phi_0
    }
}

pub fn melnikov_decompose(spec: &PerturbationSpec) -> Result<Decomposition> {
    spec.validate()?;
    let m = reduce_monomials(spec);
    let up = to_fragment(m.upper.reduce(Branch::Upper)?, Branch::Upper);
    let lo = to_fragment(m.lower.reduce(Branch::Lower)?, Branch::Lower);
    let phi = &up.phi + &lo.phi;
    if !phi.is_odd() {
        return Err(Error::Structural(format!("polynomial part {phi} is not odd in u")));
    }
    Ok(Decomposition {
        n: spec.n,
        alpha_p: up.alpha,
        beta_p: up.beta,
        gamma_p: up.gamma,
        alpha_m: lo.alpha,
        beta_m: lo.beta,
        gamma_m: lo.gamma,
        phi_h: Poly::zero(),
        phi_0: phi,
        log_coeff: &up.log + &lo.log,
    })
}
