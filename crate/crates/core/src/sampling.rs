//! Seeded random inputs for property tests, the acceptance suite and the CLI.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polyalg::{rat, Poly, Rational};
use crate::reduction::{MuSpec, ReductionCase, ReductionInput};
use crate::triangle::PerturbationSpec;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational `a/d` with `|a/d| ≤ bound` and `1 ≤ d ≤ max_den`.
pub fn rational<R: Rng>(rng: &mut R, bound: i64, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let a = rng.gen_range(-bound * d..=bound * d);
    rat(a, d)
}

/// Polynomial of exact degree `deg` with coefficients in `[-3, 3]`, denominators ≤ 4.
pub fn poly<R: Rng>(rng: &mut R, deg: usize) -> Poly {
    loop {
        let c: Vec<Rational> = (0..=deg).map(|_| rational(rng, 3, 4)).collect();
        let p = Poly::from_coeffs(c);
        if p.degree() == Some(deg) {
            return p;
        }
    }
}

/// Random `μ` for the reduction case. Polynomial choices stay inside (0, 1)
/// and away from k² for |k| ≤ 0.35, the sampling window of the identity tests.
pub fn mu_for_case<R: Rng>(rng: &mut R, case: ReductionCase) -> MuSpec {
    match case {
        ReductionCase::RationalSpecial => MuSpec::Special,
        ReductionCase::ConstantMu => MuSpec::Poly(Poly::constant(rat(rng.gen_range(3..=13), 16))),
        ReductionCase::PolySEq1 | ReductionCase::PolySGe2 => {
            let s = if case == ReductionCase::PolySEq1 { 1 } else { rng.gen_range(2..=3) };
            let mut c = vec![rat(1, 2)];
            for i in 1..=s {
                loop {
                    let v = rat(rng.gen_range(-4..=4), 32);
                    if i < s || v != rat(0, 1) {
                        c.push(v);
                        break;
                    }
                }
            }
            MuSpec::Poly(Poly::from_coeffs(c))
        }
    }
}

/// Random reduction input with `r ≠ 0` and degrees up to `max_deg`.
pub fn reduction_input<R: Rng>(rng: &mut R, case: ReductionCase, max_deg: usize) -> ReductionInput {
    let m = rng.gen_range(0..=max_deg);
    let n = rng.gen_range(0..=max_deg);
    let l = rng.gen_range(0..=max_deg);
    ReductionInput::new(poly(rng, m), poly(rng, n), poly(rng, l), mu_for_case(rng, case))
}

/// Random perturbation of degree `n`: every coefficient `a±_{ij}, b±_{ij}` with
/// `i + j ≤ n` drawn from `[-2, 2]` with denominators ≤ 4.
pub fn perturbation_spec<R: Rng>(rng: &mut R, n: u32) -> PerturbationSpec {
    let mut s = PerturbationSpec::new(n);
    for m in [&mut s.a_plus, &mut s.a_minus, &mut s.b_plus, &mut s.b_minus] {
        for i in 0..=n {
            for j in 0..=n - i {
                m.insert((i, j), rational(rng, 2, 4));
            }
        }
    }
    s
}
