//! Real root isolation by Sturm sequences over exact rationals.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{rat, rat_from_f64, rat_to_f64, Poly, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

/// Yun's square-free factorization: returns `(f_i, i)` with `a = c·∏ f_i^i`.
pub fn square_free(a: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if a.degree().unwrap_or(0) == 0 {
        return out;
    }
    let da = a.derivative();
    let b = a.gcd(&da);
    let mut c = a.div_exact(&b).expect("gcd divides").monic();
    let mut d = &da.div_exact(&b).expect("gcd divides").scale(&(Rational::one() / a.leading()))
        - &c.derivative();
    let mut i = 1;
    while c.degree().unwrap_or(0) > 0 {
        let g = c.gcd(&d);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        c = c.div_exact(&g).expect("gcd divides");
        d = &d.div_exact(&g).expect("gcd divides") - &c.derivative();
        i += 1;
    }
    out
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        // Positive rescaling keeps the sign pattern and tames coefficient growth.
        let r = -r;
        let l = r.leading().abs();
        chain.push(r.scale(&(Rational::one() / l)));
    }
    chain
}

fn variations(chain: &[Poly], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in chain {
        let s = sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

fn sign(x: &Rational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Split point inside (a, b) at which `p` does not vanish.
fn split_point(p: &Poly, a: &Rational, b: &Rational) -> Rational {
    let w = b - a;
    for (n, d) in [(1, 2), (17, 32), (15, 32), (9, 16), (7, 16), (5, 8), (3, 8)] {
        let m = a + &w * rat(n, d);
        if !p.eval(&m).is_zero() {
            return m;
        }
    }
    // A squarefree polynomial of modest degree cannot vanish at all seven points.
    a + &w * rat(1, 3)
}

/// Bisect the isolating interval (a, b) of a simple root until its width is
/// below `tol`. Returns an exact root when a midpoint hits it.
fn refine(p: &Poly, mut a: Rational, mut b: Rational, tol: &Rational) -> Rational {
    let mut sa = sign(&p.eval(&a));
    while &b - &a > *tol {
        let m = (&a + &b) * rat(1, 2);
        let sm = sign(&p.eval(&m));
        if sm == 0 {
            return m;
        }
        if sm == sa {
            a = m;
            sa = sm;
        } else {
            b = m;
        }
    }
    (a + b) * rat(1, 2)
}

/// Isolated roots of a squarefree polynomial inside the open interval (lo, hi).
fn roots_squarefree(p: &Poly, lo: &Rational, hi: &Rational, tol: &Rational) -> Vec<Rational> {
    // Endpoint roots are excluded; divide them out so the Sturm counts below
    // are taken at non-roots. Squarefreeness means each divides at most once.
    let mut p = p.clone();
    for e in [lo, hi] {
        if p.eval(e).is_zero() {
            p = p.div_exact(&Poly::from_coeffs(vec![-e.clone(), Rational::one()])).expect("root");
        }
    }
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let chain = sturm_chain(&p);
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let n = variations(&chain, &a) as isize - variations(&chain, &b) as isize;
        if n <= 0 {
            continue;
        }
        if n == 1 {
            out.push(refine(&p, a, b, tol));
            continue;
        }
        let m = split_point(&p, &a, &b);
        stack.push((a, m.clone()));
        stack.push((m, b));
    }
    out.sort();
    out
}

/// All real roots of `a` in the open interval (lo, hi), with multiplicities,
/// refined to width 1e-14.
pub fn real_roots_in(a: &Poly, lo: f64, hi: f64) -> Result<Vec<RealRoot>> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty interval ({lo}, {hi})")));
    }
    let lo_r = rat_from_f64(lo)?;
    let hi_r = rat_from_f64(hi)?;
    let tol = rat_from_f64(1e-14)?;
    let mut out = Vec::new();
    for (f, mult) in square_free(a) {
        for r in roots_squarefree(&f, &lo_r, &hi_r, &tol) {
            out.push(RealRoot {
                value: rat_to_f64(&r),
                multiplicity: mult,
            });
        }
    }
    out.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(out)
}
