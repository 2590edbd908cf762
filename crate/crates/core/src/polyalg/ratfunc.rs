use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{Poly, Rational};
use crate::error::{Error, Result};

/// Reduced rational function `num/den` with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let l = d.leading();
        if !l.is_one() {
            let inv = Rational::one() / l;
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// The polynomial this function equals, if its denominator is constant.
    pub fn as_poly(&self) -> Option<Poly> {
        self.is_polynomial()
            .then(|| self.num.scale(&(Rational::one() / self.den.leading())))
    }

    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::reduced(n, &self.den * &self.den)
    }

    pub fn checked_div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(&self.num * &o.den, &self.den * &o.num))
    }

    /// Errors at a pole.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Singular(format!("pole of {self} at {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Plain floating evaluation; may return an infinity at a pole.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn compose(&self, inner: &Poly) -> RatFunc {
        Self::reduced(self.num.compose(inner), self.den.compose(inner))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: Poly,
            den: Poly,
        }
        let r = Raw::deserialize(d)?;
        RatFunc::new(r.num, r.den).map_err(serde::de::Error::custom)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::reduced(&self.num + &o.num, self.den.clone());
        }
        RatFunc::reduced(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::reduced(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        &self + &o
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::poly::rat;

    fn special_mu() -> RatFunc {
        RatFunc::new(Poly::from_i64s(&[0, 0, 2]), Poly::from_i64s(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn quotient_rule() {
        let d = special_mu().derivative();
        let expect = RatFunc::new(Poly::from_i64s(&[0, 4]), Poly::from_i64s(&[1, 0, 2, 0, 1])).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn reduces_common_factor() {
        let r = RatFunc::new(Poly::from_i64s(&[-1, 0, 1]), Poly::from_i64s(&[-1, 1])).unwrap();
        assert_eq!(r.num(), &Poly::from_i64s(&[1, 1]));
        assert_eq!(r.den(), &Poly::one());
    }

    #[test]
    fn eval_at_third() {
        assert_eq!(special_mu().eval(&rat(1, 3)).unwrap(), rat(1, 5));
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(
            special_mu().checked_div(&RatFunc::zero()),
            Err(Error::DivisionByZero)
        );
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn denominator_is_monic() {
        let r = RatFunc::new(Poly::from_i64s(&[1]), Poly::from_i64s(&[0, -2])).unwrap();
        assert_eq!(r.den(), &Poly::from_i64s(&[0, 1]));
        assert_eq!(r.num(), &Poly::from_ratios(&[(-1, 2)]));
    }

    #[test]
    fn pole_is_reported() {
        let r = RatFunc::new(Poly::one(), Poly::from_i64s(&[-1, 1])).unwrap();
        assert!(matches!(r.eval(&rat(1, 1)), Err(Error::Singular(_))));
    }
}
