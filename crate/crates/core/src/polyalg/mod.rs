//! Exact univariate polynomial and rational-function algebra over the rationals.

mod poly;
mod ratfunc;
mod sturm;

pub use poly::{
    format_rational, parse_rational, rat, rat_from_f64, rat_int, rat_to_f64, FloatPoly, Poly,
    Rational,
};
pub use ratfunc::RatFunc;
pub use sturm::{real_roots_in, square_free, RealRoot};
