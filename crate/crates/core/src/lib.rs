//! Elliptic integrals, Picard–Fuchs reduction of `pK + qE + rΠ`, zero counting,
//! and the Melnikov function of a piecewise-perturbed Hamiltonian triangle.

pub mod elliptic;
pub mod error;
pub mod picard_fuchs;
pub mod polyalg;
pub mod quad;
pub mod reduction;
pub mod sampling;
pub mod triangle;
pub mod zero_count;

pub use elliptic::EllipticTriple;
pub use error::{Error, Result};
pub use polyalg::{Poly, RatFunc, Rational};
