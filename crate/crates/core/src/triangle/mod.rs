//! First-order Melnikov function of the piecewise-perturbed Hamiltonian
//! triangle `H = x²y(1−x−y)`, switching line `y = (1−x)/2`.
//!
//! Orientation: both arcs are traversed counterclockwise, Γ⁺ from `B` (right)
//! to `A` (left) above the line and Γ⁻ from `A` to `B` below it. This is the
//! orientation under which Green's formula gives the boundary identities used
//! by the reduction.

pub mod engine;
pub mod geometry;
pub mod melnikov;
pub mod spec;

pub use engine::{
    boundary_poly, generator_caps, melnikov_decompose, reduce_monomials, reduce_to_generators, Decomposition,
    Fragment, MonomialReduction,
};
pub use geometry::{branch_y, level_params, Branch, LevelCurve, H_MAX};
pub use melnikov::{
    generator_values_closed, generator_values_quadrature, half_loop_quadrature, melnikov_eval,
    melnikov_eval_quadrature, melnikov_sweep, melnikov_zero_report, GeneratorValues, MelnikovEvaluator,
};
pub use spec::PerturbationSpec;
