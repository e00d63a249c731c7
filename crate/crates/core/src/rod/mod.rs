//! Discrete rods: frames at nodes, strains at midpoints.

mod curve;
mod energy;
mod hessian;
mod minimize;

pub use curve::{strains, RotationCurve, StrainField};
pub use energy::{
    check_bc, el_residual, elastic_energy, energy, gradient, jr_inv, jl_inv, raw_gradient, ElResidual,
};
pub use hessian::{bifurcation_kernel_check, second_variation_matrix, KernelCheck, SecondVariation};
pub use minimize::{gradient_scale, minimize, minimize_report, MinimizeOptions, MinimizeOutcome};

use crate::so3::Mat3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    /// No constraints; natural conditions at both ends.
    WeakFree,
    /// `R(0)` prescribed.
    Clamped(Mat3),
    /// `R(0)` and `R(L)` prescribed.
    ClampedClamped(Mat3, Mat3),
    /// `R e1 = e1` at both ends.
    WeakClamped,
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::WeakFree => "weak-free",
            BoundaryCondition::Clamped(_) => "clamped",
            BoundaryCondition::ClampedClamped(..) => "clamped-clamped",
            BoundaryCondition::WeakClamped => "weak-clamped",
        }
    }

    pub fn clamped_identity() -> Self {
        BoundaryCondition::ClampedClamped(Mat3::identity(), Mat3::identity())
    }

    /// Components of the test field `eta_j` that are held at zero.
    pub fn fixed_components(&self, j: usize, n: usize) -> [bool; 3] {
        use BoundaryCondition::*;
        let first = j == 0;
        let last = j == n;
        match self {
            WeakFree => [false; 3],
            Clamped(_) => [first; 3],
            ClampedClamped(..) => [first || last; 3],
            // node 0: tangent fixed plus twist gauge; node N: tangent fixed
            WeakClamped => [first, first || last, first || last],
        }
    }
}
