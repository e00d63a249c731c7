//! Kirchhoff rods with intrinsic curvature: limit coefficients, critical
//! forces of the straight rod, flat helices and their conjugate-point
//! stability.

pub mod banded;
pub mod coefficients;
pub mod conjugate;
pub mod critical;
pub mod error;
pub mod helix;
pub mod rod;
pub mod so3;

pub use coefficients::{
    build_coefficients, unit_area_coefficients, CrossSection, MaterialParams, RodCoefficients, DEFAULT_SERIES_TERMS,
};
pub use conjugate::{assemble_system, fundamental_matrix, scan, ScanOptions, SecondOrderSystem, StabilityReport, Verdict};
pub use critical::{f_crit_analytic, f_crit_numeric, Branch, CriticalForceBreakdown};
pub use error::{Error, Result};
pub use helix::{build_helix, theta_root, HelixSpec};
pub use rod::{BoundaryCondition, RotationCurve};
pub use so3::{Mat3, Vec3};
