//! Near-straight helical stationary points `R(x) = R0 exp(x hat(theta r))`.

use serde::{Deserialize, Serialize};

use crate::coefficients::RodCoefficients;
use crate::error::{Error, Result};
use crate::rod::{BoundaryCondition, RotationCurve};
use crate::so3::{exp_skew, frame_with_first_row, Mat3, Vec3};

pub const DELTA_MIN: f64 = 1e-8;
pub const DELTA_MAX: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "HelixJson", try_from = "HelixJson")]
pub struct HelixSpec {
    pub delta: f64,
    pub theta: f64,
    pub f: f64,
    pub length: f64,
    /// `R(0)^T e1`.
    pub r: Vec3,
    pub r0: Mat3,
    pub omega: Vec3,
}

#[derive(Serialize, Deserialize)]
struct HelixJson {
    delta: f64,
    theta: f64,
    f: f64,
    #[serde(rename = "L")]
    length: f64,
    r: [f64; 3],
    omega: [f64; 3],
    #[serde(rename = "R0")]
    r0: [f64; 9],
}

impl From<HelixSpec> for HelixJson {
    fn from(h: HelixSpec) -> Self {
        let m = &h.r0;
        HelixJson {
            delta: h.delta,
            theta: h.theta,
            f: h.f,
            length: h.length,
            r: h.r.into(),
            omega: h.omega.into(),
            r0: [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 0)], m[(1, 1)], m[(1, 2)], m[(2, 0)], m[(2, 1)], m[(2, 2)]],
        }
    }
}

impl TryFrom<HelixJson> for HelixSpec {
    type Error = Error;

    fn try_from(j: HelixJson) -> Result<Self> {
        let r0 = Mat3::from_row_slice(&j.r0);
        if !crate::so3::is_rotation(&r0, 1e-10) {
            return Err(Error::InvalidInput("R0 is not a rotation".into()));
        }
        Ok(HelixSpec {
            delta: j.delta,
            theta: j.theta,
            f: j.f,
            length: j.length,
            r: j.r.into(),
            r0,
            omega: j.omega.into(),
        })
    }
}

/// `(1 - delta, sqrt(2 delta - delta^2), 0)`.
pub fn tilt_direction(delta: f64) -> Vec3 {
    Vec3::new(1.0 - delta, (2.0 * delta - delta * delta).sqrt(), 0.0)
}

/// Coefficients `(quadratic, linear, constant)` of `p_delta(theta)`.
pub fn helix_polynomial(coeffs: &RodCoefficients, f: f64, delta: f64) -> (f64, f64, f64) {
    let s = (2.0 * delta - delta * delta).sqrt();
    let c = 1.0 - delta;
    ((coeffs.c23 - coeffs.c13) * s * c, coeffs.c13 * coeffs.k * c, -f * s)
}

fn check_inputs(coeffs: &RodCoefficients, f: f64, delta: f64) -> Result<()> {
    if !(DELTA_MIN..=DELTA_MAX).contains(&delta) {
        return Err(Error::InvalidDelta(delta));
    }
    if f == 0.0 {
        return Err(Error::ZeroForce);
    }
    if !f.is_finite() {
        return Err(Error::InvalidInput(format!("force must be finite, got {f}")));
    }
    if coeffs.k == 0.0 {
        return Err(Error::DegenerateCase("helix polynomial needs k != 0".into()));
    }
    Ok(())
}

/// Root of `p_delta` with the smaller absolute value.
pub fn theta_root(coeffs: &RodCoefficients, f: f64, delta: f64) -> Result<f64> {
    check_inputs(coeffs, f, delta)?;
    let (a, b, c) = helix_polynomial(coeffs, f, delta);
    let s = (2.0 * delta - delta * delta).sqrt();
    if a.abs() <= 1e-12 * coeffs.c13.max(coeffs.c23) * s * (1.0 - delta) {
        return Ok(-c / b);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(Error::NoRealRoot { discriminant: disc });
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let (r1, r2) = (q / a, c / q);
    if r1.abs() == r2.abs() && r1 != r2 {
        return Err(Error::NoRealRoot { discriminant: disc });
    }
    Ok(if r1.abs() < r2.abs() { r1 } else { r2 })
}

pub fn build_helix(coeffs: &RodCoefficients, f: f64, delta: f64) -> Result<HelixSpec> {
    let theta = theta_root(coeffs, f, delta)?;
    let r = tilt_direction(delta);
    Ok(HelixSpec { delta, theta, f, length: coeffs.length, r, r0: frame_with_first_row(&r)?, omega: r * theta })
}

/// `w x C(w - k e2)`; a stationary helix with `R^T e1 = r` has `f r x e1` here.
pub fn algebraic_rows(coeffs: &RodCoefficients, omega: &Vec3) -> Vec3 {
    omega.cross(&coeffs.cdiag().component_mul(&(omega - Vec3::new(0.0, coeffs.k, 0.0))))
}

impl HelixSpec {
    pub fn frame_at(&self, x: f64) -> Mat3 {
        self.r0 * exp_skew(&self.omega, x)
    }

    pub fn curve(&self, n: usize) -> Result<RotationCurve> {
        RotationCurve::from_generator(&self.r0, &self.omega, n, self.length)
    }

    /// Clamped at its own end frames.
    pub fn own_bc(&self) -> BoundaryCondition {
        BoundaryCondition::ClampedClamped(self.frame_at(0.0), self.frame_at(self.length))
    }

    /// Algebraic rows minus `f r x e1`.
    pub fn stationarity_residual(&self, coeffs: &RodCoefficients) -> Vec3 {
        algebraic_rows(coeffs, &self.omega) - self.r.cross(&Vec3::x()) * self.f
    }
}

/// `a13` of the force-free helix, `None` when `c13 = c23`.
pub fn helix_f0(coeffs: &RodCoefficients) -> Option<f64> {
    let d = coeffs.c23 - coeffs.c13;
    if d.abs() <= 1e-12 * coeffs.c23.max(coeffs.c13) {
        return None;
    }
    Some(-coeffs.c13 * coeffs.k / d)
}

/// Strain `(-a23, a13, 0)` of the force-free helix with twist parameter `a23`.
pub fn helix_f0_strain(coeffs: &RodCoefficients, a23: f64) -> Option<Vec3> {
    helix_f0(coeffs).map(|a13| Vec3::new(-a23, a13, 0.0))
}
