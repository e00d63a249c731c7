//! Limit-model coefficients for a rectangular cross section of unit area.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::so3::Vec3;

pub const DEFAULT_SERIES_TERMS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    pub lame_lambda: f64,
    pub lame_mu: f64,
    pub normalize_by_mu: bool,
}

impl MaterialParams {
    pub const REFERENCE: MaterialParams = MaterialParams {
        lame_lambda: 0.326,
        lame_mu: 0.654e-3,
        normalize_by_mu: true,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.lame_mu > 0.0 && self.lame_mu.is_finite()) {
            return Err(Error::InvalidInput(format!("mu must be positive, got {}", self.lame_mu)));
        }
        if !(self.lame_lambda >= 0.0 && self.lame_lambda.is_finite()) {
            return Err(Error::InvalidInput(format!("lambda must be >= 0, got {}", self.lame_lambda)));
        }
        Ok(())
    }

    /// `mu (3 lambda + 2 mu) / (lambda + mu)`, divided by `mu` when normalized.
    pub fn bending_factor(&self) -> f64 {
        let (l, m) = (self.lame_lambda, self.lame_mu);
        let f = (3.0 * l + 2.0 * m) / (l + m);
        if self.normalize_by_mu {
            f
        } else {
            m * f
        }
    }

    pub fn shear_factor(&self) -> f64 {
        if self.normalize_by_mu {
            1.0
        } else {
            self.lame_mu
        }
    }
}

/// `(-w_y, w_y) x (-w_z, w_z)` with `4 w_y w_z = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub w_y: f64,
    pub w_z: f64,
}

impl CrossSection {
    pub fn unit_area(w_z: f64) -> Result<Self> {
        if !(w_z > 0.0 && w_z.is_finite()) {
            return Err(Error::InvalidInput(format!("w_z must be positive, got {w_z}")));
        }
        Ok(CrossSection { w_y: 0.25 / w_z, w_z })
    }

    /// Arbitrary rectangle; only used where the unit-area constraint does not matter.
    pub fn rectangle(w_y: f64, w_z: f64) -> Result<Self> {
        if !(w_y > 0.0 && w_z > 0.0 && w_y.is_finite() && w_z.is_finite()) {
            return Err(Error::InvalidInput(format!("half-widths must be positive, got ({w_y}, {w_z})")));
        }
        Ok(CrossSection { w_y, w_z })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondMoments {
    pub m2: f64,
    pub m3: f64,
    pub s3plus: f64,
}

pub fn second_moments(cs: &CrossSection) -> SecondMoments {
    let (a, b) = (cs.w_y, cs.w_z);
    SecondMoments {
        m2: 4.0 / 3.0 * a.powi(3) * b,
        m3: 4.0 / 3.0 * a * b.powi(3),
        s3plus: a * b * b,
    }
}

// The series is exact for either orientation but converges fast only when
// the hyperbolic arguments are large, i.e. with the shorter side as `w_z`.
fn series_orientation(cs: &CrossSection) -> (f64, f64) {
    if cs.w_z <= cs.w_y {
        (cs.w_y, cs.w_z)
    } else {
        (cs.w_z, cs.w_y)
    }
}

fn tanh_sat(x: f64) -> f64 {
    if x > 20.0 {
        1.0
    } else {
        x.tanh()
    }
}

pub fn torsional_rigidity(cs: &CrossSection, n_terms: usize) -> f64 {
    let (wy, wz) = series_orientation(cs);
    let mut sum = 0.0;
    // Smallest terms first.
    for n in (0..n_terms.max(1)).rev() {
        let m = (2 * n + 1) as f64;
        let zeta = m * PI / (2.0 * wz);
        sum += tanh_sat(zeta * wy) / m.powi(5);
    }
    16.0 * wy * wz.powi(3) * (1.0 / 3.0 - 64.0 * wz / (PI.powi(5) * wy) * sum)
}

/// Upper bound on `|tau(inf) - tau(n_terms)|`.
pub fn torsion_tail_bound(cs: &CrossSection, n_terms: usize) -> f64 {
    let (wy, wz) = series_orientation(cs);
    // sum_{j>=n} (2j+1)^-5 <= (2n+1)^-5 + integral = (2n+1)^-5 + (2n+1)^-4 / 8
    let m = (2 * n_terms + 1) as f64;
    let tail = m.powi(-5) + m.powi(-4) / 8.0;
    16.0 * wy * wz.powi(3) * 64.0 * wz / (PI.powi(5) * wy) * tail
}

pub fn intrinsic_curvature(cs: &CrossSection, chi: f64) -> f64 {
    let m = second_moments(cs);
    chi * m.s3plus / m.m3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RodCoefficients {
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
    pub tau_s: f64,
    pub k: f64,
    pub chi: f64,
    #[serde(rename = "L")]
    pub length: f64,
}

impl RodCoefficients {
    /// Coefficients given directly, without a cross section. `tau_s` is set to
    /// `c23` and `chi` to `k`.
    pub fn from_constants(c12: f64, c13: f64, c23: f64, k: f64, length: f64) -> Result<Self> {
        let c = RodCoefficients { c12, c13, c23, tau_s: c23, k, chi: k, length };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.c12, self.c13, self.c23, self.tau_s, self.k, self.chi, self.length];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        if !(self.c12 > 0.0 && self.c13 > 0.0 && self.c23 > 0.0 && self.tau_s > 0.0) {
            return Err(Error::InvalidInput("rigidities must be positive".into()));
        }
        if !(self.length > 0.0) {
            return Err(Error::InvalidInput(format!("length must be positive, got {}", self.length)));
        }
        Ok(())
    }

    /// Diagonal of `C = diag(c23, c13, c12)`.
    pub fn cdiag(&self) -> Vec3 {
        Vec3::new(self.c23, self.c13, self.c12)
    }

    pub fn c_max(&self) -> f64 {
        self.c12.max(self.c13).max(self.c23)
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.chi = if self.k != 0.0 { self.chi * k / self.k } else { k };
        self.k = k;
        self
    }
}

pub fn build_coefficients(
    mp: &MaterialParams,
    cs: &CrossSection,
    chi: f64,
    length: f64,
    n_terms: usize,
) -> Result<RodCoefficients> {
    mp.validate()?;
    if !(chi >= 0.0 && chi.is_finite()) {
        return Err(Error::InvalidInput(format!("chi must be >= 0, got {chi}")));
    }
    if n_terms == 0 {
        return Err(Error::InvalidInput("n_terms must be >= 1".into()));
    }
    let m = second_moments(cs);
    let fac = mp.bending_factor();
    let tau_s = torsional_rigidity(cs, n_terms);
    let c = RodCoefficients {
        c12: fac * m.m2,
        c13: fac * m.m3,
        c23: mp.shear_factor() * tau_s,
        tau_s,
        k: intrinsic_curvature(cs, chi),
        chi,
        length,
    };
    c.validate()?;
    Ok(c)
}

/// Coefficients for the unit-area rectangle with half-height `w_z`.
pub fn unit_area_coefficients(mp: &MaterialParams, w_z: f64, chi: f64, length: f64) -> Result<RodCoefficients> {
    build_coefficients(mp, &CrossSection::unit_area(w_z)?, chi, length, DEFAULT_SERIES_TERMS)
}
