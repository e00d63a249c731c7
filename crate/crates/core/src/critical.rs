//! Critical force of the straight configuration.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::coefficients::RodCoefficients;
use crate::error::{Error, Result};
use crate::rod::{second_variation_matrix, BoundaryCondition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    TwoPi,
    XStar,
    Weak,
    Torsional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalForceBreakdown {
    pub f1_crit: f64,
    pub f2_crit: f64,
    pub f_crit: f64,
    pub branch: Branch,
    /// Branch of the `f1` formula, whether or not it dominates.
    pub f1_branch: Branch,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x_star: Option<f64>,
    /// `c12 c23 / (c13 k L)^2`; absent when `k = 0`.
    pub a_param: Option<f64>,
    pub bc: String,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_crit_numeric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub relative_gap: Option<f64>,
}

pub fn g_functions(x: f64, a: f64) -> (f64, f64) {
    let p = x - a * x.powi(3);
    // half-angle forms avoid cancellation in 1 +- cos x
    let (sh, ch) = (0.5 * x).sin_cos();
    (p * x.sin() - 4.0 * sh * sh, 2.0 * ch * (p * ch - 2.0 * sh))
}

/// Common zero of `g1, g2` in `(pi, 2 pi)`; exists iff `a > 1 / (4 pi^2)`.
pub fn find_x_star(a: f64) -> Result<Option<f64>> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidInput(format!("a must be positive, got {a}")));
    }
    if 1.0 - 4.0 * PI * PI * a >= 0.0 {
        return Ok(None);
    }
    let g2 = |x: f64| g_functions(x, a).1;
    // for large a the root sits at about pi + 4 / (a pi^3)
    let (mut lo, mut hi) = (PI + (1.0 / (a * PI.powi(3))).min(1e-6), 2.0 * PI);
    let (glo, ghi) = (g2(lo), g2(hi));
    if glo.signum() == ghi.signum() || glo == 0.0 {
        return Err(Error::RootNotBracketed { a });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if g2(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let (g1, _) = g_functions(x, a);
    let scale = 1.0 + a * x.powi(3);
    if g1.abs() > 1e-9 * scale {
        return Err(Error::RootNotBracketed { a });
    }
    Ok(Some(x))
}

fn supported(bc: &BoundaryCondition) -> Result<bool> {
    match bc {
        BoundaryCondition::WeakClamped => Ok(false),
        BoundaryCondition::ClampedClamped(a, b)
            if (a - nalgebra::Matrix3::identity()).amax() <= 1e-12
                && (b - nalgebra::Matrix3::identity()).amax() <= 1e-12 =>
        {
            Ok(true)
        }
        other => Err(Error::UnsupportedBc(other.name())),
    }
}

pub fn f_crit_analytic(coeffs: &RodCoefficients, bc: &BoundaryCondition) -> Result<CriticalForceBreakdown> {
    let clamped = supported(bc)?;
    let (c12, c13, c23, k, l) = (coeffs.c12, coeffs.c13, coeffs.c23, coeffs.k, coeffs.length);
    let l2 = l * l;
    let twist = (c13 * k).powi(2) / c23;
    let a_param = (k != 0.0).then(|| c12 * c23 / (c13 * k * l).powi(2));
    let (f1, f1_branch, x_star) = if !clamped {
        (twist - PI * PI * c12 / l2, Branch::Weak, None)
    } else {
        match a_param {
            // x* tends to pi as a grows without bound
            None => (-PI * PI * c12 / l2, Branch::XStar, Some(PI)),
            Some(a) if 4.0 * PI * PI * a <= 1.0 => (twist - 4.0 * PI * PI * c12 / l2, Branch::TwoPi, None),
            Some(a) => {
                let x = find_x_star(a)?.ok_or(Error::RootNotBracketed { a })?;
                (twist - x * x * c12 / l2, Branch::XStar, Some(x))
            }
        }
    };
    let f2 = -PI * PI * c13 / l2;
    let (f_crit, branch) = if f1 >= f2 { (f1, f1_branch) } else { (f2, Branch::Torsional) };
    Ok(CriticalForceBreakdown {
        f1_crit: f1,
        f2_crit: f2,
        f_crit,
        branch,
        f1_branch,
        x_star: if branch == Branch::XStar { x_star } else { None },
        a_param,
        bc: bc.name().to_string(),
        n: None,
        f_crit_numeric: None,
        relative_gap: None,
    })
}

/// Force scale used for tolerances and default brackets.
pub fn force_scale(coeffs: &RodCoefficients, f_crit: f64) -> f64 {
    let l2 = coeffs.length * coeffs.length;
    f_crit
        .abs()
        .max(coeffs.c13 * coeffs.k * coeffs.k)
        .max(coeffs.c12 / l2)
        .max(1e-12)
}

/// Bracket that does not use the analytic value.
pub fn blind_bracket(coeffs: &RodCoefficients) -> (f64, f64) {
    let s = 1e4 * coeffs.c_max() / (coeffs.length * coeffs.length);
    (-s, s)
}

/// Force at which `K(f)` stops being positive definite, by bisection.
pub fn f_crit_numeric(
    coeffs: &RodCoefficients,
    bc: &BoundaryCondition,
    n: usize,
    bracket: Option<(f64, f64)>,
) -> Result<f64> {
    if n < 100 {
        return Err(Error::InvalidInput(format!("need N >= 100, got {n}")));
    }
    let analytic = f_crit_analytic(coeffs, bc)?;
    let scale = force_scale(coeffs, analytic.f_crit);
    let (mut lo, mut hi) = bracket.unwrap_or((analytic.f_crit - 10.0 * scale, analytic.f_crit + 10.0 * scale));
    let sv = second_variation_matrix(coeffs, bc, n)?;
    let pd = |f: f64| sv.at(f).is_positive_definite();
    if pd(lo) || !pd(hi) {
        return Err(Error::BracketFailure { lo, hi });
    }
    while hi - lo > 1e-8 * scale {
        let mid = 0.5 * (lo + hi);
        if pd(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Analytic breakdown plus the discretized value at `n` nodes.
pub fn f_crit_with_numeric(coeffs: &RodCoefficients, bc: &BoundaryCondition, n: usize) -> Result<CriticalForceBreakdown> {
    let mut br = f_crit_analytic(coeffs, bc)?;
    let num = f_crit_numeric(coeffs, bc, n, None)?;
    br.n = Some(n);
    br.f_crit_numeric = Some(num);
    br.relative_gap = Some((num - br.f_crit).abs() / br.f_crit.abs().max(1e-300));
    Ok(br)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StraightStability {
    StrictLocalMin,
    NotMinimizer,
    Marginal,
}

pub fn straight_stability(coeffs: &RodCoefficients, bc: &BoundaryCondition, f: f64) -> Result<StraightStability> {
    let br = f_crit_analytic(coeffs, bc)?;
    let scale = force_scale(coeffs, br.f_crit);
    Ok(if (f - br.f_crit).abs() <= 1e-8 * scale {
        StraightStability::Marginal
    } else if f > br.f_crit {
        StraightStability::StrictLocalMin
    } else {
        StraightStability::NotMinimizer
    })
}
