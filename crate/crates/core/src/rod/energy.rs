use serde::{Deserialize, Serialize};

use super::{strains, BoundaryCondition, RotationCurve};
use crate::coefficients::RodCoefficients;
use crate::error::{Error, Result};
use crate::so3::{hat, Mat3, Vec3};

const BC_TOL: f64 = 1e-8;

pub fn check_bc(curve: &RotationCurve, bc: &BoundaryCondition) -> Result<()> {
    let e1 = Vec3::x();
    let violation = match bc {
        BoundaryCondition::WeakFree => 0.0,
        BoundaryCondition::Clamped(r0) => (curve.first() - r0).amax(),
        BoundaryCondition::ClampedClamped(r0, rl) => (curve.first() - r0).amax().max((curve.last() - rl).amax()),
        BoundaryCondition::WeakClamped => {
            (curve.first() * e1 - e1).amax().max((curve.last() * e1 - e1).amax())
        }
    };
    if violation > BC_TOL {
        return Err(Error::BcViolation { violation });
    }
    Ok(())
}

fn trapezoid_weight(j: usize, n: usize) -> f64 {
    if j == 0 || j == n {
        0.5
    } else {
        1.0
    }
}

fn moment(coeffs: &RodCoefficients, w: &Vec3) -> Vec3 {
    coeffs.cdiag().component_mul(&(w - Vec3::new(0.0, coeffs.k, 0.0)))
}

/// `1/2 sum h <C(w - k e2), w - k e2>`.
pub fn elastic_energy(curve: &RotationCurve, coeffs: &RodCoefficients) -> Result<f64> {
    let h = curve.h();
    let s = strains(curve)?;
    Ok(s.omegas
        .iter()
        .map(|w| {
            let d = w - Vec3::new(0.0, coeffs.k, 0.0);
            0.5 * h * d.dot(&coeffs.cdiag().component_mul(&d))
        })
        .sum())
}

fn force_integral(curve: &RotationCurve) -> f64 {
    let n = curve.n_elements();
    let h = curve.h();
    curve.samples().iter().enumerate().map(|(j, r)| trapezoid_weight(j, n) * h * r[(0, 0)]).sum()
}

pub fn energy(curve: &RotationCurve, coeffs: &RodCoefficients, f: f64, bc: &BoundaryCondition) -> Result<f64> {
    check_bc(curve, bc)?;
    Ok(elastic_energy(curve, coeffs)? - f * force_integral(curve))
}

fn jinv_coeff(theta: f64) -> f64 {
    if theta < 1e-3 {
        1.0 / 12.0 + theta * theta / 720.0
    } else {
        1.0 / (theta * theta) - (1.0 + theta.cos()) / (2.0 * theta * theta.sin())
    }
}

/// Inverse right Jacobian of the exponential at `phi`.
pub fn jr_inv(phi: &Vec3) -> Mat3 {
    let k = hat(phi);
    Mat3::identity() + k * 0.5 + k * k * jinv_coeff(phi.norm())
}

/// Inverse left Jacobian of the exponential at `phi`.
pub fn jl_inv(phi: &Vec3) -> Mat3 {
    let k = hat(phi);
    Mat3::identity() - k * 0.5 + k * k * jinv_coeff(phi.norm())
}

/// Derivative of the discrete energy along `R_j -> R_j exp(eps eta_j)`, no constraints applied.
pub fn raw_gradient(curve: &RotationCurve, coeffs: &RodCoefficients, f: f64) -> Result<Vec<Vec3>> {
    let n = curve.n_elements();
    let h = curve.h();
    let s = strains(curve)?;
    let mut g = vec![Vec3::zeros(); n + 1];
    for (i, w) in s.omegas.iter().enumerate() {
        let m = moment(coeffs, w);
        let x = w * h;
        g[i + 1] += jl_inv(&x) * m;
        g[i] -= jr_inv(&x) * m;
    }
    let e1 = Vec3::x();
    for (j, r) in curve.samples().iter().enumerate() {
        let t = r.transpose() * e1;
        g[j] -= f * trapezoid_weight(j, n) * h * e1.cross(&t);
    }
    Ok(g)
}

/// Gradient restricted to the test space of `bc`.
pub fn gradient(curve: &RotationCurve, coeffs: &RodCoefficients, f: f64, bc: &BoundaryCondition) -> Result<Vec<Vec3>> {
    check_bc(curve, bc)?;
    let mut g = raw_gradient(curve, coeffs, f)?;
    let n = curve.n_elements();
    for (j, gj) in g.iter_mut().enumerate() {
        let fixed = bc.fixed_components(j, n);
        for c in 0..3 {
            if fixed[c] {
                gj[c] = 0.0;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElResidual {
    pub interior: f64,
    pub natural_bc: f64,
}

/// Strong-form residual `n' + w x n + f e1 x R^T e1` at interior nodes, where
/// `n = C(w - k e2)`, and the natural boundary residual of `2 C(w - k e2)`.
pub fn el_residual(curve: &RotationCurve, coeffs: &RodCoefficients, f: f64, bc: &BoundaryCondition) -> Result<ElResidual> {
    let n = curve.n_elements();
    if n < 8 {
        return Err(Error::InvalidInput(format!("need N >= 8, got {n}")));
    }
    let h = curve.h();
    let g = raw_gradient(curve, coeffs, f)?;
    let interior = g[1..n].iter().fold(0.0f64, |m, v| m.max(v.norm() / h));

    let s = strains(curve)?;
    let flux = |w: &Vec3| moment(coeffs, w) * 2.0;
    let (a, b) = (flux(&s.omegas[0]), flux(&s.omegas[n - 1]));
    let natural_bc = match bc {
        BoundaryCondition::WeakFree => a.norm().max(b.norm()),
        BoundaryCondition::Clamped(_) => b.norm(),
        BoundaryCondition::ClampedClamped(..) => 0.0,
        BoundaryCondition::WeakClamped => a.x.abs().max(b.x.abs()),
    };
    Ok(ElResidual { interior, natural_bc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so3::exp_skew;

    fn coeffs() -> RodCoefficients {
        RodCoefficients::from_constants(0.17, 0.36, 0.13, 7.5, 1.0).unwrap()
    }

    #[test]
    fn straight_energy() {
        let c = coeffs();
        let s = RotationCurve::straight(20, 1.0).unwrap();
        let bc = BoundaryCondition::WeakFree;
        assert!((energy(&s, &c, 0.0, &bc).unwrap() - 0.5 * c.c13 * c.k * c.k).abs() < 1e-13);
        let ef = energy(&s, &c, 2.0, &bc).unwrap() - energy(&s, &c, 0.0, &bc).unwrap();
        assert!((ef + 2.0).abs() < 1e-14);
    }

    #[test]
    fn curved_beam_is_critical() {
        let c = coeffs();
        let beam = RotationCurve::from_generator(&Mat3::identity(), &Vec3::new(0.0, c.k, 0.0), 40, 1.0).unwrap();
        assert!(elastic_energy(&beam, &c).unwrap() < 1e-24);
        let bc = BoundaryCondition::ClampedClamped(*beam.first(), *beam.last());
        let r = el_residual(&beam, &c, 0.0, &bc).unwrap();
        assert!(r.interior < 1e-12 && r.natural_bc == 0.0);
        let g = gradient(&beam, &c, 0.0, &BoundaryCondition::Clamped(Mat3::identity())).unwrap();
        assert!(g.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn straight_natural_bc_residual() {
        let c = coeffs();
        let s = RotationCurve::straight(16, 1.0).unwrap();
        let r = el_residual(&s, &c, 0.0, &BoundaryCondition::WeakFree).unwrap();
        assert!((r.natural_bc - 2.0 * c.c13 * c.k).abs() < 1e-12);
    }

    #[test]
    fn zero_gradient_without_curvature() {
        let c = coeffs().with_k(0.0);
        let s = RotationCurve::straight(16, 1.0).unwrap();
        let g = gradient(&s, &c, 0.0, &BoundaryCondition::WeakFree).unwrap();
        assert!(g.iter().all(|v| *v == Vec3::zeros()));
    }

    #[test]
    fn jacobian_inverses_match_finite_differences() {
        let x = Vec3::new(0.3, -0.5, 0.8);
        let eta = Vec3::new(0.2, 0.7, -0.4);
        let eps = 1e-6;
        let log = |m: &Mat3| crate::so3::log_rotation(m).unwrap();
        let base = exp_skew(&x, 1.0);
        let d = (log(&(base * exp_skew(&eta, eps))) - log(&(base * exp_skew(&eta, -eps)))) / (2.0 * eps);
        assert!((d - jr_inv(&x) * eta).norm() < 1e-8);
        let d = (log(&(exp_skew(&eta, eps) * base)) - log(&(exp_skew(&eta, -eps) * base))) / (2.0 * eps);
        assert!((d - jl_inv(&x) * eta).norm() < 1e-8);
    }

    #[test]
    fn bc_violation_reported() {
        let c = coeffs();
        let s = RotationCurve::from_generator(&Mat3::identity(), &Vec3::new(0.0, 1.0, 0.0), 16, 1.0).unwrap();
        assert!(matches!(
            energy(&s, &c, 0.0, &BoundaryCondition::WeakClamped),
            Err(Error::BcViolation { .. })
        ));
        assert!(energy(&s, &c, 0.0, &BoundaryCondition::Clamped(Mat3::identity())).is_ok());
    }
}
