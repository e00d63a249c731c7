use serde::{Deserialize, Serialize};

use super::BoundaryCondition;
use crate::banded::SymBand;
use crate::coefficients::RodCoefficients;
use crate::critical::{f_crit_analytic, Branch};
use crate::error::{Error, Result};
use crate::so3::Mat3;

/// Second variation of the discrete energy at the straight state,
/// `K(f) = K(0) + f M`, on the free degrees of freedom.
#[derive(Debug, Clone)]
pub struct SecondVariation {
    pub stiffness: SymBand,
    pub mass: SymBand,
    /// `(node, component)` of each free degree of freedom, node-major.
    pub dofs: Vec<(usize, usize)>,
    pub n: usize,
    pub length: f64,
}

impl SecondVariation {
    pub fn at(&self, f: f64) -> SymBand {
        self.stiffness.axpy(f, &self.mass)
    }

    pub fn dim(&self) -> usize {
        self.dofs.len()
    }
}

pub fn second_variation_matrix(coeffs: &RodCoefficients, bc: &BoundaryCondition, n: usize) -> Result<SecondVariation> {
    match bc {
        BoundaryCondition::WeakClamped => {}
        BoundaryCondition::ClampedClamped(a, b)
            if (a - Mat3::identity()).amax() <= 1e-12 && (b - Mat3::identity()).amax() <= 1e-12 => {}
        other => return Err(Error::UnsupportedBc(other.name())),
    }
    if n < 4 {
        return Err(Error::InvalidInput(format!("need N >= 4, got {n}")));
    }
    let length = coeffs.length;
    let h = length / n as f64;

    let mut index = vec![[usize::MAX; 3]; n + 1];
    let mut dofs = Vec::new();
    for (j, slot) in index.iter_mut().enumerate() {
        let fixed = bc.fixed_components(j, n);
        for c in 0..3 {
            if !fixed[c] {
                slot[c] = dofs.len();
                dofs.push((j, c));
            }
        }
    }
    let dim = dofs.len();
    let mut stiffness = SymBand::zeros(dim, 5);
    let mut mass = SymBand::zeros(dim, 5);
    let s = coeffs.cdiag();
    let cpl = 0.5 * coeffs.c13 * coeffs.k;
    let add = |m: &mut SymBand, a: usize, b: usize, v: f64| {
        if a != usize::MAX && b != usize::MAX {
            m.add(a, b, v);
        }
    };
    for i in 0..n {
        let (p, q) = (index[i], index[i + 1]);
        for c in 0..3 {
            let v = s[c] / h;
            add(&mut stiffness, p[c], p[c], v);
            add(&mut stiffness, q[c], q[c], v);
            add(&mut stiffness, p[c], q[c], -v);
        }
        // c13 k (eta_i x eta_{i+1})_y
        add(&mut stiffness, p[2], q[0], cpl);
        add(&mut stiffness, p[0], q[2], -cpl);
    }
    for (j, slot) in index.iter().enumerate() {
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        for c in 1..3 {
            add(&mut mass, slot[c], slot[c], w * h);
        }
    }
    Ok(SecondVariation { stiffness, mass, dofs, n, length })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub kernel_dim: usize,
    /// Angle between the computed null vector and the analytic kernel.
    pub kernel_match_error: f64,
    pub f_crit: f64,
    pub branch: Branch,
    pub norm: f64,
    pub threshold: f64,
}

/// Kernel of `K(f_crit)` in the weak-clamped regime versus the analytic kernel.
pub fn bifurcation_kernel_check(coeffs: &RodCoefficients, n: usize) -> Result<KernelCheck> {
    let l = coeffs.length;
    let pi2 = std::f64::consts::PI.powi(2);
    let f1 = (coeffs.c13 * coeffs.k).powi(2) / coeffs.c23 - pi2 * coeffs.c12 / (l * l);
    let f2 = -pi2 * coeffs.c13 / (l * l);
    if (f1 - f2).abs() <= 1e-10 * f1.abs().max(f2.abs()) {
        return Err(Error::DegenerateCase(format!("f1 = f2 = {f1}")));
    }
    let bc = BoundaryCondition::WeakClamped;
    let br = f_crit_analytic(coeffs, &bc)?;
    let sv = second_variation_matrix(coeffs, &bc, n)?;
    let k = sv.at(br.f_crit);
    let norm = k.norm2(500);
    let tau = 1e-6 * norm;
    let kernel_dim = k.count_below(tau) - k.count_below(-tau);

    let v = k.eigenvector_near(1e-3 * tau, 30);
    let h = l / n as f64;
    let pi = std::f64::consts::PI;
    let analytic: Vec<f64> = sv
        .dofs
        .iter()
        .map(|&(j, c)| {
            let x = j as f64 * h;
            let (s, cs) = ((pi * x / l).sin(), (pi * x / l).cos());
            match (br.branch, c) {
                (Branch::Torsional, 1) => s,
                (Branch::Torsional, _) => 0.0,
                (_, 0) => l * coeffs.c13 * coeffs.k * (1.0 - cs),
                (_, 1) => 0.0,
                (_, _) => -pi * coeffs.c23 * s,
            }
        })
        .collect();
    Ok(KernelCheck {
        kernel_dim,
        kernel_match_error: angle_between(&v, &analytic),
        f_crit: br.f_crit,
        branch: br.branch,
        norm,
        threshold: tau,
    })
}

/// Unsigned angle between the lines spanned by `u` and `v`.
pub(crate) fn angle_between(u: &[f64], v: &[f64]) -> f64 {
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let c: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / (nu * nv);
    let s = u.iter().zip(v).map(|(a, b)| (a / nu - c * b / nv).powi(2)).sum::<f64>().sqrt();
    s.atan2(c.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs() -> RodCoefficients {
        RodCoefficients::from_constants(0.1735, 0.3598, 0.1323, 7.5, 1.0).unwrap()
    }

    #[test]
    fn unsupported_regimes() {
        let c = coeffs();
        assert!(matches!(second_variation_matrix(&c, &BoundaryCondition::WeakFree, 10), Err(Error::UnsupportedBc(_))));
        let tilted = crate::so3::exp_skew(&crate::so3::Vec3::new(0.0, 0.1, 0.0), 1.0);
        let bc = BoundaryCondition::ClampedClamped(tilted, Mat3::identity());
        assert!(second_variation_matrix(&c, &bc, 10).is_err());
    }

    #[test]
    fn affine_in_force() {
        let sv = second_variation_matrix(&coeffs(), &BoundaryCondition::WeakClamped, 12).unwrap();
        let d = sv.at(3.0).to_dense() - sv.at(-1.5).to_dense();
        let m = sv.mass.to_dense() * 4.5;
        assert!((d - m).amax() < 1e-12);
        assert_eq!(sv.dim(), 3 * 13 - 5);
    }

    #[test]
    fn no_curvature_is_definite_when_clamped() {
        let c = coeffs().with_k(0.0);
        let sv = second_variation_matrix(&c, &BoundaryCondition::clamped_identity(), 20).unwrap();
        assert!(sv.at(0.0).is_positive_definite());
        let wc = second_variation_matrix(&c, &BoundaryCondition::WeakClamped, 20).unwrap();
        assert!(wc.at(0.0).is_positive_definite());
    }

    #[test]
    fn large_force_is_definite() {
        let sv = second_variation_matrix(&coeffs(), &BoundaryCondition::WeakClamped, 50).unwrap();
        assert!(sv.at(1e4).is_positive_definite());
        assert!(!sv.at(0.0).is_positive_definite());
    }

    #[test]
    fn angle_helper() {
        assert!(angle_between(&[1.0, 0.0], &[-3.0, 0.0]).abs() < 1e-15);
        assert!((angle_between(&[1.0, 0.0], &[0.0, 2.0]) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
