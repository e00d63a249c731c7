//! Conjugate points of the Jacobi system `C xi'' = (D - D^T) xi' + B xi`.

use nalgebra::{Complex, Matrix6};
use serde::{Deserialize, Serialize};

use crate::coefficients::RodCoefficients;
use crate::helix::HelixSpec;
use crate::so3::{hat, Mat3, Vec3};

pub type Mat6 = Matrix6<f64>;

pub const STIFF_LIMIT: f64 = 500.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSystem {
    pub cdiag: Vec3,
    pub d: Mat3,
    pub b: Mat3,
    pub gamma: Mat6,
}

pub fn assemble_system(omega: &Vec3, r: &Vec3, coeffs: &RodCoefficients, f: f64) -> SecondOrderSystem {
    let cdiag = coeffs.cdiag();
    let c = Mat3::from_diagonal(&cdiag);
    let a = hat(omega);
    let big_omega = hat(&cdiag.component_mul(&(omega - Vec3::new(0.0, coeffs.k, 0.0))));
    let d = big_omega * 0.5 - a * c;

    let (e1, e2, e3) = (Vec3::x(), Vec3::y(), Vec3::z());
    let outer = |u: &Vec3, v: &Vec3| u * v.transpose();
    let force = (outer(&e2, &e2) + outer(&e3, &e3)) * (f * r.x)
        - (outer(&e1, &e2) + outer(&e2, &e1)) * (0.5 * f * r.y)
        - (outer(&e1, &e3) + outer(&e3, &e1)) * (0.5 * f * r.z);
    let b = a.transpose() * c * a + (big_omega * a + a * big_omega) * 0.5 + force;

    let cinv = Mat3::from_diagonal(&cdiag.map(|v| 1.0 / v));
    let mut gamma = Mat6::zeros();
    gamma.fixed_view_mut::<3, 3>(0, 3).copy_from(&Mat3::identity());
    gamma.fixed_view_mut::<3, 3>(3, 0).copy_from(&(cinv * b));
    gamma.fixed_view_mut::<3, 3>(3, 3).copy_from(&(cinv * (d - d.transpose())));
    SecondOrderSystem { cdiag, d, b, gamma }
}

pub fn helix_system(h: &HelixSpec, coeffs: &RodCoefficients) -> SecondOrderSystem {
    assemble_system(&h.omega, &h.r, coeffs, h.f)
}

pub fn flow(sys: &SecondOrderSystem, t: f64) -> Mat6 {
    (sys.gamma * t).exp()
}

/// `M(t)`: columns are the solutions with `xi(0) = 0`, `xi'(0) = e_i`.
pub fn fundamental_matrix(sys: &SecondOrderSystem, t: f64) -> Mat3 {
    flow(sys, t).fixed_view::<3, 3>(0, 3).into_owned()
}

/// Eigenvalues of a real 3x3 matrix from the characteristic cubic of its
/// trace-free part.
pub fn eigenvalues3(m: &Mat3) -> [Complex<f64>; 3] {
    let s = m.trace() / 3.0;
    let n = m - Mat3::identity() * s;
    let c2 = n[(0, 0)] * n[(1, 1)] - n[(0, 1)] * n[(1, 0)] + n[(0, 0)] * n[(2, 2)] - n[(0, 2)] * n[(2, 0)]
        + n[(1, 1)] * n[(2, 2)]
        - n[(1, 2)] * n[(2, 1)];
    let roots = cubic_roots(0.0, c2, -n.determinant());
    roots.map(|z| z + s)
}

/// Roots of `x^3 + a x^2 + b x + c`.
fn cubic_roots(a: f64, b: f64, c: f64) -> [Complex<f64>; 3] {
    let p = b - a * a / 3.0;
    let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + c;
    let shift = Complex::new(-a / 3.0, 0.0);
    let disc = Complex::new(q * q / 4.0 + p.powi(3) / 27.0, 0.0);
    let sq = disc.sqrt();
    let mut u = (Complex::new(-q / 2.0, 0.0) + sq).cbrt();
    if u.norm() < 1e-300 {
        u = (Complex::new(-q / 2.0, 0.0) - sq).cbrt();
    }
    let w = Complex::new(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [Complex::new(0.0, 0.0); 3];
    let mut uk = u;
    for root in roots.iter_mut() {
        let v = if uk.norm() < 1e-300 { Complex::new(0.0, 0.0) } else { -p / (uk * 3.0) };
        *root = uk + v + shift;
        uk *= w;
    }
    // one Newton polish per root
    for z in roots.iter_mut() {
        let f = ((*z + a) * *z + b) * *z + c;
        let df = (*z * 3.0 + 2.0 * a) * *z + b;
        if df.norm() > 0.0 {
            let step = f / df;
            if step.norm().is_finite() {
                *z -= step;
            }
        }
    }
    roots
}

pub fn min_modulus_eigenvalue(m: &Mat3) -> f64 {
    eigenvalues3(m).iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub n_samples: usize,
    pub t_min_frac: f64,
    /// Threshold on `|det M(t)| / t^3` relative to its running maximum below
    /// which a sample counts as a conjugate point without a sign change.
    pub eig_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { n_samples: 400, t_min_frac: 1e-3, eig_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub ts: Vec<f64>,
    pub delta_vals: Vec<f64>,
    pub det_vals: Vec<f64>,
    pub sigma_min: Vec<f64>,
    pub conjugate_points: Vec<f64>,
    pub verdict: Verdict,
    pub flags: Vec<String>,
    pub gamma_norm_times_length: f64,
}

fn normalized_det(sys: &SecondOrderSystem, t: f64) -> f64 {
    fundamental_matrix(sys, t).determinant() / t.powi(3)
}

pub fn scan(sys: &SecondOrderSystem, length: f64, opts: &ScanOptions) -> StabilityReport {
    let n = opts.n_samples.max(16);
    let t0 = opts.t_min_frac * length;
    let ts: Vec<f64> = (0..n).map(|i| t0 + (length - t0) * i as f64 / (n - 1) as f64).collect();
    let mut delta_vals = Vec::with_capacity(n);
    let mut det_vals = Vec::with_capacity(n);
    let mut sigma_min = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for &t in &ts {
        let m = fundamental_matrix(sys, t);
        let det = m.determinant();
        let sv = m.singular_values();
        delta_vals.push(min_modulus_eigenvalue(&m));
        det_vals.push(det);
        sigma_min.push(sv.min());
        q.push(det / t.powi(3));
    }

    let mut flags = Vec::new();
    let gamma_norm_times_length = sys.gamma.norm() * length;
    if gamma_norm_times_length > STIFF_LIMIT {
        flags.push("stiff".to_string());
    }

    let mut conjugate_points = Vec::new();
    for i in 1..n {
        if q[i - 1] == 0.0 {
            conjugate_points.push(ts[i - 1]);
        } else if q[i - 1].signum() != q[i].signum() && q[i] != 0.0 {
            let (mut lo, mut hi) = (ts[i - 1], ts[i]);
            let slo = q[i - 1].signum();
            while hi - lo > 1e-10 * length {
                let mid = 0.5 * (lo + hi);
                if normalized_det(sys, mid).signum() == slo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            conjugate_points.push(0.5 * (lo + hi));
        }
    }
    if *q.last().unwrap() == 0.0 {
        conjugate_points.push(length);
    }

    // Near-zero of det M / t^3 without a sign change, relative to the running
    // maximum: det M grows exponentially on stiff systems, so a normalization
    // shared by the whole scan would flag every early sample.
    let mut touching = Vec::new();
    let mut running = 0.0f64;
    for (t, v) in ts.iter().zip(&q) {
        running = running.max(v.abs());
        if v.abs() < opts.eig_tol * running {
            touching.push(*t);
        }
    }

    for &tc in &conjugate_points {
        let m = fundamental_matrix(sys, tc);
        if min_modulus_eigenvalue(&m) > 1e-6 * m.norm() {
            flags.push("delta_det_mismatch".to_string());
            break;
        }
    }

    let interior = conjugate_points.iter().any(|&t| t < length * (1.0 - 1e-9));
    let verdict = if interior {
        Verdict::Unstable
    } else if !conjugate_points.is_empty() || !touching.is_empty() {
        for t in touching {
            if !conjugate_points.iter().any(|&c| (c - t).abs() <= (length - t0) / (n - 1) as f64) {
                conjugate_points.push(t);
            }
        }
        conjugate_points.sort_by(f64::total_cmp);
        Verdict::Marginal
    } else {
        Verdict::Stable
    };
    StabilityReport { ts, delta_vals, det_vals, sigma_min, conjugate_points, verdict, flags, gamma_norm_times_length }
}

/// Max over `t` of `|C xi'' - (D - D^T) xi' - B xi|`, with derivatives by
/// central differences of step `1e-4 max(t)`, relative to the term sizes.
pub fn ode_residual_check(sys: &SecondOrderSystem, t_samples: &[f64]) -> f64 {
    let tmax = t_samples.iter().cloned().fold(0.0, f64::max);
    let h = 1e-4 * tmax;
    let c = Mat3::from_diagonal(&sys.cdiag);
    let skew = sys.d - sys.d.transpose();
    let mut worst = 0.0f64;
    for &t in t_samples {
        let (mm, m0, mp) = (fundamental_matrix(sys, t - h), fundamental_matrix(sys, t), fundamental_matrix(sys, t + h));
        let d1 = (mp - mm) / (2.0 * h);
        let d2 = (mp - m0 * 2.0 + mm) / (h * h);
        let res = c * d2 - skew * d1 - sys.b * m0;
        let scale = (c * d2).norm() + (skew * d1).norm() + (sys.b * m0).norm();
        worst = worst.max(res.norm() / scale.max(f64::MIN_POSITIVE));
    }
    worst
}
