//! Rotation-group primitives.
//!
//! Axial convention: `hat(w) v = w x v`, so `a12 = -w3`, `a13 = w2`, `a23 = -w1`.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

pub fn hat(w: &Vec3) -> Mat3 {
    Mat3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Axial vector of the skew part of `a`.
pub fn vee(a: &Mat3) -> Vec3 {
    Vec3::new(
        0.5 * (a[(2, 1)] - a[(1, 2)]),
        0.5 * (a[(0, 2)] - a[(2, 0)]),
        0.5 * (a[(1, 0)] - a[(0, 1)]),
    )
}

/// Rodrigues formula for `exp(t hat(w))`.
pub fn exp_skew(w: &Vec3, t: f64) -> Mat3 {
    let phi = w * t;
    let theta2 = phi.norm_squared();
    let theta = theta2.sqrt();
    let k = hat(&phi);
    let (a, b) = if theta < 1e-4 {
        (1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0, 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0)
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    Mat3::identity() + k * a + k * k * b
}

pub fn rotation_angle(r: &Mat3) -> f64 {
    let c = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let s = vee(r).norm().min(1.0);
    s.atan2(c)
}

/// Inverse of `exp_skew(., 1)` for angles below `pi - 1e-6`.
pub fn log_rotation(r: &Mat3) -> Result<Vec3> {
    let theta = rotation_angle(r);
    if std::f64::consts::PI - theta < 1e-6 {
        return Err(Error::AngleNearPi { angle: theta });
    }
    let v = vee(r);
    if theta < 1e-4 {
        let t2 = theta * theta;
        return Ok(v * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0));
    }
    if theta < std::f64::consts::FRAC_PI_2 {
        return Ok(v * (theta / theta.sin()));
    }
    // sin(theta) is small near pi; read the axis off the symmetric part instead.
    let c = theta.cos();
    let s = (r + r.transpose()) * 0.5 - Mat3::identity() * c;
    let mut axis = Vec3::zeros();
    let (mut best, mut col) = (s[(0, 0)], 0);
    for i in 1..3 {
        if s[(i, i)] > best {
            best = s[(i, i)];
            col = i;
        }
    }
    for i in 0..3 {
        axis[i] = s[(i, col)];
    }
    axis.normalize_mut();
    if axis.dot(&v) < 0.0 {
        axis = -axis;
    }
    Ok(axis * theta)
}

/// Orthogonal factor of the polar decomposition of `m`.
pub fn polar_project(m: &Mat3) -> Result<Mat3> {
    let det = m.determinant();
    if !(det > 1e-12) {
        return Err(Error::SingularInput { det });
    }
    let svd = m.svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut r = u * vt;
    if r.determinant() < 0.0 {
        let mut d = Mat3::identity();
        d[(2, 2)] = -1.0;
        r = u * d * vt;
    }
    Ok(r)
}

/// Minimal rotation `R` with `R^T e1 = r`.
pub fn frame_with_first_row(r: &Vec3) -> Result<Mat3> {
    let n = r.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!("|r| = {n}, expected 1")));
    }
    let e1 = Vec3::x();
    let c = r.dot(&e1);
    if 1.0 + c < 1e-8 {
        return Err(Error::DegenerateAxis);
    }
    // Rotation taking r to e1; its transpose takes e1 to r.
    let v = r.cross(&e1);
    let k = hat(&v);
    Ok(Mat3::identity() + k + k * k / (1.0 + c))
}

pub fn is_rotation(r: &Mat3, tol: f64) -> bool {
    (r.transpose() * r - Mat3::identity()).amax() <= tol && (r.determinant() - 1.0).abs() <= tol
}
