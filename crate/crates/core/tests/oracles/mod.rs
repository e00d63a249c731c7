//! Independent reference computations used only by the tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, Matrix6, Vector6};
use rand::Rng;
use rodstab_core::conjugate::SecondOrderSystem;
use rodstab_core::so3::{exp_skew, hat, Mat3, Vec3};
use rodstab_core::{HelixSpec, RodCoefficients, RotationCurve};

/// Torsion constant of the rectangle `(-wy, wy) x (-wz, wz)` from a
/// cell-centred finite-volume solve of the Neumann warping problem
/// `lap(psi) = 0`, `d psi / dn = z n_y - y n_z`, and
/// `J = I_p - int |grad psi|^2`.
pub fn torsion_fd(wy: f64, wz: f64, ny: usize, nz: usize) -> f64 {
    let ey: Vec<f64> = (0..=ny).map(|i| -wy + 2.0 * wy * i as f64 / ny as f64).collect();
    let ez: Vec<f64> = (0..=nz).map(|j| -wz + 2.0 * wz * j as f64 / nz as f64).collect();
    let hy: Vec<f64> = ey.windows(2).map(|w| w[1] - w[0]).collect();
    let hz: Vec<f64> = ez.windows(2).map(|w| w[1] - w[0]).collect();
    let yc: Vec<f64> = ey.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let zc: Vec<f64> = ez.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let idx = |i: usize, j: usize| i * nz + j;
    let n = ny * nz;
    // face transmissibilities
    let ty = |i: usize, j: usize| hz[j] / (yc[i + 1] - yc[i]);
    let tz = |i: usize, j: usize| hy[i] / (zc[j + 1] - zc[j]);
    // boundary faces: (cell, g, face length, centre-to-face distance)
    let mut faces = Vec::new();
    for i in 0..ny {
        for j in 0..nz {
            let (y, z) = (yc[i], zc[j]);
            let p = idx(i, j);
            // normal along y: g = z n_y; normal along z: g = -y n_z
            if i == 0 {
                faces.push((p, -z, hz[j], 0.5 * hy[i]));
            }
            if i == ny - 1 {
                faces.push((p, z, hz[j], 0.5 * hy[i]));
            }
            if j == 0 {
                faces.push((p, y, hy[i], 0.5 * hz[j]));
            }
            if j == nz - 1 {
                faces.push((p, -y, hy[i], 0.5 * hz[j]));
            }
        }
    }
    let mut b = vec![0.0; n];
    for &(p, g, len, _) in &faces {
        b[p] += g * len;
    }
    let apply = |x: &[f64], out: &mut [f64]| {
        out.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..ny {
            for j in 0..nz {
                let p = idx(i, j);
                if i + 1 < ny {
                    let q = idx(i + 1, j);
                    let fl = ty(i, j) * (x[p] - x[q]);
                    out[p] += fl;
                    out[q] -= fl;
                }
                if j + 1 < nz {
                    let q = idx(i, j + 1);
                    let fl = tz(i, j) * (x[p] - x[q]);
                    out[p] += fl;
                    out[q] -= fl;
                }
            }
        }
    };
    let mean = |v: &mut [f64]| {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter_mut().for_each(|a| *a -= m);
    };
    mean(&mut b);
    let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(p, q)| p * q).sum::<f64>();
    // Jacobi-preconditioned CG
    let mut diag = vec![0.0; n];
    {
        for i in 0..ny {
            for j in 0..nz {
                let mut d = 0.0;
                if i > 0 {
                    d += ty(i - 1, j);
                }
                if i + 1 < ny {
                    d += ty(i, j);
                }
                if j > 0 {
                    d += tz(i, j - 1);
                }
                if j + 1 < nz {
                    d += tz(i, j);
                }
                diag[idx(i, j)] = d;
            }
        }
    }
    let mut x = vec![0.0; n];
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(a, d)| a / d).collect();
    mean(&mut z);
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let stop = 1e-26 * dot(&b, &b).max(1e-300);
    for _ in 0..100 * (ny + nz) {
        apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        if dot(&r, &r) < stop {
            break;
        }
        z = r.iter().zip(&diag).map(|(a, d)| a / d).collect();
        mean(&mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
        rz = rz_new;
    }
    // int |grad psi|^2 = int_boundary g psi, with psi extrapolated from the
    // cell centre to the face by the Neumann data
    let ip = 4.0 * wy * wz * (wy * wy + wz * wz) / 3.0;
    let boundary: f64 = faces.iter().map(|&(p, g, len, d)| g * len * (x[p] + d * g)).sum();
    ip - boundary
}

/// Fundamental matrix by classical RK4 on the first-order system.
pub fn rk4_fundamental(sys: &SecondOrderSystem, t: f64, steps: usize) -> Mat3 {
    let g: Matrix6<f64> = sys.gamma;
    let h = t / steps as f64;
    let mut m = Mat3::zeros();
    for c in 0..3 {
        let mut y = Vector6::zeros();
        y[3 + c] = 1.0;
        for _ in 0..steps {
            let k1 = g * y;
            let k2 = g * (y + k1 * (h / 2.0));
            let k3 = g * (y + k2 * (h / 2.0));
            let k4 = g * (y + k3 * h);
            y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
        for r in 0..3 {
            m[(r, c)] = y[r];
        }
    }
    m
}

/// Second variation of the continuous energy at a helix under spatial
/// perturbations `exp(eps hat(b)) R` with `b(0) = b(L) = 0`, P1 elements,
/// three-point Gauss quadrature. Returns the assembled dense matrix.
pub fn helix_dirichlet_hessian(coeffs: &RodCoefficients, h: &HelixSpec, n: usize) -> DMatrix<f64> {
    let len = h.length;
    let dx = len / n as f64;
    let c = Mat3::from_diagonal(&coeffs.cdiag());
    let nb = coeffs.cdiag().component_mul(&(h.omega - Vec3::new(0.0, coeffs.k, 0.0)));
    let dim = 3 * (n - 1);
    let mut k = DMatrix::zeros(dim, dim);
    let gp = [0.5 - 0.5 * (0.6f64).sqrt(), 0.5, 0.5 + 0.5 * (0.6f64).sqrt()];
    let gw = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
    for e in 0..n {
        for (xi, w) in gp.iter().zip(gw) {
            let x = (e as f64 + xi) * dx;
            let r = h.r0 * exp_skew(&h.omega, x);
            let t = r * Vec3::x();
            let m = hat(&(r * nb));
            let rcr = r * c * r.transpose();
            let e1 = Vec3::x();
            let force = (Mat3::identity() * t.x - (e1 * t.transpose() + t * e1.transpose()) * 0.5) * h.f;
            let phi = [1.0 - xi, *xi];
            let dphi = [-1.0 / dx, 1.0 / dx];
            for a in 0..2 {
                for bb in 0..2 {
                    let (na, nbn) = (e + a, e + bb);
                    if na == 0 || na == n || nbn == 0 || nbn == n {
                        continue;
                    }
                    let blk = rcr * (dphi[a] * dphi[bb])
                        + m * (0.5 * (phi[a] * dphi[bb] - phi[bb] * dphi[a]))
                        + force * (phi[a] * phi[bb]);
                    let (ia, ib) = (3 * (na - 1), 3 * (nbn - 1));
                    for p in 0..3 {
                        for q in 0..3 {
                            k[(ia + p, ib + q)] += w * dx * blk[(p, q)];
                        }
                    }
                }
            }
        }
    }
    k
}

pub fn min_symmetric_eigenvalue(k: &DMatrix<f64>) -> f64 {
    k.clone().symmetric_eigen().eigenvalues.min()
}

pub fn random_vec3<R: Rng>(rng: &mut R, scale: f64) -> Vec3 {
    Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
}

/// Smooth random curve `R(x) = exp(psi(x))`; `pin_tangent` makes the
/// transverse components of `psi` vanish at both ends so that `R e1 = e1` there.
pub fn random_curve<R: Rng>(rng: &mut R, n: usize, length: f64, amp: f64, pin_tangent: bool) -> RotationCurve {
    let modes: Vec<(Vec3, Vec3)> = (0..3).map(|_| (random_vec3(rng, amp), random_vec3(rng, amp))).collect();
    let samples = (0..=n)
        .map(|j| {
            let x = j as f64 / n as f64;
            let mut psi = Vec3::zeros();
            for (m, (a, b)) in modes.iter().enumerate() {
                let w = (m + 1) as f64 * std::f64::consts::PI * x;
                psi += a * w.sin() + b * w.cos();
            }
            if pin_tangent {
                let s = (std::f64::consts::PI * x).sin();
                psi.y *= s;
                psi.z *= s;
            }
            exp_skew(&psi, 1.0)
        })
        .collect();
    RotationCurve::new(samples, length).unwrap()
}

pub fn reference_coeffs(w_z: f64, chi: f64) -> RodCoefficients {
    rodstab_core::unit_area_coefficients(&rodstab_core::MaterialParams::REFERENCE, w_z, chi, 1.0).unwrap()
}
