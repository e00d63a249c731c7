use super::{check_bc, energy, gradient, BoundaryCondition, RotationCurve};
use crate::coefficients::RodCoefficients;
use crate::error::{Error, Result};
use crate::so3::{exp_skew, polar_project, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    /// Initial Armijo step.
    pub step: f64,
    /// Tolerance on `max_j |g_j| / (w_j h)`, relative to [`gradient_scale`].
    pub tol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { max_iter: 20_000, step: 1.0, tol: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct MinimizeOutcome {
    pub curve: RotationCurve,
    /// Energy before the first step and after each accepted step.
    pub trace: Vec<f64>,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

const ARMIJO_C1: f64 = 1e-4;
const CONTRACTION: f64 = 0.5;
const MAX_BACKTRACKS: usize = 60;
const REPROJECT_EVERY: usize = 50;

/// Moment-per-length scale `max(c_max max(|k|, 1/L) / L, |f|)`.
/// Energy round-off limits Armijo to roughly 1e-7 of it.
pub fn gradient_scale(coeffs: &RodCoefficients, f: f64) -> f64 {
    let l = coeffs.length;
    (coeffs.c_max() * coeffs.k.abs().max(1.0 / l) / l).max(f.abs())
}

fn scaled_norm(g: &[Vec3], h: f64) -> f64 {
    let n = g.len() - 1;
    g.iter()
        .enumerate()
        .map(|(j, v)| {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            v.amax() / (w * h)
        })
        .fold(0.0, f64::max)
}

// Per-component H^1 metric: s_c (u', v') + (s_c / L^2 + |f|)(u, v), Dirichlet
// on fixed components.
fn precondition(g: &[Vec3], coeffs: &RodCoefficients, f: f64, h: f64, bc: &BoundaryCondition) -> Vec<Vec3> {
    let n = g.len() - 1;
    let s = coeffs.cdiag();
    let l = coeffs.length;
    let mut out = vec![Vec3::zeros(); n + 1];
    let mut sub = vec![0.0; n + 1];
    let mut diag = vec![0.0; n + 1];
    let mut sup = vec![0.0; n + 1];
    let mut rhs = vec![0.0; n + 1];
    for c in 0..3 {
        let stiff = s[c] / h;
        let mass = (s[c] / (l * l) + f.abs()) * h;
        for j in 0..=n {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            let fixed = bc.fixed_components(j, n)[c];
            if fixed {
                sub[j] = 0.0;
                sup[j] = 0.0;
                diag[j] = 1.0;
                rhs[j] = 0.0;
                continue;
            }
            let deg = if j == 0 || j == n { 1.0 } else { 2.0 };
            diag[j] = stiff * deg + mass * w;
            sub[j] = if j > 0 && !bc.fixed_components(j - 1, n)[c] { -stiff } else { 0.0 };
            sup[j] = if j < n && !bc.fixed_components(j + 1, n)[c] { -stiff } else { 0.0 };
            rhs[j] = g[j][c];
        }
        let x = thomas(&sub, &diag, &sup, &rhs);
        for j in 0..=n {
            out[j][c] = x[j];
        }
    }
    out
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

fn retract(curve: &RotationCurve, dir: &[Vec3], alpha: f64) -> RotationCurve {
    let mut out = curve.clone();
    for (r, d) in out.samples_mut().iter_mut().zip(dir) {
        if *d != Vec3::zeros() {
            *r *= exp_skew(d, alpha);
        }
    }
    out
}

/// Preconditioned Riemannian gradient descent with Armijo backtracking.
/// Always returns the last iterate; `converged` tells whether `tol` was met.
pub fn minimize_report(
    curve0: &RotationCurve,
    coeffs: &RodCoefficients,
    f: f64,
    bc: &BoundaryCondition,
    opts: &MinimizeOptions,
) -> Result<MinimizeOutcome> {
    check_bc(curve0, bc)?;
    let h = curve0.h();
    let mut curve = curve0.clone();
    let mut e = energy(&curve, coeffs, f, bc)?;
    let mut trace = vec![e];
    let mut g = gradient(&curve, coeffs, f, bc)?;
    let mut gn = scaled_norm(&g, h);
    let tol = opts.tol * gradient_scale(coeffs, f);
    let mut it = 0;
    while gn > tol && it < opts.max_iter {
        let p = precondition(&g, coeffs, f, h, bc);
        let slope: f64 = g.iter().zip(&p).map(|(a, b)| a.dot(b)).sum();
        if !(slope > 0.0) {
            break;
        }
        let dir: Vec<Vec3> = p.iter().map(|v| -v).collect();
        let mut alpha = opts.step;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = retract(&curve, &dir, alpha);
            let et = energy(&trial, coeffs, f, bc).unwrap_or(f64::INFINITY);
            if et <= e - ARMIJO_C1 * alpha * slope {
                accepted = Some((trial, et));
                break;
            }
            alpha *= CONTRACTION;
        }
        let Some((mut next, en)) = accepted else {
            break;
        };
        it += 1;
        if it % REPROJECT_EVERY == 0 {
            for r in next.samples_mut() {
                *r = polar_project(r)?;
            }
        }
        curve = next;
        e = en;
        trace.push(e);
        g = gradient(&curve, coeffs, f, bc)?;
        gn = scaled_norm(&g, h);
    }
    Ok(MinimizeOutcome { converged: gn <= tol, curve, trace, iterations: it, grad_norm: gn })
}

pub fn minimize(
    curve0: &RotationCurve,
    coeffs: &RodCoefficients,
    f: f64,
    bc: &BoundaryCondition,
    opts: &MinimizeOptions,
) -> Result<(RotationCurve, Vec<f64>)> {
    let out = minimize_report(curve0, coeffs, f, bc, opts)?;
    if !out.converged {
        return Err(Error::NoConvergence { iterations: out.iterations, grad_norm: out.grad_norm });
    }
    Ok((out.curve, out.trace))
}
