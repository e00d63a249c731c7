//! Symmetric band matrices with LDL^T-based inertia counts.

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    bw: usize,
    // lower band, row-major: (i, i - d) at i * (bw + 1) + d
    data: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        SymBand { n, bw, data: vec![0.0; n * (bw + 1)] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        (d <= self.bw && i < self.n).then(|| i * (self.bw + 1) + d)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |p| self.data[p])
    }

    /// Adds `v` to entry `(i, j)` (and hence `(j, i)`).
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let p = self.idx(i, j).unwrap_or_else(|| panic!("({i}, {j}) outside band {}", self.bw));
        self.data[p] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let p = self.idx(i, j).unwrap_or_else(|| panic!("({i}, {j}) outside band {}", self.bw));
        self.data[p] = v;
    }

    /// `self + s * other`; both must share shape.
    pub fn axpy(&self, s: f64, other: &SymBand) -> SymBand {
        assert_eq!((self.n, self.bw), (other.n, other.bw));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect();
        SymBand { n: self.n, bw: self.bw, data }
    }

    pub fn shifted(&self, sigma: f64) -> SymBand {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * (self.bw + 1)] -= sigma;
        }
        out
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = i * (self.bw + 1);
            y[i] += self.data[row] * x[i];
            for d in 1..=self.bw.min(i) {
                let a = self.data[row + d];
                y[i] += a * x[i - d];
                y[i - d] += a * x[i];
            }
        }
        y
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut r = 0.0;
            let lo_j = i.saturating_sub(self.bw);
            let hi_j = (i + self.bw).min(self.n - 1);
            for j in lo_j..=hi_j {
                if j != i {
                    r += self.get(i, j).abs();
                }
            }
            let d = self.get(i, i);
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    /// Unpivoted LDL^T; returns (L packed like `self`, D).
    fn ldl(&self) -> (Vec<f64>, Vec<f64>) {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        let mut d = vec![0.0; n];
        let tiny = f64::MIN_POSITIVE.sqrt() * self.max_abs().max(1.0);
        for j in 0..n {
            let mut dj = self.data[j * w];
            for k in j.saturating_sub(bw)..j {
                let ljk = l[j * w + (j - k)];
                dj -= ljk * ljk * d[k];
            }
            if dj == 0.0 {
                dj = tiny;
            }
            d[j] = dj;
            for i in j + 1..(j + bw + 1).min(n) {
                let mut a = self.data[i * w + (i - j)];
                for k in i.saturating_sub(bw)..j {
                    a -= l[i * w + (i - k)] * l[j * w + (j - k)] * d[k];
                }
                l[i * w + (i - j)] = a / dj;
            }
        }
        (l, d)
    }

    /// Inertia by Sylvester's law on the LDL^T pivots.
    pub fn inertia(&self) -> Inertia {
        let (_, d) = self.ldl();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut out = Inertia { negative: 0, zero: 0, positive: 0 };
        for v in d {
            if v.abs() <= 1e-300 * scale {
                out.zero += 1;
            } else if v < 0.0 {
                out.negative += 1;
            } else {
                out.positive += 1;
            }
        }
        out
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn count_below(&self, sigma: f64) -> usize {
        self.shifted(sigma).inertia().negative
    }

    pub fn is_positive_definite(&self) -> bool {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        for j in 0..n {
            let mut s = self.data[j * w];
            for k in j.saturating_sub(bw)..j {
                let v: f64 = l[j * w + (j - k)];
                s -= v * v;
            }
            if !(s > 0.0) {
                return false;
            }
            let ljj = s.sqrt();
            l[j * w] = ljj;
            for i in j + 1..(j + bw + 1).min(n) {
                let mut a = self.data[i * w + (i - j)];
                for k in i.saturating_sub(bw)..j {
                    a -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                l[i * w + (i - j)] = a / ljj;
            }
        }
        true
    }

    /// Smallest eigenvalue by bisection on Sturm counts.
    pub fn smallest_eigenvalue(&self, rel_tol: f64) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let tol = rel_tol * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solves `(self) x = b` with the unpivoted LDL^T factorization.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let (l, d) = self.ldl();
        let mut x = b.to_vec();
        for i in 0..n {
            for k in i.saturating_sub(bw)..i {
                x[i] -= l[i * w + (i - k)] * x[k];
            }
        }
        for i in 0..n {
            x[i] /= d[i];
        }
        for i in (0..n).rev() {
            for r in i + 1..(i + bw + 1).min(n) {
                x[i] -= l[r * w + (r - i)] * x[r];
            }
        }
        x
    }

    /// Eigenvector closest to the shift `sigma` by inverse iteration.
    pub fn eigenvector_near(&self, sigma: f64, iters: usize) -> Vec<f64> {
        let shifted = self.shifted(sigma);
        let mut x: Vec<f64> = (0..self.n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        normalize(&mut x);
        for _ in 0..iters {
            let mut y = shifted.solve(&x);
            if y.iter().any(|v| !v.is_finite()) {
                break;
            }
            normalize(&mut y);
            x = y;
        }
        x
    }

    /// Spectral norm by power iteration.
    pub fn norm2(&self, iters: usize) -> f64 {
        let mut x: Vec<f64> = (0..self.n).map(|i| 1.0 + ((i * 31) % 7) as f64).collect();
        normalize(&mut x);
        let mut lam = 0.0;
        for _ in 0..iters {
            let mut y = self.matvec(&x);
            lam = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if lam == 0.0 {
                return 0.0;
            }
            normalize(&mut y);
            x = y;
        }
        lam
    }
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}
