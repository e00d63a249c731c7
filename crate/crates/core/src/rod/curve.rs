use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::so3::{exp_skew, is_rotation, log_rotation, rotation_angle, Mat3, Vec3};

/// Frames `R(x_i)` at the nodes `x_i = i L / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationCurve {
    samples: Vec<Mat3>,
    length: f64,
}

/// Body strains at element midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainField {
    pub omegas: Vec<Vec3>,
}

impl RotationCurve {
    pub fn new(samples: Vec<Mat3>, length: f64) -> Result<Self> {
        if samples.len() < 5 {
            return Err(Error::InvalidInput(format!("need N >= 4 elements, got {}", samples.len().saturating_sub(1))));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidInput(format!("length must be positive, got {length}")));
        }
        if let Some(i) = samples.iter().position(|r| !is_rotation(r, 1e-6)) {
            return Err(Error::InvalidInput(format!("sample {i} is not a rotation")));
        }
        Ok(RotationCurve { samples, length })
    }

    pub fn straight(n: usize, length: f64) -> Result<Self> {
        Self::new(vec![Mat3::identity(); n + 1], length)
    }

    /// `x -> r0 exp(x hat(omega))` sampled at the nodes.
    pub fn from_generator(r0: &Mat3, omega: &Vec3, n: usize, length: f64) -> Result<Self> {
        let h = length / n as f64;
        Self::new((0..=n).map(|i| r0 * exp_skew(omega, i as f64 * h)).collect(), length)
    }

    pub fn n_elements(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn h(&self) -> f64 {
        self.length / self.n_elements() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    pub fn samples(&self) -> &[Mat3] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Mat3] {
        &mut self.samples
    }

    pub fn first(&self) -> &Mat3 {
        &self.samples[0]
    }

    pub fn last(&self) -> &Mat3 {
        &self.samples[self.samples.len() - 1]
    }

    /// Applies `Q` from the left to every frame.
    pub fn left_multiply(&self, q: &Mat3) -> Self {
        RotationCurve { samples: self.samples.iter().map(|r| q * r).collect(), length: self.length }
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
        let mut header = vec!["x".to_string()];
        for i in 1..=3 {
            for j in 1..=3 {
                header.push(format!("r{i}{j}"));
            }
        }
        wtr.write_record(&header).map_err(io)?;
        for (i, r) in self.samples.iter().enumerate() {
            let mut rec = vec![format!("{:.16e}", self.x(i))];
            for a in 0..3 {
                for b in 0..3 {
                    rec.push(format!("{:.16e}", r[(a, b)]));
                }
            }
            wtr.write_record(&rec).map_err(io)?;
        }
        wtr.flush().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let bad = |e: String| Error::InvalidInput(format!("csv: {e}"));
        let mut xs = Vec::new();
        let mut samples = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            if rec.len() != 10 {
                return Err(bad(format!("expected 10 columns, got {}", rec.len())));
            }
            let v: Vec<f64> = rec
                .iter()
                .map(|s| s.trim().parse::<f64>().map_err(|e| bad(e.to_string())))
                .collect::<Result<_>>()?;
            xs.push(v[0]);
            samples.push(Mat3::from_row_slice(&v[1..]));
        }
        let length = *xs.last().ok_or_else(|| bad("empty curve".into()))?;
        let n = xs.len() - 1;
        for (i, x) in xs.iter().enumerate() {
            if (x - i as f64 * length / n as f64).abs() > 1e-9 * length.max(1.0) {
                return Err(bad(format!("node {i} is not on a uniform grid")));
            }
        }
        Self::new(samples, length)
    }
}

pub fn strains(curve: &RotationCurve) -> Result<StrainField> {
    let h = curve.h();
    let s = curve.samples();
    let mut omegas = Vec::with_capacity(s.len() - 1);
    for i in 0..s.len() - 1 {
        let q = s[i].transpose() * s[i + 1];
        let angle = rotation_angle(&q);
        if angle > std::f64::consts::FRAC_PI_2 {
            return Err(Error::FrameJump { index: i, angle });
        }
        omegas.push(log_rotation(&q)? / h);
    }
    Ok(StrainField { omegas })
}
