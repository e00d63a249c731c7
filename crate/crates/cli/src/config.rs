use clap::{Args, ValueEnum};
use rodstab_core::coefficients::MaterialParams;
use rodstab_core::critical::f_crit_analytic;
use rodstab_core::{unit_area_coefficients, BoundaryCondition, RodCoefficients};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BcTag {
    WeakFree,
    Clamped,
    ClampedClamped,
    WeakClamped,
}

impl BcTag {
    pub fn condition(self) -> BoundaryCondition {
        match self {
            BcTag::WeakFree => BoundaryCondition::WeakFree,
            BcTag::Clamped => BoundaryCondition::Clamped(rodstab_core::Mat3::identity()),
            BcTag::ClampedClamped => BoundaryCondition::clamped_identity(),
            BcTag::WeakClamped => BoundaryCondition::WeakClamped,
        }
    }

    pub fn has_critical_force(self) -> bool {
        matches!(self, BcTag::ClampedClamped | BcTag::WeakClamped)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// First Lame constant.
    #[arg(long = "lambda", default_value_t = 0.326, global = true, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Second Lame constant.
    #[arg(long, default_value_t = 0.654e-3, global = true, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0, global = true, allow_negative_numbers = true)]
    pub length: f64,
    /// Cross-section width along z (unit area).
    #[arg(long, default_value_t = 0.6, global = true, allow_negative_numbers = true)]
    pub wz: f64,
    #[arg(long, default_value_t = 6.0, global = true, allow_negative_numbers = true)]
    pub chi: f64,
    /// Absolute end force.
    #[arg(long, global = true, allow_negative_numbers = true, conflicts_with = "force_frac")]
    pub force: Option<f64>,
    /// End force as a fraction of the critical force of --bc.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub force_frac: Option<f64>,
    #[arg(long, default_value_t = 0.05, global = true)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = BcTag::ClampedClamped, global = true)]
    pub bc: BcTag,
    #[arg(long, default_value_t = 200, global = true)]
    pub n_grid: usize,
    #[arg(long, default_value_t = 400, global = true)]
    pub n_samples: usize,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Output path stem; without it results go to stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
    /// Disable the shear-modulus normalization.
    #[arg(long, global = true)]
    pub no_normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "value")]
pub enum ForceSpec {
    Absolute(f64),
    Fraction(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub lame_lambda: f64,
    pub lame_mu: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub w_z: f64,
    pub chi: f64,
    pub force: ForceSpec,
    pub delta: f64,
    pub bc: BcTag,
    pub n_grid: usize,
    pub n_samples: usize,
    pub seed: u64,
    pub normalize: bool,
}

pub const DEFAULT_FORCE_FRAC: f64 = 0.999;

impl RunConfig {
    pub fn from_common(c: &Common) -> Result<Self, CliError> {
        let force = match (c.force, c.force_frac) {
            (Some(f), _) => ForceSpec::Absolute(f),
            (None, Some(q)) => ForceSpec::Fraction(q),
            (None, None) => ForceSpec::Fraction(DEFAULT_FORCE_FRAC),
        };
        let cfg = RunConfig {
            lame_lambda: c.lambda,
            lame_mu: c.mu,
            length: c.length,
            w_z: c.wz,
            chi: c.chi,
            force,
            delta: c.delta,
            bc: c.bc,
            n_grid: c.n_grid,
            n_samples: c.n_samples,
            seed: c.seed,
            normalize: !c.no_normalize,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let f = match self.force {
            ForceSpec::Absolute(v) | ForceSpec::Fraction(v) => v,
        };
        let vals = [self.lame_lambda, self.lame_mu, self.length, self.w_z, self.chi, f, self.delta];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Validation("all numeric parameters must be finite".into()));
        }
        if self.n_grid < 4 {
            return Err(CliError::Validation("--n-grid must be at least 4".into()));
        }
        if self.n_samples < 2 {
            return Err(CliError::Validation("--n-samples must be at least 2".into()));
        }
        self.material().validate()?;
        Ok(())
    }

    pub fn material(&self) -> MaterialParams {
        MaterialParams { lame_lambda: self.lame_lambda, lame_mu: self.lame_mu, normalize_by_mu: self.normalize }
    }

    pub fn coefficients(&self) -> Result<RodCoefficients, CliError> {
        Ok(unit_area_coefficients(&self.material(), self.w_z, self.chi, self.length)?)
    }

    pub fn with_point(&self, w_z: f64, chi: f64) -> Self {
        RunConfig { w_z, chi, ..self.clone() }
    }

    /// Resolves the force spec against the analytic critical force.
    pub fn resolve_force(&self, coeffs: &RodCoefficients) -> Result<(f64, Option<f64>), CliError> {
        match self.force {
            ForceSpec::Absolute(f) => Ok((f, None)),
            ForceSpec::Fraction(_) if !self.bc.has_critical_force() => Err(CliError::Validation(
                "a force fraction needs --bc clamped-clamped or weak-clamped; pass --force".into(),
            )),
            ForceSpec::Fraction(q) => {
                let fc = f_crit_analytic(coeffs, &self.bc.condition())?.f_crit;
                Ok((q * fc, Some(fc)))
            }
        }
    }
}
