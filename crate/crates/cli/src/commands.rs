use std::io::Write;

use clap::ValueEnum;
use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rodstab_core::conjugate::{helix_system, scan as run_scan, ScanOptions, StabilityReport, Verdict};
use rodstab_core::critical::{f_crit_analytic, f_crit_with_numeric};
use rodstab_core::rod::{elastic_energy, minimize_report, MinimizeOptions};
use rodstab_core::so3::{exp_skew, Vec3};
use rodstab_core::{build_helix, Error, HelixSpec, RodCoefficients, RotationCurve};
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::output::{csv_writer, num, opt_num, sink, tag, write_json};
use crate::CliError;

pub fn coeffs(cfg: &RunConfig, stem: Option<&str>, fmt: Format) -> Result<(), CliError> {
    let c = cfg.coefficients()?;
    match fmt {
        Format::Json => write_json(sink(stem, ".json")?, &c)?,
        Format::Csv => {
            let mut w = csv_writer(sink(stem, ".csv")?);
            w.write_record(["c12", "c13", "c23", "tau_s", "k", "chi", "L"])?;
            w.write_record([c.c12, c.c13, c.c23, c.tau_s, c.k, c.chi, c.length].map(num))?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn critical_force(cfg: &RunConfig, numeric: Option<usize>, stem: Option<&str>, fmt: Format) -> Result<(), CliError> {
    let c = cfg.coefficients()?;
    let bc = cfg.bc.condition();
    let br = match numeric {
        Some(n) if n < 100 => return Err(CliError::Validation("--numeric needs N >= 100".into())),
        Some(n) => f_crit_with_numeric(&c, &bc, n)?,
        None => f_crit_analytic(&c, &bc)?,
    };
    match fmt {
        Format::Json => write_json(sink(stem, ".json")?, &br)?,
        Format::Csv => {
            let mut w = csv_writer(sink(stem, ".csv")?);
            w.write_record(["bc", "f1_crit", "f2_crit", "f_crit", "branch", "x_star", "a_param", "N", "f_crit_numeric", "relative_gap"])?;
            w.write_record([
                br.bc.clone(),
                num(br.f1_crit),
                num(br.f2_crit),
                num(br.f_crit),
                tag(&br.branch),
                opt_num(br.x_star),
                opt_num(br.a_param),
                br.n.map(|n| n.to_string()).unwrap_or_default(),
                opt_num(br.f_crit_numeric),
                opt_num(br.relative_gap),
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Helix and scan for one parameter point.
struct ScanRun {
    f: f64,
    f_crit: Option<f64>,
    helix: HelixSpec,
    report: StabilityReport,
}

fn scan_point(cfg: &RunConfig) -> Result<ScanRun, CliError> {
    let c = cfg.coefficients()?;
    let (f, f_crit) = cfg.resolve_force(&c)?;
    let f_crit = match f_crit {
        Some(v) => Some(v),
        None if cfg.bc.has_critical_force() => Some(f_crit_analytic(&c, &cfg.bc.condition())?.f_crit),
        None => None,
    };
    if f == 0.0 {
        return Err(CliError::Validation("the end force resolves to zero".into()));
    }
    let helix = build_helix(&c, f, cfg.delta)?;
    let opts = ScanOptions { n_samples: cfg.n_samples, ..Default::default() };
    let report = run_scan(&helix_system(&helix, &c), c.length, &opts);
    info!("w_z={} chi={} f={f} verdict={:?}", cfg.w_z, cfg.chi, report.verdict);
    Ok(ScanRun { f, f_crit, helix, report })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ScanJson {
    pub params: RunConfig,
    pub f: f64,
    pub f_crit: Option<f64>,
    pub theta: f64,
    pub verdict: Verdict,
    pub conjugate_points: Vec<f64>,
    pub flags: Vec<String>,
    pub gamma_norm_times_length: f64,
}

fn write_scan_csv<W: Write>(w: W, r: &StabilityReport) -> Result<(), CliError> {
    let mut w = csv_writer(w);
    w.write_record(["t", "delta", "det_m", "sigma_min"])?;
    for i in 0..r.ts.len() {
        w.write_record([r.ts[i], r.delta_vals[i], r.det_vals[i], r.sigma_min[i]].map(num))?;
    }
    w.flush()?;
    Ok(())
}

pub fn scan(cfg: &RunConfig, stem: Option<&str>, fmt: Format) -> Result<(), CliError> {
    let run = scan_point(cfg)?;
    let js = ScanJson {
        params: cfg.clone(),
        f: run.f,
        f_crit: run.f_crit,
        theta: run.helix.theta,
        verdict: run.report.verdict,
        conjugate_points: run.report.conjugate_points.clone(),
        flags: run.report.flags.clone(),
        gamma_norm_times_length: run.report.gamma_norm_times_length,
    };
    match (stem, fmt) {
        (Some(_), _) => {
            write_scan_csv(sink(stem, ".csv")?, &run.report)?;
            write_json(sink(stem, ".json")?, &js)?;
        }
        (None, Format::Json) => write_json(sink(None, "")?, &js)?,
        (None, Format::Csv) => write_scan_csv(sink(None, "")?, &run.report)?,
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepRow {
    pub w_z: f64,
    pub chi: f64,
    pub f_crit: Option<f64>,
    pub f: Option<f64>,
    pub theta: Option<f64>,
    pub verdict: Option<Verdict>,
    pub flags: Vec<String>,
    pub error: Option<String>,
}

fn sweep_row(cfg: &RunConfig, w_z: f64, chi: f64) -> SweepRow {
    let mut row = SweepRow { w_z, chi, f_crit: None, f: None, theta: None, verdict: None, flags: vec![], error: None };
    match scan_point(&cfg.with_point(w_z, chi)) {
        Ok(run) => {
            row.f_crit = run.f_crit;
            row.f = Some(run.f);
            row.theta = Some(run.helix.theta);
            row.verdict = Some(run.report.verdict);
            row.flags = run.report.flags;
        }
        Err(e) => {
            warn!("w_z={w_z} chi={chi}: {e}");
            row.error = Some(e.to_string());
        }
    }
    row
}

pub fn sweep(
    cfg: &RunConfig,
    wz_list: &[f64],
    chi_list: &[f64],
    jobs: usize,
    stem: Option<&str>,
    fmt: Format,
) -> Result<(), CliError> {
    if wz_list.iter().chain(chi_list).any(|v| !v.is_finite()) {
        return Err(CliError::Validation("grid values must be finite".into()));
    }
    let grid: Vec<(f64, f64)> = wz_list.iter().flat_map(|&w| chi_list.iter().map(move |&c| (w, c))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(anyhow::Error::from)?;
    let rows: Vec<SweepRow> = pool.install(|| grid.par_iter().map(|&(w, c)| sweep_row(cfg, w, c)).collect());
    match fmt {
        Format::Json => write_json(sink(stem, ".json")?, &rows)?,
        Format::Csv => {
            let mut w = csv_writer(sink(stem, ".csv")?);
            w.write_record(["w_z", "chi", "f_crit", "f", "theta", "verdict", "flags", "error"])?;
            for r in &rows {
                let verdict = r.verdict.map(|v| tag(&v)).unwrap_or_default();
                w.write_record([
                    num(r.w_z),
                    num(r.chi),
                    opt_num(r.f_crit),
                    opt_num(r.f),
                    opt_num(r.theta),
                    verdict,
                    r.flags.join(";"),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Init {
    Straight,
    Curved,
    Random,
}

// Initial curves vanish at both ends, so they satisfy every supported
// boundary condition with identity data.
fn initial_curve(cfg: &RunConfig, c: &RodCoefficients, init: Init) -> Result<RotationCurve, CliError> {
    let n = cfg.n_grid;
    let l = cfg.length;
    let modes: Vec<Vec3> = match init {
        Init::Straight => return Ok(RotationCurve::straight(n, l)?),
        Init::Curved => vec![Vec3::new(0.0, c.k * l / std::f64::consts::PI, 0.0)],
        Init::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..3)
                .map(|_| Vec3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)))
                .collect()
        }
    };
    let samples = (0..=n)
        .map(|i| {
            let s = std::f64::consts::PI * i as f64 / n as f64;
            let xi: Vec3 = modes.iter().enumerate().map(|(m, a)| a * ((m + 1) as f64 * s).sin() / (m + 1) as f64).sum();
            exp_skew(&xi, 1.0)
        })
        .collect();
    Ok(RotationCurve::new(samples, l)?)
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct MinimizeSummary {
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: f64,
    pub energy: f64,
    pub elastic_energy: f64,
}

pub fn minimize(cfg: &RunConfig, init: Init, max_iter: usize, stem: Option<&str>) -> Result<(), CliError> {
    let c = cfg.coefficients()?;
    let (f, _) = cfg.resolve_force(&c)?;
    let bc = cfg.bc.condition();
    let curve0 = initial_curve(cfg, &c, init)?;
    let opts = MinimizeOptions { max_iter, ..Default::default() };
    let out = minimize_report(&curve0, &c, f, &bc, &opts)?;
    let stem = stem.unwrap_or("minimize");
    out.curve.write_csv(sink(Some(stem), "_curve.csv")?)?;
    let mut w = csv_writer(sink(Some(stem), "_energy.csv")?);
    w.write_record(["iteration", "energy"])?;
    for (i, e) in out.trace.iter().enumerate() {
        w.write_record([i.to_string(), num(*e)])?;
    }
    w.flush()?;
    let summary = MinimizeSummary {
        f,
        iterations: out.iterations,
        converged: out.converged,
        grad_norm: out.grad_norm,
        energy: *out.trace.last().unwrap_or(&f64::NAN),
        elastic_energy: elastic_energy(&out.curve, &c)?,
    };
    write_json(sink(None, "")?, &summary)?;
    if !out.converged {
        return Err(Error::NoConvergence { iterations: out.iterations, grad_norm: out.grad_norm }.into());
    }
    Ok(())
}

pub fn helix(cfg: &RunConfig, stem: Option<&str>, fmt: Format) -> Result<(), CliError> {
    let c = cfg.coefficients()?;
    let (f, _) = cfg.resolve_force(&c)?;
    let h = build_helix(&c, f, cfg.delta)?;
    match fmt {
        Format::Json => write_json(sink(stem, ".json")?, &h)?,
        Format::Csv => h.curve(cfg.n_grid)?.write_csv(sink(stem, ".csv")?)?,
    }
    Ok(())
}
