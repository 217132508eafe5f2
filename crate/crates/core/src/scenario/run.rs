//! Running scenarios and writing their artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::assembly::Variant;
use crate::evolve::{evolve_1d, evolve_3d_isotropic, EvolveError, Observables3D, WaveState3D};
use crate::grid::{observables_csv, Observables};
use crate::oracle::{cross_validate, eps_sweep, CrossValidation, EpsSweep, SWEEP_EPS, SWEEP_TOLERANCE};

use super::config::{ConfigError, ScenarioConfig};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "QLAG_OUT";
const DEFAULT_OUT_ROOT: &str = "qlag_out";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub variant: Option<Variant>,
    pub emit_plotscript: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    ConfigError,
    NumericalError,
    Leak,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Ok => 0,
            RunStatus::ConfigError => 1,
            RunStatus::NumericalError => 2,
            RunStatus::Leak => 3,
        }
    }

    fn of(e: &EvolveError) -> Self {
        match e {
            EvolveError::Leak { .. } => RunStatus::Leak,
            EvolveError::Params(_) | EvolveError::InvalidCoefficients(_) | EvolveError::TooLarge(_) => {
                RunStatus::ConfigError
            }
            _ => RunStatus::NumericalError,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FinalObservables {
    OneD(Observables),
    ThreeD(Observables3D),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub label: String,
    pub variant: Variant,
    pub dimension: u8,
    pub status: RunStatus,
    /// Outputs stop before `t_final`.
    pub partial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub steps: usize,
    pub norm_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_observables: Option<FinalObservables>,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub report: RunReport,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.report.status.exit_code()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) | ScenarioError::Io { .. } | ScenarioError::Unsupported(_) => 1,
            ScenarioError::Oracle(crate::oracle::OracleError::Evolve(EvolveError::Leak { .. })) => 3,
            ScenarioError::Oracle(_) => 2,
        }
    }
}

/// `--out`, then `output.dir`, then `$QLAG_OUT/<label>`, then
/// `qlag_out/<label>`.
pub fn resolve_out_dir(cfg: &ScenarioConfig, opts: &RunOptions) -> PathBuf {
    if let Some(out) = &opts.out {
        return out.clone();
    }
    if let Some(dir) = &cfg.output.dir {
        return PathBuf::from(dir);
    }
    let root = std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_ROOT));
    root.join(&cfg.label)
}

struct Writer {
    dir: PathBuf,
    written: Vec<String>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self, ScenarioError> {
        fs::create_dir_all(dir).map_err(|source| ScenarioError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), ScenarioError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.written.push(name.to_string());
        Ok(())
    }
}

const OBSERVABLES_3D_HEADER: &str = "t,norm,mean_x,mean_y,mean_z,mean_x2,mean_y2,mean_z2";

fn observables_3d_csv(rows: &[Observables3D]) -> String {
    let mut out = String::from(OBSERVABLES_3D_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
            r.t, r.norm, r.mean[0], r.mean[1], r.mean[2], r.mean_sq[0], r.mean_sq[1], r.mean_sq[2]
        ));
    }
    out
}

fn plot_script(dimension: u8) -> String {
    let columns = if dimension == 3 {
        "[\"mean_x\", \"mean_y\", \"mean_z\", \"norm\"]"
    } else {
        "[\"mean_x\", \"mean_x2\", \"mean_p\", \"norm\"]"
    };
    format!(
        r#"# Plots observables.csv from this directory.
import csv
import os

import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(here, "observables.csv")) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
columns = {columns}
fig, axes = plt.subplots(len(columns), 1, sharex=True, figsize=(6, 2.2 * len(columns)))
for ax, name in zip(axes, columns):
    ax.plot(t, [float(r[name]) for r in rows])
    ax.set_ylabel(name)
axes[-1].set_xlabel("t")
fig.tight_layout()
fig.savefig(os.path.join(here, "observables.png"), dpi=120)
"#
    )
}

/// Runs one validated scenario and writes `observables.csv`,
/// `report.json` and, if requested, `snapshot_<k>.csv` and `plot.py`.
///
/// Evolution failures are not errors of this function: they are recorded
/// in the report (with whatever was computed before the failure) and in
/// the returned status. Only I/O problems are returned as `Err`.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<RunOutcome, ScenarioError> {
    let mut cfg = cfg.clone();
    if let Some(v) = opts.variant {
        cfg.variant = v;
    }
    let out_dir = resolve_out_dir(&cfg, opts);
    let mut w = Writer::new(&out_dir)?;
    let coeffs = cfg.coefficient_set();
    let gauss = cfg.initial_gaussian();
    let params = cfg.evolve_params();
    let start = gauss.sample(&cfg.grid, cfg.evolve.t_start).map_err(|e| {
        ConfigError::Invalid(vec![super::config::ConfigIssue {
            path: "initial".into(),
            message: e.to_string(),
        }])
    })?;

    let clock = Instant::now();
    let mut status = RunStatus::Ok;
    let mut message = None;
    let (steps, norm_drift, final_observables, partial);

    if cfg.dimension == 3 {
        let state = WaveState3D::product(&start, &start, &start)
            .map_err(|e| ScenarioError::Unsupported(e.to_string()))?;
        let traj = match evolve_3d_isotropic(&state, &coeffs, &params) {
            Ok(t) => Some(t),
            Err(f) => {
                status = RunStatus::of(&f.error);
                message = Some(f.error.to_string());
                f.partial
            }
        };
        partial = status != RunStatus::Ok;
        match traj {
            Some(t) => {
                w.write("observables.csv", &observables_3d_csv(&t.observables))?;
                steps = t.steps;
                norm_drift = t.norm_drift;
                final_observables = Some(FinalObservables::ThreeD(t.final_state.observables()));
            }
            None => {
                steps = 0;
                norm_drift = 0.0;
                final_observables = None;
            }
        }
    } else {
        let traj = match evolve_1d(&start, &coeffs, &params) {
            Ok(t) => Some(t),
            Err(f) => {
                status = RunStatus::of(&f.error);
                message = Some(f.error.to_string());
                f.partial
            }
        };
        partial = status != RunStatus::Ok;
        match traj {
            Some(t) => {
                w.write("observables.csv", &observables_csv(&t.observables))?;
                for (k, snap) in t.snapshots.iter().enumerate() {
                    w.write(&format!("snapshot_{k}.csv"), &snap.to_csv())?;
                }
                steps = t.steps;
                norm_drift = t.norm_drift;
                final_observables = Some(FinalObservables::OneD(t.final_state.observables(coeffs.hbar)));
            }
            None => {
                steps = 0;
                norm_drift = 0.0;
                final_observables = None;
            }
        }
    }
    let wall_time_s = clock.elapsed().as_secs_f64();

    if opts.emit_plotscript || cfg.output.emit_plotscript {
        w.write("plot.py", &plot_script(cfg.dimension))?;
    }
    let mut report = RunReport {
        label: cfg.label.clone(),
        variant: cfg.variant,
        dimension: cfg.dimension,
        status,
        partial,
        message,
        steps,
        norm_drift,
        final_observables,
        wall_time_s,
        outputs: Vec::new(),
        config: cfg,
    };
    report.outputs = w.written.clone();
    report.outputs.push("report.json".into());
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    w.write("report.json", &(json + "\n"))?;
    Ok(RunOutcome { out_dir, report })
}

/// Runs several scenario files, at most `jobs` at a time. With more than
/// one file, each scenario writes to `<root>/<label>` (with a numeric
/// suffix for repeated labels) so runs never share a directory.
pub fn run_batch(
    paths: &[PathBuf],
    opts: &RunOptions,
    jobs: usize,
) -> Vec<(PathBuf, Result<RunOutcome, ScenarioError>)> {
    use rayon::prelude::*;
    use std::collections::BTreeMap;

    let loaded: Vec<Result<ScenarioConfig, ConfigError>> =
        paths.iter().map(super::config::load_scenario).collect();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let plans: Vec<Result<(ScenarioConfig, RunOptions), ScenarioError>> = loaded
        .into_iter()
        .map(|res| {
            let cfg = res?;
            let mut o = opts.clone();
            if paths.len() > 1 {
                let count = seen.entry(cfg.label.clone()).or_insert(0);
                let name = if *count == 0 {
                    cfg.label.clone()
                } else {
                    format!("{}-{}", cfg.label, count)
                };
                *count += 1;
                let root = opts.out.clone().unwrap_or_else(|| {
                    std::env::var_os(OUT_ENV)
                        .map(PathBuf::from)
                        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_ROOT))
                });
                o.out = Some(root.join(name));
            }
            Ok((cfg, o))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let results: Vec<Result<RunOutcome, ScenarioError>> = pool.install(|| {
        plans
            .into_par_iter()
            .map(|plan| {
                let (cfg, o) = plan?;
                run_scenario(&cfg, &o)
            })
            .collect()
    });
    paths.iter().cloned().zip(results).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fit {
    pub variant: Variant,
    pub slope: f64,
    pub intercept: f64,
    pub verdict: String,
}

/// Reads a fitted slope against the two expected behaviours.
pub fn sweep_verdict(slope: f64) -> &'static str {
    if slope >= 1.9 {
        "second order: the equation generates the short-time kernel"
    } else if (0.8..=1.2).contains(&slope) {
        "first order: the equation disagrees with the short-time kernel at O(eps)"
    } else {
        "inconclusive"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub label: String,
    pub cross_validation: CrossValidation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<EpsSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<Fit>,
    pub outputs: Vec<String>,
}

/// Cross-validates the grid evolver against the Riccati flow for a 1D
/// Gaussian scenario and, with `sweep`, writes `convergence.csv` and
/// `fit.json` for the short-time step against the flow.
pub fn compare_oracles(
    cfg: &ScenarioConfig,
    opts: &RunOptions,
    sweep: bool,
) -> Result<(PathBuf, OracleComparison), ScenarioError> {
    if cfg.dimension != 1 {
        return Err(ScenarioError::Unsupported(
            "oracle comparison needs a 1D scenario".into(),
        ));
    }
    let mut cfg = cfg.clone();
    if let Some(v) = opts.variant {
        cfg.variant = v;
    }
    let out_dir = resolve_out_dir(&cfg, opts);
    let mut w = Writer::new(&out_dir)?;
    let coeffs = cfg.coefficient_set();
    let gauss = cfg.initial_gaussian();
    let params = cfg.evolve_params();
    let cv = cross_validate(
        &gauss,
        &coeffs,
        cfg.evolve.t_start,
        &cfg.grid,
        &params,
        cfg.variant,
        crate::oracle::DEFAULT_TOLERANCE,
    )?;
    let mut result = OracleComparison {
        label: cfg.label.clone(),
        cross_validation: cv,
        sweep: None,
        fit: None,
        outputs: Vec::new(),
    };
    if sweep {
        let s = eps_sweep(&gauss, &coeffs, cfg.evolve.t_start, &SWEEP_EPS, cfg.variant, SWEEP_TOLERANCE)?;
        w.write("convergence.csv", &s.to_csv())?;
        let fit = Fit {
            variant: cfg.variant,
            slope: s.slope,
            intercept: s.intercept,
            verdict: sweep_verdict(s.slope).to_string(),
        };
        w.write("fit.json", &(serde_json::to_string_pretty(&fit).expect("fit serializes") + "\n"))?;
        result.sweep = Some(s);
        result.fit = Some(fit);
    }
    let json = serde_json::to_string_pretty(&result.cross_validation).expect("report serializes");
    w.write("cross_validation.json", &(json + "\n"))?;
    result.outputs = w.written.clone();
    Ok((out_dir, result))
}
