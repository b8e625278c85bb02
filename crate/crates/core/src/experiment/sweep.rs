use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::data::Background;
use crate::diagnostics::{inflation_report, inflation_row, CheckReport, InflationTable, SeriesPoint};
use crate::error::{Error, Result};

use super::config::{defaults, DatumSpec, ExperimentConfig, ModelKind};
use super::persist::{create_dir, write_csv, write_json};
use super::run::{run_experiment, RunOutcome};

/// Per-`N` statistics beyond the inflation table.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRun {
    pub n_scales: usize,
    pub normal: bool,
    pub dir: String,
    /// `None` if the run succeeded.
    pub error: Option<String>,
    /// Worst ratio of the Lorentz remainder to its estimate.
    pub lorentz_ratio: Option<f64>,
    /// `int |R omega|_inf / int |F|_{B^1_{2,1}}` at the end of the window.
    pub riesz_over_remainder: Option<f64>,
    /// Empty if the run failed.
    pub checks: Vec<CheckReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub table: InflationTable,
    pub runs: Vec<SweepRun>,
    pub monotone: bool,
    /// Largest twin ratio, if twins ran.
    pub max_twin_ratio: Option<f64>,
    /// One constant bounding the Lorentz ratio over all `N`.
    pub lorentz_constant: f64,
    pub min_riesz_over_remainder: f64,
    pub pass: bool,
}

impl SweepOutcome {
    pub fn ratio(&self, n_scales: usize) -> Option<f64> {
        self.table.rows.iter().find(|r| r.n_scales == n_scales).map(|r| r.ratio)
    }
}

/// The datum of one sweep member: the configured ill-posed datum with `N`
/// replaced.
fn member(cfg: &ExperimentConfig, n_scales: usize, normal: bool) -> ExperimentConfig {
    let (lambda, epsilon, background) = match &cfg.datum {
        DatumSpec::Illposed {
            lambda,
            epsilon,
            background,
            ..
        } => (*lambda, *epsilon, *background),
        _ => (defaults::lambda(), None, Background::Unit),
    };
    let mut c = cfg.clone();
    c.model = if normal {
        ModelKind::Normal
    } else {
        ModelKind::Perturbation
    };
    c.datum = DatumSpec::Illposed {
        n_scales,
        lambda,
        epsilon,
        background,
    };
    if normal {
        // the twin carries no Duhamel tracking
        c.checks.retain(|k| k != "duhamel");
    }
    c.sweep = None;
    c
}

fn window_dominance(series: &[SeriesPoint], window: f64) -> f64 {
    let last = series
        .iter()
        .rev()
        .find(|p| p.t <= window * (1.0 + 1e-12))
        .unwrap_or(&series[0]);
    if last.int_remainder_b121 > 0.0 {
        last.int_riesz_linf / last.int_remainder_b121
    } else {
        f64::INFINITY
    }
}

/// Runs the ill-posed datum for every configured `N` (and its normal twin)
/// in parallel, one directory each, and tabulates the inflation.
pub fn run_sweep(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<SweepOutcome> {
    cfg.validate()?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep subcommand needs a `sweep` section".into()))?;
    let window = sweep.window.unwrap_or(cfg.stepper.t_end);
    if let Some(o) = out {
        create_dir(o)?;
    }
    let jobs: Vec<(usize, bool)> = sweep
        .n_scales
        .iter()
        .flat_map(|&n| std::iter::once((n, false)).chain(sweep.twins.then_some((n, true))))
        .collect();
    let results: Vec<(usize, bool, String, Result<RunOutcome>)> = jobs
        .par_iter()
        .map(|&(n, normal)| {
            let name = if normal {
                format!("N{n}_normal")
            } else {
                format!("N{n}")
            };
            let dir = out.map(|o| o.join(&name));
            (n, normal, name, run_experiment(&member(cfg, n, normal), dir.as_deref()))
        })
        .collect();

    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for (n, normal, dir, res) in &results {
        let mut run = SweepRun {
            n_scales: *n,
            normal: *normal,
            dir: dir.clone(),
            error: None,
            lorentz_ratio: None,
            riesz_over_remainder: None,
            checks: Vec::new(),
        };
        match res {
            Ok(o) => {
                run.checks = o.checks.clone();
                if !normal {
                    rows.push(inflation_row(*n, &o.record.series, window, &sweep.thresholds));
                    run.lorentz_ratio = o.checks.iter().find(|c| c.check == "lorentz").map(|c| c.measured);
                    run.riesz_over_remainder = Some(window_dominance(&o.record.series, window));
                }
            }
            Err(e) => run.error = Some(e.to_string()),
        }
        runs.push(run);
    }
    for (n, normal, _, res) in &results {
        if let (true, Ok(o)) = (normal, res) {
            let twin = inflation_row(*n, &o.record.series, window, &sweep.thresholds);
            if let Some(r) = rows.iter_mut().find(|r| r.n_scales == *n) {
                r.twin_ratio = Some(twin.ratio);
            }
        }
    }
    rows.sort_by_key(|r| r.n_scales);
    let table = inflation_report(rows, window, sweep.thresholds.clone());

    let monotone = table.rows.windows(2).all(|w| w[1].ratio >= w[0].ratio);
    let max_twin_ratio = table.rows.iter().filter_map(|r| r.twin_ratio).reduce(f64::max);
    let lorentz_constant = runs.iter().filter_map(|r| r.lorentz_ratio).fold(0.0, f64::max);
    let min_riesz_over_remainder = runs
        .iter()
        .filter_map(|r| r.riesz_over_remainder)
        .fold(f64::INFINITY, f64::min);
    let failed = runs.iter().any(|r| r.error.is_some());
    let pass = !failed && monotone && max_twin_ratio.is_none_or(|r| r <= 2.0) && lorentz_constant.is_finite();
    let outcome = SweepOutcome {
        table,
        runs,
        monotone,
        max_twin_ratio,
        lorentz_constant,
        min_riesz_over_remainder,
        pass,
    };
    if let Some(o) = out {
        write_csv(&o.join("inflation.csv"), &inflation_csv_rows(&outcome.table))?;
        write_json(&o.join("inflation.json"), &outcome.table)?;
        write_json(
            &o.join("summary.json"),
            &json!({
                "pass": outcome.pass,
                "monotone": outcome.monotone,
                "max_twin_ratio": outcome.max_twin_ratio,
                "log_slope": outcome.table.log_slope,
                "lorentz_constant": outcome.lorentz_constant,
                "min_riesz_over_remainder": outcome.min_riesz_over_remainder,
                "failed_runs": outcome.runs.iter().filter(|r| r.error.is_some()).map(|r| &r.dir).collect::<Vec<_>>(),
                "runs": outcome.runs,
            }),
        )?;
    }
    Ok(outcome)
}

/// Flat CSV view of the table; crossings as `threshold:time` pairs.
#[derive(Serialize)]
struct CsvRow {
    n_scales: usize,
    linf0: f64,
    max_linf: f64,
    ratio: f64,
    t_at_max: f64,
    first_crossing: String,
    twin_ratio: Option<f64>,
}

fn inflation_csv_rows(t: &InflationTable) -> Vec<CsvRow> {
    t.rows
        .iter()
        .map(|r| CsvRow {
            n_scales: r.n_scales,
            linf0: r.linf0,
            max_linf: r.max_linf,
            ratio: r.ratio,
            t_at_max: r.t_at_max,
            first_crossing: r
                .first_crossings
                .iter()
                .zip(&t.thresholds)
                .map(|(c, th)| format!("{th}:{}", c.map_or("-".into(), |v| v.to_string())))
                .collect::<Vec<_>>()
                .join(";"),
            twin_ratio: r.twin_ratio,
        })
        .collect()
}
