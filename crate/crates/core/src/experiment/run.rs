use std::path::Path;
use std::time::Instant;

use crate::besov::profile_hash;
use crate::data::{illposed_datum, normal_twin, random_smooth_field, Background};
use crate::diagnostics::{
    duhamel_check, duhamel_series, energy_check, local_bound_check, lorentz_remainder_check, maxwell_estimate_check,
    CheckReport, DuhamelPoint, DuhamelSample, Measure, RunRecord, SeriesBuilder,
};
use crate::error::Result;
use crate::flow::FlowTracker;
use crate::integrators::Stepper;
use crate::models::{
    EulerRiesz, EulerRieszState, FieldState, Normal, NormalState, Params, Perturbation, PerturbationState,
};
use crate::spectral::{FourierGrid, ScalarField2D};

use super::config::{DatumSpec, ExperimentConfig, ModelKind};
use super::persist::{create_dir, write_run_dir, write_snapshot, SnapshotHeader};

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub checks: Vec<CheckReport>,
    pub duhamel: Option<Vec<DuhamelPoint>>,
    /// Vorticity at `t_end`.
    pub final_omega: ScalarField2D,
}

impl RunOutcome {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub(crate) struct Trajectory<S> {
    pub series: SeriesBuilder,
    pub last: S,
    pub duhamel: Vec<DuhamelSample>,
}

/// Steps `d` from `s0` (projected onto the dealiasing mask first), measuring
/// at every sample; optionally writes snapshots and follows the flow map.
pub(crate) fn simulate<D: Measure>(
    d: &D,
    s0: D::State,
    cfg: &ExperimentConfig,
    snapshots: Option<(&Path, &'static [&'static str])>,
    track_flow: bool,
) -> Result<Trajectory<D::State>> {
    let s0 = s0.dealiased();
    let mut tracker = track_flow.then(|| FlowTracker::new(d.velocity(&s0)));
    let mut stepper = Stepper::new(d, s0, cfg.stepper)?;
    let mut series = SeriesBuilder::default();
    let mut duhamel = Vec::new();
    let mut sample = 0usize;
    let mut record = |t: f64, steps: usize, s: &D::State, tracker: Option<&FlowTracker>, done: bool| -> Result<()> {
        series.push(t, d.measure(s));
        if let Some(tr) = tracker {
            duhamel.push(DuhamelSample {
                t,
                omega: d.vorticity(s).clone(),
                remainder: d.remainder(s),
                flow: tr.map().clone(),
            });
        }
        if let Some((dir, names)) = snapshots {
            if cfg.snapshot_every > 0 && (sample.is_multiple_of(cfg.snapshot_every) || done) {
                let fields = s.fields();
                let header = SnapshotHeader {
                    t,
                    step: steps,
                    n: fields[0].grid().n(),
                    fields: names.iter().map(|s| s.to_string()).collect(),
                    dtype: "<f8".into(),
                    order: "row-major".into(),
                };
                write_snapshot(dir, sample, &header, &fields)?;
            }
        }
        sample += 1;
        Ok(())
    };
    record(0.0, 0, stepper.state(), tracker.as_ref(), stepper.done())?;
    while !stepper.done() {
        let h = stepper.advance()?;
        if let Some(tr) = tracker.as_mut() {
            tr.push(d.velocity(stepper.state()), h);
        }
        if stepper.at_sample() {
            record(
                stepper.t(),
                stepper.steps(),
                stepper.state(),
                tracker.as_ref(),
                stepper.done(),
            )?;
        }
    }
    Ok(Trajectory {
        series,
        last: stepper.into_state(),
        duhamel,
    })
}

fn seeded(seed: u64, k: u64, decay: f64, grid: &std::sync::Arc<FourierGrid>) -> Result<ScalarField2D> {
    random_smooth_field(seed.wrapping_add(k), decay, grid)
}

/// Perturbation datum and the background strength it implies.
pub(crate) fn perturbation_datum(
    cfg: &ExperimentConfig,
    grid: &std::sync::Arc<FourierGrid>,
) -> Result<(PerturbationState, f64)> {
    Ok(match &cfg.datum {
        DatumSpec::Zero => (PerturbationState::zeros(grid), cfg.params.alpha),
        DatumSpec::Illposed {
            n_scales,
            lambda,
            epsilon,
            background,
        } => {
            let d = illposed_datum(*n_scales, *lambda, *epsilon, *background, grid)?;
            (d.state, cfg.params.alpha * d.alpha)
        }
        DatumSpec::Random {
            decay,
            omega_amp,
            em_amp,
        } => (
            PerturbationState::new(
                seeded(cfg.seed, 0, *decay, grid)?.scaled(*omega_amp),
                seeded(cfg.seed, 1, *decay, grid)?.scaled(*em_amp),
                seeded(cfg.seed, 2, *decay, grid)?.scaled(*em_amp),
            ),
            cfg.params.alpha,
        ),
    })
}

pub(crate) fn normal_datum_for(cfg: &ExperimentConfig, grid: &std::sync::Arc<FourierGrid>) -> Result<NormalState> {
    Ok(match &cfg.datum {
        DatumSpec::Zero => NormalState::zeros(grid),
        DatumSpec::Illposed {
            n_scales,
            lambda,
            epsilon,
            ..
        } => {
            // the twin always uses a unit-strength vertical background
            let d = illposed_datum(*n_scales, *lambda, *epsilon, Background::Unit, grid)?;
            normal_twin(&d)
        }
        DatumSpec::Random {
            decay,
            omega_amp,
            em_amp,
        } => NormalState {
            omega: seeded(cfg.seed, 0, *decay, grid)?.scaled(*omega_amp),
            e1: seeded(cfg.seed, 1, *decay, grid)?.scaled(*em_amp),
            e2: seeded(cfg.seed, 2, *decay, grid)?.scaled(*em_amp),
            b3: seeded(cfg.seed, 3, *decay, grid)?.scaled(*em_amp).map(|v| v + 1.0),
        },
    })
}

pub(crate) fn vorticity_datum(cfg: &ExperimentConfig, grid: &std::sync::Arc<FourierGrid>) -> Result<ScalarField2D> {
    Ok(perturbation_datum(cfg, grid)?.0.omega)
}

fn evaluate_checks(cfg: &ExperimentConfig, record: &RunRecord, duhamel: Option<&[DuhamelPoint]>) -> Vec<CheckReport> {
    cfg.checks
        .iter()
        .map(|c| match c.as_str() {
            "energy" => energy_check(record, cfg.energy_tol),
            "maxwell" => maxwell_estimate_check(record),
            "local_bound" => local_bound_check(record),
            "lorentz" => lorentz_remainder_check(record),
            "duhamel" => duhamel_check(duhamel.unwrap_or(&[]), 2.0),
            other => unreachable!("unvalidated check {other}"),
        })
        .collect()
}

fn finish<D: Measure>(
    d: &D,
    s0: D::State,
    cfg: &ExperimentConfig,
    out: Option<&Path>,
    c: f64,
    names: &'static [&'static str],
) -> Result<RunOutcome> {
    let start = Instant::now();
    let snap_dir = out.map(|o| o.join("snapshots"));
    if let Some(dir) = &snap_dir {
        create_dir(dir)?;
    }
    let track = cfg.has_check("duhamel");
    let traj = simulate(d, s0, cfg, snap_dir.as_deref().map(|p| (p, names)), track)?;
    let duhamel = track.then(|| duhamel_series(&traj.duhamel, d.riesz_rate()));
    let record = RunRecord {
        config: serde_json::to_value(cfg)?,
        c,
        series: traj.series.series,
        aux: traj.series.aux,
        profile_hash: profile_hash(),
        wall_clock_s: start.elapsed().as_secs_f64(),
    };
    let checks = evaluate_checks(cfg, &record, duhamel.as_deref());
    if let Some(dir) = out {
        write_run_dir(dir, &record, &checks)?;
        if let Some(pts) = &duhamel {
            super::persist::write_csv(&dir.join("duhamel.csv"), pts)?;
        }
    }
    Ok(RunOutcome {
        record,
        checks,
        duhamel,
        final_omega: d.vorticity(&traj.last).clone(),
    })
}

/// Runs one configured experiment; writes the run directory when `out` is
/// given.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<RunOutcome> {
    cfg.validate()?;
    let grid = FourierGrid::new(cfg.grid)?;
    let names = cfg.model.field_names();
    match cfg.model {
        ModelKind::Perturbation => {
            let (s0, alpha) = perturbation_datum(cfg, &grid)?;
            let d = Perturbation::new(Params { alpha, ..cfg.params });
            finish(&d, s0, cfg, out, cfg.params.c, names)
        }
        ModelKind::Normal => {
            let s0 = normal_datum_for(cfg, &grid)?;
            let d = Normal::new(cfg.params);
            finish(&d, s0, cfg, out, cfg.params.c, names)
        }
        ModelKind::EulerRiesz => {
            let s0 = EulerRieszState {
                omega: vorticity_datum(cfg, &grid)?,
            };
            let d = EulerRiesz::new(cfg.params);
            finish(&d, s0, cfg, out, cfg.params.c, names)
        }
    }
}
