use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::besov::{besov_norm, BesovSpec};
use crate::data::{build_f_family, max_admissible_n, random_smooth_field, BumpProfile, BASE_SCALE};
use crate::diagnostics::{least_squares_slope, CheckReport};
use crate::error::{Error, Result};
use crate::flow::{advance_flow, commutator_ratio, vishik_ratio, FlowMap, FlowTracker, VelocityStages};
use crate::integrators::{Dynamics, Stepper, StepperConfig};
use crate::models::{EulerRiesz, EulerRieszState, Params, Perturbation, PerturbationState};
use crate::spectral::{biot_savart, riesz, FourierGrid, ScalarField2D};

use super::config::{DatumSpec, ExperimentConfig};
use super::persist::{create_dir, write_json};
use super::run::run_experiment;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaKind {
    Energy,
    Maxwell,
    Commutator,
    Vishik,
    LocalBound,
    Lorentz,
    Family,
}

impl LemmaKind {
    pub const ALL: [LemmaKind; 7] = [
        LemmaKind::Energy,
        LemmaKind::Maxwell,
        LemmaKind::Commutator,
        LemmaKind::Vishik,
        LemmaKind::LocalBound,
        LemmaKind::Lorentz,
        LemmaKind::Family,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaKind::Energy => "energy",
            LemmaKind::Maxwell => "maxwell",
            LemmaKind::Commutator => "commutator",
            LemmaKind::Vishik => "vishik",
            LemmaKind::LocalBound => "local_bound",
            LemmaKind::Lorentz => "lorentz",
            LemmaKind::Family => "family",
        }
    }
}

impl FromStr for LemmaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaOutcome {
    pub report: CheckReport,
}

/// Runs the minimal scenario for one check and writes `report.json` (plus
/// the run directory, for checks that need a trajectory).
pub fn run_lemma(which: LemmaKind, cfg: &ExperimentConfig, out: Option<&Path>) -> Result<LemmaOutcome> {
    cfg.validate()?;
    if let Some(o) = out {
        create_dir(o)?;
    }
    let report = match which {
        LemmaKind::Energy => energy_lemma(cfg, out)?,
        LemmaKind::Maxwell | LemmaKind::LocalBound | LemmaKind::Lorentz => {
            let mut c = cfg.clone();
            c.checks = vec![which.name().to_string()];
            let o = run_experiment(&c, out.map(|o| o.join("run")).as_deref())?;
            o.checks.into_iter().next().expect("one check requested")
        }
        LemmaKind::Commutator => commutator_lemma(cfg)?,
        LemmaKind::Vishik => vishik_lemma(cfg)?,
        LemmaKind::Family => family_lemma(cfg)?,
    };
    if let Some(o) = out {
        write_json(&o.join("report.json"), &report)?;
    }
    Ok(LemmaOutcome { report })
}

/// Energy excursion at the configured step and at half of it; passes when
/// the excursion is within tolerance and shrinks at least 8x (or already
/// sits at round-off).
fn energy_lemma(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<CheckReport> {
    let mut c = cfg.clone();
    c.checks = vec!["energy".into()];
    let coarse = run_experiment(&c, out.map(|o| o.join("run")).as_deref())?;
    c.stepper.dt *= 0.5;
    c.stepper.cfl *= 0.5;
    let fine = run_experiment(&c, None)?;
    let (e1, e2) = (coarse.checks[0].measured, fine.checks[0].measured);
    let floor = 1e-14 * coarse.record.series[0].energy_l2.max(1.0);
    let shrink = if e2 > 0.0 { e1 / e2 } else { f64::INFINITY };
    let mut r = CheckReport::new(
        "energy",
        e1,
        cfg.energy_tol,
        json!({ "excursion_half_dt": e2, "shrink": shrink, "roundoff_floor": floor }),
    );
    r.pass = e1 <= cfg.energy_tol && (shrink >= 8.0 || e1 <= floor);
    Ok(r)
}

/// One flow of the test suite.
#[derive(Clone, Debug)]
pub struct SuiteFlow {
    pub label: String,
    pub map: FlowMap,
}

fn random_velocity(seed: u64, amp: f64, grid: &Arc<FourierGrid>) -> Result<crate::spectral::VectorField2D> {
    let w = random_smooth_field(seed, 4.0, grid)?;
    let u = biot_savart(&w);
    let s = amp / u.max_abs();
    Ok(crate::spectral::VectorField2D::new(u.x1.scaled(s), u.x2.scaled(s)))
}

/// Flow of the frozen velocity over `[0, t]` in `steps` steps.
fn frozen_flow(u: &crate::spectral::VectorField2D, t: f64, steps: usize) -> FlowMap {
    let h = t / steps as f64;
    let mut fm = FlowMap::identity(u.grid());
    for _ in 0..steps {
        fm = advance_flow(&fm, VelocityStages::frozen(u), h);
    }
    fm
}

/// Flow of a computed trajectory of `d` from `s0` up to `t`.
fn trajectory_flow<D: Dynamics>(d: &D, s0: D::State, t: f64) -> Result<FlowMap> {
    let cfg = StepperConfig {
        t_end: t,
        ..StepperConfig::default()
    };
    let mut tracker = FlowTracker::new(d.velocity(&s0));
    let mut st = Stepper::new(d, s0, cfg)?;
    while !st.done() {
        let h = st.advance()?;
        tracker.push(d.velocity(st.state()), h);
    }
    Ok(tracker.map().clone())
}

/// Ten flows at time `t`: three shears along `x1`, one along `x2`, three
/// frozen random velocities and three flows of computed trajectories.
pub fn flow_suite(grid: &Arc<FourierGrid>, t: f64) -> Result<Vec<SuiteFlow>> {
    let mut suite = Vec::new();
    for (amp, k) in [(0.5, 1.0), (0.25, 2.0), (1.0, 1.0)] {
        suite.push(SuiteFlow {
            label: format!("shear amp={amp} k={k}"),
            map: FlowMap::shear(grid, amp, k, t),
        });
    }
    suite.push(SuiteFlow {
        label: "x2-shear amp=0.5 k=1".into(),
        map: FlowMap::from_maps(
            grid,
            |x, y| (x, y + 0.5 * t * x.sin()),
            |x, y| (x, y - 0.5 * t * x.sin()),
            t,
        ),
    });
    for seed in 0..3u64 {
        let u = random_velocity(100 + seed, 0.5, grid)?;
        suite.push(SuiteFlow {
            label: format!("frozen random seed={}", 100 + seed),
            map: frozen_flow(&u, t, 16),
        });
    }
    let w = |seed: u64| random_smooth_field(seed, 4.0, grid);
    for (alpha, beta) in [(1.0, 0.0), (0.5, 0.5)] {
        let d = EulerRiesz::new(Params {
            alpha,
            beta,
            ..Params::default()
        });
        suite.push(SuiteFlow {
            label: format!("euler-riesz alpha={alpha} beta={beta}"),
            map: trajectory_flow(&d, EulerRieszState { omega: w(200)? }, t)?,
        });
    }
    let d = Perturbation::new(Params::default());
    let s0 = PerturbationState::new(w(300)?, w(301)?.scaled(0.1), w(302)?.scaled(0.1));
    suite.push(SuiteFlow {
        label: "euler-maxwell perturbation".into(),
        map: trajectory_flow(&d, s0, t)?,
    });
    Ok(suite)
}

#[derive(Clone, Debug, Serialize)]
struct SuiteRow {
    label: String,
    ratio: f64,
    ratio_refined: Option<f64>,
}

fn test_vorticity(grid: &Arc<FourierGrid>) -> Result<ScalarField2D> {
    random_smooth_field(7, 4.0, grid)
}

fn commutator_constants(grid: &Arc<FourierGrid>, t: f64) -> Result<Vec<(String, f64)>> {
    let w = test_vorticity(grid)?;
    flow_suite(grid, t)?
        .into_iter()
        .map(|f| Ok((f.label, commutator_ratio(&w, &f.map, BesovSpec::B1_21)?)))
        .collect()
}

/// Commutator constants over the suite; passes when the largest one moves
/// by at most 2x under grid doubling.
fn commutator_lemma(cfg: &ExperimentConfig) -> Result<CheckReport> {
    let t = cfg.lemma.flow_time;
    let coarse = commutator_constants(&FourierGrid::new(cfg.grid)?, t)?;
    let fine = if cfg.lemma.refine {
        Some(commutator_constants(&FourierGrid::new(2 * cfg.grid)?, t)?)
    } else {
        None
    };
    let c0 = coarse.iter().map(|r| r.1).fold(0.0, f64::max);
    let c1 = fine.as_ref().map(|f| f.iter().map(|r| r.1).fold(0.0, f64::max));
    let drift = c1.map_or(1.0, |c1| (c1 / c0).max(c0 / c1));
    let rows: Vec<SuiteRow> = coarse
        .iter()
        .enumerate()
        .map(|(i, (label, r))| SuiteRow {
            label: label.clone(),
            ratio: *r,
            ratio_refined: fine.as_ref().map(|f| f[i].1),
        })
        .collect();
    let mut rep = CheckReport::new(
        "commutator",
        drift,
        2.0,
        json!({ "c0": c0, "c0_refined": c1, "grid": cfg.grid, "flow_time": t, "table": rows }),
    );
    rep.pass = drift <= 2.0 && c0.is_finite();
    Ok(rep)
}

/// Composition constants over the suite; passes when they agree within a
/// factor 3.
fn vishik_lemma(cfg: &ExperimentConfig) -> Result<CheckReport> {
    let grid = FourierGrid::new(cfg.grid)?;
    let f = test_vorticity(&grid)?;
    let rows: Vec<(String, f64)> = flow_suite(&grid, cfg.lemma.flow_time)?
        .into_iter()
        .map(|s| (s.label, vishik_ratio(&f, &s.map)))
        .collect();
    let max = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let min = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let spread = max / min;
    let mut rep = CheckReport::new(
        "vishik",
        spread,
        3.0,
        json!({ "constant": max, "min": min, "table": rows }),
    );
    rep.pass = spread.is_finite() && spread <= 3.0;
    Ok(rep)
}

/// Statistics of one family member.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyRow {
    pub n_scales: usize,
    pub linf: f64,
    /// Global `|R f_N|_inf`.
    pub riesz_linf: f64,
    /// `|R f_N|_inf` over the innermost hole of the family, where the copies
    /// add coherently.
    pub riesz_origin: f64,
    pub besov1: f64,
}

pub fn family_rows(n_values: &[usize], lambda: f64, grid: &Arc<FourierGrid>) -> Result<Vec<FamilyRow>> {
    n_values
        .iter()
        .map(|&n| {
            let f = build_f_family(n, lambda, grid)?;
            let rf = riesz(&f);
            let hole = BumpProfile::default().r0 * BASE_SCALE / lambda.powi(n as i32);
            let vals = rf.physical();
            let len = grid.n();
            let riesz_origin = (0..len * len)
                .filter(|i| grid.centered_coord(i / len).hypot(grid.centered_coord(i % len)) < hole)
                .map(|i| vals[i].abs())
                .fold(0.0, f64::max);
            Ok(FamilyRow {
                n_scales: n,
                linf: f.max_abs(),
                riesz_linf: rf.max_abs(),
                riesz_origin,
                besov1: besov_norm(&f, BesovSpec::B1_21),
            })
        })
        .collect()
}

/// Relative gap between the least-squares slope of `y(N)` and the `N = 1 -> 2`
/// increment.
fn affine_gap(rows: &[FamilyRow], y: impl Fn(&FamilyRow) -> f64) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n_scales as f64, y(r))).collect();
    let slope = least_squares_slope(&pts)?;
    let y1 = rows.iter().find(|r| r.n_scales == 1)?;
    let y2 = rows.iter().find(|r| r.n_scales == 2)?;
    let inc = y(y2) - y(y1);
    Some((slope, (slope - inc).abs() / inc.abs()))
}

/// The data family: constant sup norm, `|R f_N|` near the origin affine in
/// `N`, and growing `B^1_{2,1}` norm.
fn family_lemma(cfg: &ExperimentConfig) -> Result<CheckReport> {
    let grid = FourierGrid::new(cfg.grid)?;
    let lambda = match &cfg.datum {
        DatumSpec::Illposed { lambda, .. } => *lambda,
        _ => 2.0,
    };
    let n_values = match &cfg.lemma.n_values {
        Some(v) => v.clone(),
        None => (1..=max_admissible_n(lambda, &grid)).collect(),
    };
    let rows = family_rows(&n_values, lambda, &grid)?;
    let l0 = rows.first().map_or(0.0, |r| r.linf);
    let linf_spread = rows.iter().map(|r| (r.linf - l0).abs()).fold(0.0, f64::max);
    let riesz = affine_gap(&rows, |r| r.riesz_origin);
    let besov = affine_gap(&rows, |r| r.besov1);
    let riesz_gap = riesz.map_or(f64::INFINITY, |g| g.1);
    let mut rep = CheckReport::new(
        "family",
        riesz_gap,
        0.25,
        json!({
            "linf_spread": linf_spread,
            "riesz_slope": riesz.map(|g| g.0),
            "besov1_slope": besov.map(|g| g.0),
            "besov1_gap": besov.map(|g| g.1),
            "rows": rows,
        }),
    );
    let besov_growing = rows.windows(2).all(|w| w[1].besov1 > w[0].besov1);
    rep.pass = linf_spread <= 1e-10 && riesz_gap <= 0.25 && besov_growing;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for k in LemmaKind::ALL {
            assert_eq!(k.name().parse::<LemmaKind>().unwrap(), k);
        }
        assert!(matches!("bogus".parse::<LemmaKind>(), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn family_gate_reports_max_admissible() {
        let mut cfg = ExperimentConfig::default();
        cfg.lemma.n_values = Some(vec![1, 9]);
        let e = run_lemma(LemmaKind::Family, &cfg, None).unwrap_err();
        assert!(
            matches!(
                e,
                Error::UnderResolved {
                    requested: 9,
                    max_admissible: 3,
                    n: 128
                }
            ),
            "{e}"
        );
    }

    #[test]
    fn family_near_origin_is_affine() {
        let g = FourierGrid::new(256).unwrap();
        let rows = family_rows(&[1, 2, 3, 4], 2.0, &g).unwrap();
        let (slope, gap) = affine_gap(&rows, |r| r.riesz_origin).unwrap();
        assert!(gap < 0.05, "slope {slope}, gap {gap}");
        assert!(rows.iter().all(|r| (r.linf - 1.0).abs() < 1e-10));
    }

    #[test]
    fn suite_has_ten_flows() {
        let g = FourierGrid::new(32).unwrap();
        let s = flow_suite(&g, 0.1).unwrap();
        assert_eq!(s.len(), 10);
        assert!(s.iter().all(|f| f.map.roundtrip_error() < 1e-3));
    }
}
