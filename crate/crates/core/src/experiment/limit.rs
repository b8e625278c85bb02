use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::models::{EulerRiesz, EulerRieszState, Params, Perturbation, PerturbationState};
use crate::spectral::FourierGrid;

use super::config::ExperimentConfig;
use super::persist::{create_dir, write_csv, write_json};
use super::run::{simulate, vorticity_datum};

#[derive(Clone, Debug, Serialize)]
pub struct LimitRow {
    pub c: f64,
    /// `|omega_c(t*) - omega_ER(t*)|_inf`
    pub discrepancy: f64,
    pub linf_omega: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitOutcome {
    pub t_star: f64,
    pub reference_linf: f64,
    /// Sorted by decreasing `c`.
    pub rows: Vec<LimitRow>,
    /// The discrepancy does not grow as `c` decreases.
    pub monotone: bool,
}

/// Small-`c` comparison: the perturbation model with zero electromagnetic
/// data against the Euler–Riesz reference from the same vorticity.
pub fn run_limit(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<LimitOutcome> {
    cfg.validate()?;
    let lim = cfg
        .limit
        .as_ref()
        .ok_or_else(|| Error::Config("limit subcommand needs a `limit` section".into()))?;
    let mut run_cfg = cfg.clone();
    let t_star = lim.t_star.unwrap_or(cfg.stepper.t_end);
    run_cfg.stepper.t_end = t_star;
    let grid = FourierGrid::new(cfg.grid)?;
    let omega0 = vorticity_datum(cfg, &grid)?;
    let alpha = cfg.params.alpha;

    let er = EulerRiesz::new(Params {
        alpha,
        beta: 0.0,
        ..cfg.params
    });
    let reference = simulate(&er, EulerRieszState { omega: omega0.clone() }, &run_cfg, None, false)?
        .last
        .omega;

    let mut cs = lim.c_values.clone();
    cs.sort_by(|a, b| b.total_cmp(a));
    let mut rows = Vec::with_capacity(cs.len());
    for c in cs {
        let d = Perturbation::new(Params { c, alpha, ..cfg.params });
        let s0 = PerturbationState::new(omega0.clone(), grid_zero(&grid), grid_zero(&grid));
        let w = simulate(&d, s0, &run_cfg, None, false)?.last.omega;
        rows.push(LimitRow {
            c,
            discrepancy: w.max_abs_diff(&reference),
            linf_omega: w.max_abs(),
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].discrepancy <= w[0].discrepancy);
    let outcome = LimitOutcome {
        t_star,
        reference_linf: reference.max_abs(),
        rows,
        monotone,
    };
    if let Some(o) = out {
        create_dir(o)?;
        write_csv(&o.join("limit.csv"), &outcome.rows)?;
        write_json(&o.join("limit.json"), &outcome)?;
        write_json(
            &o.join("checks.json"),
            &json!([{ "check": "limit", "pass": monotone, "details": &outcome }]),
        )?;
    }
    Ok(outcome)
}

fn grid_zero(grid: &std::sync::Arc<FourierGrid>) -> crate::spectral::ScalarField2D {
    crate::spectral::ScalarField2D::zeros(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::{DatumSpec, LimitConfig};

    fn cfg(datum: DatumSpec, c_values: Vec<f64>) -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        c.grid = 32;
        c.datum = datum;
        c.stepper.t_end = 0.1;
        c.limit = Some(LimitConfig { c_values, t_star: None });
        c
    }

    #[test]
    fn zero_vorticity_gives_zero_rows() {
        let o = run_limit(&cfg(DatumSpec::Zero, vec![0.4, 0.2]), None).unwrap();
        assert!(o.rows.iter().all(|r| r.discrepancy == 0.0));
        assert!(o.monotone);
    }

    #[test]
    fn single_speed_single_row() {
        let o = run_limit(&cfg(DatumSpec::default(), vec![0.3]), None).unwrap();
        assert_eq!(o.rows.len(), 1);
        assert!(o.rows[0].discrepancy > 0.0);
    }

    #[test]
    fn missing_section_is_a_config_error() {
        let mut c = cfg(DatumSpec::Zero, vec![1.0]);
        c.limit = None;
        assert!(matches!(run_limit(&c, None), Err(Error::Config(_))));
    }
}
