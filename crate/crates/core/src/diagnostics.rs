//! Measured quantities along a trajectory and the checks built on them:
//! the energy inequality, the damped-Maxwell estimate, the local bound, the
//! Lorentz remainder, the Duhamel decomposition along the flow, and the
//! inflation table of a sweep.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::besov::{besov_norm, besov_norm_multi, BesovSpec};
use crate::error::{Error, Result};
use crate::flow::{compose, riesz_commutator, Direction, FlowMap};
use crate::integrators::Dynamics;
use crate::models::{
    ampere_forcing, lorentz_split, normal_forcing, normal_lorentz_curl, EulerRiesz, EulerRieszState, Normal,
    NormalState, Perturbation, PerturbationState,
};
use crate::spectral::{biot_savart, perp_gradient, riesz, riesz_semigroup, ScalarField2D};

/// One row of `series.csv`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub t: f64,
    pub linf_omega: f64,
    /// `|omega|_{B^1_{2,1}}`
    pub besov1_omega: f64,
    /// `|(u, E, b)|_{L^2}`
    pub energy_l2: f64,
    /// `|(cE, b)|_{B^2_{2,1}}`
    #[serde(rename = "besov2_Eb")]
    pub besov2_eb: f64,
    /// `|R omega|_inf`
    pub riesz_linf: f64,
    /// `|F|_{B^1_{2,1}}`, `F` the Lorentz curl minus its Riesz part
    pub remainder_b121: f64,
    pub int_riesz_linf: f64,
    pub int_remainder_b121: f64,
}

/// One row of `aux.csv`: norms the checks need beyond the main series.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuxPoint {
    pub t: f64,
    /// `|(u, E, b)|_{B^2_{2,1}}`
    pub besov2_ueb: f64,
    /// `|(E, b)|_{B^2_{2,1}}`
    pub besov2_e_b: f64,
    /// `|F_maxwell|_{B^2_{2,1}}`, the Ampère forcing
    pub besov2_forcing: f64,
}

/// Instantaneous measurements; the integrals are filled in by
/// [`SeriesBuilder`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Measurement {
    pub linf_omega: f64,
    pub besov1_omega: f64,
    pub energy_l2: f64,
    pub besov2_eb: f64,
    pub riesz_linf: f64,
    pub remainder_b121: f64,
    pub besov2_ueb: f64,
    pub besov2_e_b: f64,
    pub besov2_forcing: f64,
}

/// Models whose states can be measured for the series.
pub trait Measure: Dynamics {
    fn measure(&self, s: &Self::State) -> Measurement;

    /// The Lorentz remainder `F` as a field, used by the Duhamel
    /// decomposition.
    fn remainder(&self, s: &Self::State) -> ScalarField2D;

    /// Coefficient `k` of the `k R omega` term in the vorticity equation.
    fn riesz_rate(&self) -> f64;
}

impl Measure for Perturbation {
    fn measure(&self, s: &PerturbationState) -> Measurement {
        let p = &self.params;
        let u = biot_savart(&s.omega);
        let b = perp_gradient(&s.a);
        let ce = s.e.scaled(p.c);
        let (_, rem) = lorentz_split(s, p);
        let f = ampere_forcing(s, p);
        Measurement {
            linf_omega: s.omega.max_abs(),
            besov1_omega: besov_norm(&s.omega, BesovSpec::B1_21),
            energy_l2: s.energy_l2(),
            besov2_eb: besov_norm_multi(&[&ce, &b.x1, &b.x2], BesovSpec::B2_21),
            riesz_linf: riesz(&s.omega).max_abs(),
            remainder_b121: besov_norm(&rem, BesovSpec::B1_21),
            besov2_ueb: besov_norm_multi(&[&u.x1, &u.x2, &s.e, &b.x1, &b.x2], BesovSpec::B2_21),
            besov2_e_b: besov_norm_multi(&[&s.e, &b.x1, &b.x2], BesovSpec::B2_21),
            besov2_forcing: besov_norm(&f, BesovSpec::B2_21),
        }
    }

    fn remainder(&self, s: &PerturbationState) -> ScalarField2D {
        lorentz_split(s, &self.params).1
    }

    fn riesz_rate(&self) -> f64 {
        self.params.alpha * self.params.alpha
    }
}

impl Measure for Normal {
    fn measure(&self, s: &NormalState) -> Measurement {
        let p = &self.params;
        let u = biot_savart(&s.omega);
        let b3 = s.b3.without_mean();
        let (ce1, ce2) = (s.e1.scaled(p.c), s.e2.scaled(p.c));
        let (f1, f2) = normal_forcing(s, p);
        Measurement {
            linf_omega: s.omega.max_abs(),
            besov1_omega: besov_norm(&s.omega, BesovSpec::B1_21),
            energy_l2: s.energy_l2(),
            besov2_eb: besov_norm_multi(&[&ce1, &ce2, &b3], BesovSpec::B2_21),
            riesz_linf: riesz(&s.omega).max_abs(),
            remainder_b121: besov_norm(&normal_lorentz_curl(s, p), BesovSpec::B1_21),
            besov2_ueb: besov_norm_multi(&[&u.x1, &u.x2, &s.e1, &s.e2, &b3], BesovSpec::B2_21),
            besov2_e_b: besov_norm_multi(&[&s.e1, &s.e2, &b3], BesovSpec::B2_21),
            besov2_forcing: besov_norm_multi(&[&f1, &f2], BesovSpec::B2_21),
        }
    }

    fn remainder(&self, s: &NormalState) -> ScalarField2D {
        normal_lorentz_curl(s, &self.params)
    }

    fn riesz_rate(&self) -> f64 {
        0.0
    }
}

impl Measure for EulerRiesz {
    fn measure(&self, s: &EulerRieszState) -> Measurement {
        let u = biot_savart(&s.omega);
        let rem = self.remainder(s);
        Measurement {
            linf_omega: s.omega.max_abs(),
            besov1_omega: besov_norm(&s.omega, BesovSpec::B1_21),
            energy_l2: crate::besov::lebesgue_norm_multi(&[&u.x1, &u.x2], 2.0),
            riesz_linf: riesz(&s.omega).max_abs(),
            remainder_b121: besov_norm(&rem, BesovSpec::B1_21),
            besov2_ueb: besov_norm_multi(&[&u.x1, &u.x2], BesovSpec::B2_21),
            ..Measurement::default()
        }
    }

    /// `beta^2 omega`: the forcing beyond `(alpha^2 + beta^2) R omega`.
    fn remainder(&self, s: &EulerRieszState) -> ScalarField2D {
        s.omega.scaled(self.params.beta * self.params.beta)
    }

    fn riesz_rate(&self) -> f64 {
        self.params.alpha * self.params.alpha + self.params.beta * self.params.beta
    }
}

/// Accumulates samples into series rows, integrating by the trapezoid rule.
#[derive(Clone, Debug, Default)]
pub struct SeriesBuilder {
    pub series: Vec<SeriesPoint>,
    pub aux: Vec<AuxPoint>,
}

impl SeriesBuilder {
    pub fn push(&mut self, t: f64, m: Measurement) {
        let (ir, if_) = match self.series.last() {
            None => (0.0, 0.0),
            Some(p) => {
                let h = t - p.t;
                (
                    p.int_riesz_linf + 0.5 * h * (p.riesz_linf + m.riesz_linf),
                    p.int_remainder_b121 + 0.5 * h * (p.remainder_b121 + m.remainder_b121),
                )
            }
        };
        self.series.push(SeriesPoint {
            t,
            linf_omega: m.linf_omega,
            besov1_omega: m.besov1_omega,
            energy_l2: m.energy_l2,
            besov2_eb: m.besov2_eb,
            riesz_linf: m.riesz_linf,
            remainder_b121: m.remainder_b121,
            int_riesz_linf: ir,
            int_remainder_b121: if_,
        });
        self.aux.push(AuxPoint {
            t,
            besov2_ueb: m.besov2_ueb,
            besov2_e_b: m.besov2_e_b,
            besov2_forcing: m.besov2_forcing,
        });
    }
}

/// Everything one run produced, in memory.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    /// Full configuration snapshot.
    pub config: serde_json::Value,
    pub c: f64,
    pub series: Vec<SeriesPoint>,
    pub aux: Vec<AuxPoint>,
    pub profile_hash: String,
    pub wall_clock_s: f64,
}

impl RunRecord {
    pub fn validate(&self) -> Result<()> {
        if self.series.is_empty() || self.series.len() != self.aux.len() {
            return Err(Error::Config("run record has no samples or mismatched series".into()));
        }
        if self.series.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Config("series times are not strictly increasing".into()));
        }
        Ok(())
    }
}

/// Machine-readable outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Check label (`energy`, `maxwell`, `local_bound`, `lorentz`, ...).
    pub check: String,
    pub pass: bool,
    pub measured: f64,
    pub threshold: f64,
    /// `threshold - measured`; positive when passing.
    pub margin: f64,
    pub details: serde_json::Value,
}

impl CheckReport {
    pub fn new(check: &str, measured: f64, threshold: f64, details: serde_json::Value) -> Self {
        Self {
            check: check.into(),
            pass: measured <= threshold,
            measured,
            threshold,
            margin: threshold - measured,
            details,
        }
    }
}

/// Trapezoid running integral of `f` on the sample times.
pub fn running_integral(t: &[f64], f: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(t.len());
    let mut acc = 0.0;
    for i in 0..t.len() {
        if i > 0 {
            acc += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
        }
        out.push(acc);
    }
    out
}

/// Largest rise of the `L^2` energy above its initial value.
pub fn energy_excursion(series: &[SeriesPoint]) -> f64 {
    let e0 = series[0].energy_l2;
    series.iter().map(|p| (p.energy_l2 - e0).max(0.0)).fold(0.0, f64::max)
}

/// Energy inequality: passes iff the positive excursion is at most `tol`.
pub fn energy_check(record: &RunRecord, tol: f64) -> CheckReport {
    let s = &record.series;
    let exc = energy_excursion(s);
    let drop = s[0].energy_l2 - s.last().map_or(s[0].energy_l2, |p| p.energy_l2);
    CheckReport::new(
        "energy",
        exc,
        tol,
        json!({ "initial": s[0].energy_l2, "final": s.last().map(|p| p.energy_l2), "dissipated": drop }),
    )
}

/// `|(E, b)|_{L^inf_t B^s_{2,1}} <= 2 |(E0, b0)| + 2c int |F|` at every
/// sample.
pub fn maxwell_estimate_check(record: &RunRecord) -> CheckReport {
    let a = &record.aux;
    let t: Vec<f64> = a.iter().map(|p| p.t).collect();
    let f: Vec<f64> = a.iter().map(|p| p.besov2_forcing).collect();
    let int_f = running_integral(&t, &f);
    let mut running_max = 0.0_f64;
    let mut worst = 0.0_f64;
    let mut worst_t = 0.0;
    for (p, i) in a.iter().zip(&int_f) {
        running_max = running_max.max(p.besov2_e_b);
        let rhs = 2.0 * a[0].besov2_e_b + 2.0 * record.c * i;
        let ratio = if rhs > 0.0 {
            running_max / rhs
        } else if running_max > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        if ratio > worst {
            worst = ratio;
            worst_t = p.t;
        }
    }
    CheckReport::new(
        "maxwell",
        worst,
        1.0,
        json!({ "worst_ratio_time": worst_t, "samples": a.len() }),
    )
}

/// Growth factor of `|(u, E, b)|_{B^2_{2,1}}` against the factor 4. Passes
/// while the factor stays below 4; the first crossing is the empirical
/// horizon.
pub fn local_bound_check(record: &RunRecord) -> CheckReport {
    let a = &record.aux;
    let n0 = a[0].besov2_ueb;
    let factor = |p: &AuxPoint| if n0 > 0.0 { p.besov2_ueb / n0 } else { 1.0 };
    let max = a.iter().map(factor).fold(0.0, f64::max);
    let horizon = a.iter().find(|p| factor(p) > 4.0).map(|p| p.t);
    let last = a.last().map_or(0.0, |p| p.t);
    CheckReport::new(
        "local_bound",
        max,
        4.0,
        json!({ "max_factor": max, "horizon": horizon, "t_end": last, "initial_norm": n0 }),
    )
}

/// Right-hand side of the remainder estimate with unit constant:
/// `(E0 |w0|_{B^1} + 1) (|(cE0, b0)|_{B^2} + c^2 t |w0|_{B^1}) t`.
pub fn lorentz_rhs(first: &SeriesPoint, c: f64, t: f64) -> f64 {
    (first.energy_l2 * first.besov1_omega + 1.0) * (first.besov2_eb + c * c * t * first.besov1_omega) * t
}

/// Ratio of the measured `int |F|_{B^1_{2,1}}` to [`lorentz_rhs`]; passes
/// iff it is finite. The constant is compared across runs by the caller.
pub fn lorentz_remainder_check(record: &RunRecord) -> CheckReport {
    let s = &record.series;
    let first = &s[0];
    let mut worst = 0.0_f64;
    for p in &s[1..] {
        let rhs = lorentz_rhs(first, record.c, p.t);
        let r = if rhs > 0.0 { p.int_remainder_b121 / rhs } else { 0.0 };
        worst = worst.max(r);
    }
    // p = 1 spot check of the electromagnetic bound:
    // int |(cE, b)|_{B^2} <~ t |(cE0, b0)| + c^2 t^2 |w0|_{B^1}
    let t: Vec<f64> = s.iter().map(|p| p.t).collect();
    let eb: Vec<f64> = s.iter().map(|p| p.besov2_eb).collect();
    let int_eb = running_integral(&t, &eb);
    let em_ratio = s
        .iter()
        .zip(&int_eb)
        .skip(1)
        .map(|(p, i)| {
            let rhs = p.t * first.besov2_eb + record.c * record.c * p.t * p.t * first.besov1_omega;
            if rhs > 0.0 {
                i / rhs
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    let last = s.last().unwrap();
    let dominance = if last.int_remainder_b121 > 0.0 {
        last.int_riesz_linf / last.int_remainder_b121
    } else {
        f64::INFINITY
    };
    let mut r = CheckReport::new(
        "lorentz",
        worst,
        f64::INFINITY,
        json!({ "em_bound_ratio_p1": em_ratio, "riesz_over_remainder": dominance }),
    );
    r.pass = worst.is_finite();
    r
}

/// Sample for the Duhamel decomposition: vorticity, Lorentz remainder and
/// flow map at one time.
#[derive(Clone, Debug)]
pub struct DuhamelSample {
    pub t: f64,
    pub omega: ScalarField2D,
    pub remainder: ScalarField2D,
    pub flow: FlowMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DuhamelPoint {
    pub t: f64,
    pub linf_omega: f64,
    /// `|e^{t k R} omega0|_inf`
    pub linear: f64,
    /// `|k int e^{(t-s) k R} [R, Phi] omega ds|_inf`
    pub commutator: f64,
    /// `|int e^{(t-s) k R} F o Phi ds|_inf`
    pub forcing: f64,
    /// `|omega o Phi - (linear - commutator + forcing)|_inf`
    pub residual: f64,
}

impl DuhamelPoint {
    /// `linear / (commutator + forcing)`.
    pub fn dominance(&self) -> f64 {
        let rest = self.commutator + self.forcing;
        if rest > 0.0 {
            self.linear / rest
        } else {
            f64::INFINITY
        }
    }
}

/// Splits `omega o Phi` along the samples into the linear Riesz evolution,
/// the commutator integral and the forcing integral (trapezoid in time).
/// `rate` is the coefficient of `R omega` in the vorticity equation.
///
/// Fails with [`Error::InsufficientSnapshots`] when the reconstruction
/// residual exceeds 10% of the linear term at any sample.
pub fn duhamel_decomposition(samples: &[DuhamelSample], rate: f64) -> Result<Vec<DuhamelPoint>> {
    let pts = duhamel_series(samples, rate);
    for p in &pts {
        if p.residual > 0.1 * p.linear {
            return Err(Error::InsufficientSnapshots {
                residual: p.residual,
                leading: p.linear,
            });
        }
    }
    Ok(pts)
}

/// [`duhamel_decomposition`] without the residual gate.
pub fn duhamel_series(samples: &[DuhamelSample], rate: f64) -> Vec<DuhamelPoint> {
    if samples.is_empty() {
        return Vec::new();
    }
    let w0 = &samples[0].omega;
    let comm: Vec<ScalarField2D> = samples
        .iter()
        .map(|s| riesz_commutator(&s.omega, &s.flow).scaled(rate))
        .collect();
    let forc: Vec<ScalarField2D> = samples
        .iter()
        .map(|s| compose(&s.remainder, &s.flow, Direction::Forward))
        .collect();
    let grid = w0.grid();
    samples
        .iter()
        .enumerate()
        .map(|(m, sm)| {
            let t = sm.t;
            let linear = riesz_semigroup(w0, rate * t);
            let mut ci = ScalarField2D::zeros(grid);
            let mut fi = ScalarField2D::zeros(grid);
            for i in 0..m {
                let h = samples[i + 1].t - samples[i].t;
                for k in [i, i + 1] {
                    let prop = rate * (t - samples[k].t);
                    ci = ci.axpy(0.5 * h, &riesz_semigroup(&comm[k], prop));
                    fi = fi.axpy(0.5 * h, &riesz_semigroup(&forc[k], prop));
                }
            }
            let w = compose(&sm.omega, &sm.flow, Direction::Forward);
            let recon = linear.sub(&ci).add(&fi);
            DuhamelPoint {
                t,
                linf_omega: sm.omega.max_abs(),
                linear: linear.max_abs(),
                commutator: ci.max_abs(),
                forcing: fi.max_abs(),
                residual: w.max_abs_diff(&recon),
            }
        })
        .collect()
}

/// Duhamel dominance at the time of largest `|omega|_inf`: the linear term
/// must exceed the other two by `factor`, with a residual below 10% of it.
pub fn duhamel_check(points: &[DuhamelPoint], factor: f64) -> CheckReport {
    let Some(star) = points
        .iter()
        .skip(1)
        .max_by(|a, b| a.linf_omega.total_cmp(&b.linf_omega))
    else {
        return CheckReport::new("duhamel", 0.0, 0.0, json!({ "reason": "no samples after t = 0" }));
    };
    let dom = star.dominance();
    let rel = if star.linear > 0.0 {
        star.residual / star.linear
    } else {
        0.0
    };
    CheckReport {
        check: "duhamel".into(),
        pass: dom >= factor && rel <= 0.1,
        measured: dom,
        threshold: factor,
        margin: dom - factor,
        details: json!({ "t": star.t, "point": star, "relative_residual": rel }),
    }
}

/// One row of the inflation table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InflationRow {
    pub n_scales: usize,
    pub linf0: f64,
    pub max_linf: f64,
    pub ratio: f64,
    pub t_at_max: f64,
    /// First time the ratio reaches each threshold, if it does.
    pub first_crossings: Vec<Option<f64>>,
    /// Inflation ratio of the matched normal-structure twin, if run.
    pub twin_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InflationTable {
    pub thresholds: Vec<f64>,
    pub window: f64,
    pub rows: Vec<InflationRow>,
    /// Least-squares slope of `log ratio` against `log N`.
    pub log_slope: Option<f64>,
}

/// Inflation ratio `max_{t <= window} |omega|_inf / |omega0|_inf`.
pub fn inflation_row(n_scales: usize, series: &[SeriesPoint], window: f64, thresholds: &[f64]) -> InflationRow {
    let l0 = series[0].linf_omega;
    let within: Vec<&SeriesPoint> = series.iter().filter(|p| p.t <= window * (1.0 + 1e-12)).collect();
    let (max_linf, t_at_max) = within.iter().fold((0.0_f64, 0.0), |(m, tm), p| {
        if p.linf_omega > m {
            (p.linf_omega, p.t)
        } else {
            (m, tm)
        }
    });
    let ratio = if l0 > 0.0 { max_linf / l0 } else { 1.0 };
    let first_crossings = thresholds
        .iter()
        .map(|&th| within.iter().find(|p| l0 > 0.0 && p.linf_omega / l0 >= th).map(|p| p.t))
        .collect();
    InflationRow {
        n_scales,
        linf0: l0,
        max_linf,
        ratio,
        t_at_max,
        first_crossings,
        twin_ratio: None,
    }
}

pub fn inflation_report(rows: Vec<InflationRow>, window: f64, thresholds: Vec<f64>) -> InflationTable {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ratio > 0.0 && r.n_scales > 0)
        .map(|r| ((r.n_scales as f64).ln(), r.ratio.ln()))
        .collect();
    InflationTable {
        thresholds,
        window,
        rows,
        log_slope: least_squares_slope(&pts),
    }
}

/// Slope of the least-squares line through `pts`; `None` for fewer than two
/// distinct abscissae.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Params;
    use crate::spectral::FourierGrid;

    fn record(series: Vec<SeriesPoint>, aux: Vec<AuxPoint>, c: f64) -> RunRecord {
        RunRecord {
            config: json!({}),
            c,
            series,
            aux,
            profile_hash: String::new(),
            wall_clock_s: 0.0,
        }
    }

    #[test]
    fn zero_datum_checks() {
        let g = FourierGrid::new(16).unwrap();
        let d = Perturbation::new(Params::default());
        let m = d.measure(&PerturbationState::zeros(&g));
        assert_eq!(m, Measurement::default());
        let mut b = SeriesBuilder::default();
        b.push(0.0, m);
        b.push(0.1, m);
        let r = record(b.series, b.aux, 1.0);
        assert!(energy_check(&r, 0.0).pass);
        let mx = maxwell_estimate_check(&r);
        assert!(mx.pass && mx.measured == 0.0);
        let lb = local_bound_check(&r);
        assert!(lb.pass && lb.measured == 1.0);
        assert!(lorentz_remainder_check(&r).pass);
    }

    #[test]
    fn trapezoid_integrals() {
        let mut b = SeriesBuilder::default();
        for i in 0..=4 {
            let t = 0.25 * f64::from(i);
            b.push(
                t,
                Measurement {
                    riesz_linf: t,
                    remainder_b121: 2.0,
                    ..Measurement::default()
                },
            );
        }
        let last = b.series.last().unwrap();
        assert!((last.int_riesz_linf - 0.5).abs() < 1e-15);
        assert!((last.int_remainder_b121 - 2.0).abs() < 1e-15);
        assert_eq!(
            running_integral(&[0.0, 1.0, 3.0], &[1.0, 1.0, 2.0]),
            vec![0.0, 1.0, 4.0]
        );
    }

    #[test]
    fn energy_excursion_and_maxwell_violation() {
        let p = |t: f64, e: f64| SeriesPoint {
            t,
            energy_l2: e,
            ..SeriesPoint::default()
        };
        let s = vec![p(0.0, 1.0), p(0.1, 1.0 + 1e-9), p(0.2, 0.9)];
        assert!((energy_excursion(&s) - 1e-9).abs() < 1e-15);
        let a = |t: f64, eb: f64| AuxPoint {
            t,
            besov2_e_b: eb,
            ..AuxPoint::default()
        };
        let r = record(s, vec![a(0.0, 1.0), a(0.1, 1.5), a(0.2, 2.5)], 1.0);
        let mx = maxwell_estimate_check(&r);
        assert!(!mx.pass);
        assert!((mx.measured - 1.25).abs() < 1e-15);
    }

    #[test]
    fn inflation_rows_and_slope() {
        let p = |t: f64, l: f64| SeriesPoint {
            t,
            linf_omega: l,
            ..SeriesPoint::default()
        };
        let s = vec![p(0.0, 0.5), p(0.5, 1.0), p(1.0, 2.0), p(1.5, 4.0)];
        let row = inflation_row(4, &s, 1.0, &[1.5, 3.0, 10.0]);
        assert_eq!(row.ratio, 4.0);
        assert_eq!(row.t_at_max, 1.0);
        assert_eq!(row.first_crossings, vec![Some(0.5), Some(1.0), None]);
        let slope = least_squares_slope(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        assert!((slope - 2.0).abs() < 1e-15);
        assert_eq!(least_squares_slope(&[(1.0, 1.0)]), None);
    }

    #[test]
    fn duhamel_at_time_zero() {
        let g = FourierGrid::new(32).unwrap();
        let w = ScalarField2D::from_fn(&g, |x, y| (x + y).sin());
        let s = DuhamelSample {
            t: 0.0,
            omega: w.clone(),
            remainder: ScalarField2D::zeros(&g),
            flow: FlowMap::identity(&g),
        };
        let pts = duhamel_decomposition(&[s], 1.0).unwrap();
        assert!((pts[0].linear - w.max_abs()).abs() < 1e-14);
        assert_eq!(pts[0].commutator + pts[0].forcing, 0.0);
        assert!(pts[0].residual < 1e-13);
    }

    #[test]
    fn duhamel_linear_run_without_flow() {
        // omega_t = R omega + F with F fixed, no transport: the decomposition
        // is exact up to the trapezoid error in the forcing integral
        let g = FourierGrid::new(32).unwrap();
        let w0 = ScalarField2D::from_fn(&g, |x, y| (2.0 * x + y).cos());
        let f = ScalarField2D::from_fn(&g, |x, _| (3.0 * x).sin());
        let exact = |t: f64| {
            // f is an eigenfunction of R with eigenvalue -1
            riesz_semigroup(&w0, t).axpy(1.0 - (-t).exp(), &f)
        };
        let samples: Vec<DuhamelSample> = (0..=40)
            .map(|i| {
                let t = 0.0125 * f64::from(i);
                DuhamelSample {
                    t,
                    omega: exact(t),
                    remainder: f.clone(),
                    flow: FlowMap::identity(&g),
                }
            })
            .collect();
        let pts = duhamel_decomposition(&samples, 1.0).unwrap();
        let last = pts.last().unwrap();
        assert!((last.linear - riesz_semigroup(&w0, 0.5).max_abs()).abs() < 1e-14);
        assert!(last.commutator < 1e-12);
        assert!(last.residual < 1e-4, "{}", last.residual);
    }
}
