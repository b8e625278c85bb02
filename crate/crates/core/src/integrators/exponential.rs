use std::sync::{Arc, Mutex};

use rustfft::num_complex::Complex64;

use crate::spectral::FourierGrid;

/// Relative discriminant below which the confluent formula is used.
const CONFLUENT_TOL: f64 = 1e-8;

/// `exp(t M)` for `M = [[-gamma, -c k2], [c, 0]]` acting on `(E, a)`, as
/// row-major `[m00, m01, m10, m11]`.
pub fn mode_exponential(c: f64, gamma: f64, k2: f64, t: f64) -> [f64; 4] {
    let mu = -0.5 * gamma;
    let disc = gamma * gamma - 4.0 * c * c * k2;
    let scale = (gamma * gamma).max(4.0 * c * c * k2);
    // e^{mu t} cosh(delta t) and e^{mu t} sinh(delta t) / delta
    let (ec, es) = if disc.abs() <= CONFLUENT_TOL * scale {
        let z = 0.25 * disc * t * t;
        let em = (mu * t).exp();
        (
            em * (1.0 + z / 2.0 + z * z / 24.0),
            em * t * (1.0 + z / 6.0 + z * z / 120.0),
        )
    } else if disc > 0.0 {
        let delta = 0.5 * disc.sqrt();
        let lam_minus = mu - delta;
        // lam_plus = c^2 k2 / lam_minus avoids cancellation when gamma dominates
        let lam_plus = if k2 == 0.0 { 0.0 } else { c * c * k2 / lam_minus };
        let ep = (lam_plus * t).exp();
        let em = (lam_minus * t).exp();
        let diff = em * (2.0 * delta * t).exp_m1();
        (0.5 * (ep + em), diff / (2.0 * delta))
    } else {
        let w = 0.5 * (-disc).sqrt();
        let em = (mu * t).exp();
        (em * (w * t).cos(), em * (w * t).sin() / w)
    };
    [ec - 0.5 * gamma * es, -c * k2 * es, c * es, ec + 0.5 * gamma * es]
}

/// Per-mode exponentials of the damped Maxwell block for one step size.
#[derive(Debug)]
pub struct MaxwellModeExponential {
    n: usize,
    h: f64,
    decay: f64,
    table: Vec<[f64; 4]>,
}

impl MaxwellModeExponential {
    /// `c` is the wave speed, `gamma` the damping of `E` (`c^2` in the
    /// perturbation model, `c^2 sigma` in the normal one).
    pub fn build(grid: &FourierGrid, c: f64, gamma: f64, h: f64) -> Self {
        let table = grid
            .k_squared()
            .iter()
            .map(|&k2| mode_exponential(c, gamma, k2, h))
            .collect();
        Self {
            n: grid.n(),
            h,
            decay: (-gamma * h).exp(),
            table,
        }
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn matrix(&self, idx: usize) -> [f64; 4] {
        self.table[idx]
    }

    /// Advances `(E, a)` spectra by one step.
    pub fn apply(&self, e: &[Complex64], a: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut eo = Vec::with_capacity(e.len());
        let mut ao = Vec::with_capacity(a.len());
        for ((m, &x), &y) in self.table.iter().zip(e).zip(a) {
            eo.push(x * m[0] + y * m[1]);
            ao.push(x * m[2] + y * m[3]);
        }
        (eo, ao)
    }

    /// Advances in-plane `E` and out-of-plane `b3`: the transverse part of
    /// `E` and the potential `b3 / (i|k|)` follow the same 2x2 block, the
    /// longitudinal part of `E` only decays.
    pub fn apply_transverse(
        &self,
        e1: &[Complex64],
        e2: &[Complex64],
        b3: &[Complex64],
    ) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let n = self.n;
        let i = Complex64::new(0.0, 1.0);
        let mut o1 = vec![Complex64::default(); n * n];
        let mut o2 = vec![Complex64::default(); n * n];
        let mut ob = vec![Complex64::default(); n * n];
        let half = n / 2;
        for m1 in 0..n {
            for m2 in 0..n {
                if m1 == half || m2 == half {
                    continue;
                }
                let idx = m1 * n + m2;
                let k1 = if m1 < half { m1 as f64 } else { m1 as f64 - n as f64 };
                let k2 = if m2 < half { m2 as f64 } else { m2 as f64 - n as f64 };
                if idx == 0 {
                    o1[0] = e1[0] * self.decay;
                    o2[0] = e2[0] * self.decay;
                    ob[0] = b3[0];
                    continue;
                }
                let k = (k1 * k1 + k2 * k2).sqrt();
                let et = (e1[idx] * k2 - e2[idx] * k1) / k;
                let el = (e1[idx] * k1 + e2[idx] * k2) / k * self.decay;
                let pot = -i * b3[idx] / k;
                let m = self.table[idx];
                let et2 = et * m[0] + pot * m[1];
                let pot2 = et * m[2] + pot * m[3];
                o1[idx] = (et2 * k2 + el * k1) / k;
                o2[idx] = (el * k2 - et2 * k1) / k;
                ob[idx] = i * k * pot2;
            }
        }
        (o1, o2, ob)
    }
}

/// Small cache of exponential tables keyed by grid size and step, so the
/// full and half steps of the Lawson scheme are built once per run.
#[derive(Debug, Default)]
pub struct ExponentialCache {
    entries: Mutex<Vec<(usize, u64, Arc<MaxwellModeExponential>)>>,
}

impl ExponentialCache {
    pub fn get(
        &self,
        grid: &FourierGrid,
        h: f64,
        build: impl FnOnce() -> MaxwellModeExponential,
    ) -> Arc<MaxwellModeExponential> {
        let key = (grid.n(), h.to_bits());
        let mut entries = self.entries.lock().expect("exponential cache poisoned");
        if let Some((_, _, t)) = entries.iter().find(|(n, b, _)| (*n, *b) == key) {
            return Arc::clone(t);
        }
        let table = Arc::new(build());
        if entries.len() >= 6 {
            entries.remove(0);
        }
        entries.push((key.0, key.1, Arc::clone(&table)));
        table
    }
}
