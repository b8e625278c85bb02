//! Initial data: the stacked annular family `f_N`, the ill-posedness datum
//! built on it, normal-structure twins, and seeded random smooth fields.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::besov::{besov_norm, besov_norm_multi, BesovSpec};
use crate::error::{Error, Result};
use crate::models::{NormalState, PerturbationState};
use crate::spectral::{biot_savart, perp_gradient, FourierGrid, ScalarField2D};

/// Physical radius of the unit annulus of the reference profile: copy `j`
/// of the family is `g(lambda^j x / BASE_SCALE)`.
pub const BASE_SCALE: f64 = 4.0 * PI / 3.0;

/// Highest wavenumber per axis drawn by [`random_smooth_field`]; the draw
/// order does not depend on the grid, so one seed gives one field at every
/// resolution (up to truncation).
const RANDOM_K_MAX: i64 = 256;

/// `exp(1 - 1/(1 - s^2))` on `(-1, 1)`, zero outside; peak value 1 at 0.
pub fn mollifier(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Annular bump `g(y) = chi(|y|) (y1^2 - y2^2) / |y|^2`, with `chi` a smooth
/// mollifier supported in `(r0, r1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpProfile {
    pub r0: f64,
    pub r1: f64,
}

impl Default for BumpProfile {
    fn default() -> Self {
        Self { r0: 0.5, r1: 1.0 }
    }
}

impl BumpProfile {
    pub const ID: &'static str = "annular-cos2theta-v1";

    pub fn radial(&self, r: f64) -> f64 {
        mollifier((2.0 * r - self.r0 - self.r1) / (self.r1 - self.r0))
    }

    pub fn eval(&self, y1: f64, y2: f64) -> f64 {
        let r2 = y1 * y1 + y2 * y2;
        if r2 == 0.0 {
            return 0.0;
        }
        self.radial(r2.sqrt()) * (y1 * y1 - y2 * y2) / r2
    }

    /// Whole-plane value of `R g` at the origin, `1/2 int chi(r)/r dr`
    /// (midpoint rule).
    pub fn riesz_at_origin(&self) -> f64 {
        let m = 20_000;
        let h = (self.r1 - self.r0) / m as f64;
        (0..m)
            .map(|i| {
                let r = self.r0 + (i as f64 + 0.5) * h;
                self.radial(r) / r
            })
            .sum::<f64>()
            * h
            * 0.5
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda >= 2.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dilation factor must be at least 2, got {lambda}"
        )));
    }
    Ok(())
}

/// Largest `N` whose innermost annulus still spans four cells.
pub fn max_admissible_n(lambda: f64, grid: &FourierGrid) -> usize {
    let p = BumpProfile::default();
    let width = BASE_SCALE * p.r0 / (4.0 * grid.spacing());
    let mut n = 0;
    while lambda.powi(n as i32 + 1) <= width * (1.0 + 1e-12) {
        n += 1;
    }
    n
}

/// `f_N(x) = sum_{j=1}^N g(lambda^j x / L)` around the cell origin, mean
/// removed. The copies live in disjoint annuli, coarse (`j = 1`) to fine.
pub fn build_f_family(n_scales: usize, lambda: f64, grid: &Arc<FourierGrid>) -> Result<ScalarField2D> {
    check_lambda(lambda)?;
    let max = max_admissible_n(lambda, grid);
    if n_scales == 0 || n_scales > max {
        if n_scales == 0 {
            return Err(Error::InvalidParameter("the family needs at least one scale".into()));
        }
        return Err(Error::UnderResolved {
            requested: n_scales,
            max_admissible: max,
            n: grid.n(),
        });
    }
    let p = BumpProfile::default();
    let f = ScalarField2D::from_centered_fn(grid, |x1, x2| {
        (1..=n_scales)
            .map(|j| {
                let s = lambda.powi(j as i32) / BASE_SCALE;
                p.eval(s * x1, s * x2)
            })
            .sum()
    });
    Ok(f.without_mean())
}

/// Single copy `g(lambda^j x / L)`, mean removed.
pub fn family_copy(j: i32, lambda: f64, grid: &Arc<FourierGrid>) -> ScalarField2D {
    let p = BumpProfile::default();
    let s = lambda.powi(j) / BASE_SCALE;
    ScalarField2D::from_centered_fn(grid, |x1, x2| p.eval(s * x1, s * x2)).without_mean()
}

/// Radius of the electromagnetic bump [`g_em`].
pub const EM_RADIUS: f64 = 2.0;

/// Default electromagnetic profile: a radial mollifier of radius 2 about the
/// cell origin, mean removed and scaled to unit `B^2_{2,1}` norm on `grid`.
pub fn g_em(grid: &Arc<FourierGrid>) -> ScalarField2D {
    let raw = ScalarField2D::from_centered_fn(grid, |x1, x2| mollifier(x1.hypot(x2) / EM_RADIUS)).without_mean();
    let norm = besov_norm(&raw, BesovSpec::B2_21);
    raw.scaled(1.0 / norm)
}

/// How the background field enters the ill-posedness datum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Background {
    /// `B0 = e1 + eps grad^perp g`: unit background, scaled perturbation.
    #[default]
    Unit,
    /// `B0 = eps (e1 + grad^perp g)`: the background scaled by `eps` too.
    Literal,
}

/// A perturbation-form datum with its provenance.
#[derive(Clone, Debug)]
pub struct ScenarioDatum {
    pub state: PerturbationState,
    /// Strength of the horizontal background field.
    pub alpha: f64,
    pub epsilon: f64,
    pub n_scales: usize,
    pub lambda: f64,
    pub profile: &'static str,
}

/// `omega0 = eps f_N`, `E0 = eps g`, `a0 = eps g` (so `b0 = eps grad^perp g`).
/// `epsilon = None` means `1/N`.
pub fn illposed_datum(
    n_scales: usize,
    lambda: f64,
    epsilon: Option<f64>,
    background: Background,
    grid: &Arc<FourierGrid>,
) -> Result<ScenarioDatum> {
    let f = build_f_family(n_scales, lambda, grid)?;
    let eps = epsilon.unwrap_or(1.0 / n_scales as f64);
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be non-negative, got {eps}"
        )));
    }
    let g = g_em(grid).scaled(eps);
    Ok(ScenarioDatum {
        state: PerturbationState::new(f.scaled(eps), g.clone(), g),
        alpha: match background {
            Background::Unit => 1.0,
            Background::Literal => eps,
        },
        epsilon: eps,
        n_scales,
        lambda,
        profile: BumpProfile::ID,
    })
}

/// Both sides of the smallness assumption `|(cE0, b0)|_{B^2_{2,1}} <=
/// |u0|_{B^2_{2,1}}`.
pub fn smallness_assumption(state: &PerturbationState, c: f64) -> (f64, f64) {
    let b = perp_gradient(&state.a);
    let ce = state.e.scaled(c);
    let lhs = besov_norm_multi(&[&ce, &b.x1, &b.x2], BesovSpec::B2_21);
    let u = biot_savart(&state.omega);
    let rhs = besov_norm_multi(&[&u.x1, &u.x2], BesovSpec::B2_21);
    (lhs, rhs)
}

/// Normal-structure datum: in-plane `E = (e1, e2)` and `b3 = background + b3`.
pub fn normal_datum(
    omega: ScalarField2D,
    e1: ScalarField2D,
    e2: ScalarField2D,
    b3: ScalarField2D,
    background: f64,
) -> Result<NormalState> {
    for f in [&e1, &e2, &b3] {
        omega.check_same_grid(f)?;
    }
    Ok(NormalState {
        omega: omega.without_mean(),
        e1,
        e2,
        b3: b3.map(|v| v + background),
    })
}

/// The A/B twin of an ill-posedness datum: same `omega0`, the same
/// electromagnetic perturbation carried by `E1` and `b3`, and a vertical
/// background of the same strength instead of the horizontal one.
pub fn normal_twin(d: &ScenarioDatum) -> NormalState {
    let z = ScalarField2D::zeros(d.state.omega.grid());
    NormalState {
        omega: d.state.omega.clone(),
        e1: d.state.e.clone(),
        e2: z,
        b3: d.state.a.map(|v| v + d.alpha),
    }
}

/// Seeded normal datum: independent random smooth fields (decay `m`) for
/// `omega`, `E1`, `E2`, `b3`, scaled by `amplitude`, over a unit vertical
/// background.
pub fn random_normal_datum(seed: u64, m: f64, amplitude: f64, grid: &Arc<FourierGrid>) -> Result<NormalState> {
    let f = |k: u64| random_smooth_field(seed.wrapping_mul(4).wrapping_add(k), m, grid).map(|r| r.scaled(amplitude));
    normal_datum(f(0)?, f(1)?, f(2)?, f(3)?, 1.0)
}

/// Random mean-free field with unit-variance Gaussian coefficients damped by
/// `(1 + |k|^2)^{-m/2}`, Hermitian-symmetrised and scaled to unit sup norm.
/// Every seed, including 0, is an ordinary ChaCha8 seed.
pub fn random_smooth_field(seed: u64, m: f64, grid: &Arc<FourierGrid>) -> Result<ScalarField2D> {
    if !(m >= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "decay exponent must be at least 2, got {m}"
        )));
    }
    let n = grid.n();
    let half = (n / 2) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = (2 * RANDOM_K_MAX + 1) as usize;
    let mut z = vec![Complex64::default(); side * side];
    for v in z.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v = Complex64::new(re, im);
    }
    let at = |k1: i64, k2: i64| z[((k1 + RANDOM_K_MAX) as usize) * side + (k2 + RANDOM_K_MAX) as usize];
    let mut c = vec![Complex64::default(); n * n];
    for k1 in -RANDOM_K_MAX..=RANDOM_K_MAX {
        for k2 in -RANDOM_K_MAX..=RANDOM_K_MAX {
            // strictly inside the Nyquist box so the field is real on the grid
            if k1.abs() >= half || k2.abs() >= half || (k1, k2) == (0, 0) {
                continue;
            }
            let sym = (at(k1, k2) + at(-k1, -k2).conj()) * std::f64::consts::FRAC_1_SQRT_2;
            let damp = (1.0 + (k1 * k1 + k2 * k2) as f64).powf(-0.5 * m);
            let idx = (k1.rem_euclid(n as i64) as usize) * n + k2.rem_euclid(n as i64) as usize;
            c[idx] = sym * damp;
        }
    }
    let f = ScalarField2D::from_spectral(grid, c);
    let sup = f.max_abs();
    Ok(f.scaled(1.0 / sup))
}
