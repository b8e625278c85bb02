//! Right-hand sides of the three dynamical systems, plus a primitive-variable
//! reference solver used to cross-check them.

mod euler_riesz;
mod normal;
mod perturbation;
mod primitive;

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use euler_riesz::{rhs_euler_riesz, toy_model_forcing, EulerRiesz, EulerRieszState};
pub use normal::{normal_current, normal_forcing, normal_lorentz_curl, rhs_normal, Normal, NormalState};
pub use perturbation::{ampere_forcing, lorentz_split, ohm_current, rhs_perturbation, Perturbation, PerturbationState};
pub use primitive::{rhs_primitive, Primitive, PrimitiveState};

use crate::error::{Error, Result};
use crate::spectral::{FourierGrid, ScalarField2D};

/// Physical constants and background field `B0 = (alpha, beta, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "one")]
    pub sigma: f64,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Params {
    fn default() -> Self {
        Self {
            c: 1.0,
            sigma: 1.0,
            alpha: 1.0,
            beta: 0.0,
        }
    }
}

impl Params {
    pub fn with_c(c: f64) -> Self {
        Self { c, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "speed of light must be positive, got {}",
                self.c
            )));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "conductivity must be positive, got {}",
                self.sigma
            )));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter("background components must be finite".into()));
        }
        Ok(())
    }

    /// The perturbation model is derived for `sigma = 1` and a horizontal
    /// background.
    pub fn validate_perturbation(&self) -> Result<()> {
        self.validate()?;
        if self.sigma != 1.0 {
            return Err(Error::InvalidParameter(format!(
                "the perturbation model fixes sigma = 1, got {}",
                self.sigma
            )));
        }
        if self.beta != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "the perturbation model needs a horizontal background (beta = 0), got beta = {}",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn validate_euler_riesz(&self) -> Result<()> {
        self.validate()?;
        if self.alpha == 0.0 && self.beta == 0.0 {
            return Err(Error::InvalidParameter(
                "Euler-Riesz needs (alpha, beta) != (0, 0)".into(),
            ));
        }
        Ok(())
    }
}

/// A state made of scalar fields on one grid; lets the integrators form
/// linear combinations without knowing the model.
pub trait FieldState: Clone + Send + Sync {
    fn fields(&self) -> Vec<&ScalarField2D>;
    fn from_fields(fields: Vec<ScalarField2D>) -> Self;

    fn grid(&self) -> &Arc<FourierGrid> {
        self.fields()[0].grid()
    }

    /// `sum_i w_i s_i`, computed in spectral space.
    fn combine(terms: &[(f64, &Self)]) -> Self {
        let grid = Arc::clone(terms[0].1.grid());
        let count = terms[0].1.fields().len();
        let fields = (0..count)
            .map(|k| {
                let mut acc = vec![Complex64::default(); grid.len()];
                for (w, s) in terms {
                    let spec = s.fields()[k].spectral();
                    for (a, b) in acc.iter_mut().zip(spec.iter()) {
                        *a += b * *w;
                    }
                }
                ScalarField2D::from_spectral(&grid, acc)
            })
            .collect();
        Self::from_fields(fields)
    }

    /// Applies `f` to every component.
    fn map_fields(&self, f: impl Fn(&ScalarField2D) -> ScalarField2D) -> Self {
        Self::from_fields(self.fields().into_iter().map(f).collect())
    }

    /// Truncation of every component to the dealiasing mask.
    fn dealiased(&self) -> Self {
        self.map_fields(crate::spectral::dealias)
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields())
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// `(2 pi)^2 sum |c_k|^2`, the squared `L^2` norm of a spectrum.
pub(crate) fn l2_sq(c: &[Complex64]) -> f64 {
    let sq: Vec<f64> = c.iter().map(|z| z.norm_sqr()).collect();
    4.0 * std::f64::consts::PI * std::f64::consts::PI * crate::spectral::pairwise_sum(&sq)
}

/// `int f g` over the torus from spectra.
#[cfg(test)]
pub(crate) fn l2_inner(f: &[Complex64], g: &[Complex64]) -> f64 {
    let p: Vec<f64> = f.iter().zip(g).map(|(a, b)| (a * b.conj()).re).collect();
    4.0 * std::f64::consts::PI * std::f64::consts::PI * crate::spectral::pairwise_sum(&p)
}

/// Drops the mean mode.
pub(crate) fn zero_mean(mut c: Vec<Complex64>) -> Vec<Complex64> {
    c[0] = Complex64::default();
    c
}
