//! The Euler–Riesz model `d_t omega + u.grad omega = beta^2 omega +
//! (alpha^2 + beta^2) R omega` and the frozen-field forcing it comes from.

use rustfft::num_complex::Complex64;

use super::{zero_mean, FieldState, Params};
use crate::integrators::Dynamics;
use crate::spectral::{Axis, FourierGrid, ScalarField2D, VectorField2D};

/// Dealiased `u . grad omega` with `u` from Biot–Savart.
pub(crate) fn advection(g: &FourierGrid, omega: &[Complex64]) -> Vec<Complex64> {
    let w = g.truncated(omega);
    let (u1, u2) = g.spec_biot_savart(&w);
    let (pu1, pu2) = g.inverse_real_pair(&u1, &u2);
    advection_with(g, &w, &pu1, &pu2)
}

/// Same as [`advection`] with the velocity already sampled on the grid.
pub(crate) fn advection_with(g: &FourierGrid, w: &[Complex64], pu1: &[f64], pu2: &[f64]) -> Vec<Complex64> {
    let (pw1, pw2) = g.inverse_real_pair(&g.spec_derivative(w, Axis::X1), &g.spec_derivative(w, Axis::X2));
    let adv: Vec<f64> = (0..g.len()).map(|i| pu1[i] * pw1[i] + pu2[i] * pw2[i]).collect();
    g.truncated(&g.forward_real(&adv))
}

pub fn rhs_euler_riesz(omega: &ScalarField2D, params: &Params) -> ScalarField2D {
    let g = omega.grid();
    let w = g.truncated(&omega.spectral());
    let adv = advection(g, &w);
    let r = g.spec_riesz(&w);
    let b2 = params.beta * params.beta;
    let s = params.alpha * params.alpha + b2;
    let d: Vec<Complex64> = (0..g.len()).map(|i| w[i] * b2 + r[i] * s - adv[i]).collect();
    ScalarField2D::from_spectral(g, zero_mean(d))
}

/// Literal `curl((u x B0) x B0)` for `B0 = (alpha, beta, 0)`, which equals
/// `(B0.grad) (beta u1 - alpha u2)`.
pub fn toy_model_forcing(omega: &ScalarField2D, params: &Params) -> ScalarField2D {
    let u = crate::spectral::biot_savart(omega);
    let s = u.x1.scaled(params.beta).axpy(-params.alpha, &u.x2);
    crate::spectral::derivative(&s, Axis::X1)
        .scaled(params.alpha)
        .axpy(params.beta, &crate::spectral::derivative(&s, Axis::X2))
}

/// Single-field state for the Euler–Riesz model.
#[derive(Clone, Debug)]
pub struct EulerRieszState {
    pub omega: ScalarField2D,
}

impl FieldState for EulerRieszState {
    fn fields(&self) -> Vec<&ScalarField2D> {
        vec![&self.omega]
    }

    fn from_fields(fields: Vec<ScalarField2D>) -> Self {
        Self {
            omega: fields.into_iter().next().unwrap(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EulerRiesz {
    pub params: Params,
}

impl EulerRiesz {
    pub fn new(params: Params) -> Self {
        Self { params }
    }
}

impl Dynamics for EulerRiesz {
    type State = EulerRieszState;

    fn rhs(&self, s: &Self::State) -> Self::State {
        EulerRieszState {
            omega: rhs_euler_riesz(&s.omega, &self.params),
        }
    }

    fn vorticity<'a>(&self, s: &'a Self::State) -> &'a ScalarField2D {
        &s.omega
    }

    fn velocity(&self, s: &Self::State) -> VectorField2D {
        crate::spectral::biot_savart(&s.omega)
    }

    fn explicit_rate(&self) -> f64 {
        let b2 = self.params.beta * self.params.beta;
        self.params.alpha * self.params.alpha + 2.0 * b2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{rhs_perturbation, PerturbationState};
    use crate::spectral::{dealias, riesz, FourierGrid};

    #[test]
    fn single_mode_and_zero() {
        let g = FourierGrid::new(32).unwrap();
        let w = ScalarField2D::from_fn(&g, |x, _| (5.0 * x).cos());
        // a single mode is a steady Euler flow, so only R omega = -omega remains
        let d = rhs_euler_riesz(&w, &Params::default());
        assert!(d.max_abs_diff(&w.scaled(-1.0)) < 1e-13);
        assert_eq!(
            rhs_euler_riesz(&ScalarField2D::zeros(&g), &Params::default()).max_abs(),
            0.0
        );
    }

    #[test]
    fn horizontal_background_matches_frozen_field_forcing() {
        let g = FourierGrid::new(32).unwrap();
        let w = dealias(&ScalarField2D::from_fn(&g, |x, y| {
            (x + 2.0 * y).sin() - (3.0 * x).cos() * y.sin()
        }));
        let p = Params {
            alpha: 1.3,
            ..Params::default()
        };
        let f = toy_model_forcing(&w, &p);
        assert!(f.max_abs_diff(&riesz(&w).scaled(1.69)) < 1e-12);
    }

    #[test]
    fn vertical_background_differs_from_printed_model() {
        // With B0 = (0, 1, 0) the frozen-field curl is d2^2 (-Delta)^{-1} omega
        // = -omega - R omega, not omega + R omega.
        let g = FourierGrid::new(32).unwrap();
        let w = ScalarField2D::from_fn(&g, |x, y| (x + 2.0 * y).sin());
        let p = Params {
            alpha: 0.0,
            beta: 1.0,
            ..Params::default()
        };
        let f = toy_model_forcing(&w, &p);
        let expect = w.add(&riesz(&w)).scaled(-1.0);
        assert!(f.max_abs_diff(&expect) < 1e-13);
        let printed = w.add(&riesz(&w));
        assert!(f.max_abs_diff(&printed) > 0.5);
    }

    #[test]
    fn perturbation_without_field_reduces_to_euler_riesz() {
        let g = FourierGrid::new(32).unwrap();
        let w = dealias(&ScalarField2D::from_fn(&g, |x, y| {
            (x - y).cos() * (2.0 * y).sin() + (3.0 * x).cos()
        }));
        let s = PerturbationState::new(w.clone(), ScalarField2D::zeros(&g), ScalarField2D::zeros(&g));
        let d = rhs_perturbation(&s, &Params::default());
        let er = rhs_euler_riesz(&w, &Params::default());
        assert_eq!(d.omega.physical(), er.physical());
    }
}
