//! Vorticity form of the Euler–Maxwell system linearised around the
//! horizontal background `B0 = alpha e1`, with `b = grad^perp a` and a
//! scalar out-of-plane electric field `E`:
//!
//! ```text
//! d_t omega + u.grad omega = b.grad(j_b - alpha u2) + alpha d1 j_b + alpha^2 R omega
//! d_t E = c Delta a - c^2 E + c (alpha u2 - u^perp.b)
//! d_t a = c E,        j_b = c E + u^perp.b
//! ```

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::{l2_sq, zero_mean, FieldState, Params};
use crate::integrators::{Dynamics, ExponentialCache, MaxwellModeExponential};
use crate::spectral::{Axis, FourierGrid, ScalarField2D, VectorField2D};

/// `(omega, E, a)`, all mean-free.
#[derive(Clone, Debug)]
pub struct PerturbationState {
    pub omega: ScalarField2D,
    pub e: ScalarField2D,
    pub a: ScalarField2D,
}

impl PerturbationState {
    pub fn new(omega: ScalarField2D, e: ScalarField2D, a: ScalarField2D) -> Self {
        Self { omega, e, a }
    }

    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        Self::new(
            ScalarField2D::zeros(grid),
            ScalarField2D::zeros(grid),
            ScalarField2D::zeros(grid),
        )
    }

    pub fn velocity(&self) -> VectorField2D {
        crate::spectral::biot_savart(&self.omega)
    }

    pub fn magnetic(&self) -> VectorField2D {
        crate::spectral::perp_gradient(&self.a)
    }

    /// `|(u, E, b)|_{L^2}`.
    pub fn energy_l2(&self) -> f64 {
        let g = self.omega.grid();
        let (u1, u2) = g.spec_biot_savart(&self.omega.spectral());
        let (b1, b2) = g.spec_perp_gradient(&self.a.spectral());
        (l2_sq(&u1) + l2_sq(&u2) + l2_sq(&self.e.spectral()) + l2_sq(&b1) + l2_sq(&b2)).sqrt()
    }
}

impl FieldState for PerturbationState {
    fn fields(&self) -> Vec<&ScalarField2D> {
        vec![&self.omega, &self.e, &self.a]
    }

    fn from_fields(fields: Vec<ScalarField2D>) -> Self {
        let mut it = fields.into_iter();
        let (omega, e, a) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        Self { omega, e, a }
    }
}

/// Every spectral quantity one right-hand-side evaluation produces.
pub(crate) struct Terms {
    pub u2: Vec<Complex64>,
    /// dealiased `u^perp . b`
    pub ub: Vec<Complex64>,
    pub j_b: Vec<Complex64>,
    /// dealiased `u . grad omega`
    pub advection: Vec<Complex64>,
    /// dealiased `b . grad(j_b - alpha u2)`
    pub b_grad_phi: Vec<Complex64>,
}

pub(crate) fn terms(s: &PerturbationState, p: &Params) -> Terms {
    let g = s.omega.grid();
    let omega = g.truncated(&s.omega.spectral());
    let a = g.truncated(&s.a.spectral());
    let e = g.truncated(&s.e.spectral());

    let (u1, u2) = g.spec_biot_savart(&omega);
    let (b1, b2) = g.spec_perp_gradient(&a);
    let (pu1, pu2) = g.inverse_real_pair(&u1, &u2);
    let (pb1, pb2) = g.inverse_real_pair(&b1, &b2);
    // shared with the Euler-Riesz model so both reduce to the same numbers
    let advection = super::euler_riesz::advection_with(g, &omega, &pu1, &pu2);

    let n2 = g.len();
    let ub_phys: Vec<f64> = (0..n2).map(|i| pu1[i] * pb2[i] - pu2[i] * pb1[i]).collect();
    let ub = g.truncated(&g.forward_real(&ub_phys));

    let j_b: Vec<Complex64> = e.iter().zip(&ub).map(|(e, x)| e * p.c + x).collect();
    let phi: Vec<Complex64> = j_b.iter().zip(&u2).map(|(j, v)| j - v * p.alpha).collect();
    let (pp1, pp2) = g.inverse_real_pair(&g.spec_derivative(&phi, Axis::X1), &g.spec_derivative(&phi, Axis::X2));
    let bgp: Vec<f64> = (0..n2).map(|i| pb1[i] * pp1[i] + pb2[i] * pp2[i]).collect();
    let mut b_grad_phi = g.forward_real(&bgp);
    g.truncate(&mut b_grad_phi);

    Terms {
        u2,
        ub,
        j_b,
        advection,
        b_grad_phi,
    }
}

/// Ohm's law `j_b = c E + u^perp . b`.
pub fn ohm_current(state: &PerturbationState, params: &Params) -> ScalarField2D {
    ScalarField2D::from_spectral(state.omega.grid(), terms(state, params).j_b)
}

/// Forcing of the Ampère equation, `F = alpha u2 - u^perp . b`, mean
/// removed as in the `E` equation.
pub fn ampere_forcing(state: &PerturbationState, params: &Params) -> ScalarField2D {
    let t = terms(state, params);
    let f: Vec<Complex64> = t.u2.iter().zip(&t.ub).map(|(v, x)| v * params.alpha - x).collect();
    ScalarField2D::from_spectral(state.omega.grid(), zero_mean(f))
}

/// Curl of the Lorentz force split as `alpha^2 R omega` plus the remainder
/// `b.grad(j_b - alpha u2) + alpha d1 j_b`.
pub fn lorentz_split(state: &PerturbationState, params: &Params) -> (ScalarField2D, ScalarField2D) {
    let g = state.omega.grid();
    let t = terms(state, params);
    (
        ScalarField2D::from_spectral(g, riesz_part(g, state, params)),
        ScalarField2D::from_spectral(g, remainder(g, &t, params)),
    )
}

fn riesz_part(g: &FourierGrid, s: &PerturbationState, p: &Params) -> Vec<Complex64> {
    let a2 = p.alpha * p.alpha;
    g.spec_riesz(&g.truncated(&s.omega.spectral()))
        .into_iter()
        .map(|z| z * a2)
        .collect()
}

fn remainder(g: &FourierGrid, t: &Terms, p: &Params) -> Vec<Complex64> {
    let d1j = g.spec_derivative(&t.j_b, Axis::X1);
    t.b_grad_phi.iter().zip(&d1j).map(|(x, y)| x + y * p.alpha).collect()
}

/// Time derivative `(d omega, d E, d a)`; all three are returned mean-free
/// and truncated to the dealiasing mask.
pub fn rhs_perturbation(state: &PerturbationState, params: &Params) -> PerturbationState {
    let g = state.omega.grid();
    let t = terms(state, params);
    let c = params.c;
    let rp = riesz_part(g, state, params);
    let rem = remainder(g, &t, params);
    let d_omega: Vec<Complex64> = (0..g.len()).map(|i| rp[i] + rem[i] - t.advection[i]).collect();

    let e = g.truncated(&state.e.spectral());
    let lap_a = g.spec_laplacian(&g.truncated(&state.a.spectral()));
    let d_e: Vec<Complex64> = (0..g.len())
        .map(|i| lap_a[i] * c - e[i] * (c * c) + (t.u2[i] * params.alpha - t.ub[i]) * c)
        .collect();
    let d_a: Vec<Complex64> = e.iter().map(|z| z * c).collect();

    PerturbationState {
        omega: ScalarField2D::from_spectral(g, zero_mean(d_omega)),
        e: ScalarField2D::from_spectral(g, zero_mean(d_e)),
        a: ScalarField2D::from_spectral(g, zero_mean(d_a)),
    }
}

/// Nonlinear part only: everything in [`rhs_perturbation`] except the
/// Maxwell block `(c Delta a - c^2 E, c E)`.
fn nonlinear_perturbation(state: &PerturbationState, params: &Params) -> PerturbationState {
    let g = state.omega.grid();
    let t = terms(state, params);
    let rp = riesz_part(g, state, params);
    let rem = remainder(g, &t, params);
    let d_omega: Vec<Complex64> = (0..g.len()).map(|i| rp[i] + rem[i] - t.advection[i]).collect();
    let d_e: Vec<Complex64> = (0..g.len())
        .map(|i| (t.u2[i] * params.alpha - t.ub[i]) * params.c)
        .collect();
    PerturbationState {
        omega: ScalarField2D::from_spectral(g, zero_mean(d_omega)),
        e: ScalarField2D::from_spectral(g, zero_mean(d_e)),
        a: ScalarField2D::zeros(g).to_spectral(),
    }
}

/// The perturbation system as a [`Dynamics`]; the `(E, a)` Maxwell block is
/// integrated exactly mode by mode.
#[derive(Debug)]
pub struct Perturbation {
    pub params: Params,
    cache: ExponentialCache,
}

impl Perturbation {
    pub fn new(params: Params) -> Self {
        Self {
            params,
            cache: ExponentialCache::default(),
        }
    }
}

impl Dynamics for Perturbation {
    type State = PerturbationState;

    fn rhs(&self, s: &Self::State) -> Self::State {
        rhs_perturbation(s, &self.params)
    }

    fn nonlinear(&self, s: &Self::State) -> Self::State {
        nonlinear_perturbation(s, &self.params)
    }

    fn propagate(&self, s: &Self::State, h: f64) -> Self::State {
        let g = s.omega.grid();
        let c = self.params.c;
        let table = self.cache.get(g, h, || MaxwellModeExponential::build(g, c, c * c, h));
        let (e, a) = table.apply(&s.e.spectral(), &s.a.spectral());
        PerturbationState {
            omega: s.omega.to_spectral(),
            e: ScalarField2D::from_spectral(g, e),
            a: ScalarField2D::from_spectral(g, a),
        }
    }

    fn has_linear_block(&self) -> bool {
        true
    }

    fn vorticity<'a>(&self, s: &'a Self::State) -> &'a ScalarField2D {
        &s.omega
    }

    fn velocity(&self, s: &Self::State) -> VectorField2D {
        s.velocity()
    }

    fn explicit_rate(&self) -> f64 {
        let a = self.params.alpha.abs();
        a * a + a * self.params.c
    }

    fn stiff_rates(&self) -> (f64, f64) {
        (self.params.c, self.params.c * self.params.c)
    }
}
