//! Euler–Maxwell with in-plane electric field `E = (E1, E2, 0)` and
//! out-of-plane magnetic field `B = (0, 0, b3)`:
//!
//! ```text
//! j = sigma (c E + (u2 b3, -u1 b3))
//! d_t omega + u.grad omega = -div(j b3)
//! d_t E1 = c (d2 b3 - j1),  d_t E2 = c (-d1 b3 - j2)
//! d_t b3 = -c (d1 E2 - d2 E1)
//! ```
//!
//! No term can create an in-plane magnetic or out-of-plane electric field,
//! so the structure is preserved by construction.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::{l2_sq, zero_mean, FieldState, Params};
use crate::integrators::{Dynamics, ExponentialCache, MaxwellModeExponential};
use crate::spectral::{Axis, FourierGrid, ScalarField2D, VectorField2D};

#[derive(Clone, Debug)]
pub struct NormalState {
    pub omega: ScalarField2D,
    pub e1: ScalarField2D,
    pub e2: ScalarField2D,
    pub b3: ScalarField2D,
}

impl NormalState {
    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        let z = ScalarField2D::zeros(grid);
        Self {
            omega: z.clone(),
            e1: z.clone(),
            e2: z.clone(),
            b3: z,
        }
    }

    pub fn velocity(&self) -> VectorField2D {
        crate::spectral::biot_savart(&self.omega)
    }

    /// `|(u, E, b3)|_{L^2}`.
    pub fn energy_l2(&self) -> f64 {
        let g = self.omega.grid();
        let (u1, u2) = g.spec_biot_savart(&self.omega.spectral());
        (l2_sq(&u1) + l2_sq(&u2) + l2_sq(&self.e1.spectral()) + l2_sq(&self.e2.spectral()) + l2_sq(&self.b3.spectral()))
            .sqrt()
    }
}

impl FieldState for NormalState {
    fn fields(&self) -> Vec<&ScalarField2D> {
        vec![&self.omega, &self.e1, &self.e2, &self.b3]
    }

    fn from_fields(fields: Vec<ScalarField2D>) -> Self {
        let mut it = fields.into_iter();
        Self {
            omega: it.next().unwrap(),
            e1: it.next().unwrap(),
            e2: it.next().unwrap(),
            b3: it.next().unwrap(),
        }
    }
}

struct Terms {
    j1: Vec<Complex64>,
    j2: Vec<Complex64>,
    /// dealiased `div(j b3)`
    div_jb: Vec<Complex64>,
    advection: Vec<Complex64>,
    /// dealiased `u x B` in-plane components, without `sigma`
    ub1: Vec<Complex64>,
    ub2: Vec<Complex64>,
}

fn terms(s: &NormalState, p: &Params) -> Terms {
    let g = s.omega.grid();
    let w = g.truncated(&s.omega.spectral());
    let e1 = g.truncated(&s.e1.spectral());
    let e2 = g.truncated(&s.e2.spectral());
    let b3 = g.truncated(&s.b3.spectral());

    let (u1, u2) = g.spec_biot_savart(&w);
    let (pu1, pu2) = g.inverse_real_pair(&u1, &u2);
    let advection = super::euler_riesz::advection_with(g, &w, &pu1, &pu2);
    let pb = g.inverse_real(&b3);
    let n2 = g.len();
    let a: Vec<f64> = (0..n2).map(|i| pu2[i] * pb[i]).collect();
    let b: Vec<f64> = (0..n2).map(|i| -pu1[i] * pb[i]).collect();
    let (mut ub1, mut ub2) = g.forward_real_pair(&a, &b);
    g.truncate(&mut ub1);
    g.truncate(&mut ub2);

    let j1: Vec<Complex64> = (0..n2).map(|i| (e1[i] * p.c + ub1[i]) * p.sigma).collect();
    let j2: Vec<Complex64> = (0..n2).map(|i| (e2[i] * p.c + ub2[i]) * p.sigma).collect();
    let (pj1, pj2) = g.inverse_real_pair(&j1, &j2);
    let f1: Vec<f64> = (0..n2).map(|i| pj1[i] * pb[i]).collect();
    let f2: Vec<f64> = (0..n2).map(|i| pj2[i] * pb[i]).collect();
    let (mut jb1, mut jb2) = g.forward_real_pair(&f1, &f2);
    g.truncate(&mut jb1);
    g.truncate(&mut jb2);
    let d1 = g.spec_derivative(&jb1, Axis::X1);
    let d2 = g.spec_derivative(&jb2, Axis::X2);
    let div_jb = d1.iter().zip(&d2).map(|(x, y)| x + y).collect();

    Terms {
        j1,
        j2,
        div_jb,
        advection,
        ub1,
        ub2,
    }
}

/// Ohm's law `j = sigma (c E + u x B)`, in-plane components.
pub fn normal_current(state: &NormalState, params: &Params) -> (ScalarField2D, ScalarField2D) {
    let g = state.omega.grid();
    let t = terms(state, params);
    (
        ScalarField2D::from_spectral(g, t.j1),
        ScalarField2D::from_spectral(g, t.j2),
    )
}

/// Curl of the Lorentz force, `-div(j b3)`.
pub fn normal_lorentz_curl(state: &NormalState, params: &Params) -> ScalarField2D {
    let t = terms(state, params);
    let d: Vec<Complex64> = t.div_jb.iter().map(|z| -z).collect();
    ScalarField2D::from_spectral(state.omega.grid(), zero_mean(d))
}

/// Forcing of the Ampère equation written as `(1/c) d_t E - curl b3 + c sigma E
/// = F`, i.e. `F = -sigma (u x B)`.
pub fn normal_forcing(state: &NormalState, params: &Params) -> (ScalarField2D, ScalarField2D) {
    let g = state.omega.grid();
    let t = terms(state, params);
    let s = -params.sigma;
    (
        ScalarField2D::from_spectral(g, t.ub1.iter().map(|z| z * s).collect()),
        ScalarField2D::from_spectral(g, t.ub2.iter().map(|z| z * s).collect()),
    )
}

pub fn rhs_normal(state: &NormalState, params: &Params) -> NormalState {
    let g = state.omega.grid();
    let t = terms(state, params);
    let c = params.c;
    let b3 = g.truncated(&state.b3.spectral());
    let e1 = g.truncated(&state.e1.spectral());
    let e2 = g.truncated(&state.e2.spectral());
    let d1b = g.spec_derivative(&b3, Axis::X1);
    let d2b = g.spec_derivative(&b3, Axis::X2);
    let d1e2 = g.spec_derivative(&e2, Axis::X1);
    let d2e1 = g.spec_derivative(&e1, Axis::X2);
    let n2 = g.len();
    let d_omega: Vec<Complex64> = (0..n2).map(|i| -t.advection[i] - t.div_jb[i]).collect();
    NormalState {
        omega: ScalarField2D::from_spectral(g, zero_mean(d_omega)),
        e1: ScalarField2D::from_spectral(g, (0..n2).map(|i| (d2b[i] - t.j1[i]) * c).collect()),
        e2: ScalarField2D::from_spectral(g, (0..n2).map(|i| (-d1b[i] - t.j2[i]) * c).collect()),
        b3: ScalarField2D::from_spectral(g, (0..n2).map(|i| (d2e1[i] - d1e2[i]) * c).collect()),
    }
}

fn nonlinear_normal(state: &NormalState, params: &Params) -> NormalState {
    let g = state.omega.grid();
    let t = terms(state, params);
    let n2 = g.len();
    let k = -params.c * params.sigma;
    let d_omega: Vec<Complex64> = (0..n2).map(|i| -t.advection[i] - t.div_jb[i]).collect();
    NormalState {
        omega: ScalarField2D::from_spectral(g, zero_mean(d_omega)),
        e1: ScalarField2D::from_spectral(g, t.ub1.iter().map(|z| z * k).collect()),
        e2: ScalarField2D::from_spectral(g, t.ub2.iter().map(|z| z * k).collect()),
        b3: ScalarField2D::zeros(g).to_spectral(),
    }
}

/// The normal-structure system; the linear Maxwell block (curl coupling and
/// the `c^2 sigma` damping of `E`) is integrated exactly.
#[derive(Debug)]
pub struct Normal {
    pub params: Params,
    cache: ExponentialCache,
}

impl Normal {
    pub fn new(params: Params) -> Self {
        Self {
            params,
            cache: ExponentialCache::default(),
        }
    }
}

impl Dynamics for Normal {
    type State = NormalState;

    fn rhs(&self, s: &Self::State) -> Self::State {
        rhs_normal(s, &self.params)
    }

    fn nonlinear(&self, s: &Self::State) -> Self::State {
        nonlinear_normal(s, &self.params)
    }

    fn propagate(&self, s: &Self::State, h: f64) -> Self::State {
        let g = s.omega.grid();
        let c = self.params.c;
        let gamma = c * c * self.params.sigma;
        let table = self.cache.get(g, h, || MaxwellModeExponential::build(g, c, gamma, h));
        let (e1, e2, b3) = table.apply_transverse(&s.e1.spectral(), &s.e2.spectral(), &s.b3.spectral());
        NormalState {
            omega: s.omega.to_spectral(),
            e1: ScalarField2D::from_spectral(g, e1),
            e2: ScalarField2D::from_spectral(g, e2),
            b3: ScalarField2D::from_spectral(g, b3),
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
        0.0
    }

    fn stiff_rates(&self) -> (f64, f64) {
        (self.params.c, self.params.c * self.params.c * self.params.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::l2_inner;
    use crate::spectral::dealias;

    #[test]
    fn no_field_is_pure_euler() {
        let g = FourierGrid::new(32).unwrap();
        let w = dealias(&ScalarField2D::from_fn(&g, |x, y| (x + y).sin() * (2.0 * x).cos()));
        let s = NormalState {
            omega: w.clone(),
            ..NormalState::zeros(&g)
        };
        let d = rhs_normal(&s, &Params::default());
        let adv = crate::spectral::dealiased_advection(&s.velocity(), &w);
        assert!(d.omega.max_abs_diff(&adv.scaled(-1.0)) < 1e-13);
        assert!(d.e1.max_abs() + d.e2.max_abs() + d.b3.max_abs() < 1e-14);
    }

    #[test]
    fn constant_field_is_steady() {
        let g = FourierGrid::new(32).unwrap();
        let s = NormalState {
            b3: ScalarField2D::from_fn(&g, |_, _| 0.7),
            ..NormalState::zeros(&g)
        };
        let d = rhs_normal(&s, &Params::with_c(2.0));
        assert!(d.fields().iter().all(|f| f.max_abs() < 1e-15));
    }

    #[test]
    fn energy_balance_on_random_state() {
        let g = FourierGrid::new(32).unwrap();
        let f = |a: f64, b: f64, k: f64| {
            dealias(&ScalarField2D::from_fn(&g, move |x, y| {
                (a * x + b * y + k).sin() + 0.3 * (k * x).cos() * (b * y).sin()
            }))
        };
        let s = NormalState {
            omega: f(1.0, 2.0, 3.0).without_mean(),
            e1: f(2.0, 1.0, 1.0),
            e2: f(-1.0, 3.0, 2.0),
            b3: f(3.0, -2.0, 4.0),
        };
        let p = Params {
            c: 1.3,
            sigma: 0.7,
            ..Params::default()
        };
        let d = rhs_normal(&s, &p);
        let gg = s.omega.grid();
        // d/dt 1/2 |u|^2 = - int psi d_t omega
        let psi = gg.spec_inverse_laplacian(&s.omega.spectral());
        let du = -l2_inner(&psi, &d.omega.spectral());
        let de = l2_inner(&s.e1.spectral(), &d.e1.spectral()) + l2_inner(&s.e2.spectral(), &d.e2.spectral());
        let db = l2_inner(&s.b3.spectral(), &d.b3.spectral());
        let (j1, j2) = normal_current(&s, &p);
        let diss = (l2_inner(&j1.spectral(), &j1.spectral()) + l2_inner(&j2.spectral(), &j2.spectral())) / p.sigma;
        let lhs = du + de + db;
        assert!((lhs + diss).abs() < 1e-10 * diss, "{lhs} {diss}");
    }
}
