//! Time stepping: classical RK4 and an integrating-factor RK4 (Lawson) that
//! treats the stiff Maxwell block exactly per Fourier mode.

mod exponential;

use serde::{Deserialize, Serialize};

pub use exponential::{mode_exponential, ExponentialCache, MaxwellModeExponential};

use crate::error::{Error, Result};
use crate::models::FieldState;
use crate::spectral::{ScalarField2D, VectorField2D};

/// A semi-discrete system `dU/dt = L U + N(U)` with an optional stiff linear
/// block `L` that can be exponentiated exactly.
pub trait Dynamics: Sync {
    type State: FieldState;

    /// Full right-hand side `L U + N(U)`.
    fn rhs(&self, s: &Self::State) -> Self::State;

    /// `N(U)`; equal to [`Dynamics::rhs`] when there is no linear block.
    fn nonlinear(&self, s: &Self::State) -> Self::State {
        self.rhs(s)
    }

    /// `exp(h L) U`.
    fn propagate(&self, s: &Self::State, _h: f64) -> Self::State {
        s.clone()
    }

    fn has_linear_block(&self) -> bool {
        false
    }

    fn vorticity<'a>(&self, s: &'a Self::State) -> &'a ScalarField2D;

    fn velocity(&self, s: &Self::State) -> VectorField2D;

    /// Size of the explicitly treated linear coupling, `0` if none.
    fn explicit_rate(&self) -> f64;

    /// `(wave speed, damping rate)` of the stiff block.
    fn stiff_rates(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Rk4,
    Ifrk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DtMode {
    /// Every step is `t_end / ceil(t_end / dt)`.
    Fixed,
    /// Every step is `stable_dt`, clipped to land on `t_end`.
    Cfl,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperConfig {
    #[serde(default = "defaults::scheme")]
    pub scheme: Scheme,
    /// Fixed step, or the cap on the adaptive step.
    #[serde(default = "defaults::dt")]
    pub dt: f64,
    #[serde(default = "defaults::cfl")]
    pub cfl: f64,
    #[serde(default = "defaults::t_end")]
    pub t_end: f64,
    /// Record a sample every `stride` steps.
    #[serde(default = "defaults::stride")]
    pub stride: usize,
    #[serde(default = "defaults::dt_mode")]
    pub dt_mode: DtMode,
    /// Abort once `|omega|_inf` exceeds this.
    #[serde(default = "defaults::guard")]
    pub blowup_guard: f64,
}

pub(crate) mod defaults {
    use super::{DtMode, Scheme};

    pub fn scheme() -> Scheme {
        Scheme::Ifrk4
    }
    pub fn dt() -> f64 {
        0.01
    }
    pub fn cfl() -> f64 {
        0.5
    }
    pub fn t_end() -> f64 {
        0.5
    }
    pub fn stride() -> usize {
        1
    }
    pub fn dt_mode() -> DtMode {
        DtMode::Fixed
    }
    pub fn guard() -> f64 {
        1e6
    }
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            scheme: defaults::scheme(),
            dt: defaults::dt(),
            cfl: defaults::cfl(),
            t_end: defaults::t_end(),
            stride: defaults::stride(),
            dt_mode: defaults::dt_mode(),
            blowup_guard: defaults::guard(),
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be non-negative, got {}", self.t_end));
        }
        if self.stride == 0 {
            return bad("stride must be at least 1".into());
        }
        if !(self.blowup_guard > 0.0) {
            return bad(format!("blow-up guard must be positive, got {}", self.blowup_guard));
        }
        Ok(())
    }
}

/// One classical RK4 step on the full right-hand side.
pub fn rk4_step<D: Dynamics>(d: &D, u: &D::State, h: f64) -> D::State {
    let k1 = d.rhs(u);
    let k2 = d.rhs(&D::State::combine(&[(1.0, u), (0.5 * h, &k1)]));
    let k3 = d.rhs(&D::State::combine(&[(1.0, u), (0.5 * h, &k2)]));
    let k4 = d.rhs(&D::State::combine(&[(1.0, u), (h, &k3)]));
    D::State::combine(&[(1.0, u), (h / 6.0, &k1), (h / 3.0, &k2), (h / 3.0, &k3), (h / 6.0, &k4)])
}

/// One Lawson (integrating-factor) RK4 step: classical RK4 on
/// `V = exp(-tL) U`, written back in `U`.
pub fn ifrk4_step<D: Dynamics>(d: &D, u: &D::State, h: f64) -> D::State {
    if !d.has_linear_block() {
        return rk4_step(d, u, h);
    }
    let half = 0.5 * h;
    let eu_half = d.propagate(u, half);
    let eu = d.propagate(u, h);

    let k1 = d.nonlinear(u);
    let k2 = d.nonlinear(&d.propagate(&D::State::combine(&[(1.0, u), (half, &k1)]), half));
    let k3 = d.nonlinear(&D::State::combine(&[(1.0, &eu_half), (half, &k2)]));
    let ek3 = d.propagate(&k3, half);
    let k4 = d.nonlinear(&D::State::combine(&[(1.0, &eu), (h, &ek3)]));

    let ek1 = d.propagate(&k1, h);
    let k23 = D::State::combine(&[(1.0, &k2), (1.0, &k3)]);
    let ek23 = d.propagate(&k23, half);
    D::State::combine(&[(1.0, &eu), (h / 6.0, &ek1), (h / 3.0, &ek23), (h / 6.0, &k4)])
}

pub fn step<D: Dynamics>(d: &D, u: &D::State, scheme: Scheme, h: f64) -> D::State {
    match scheme {
        Scheme::Rk4 => rk4_step(d, u, h),
        Scheme::Ifrk4 => ifrk4_step(d, u, h),
    }
}

/// Largest step the scheme tolerates for this state:
/// `cfl * min(h/|u|_inf, dt, 2.8/explicit rate [, 2.8/(c k_max), 2.8/gamma])`,
/// the bracketed bounds applying to rk4 only.
pub fn stable_dt<D: Dynamics>(d: &D, s: &D::State, cfg: &StepperConfig) -> f64 {
    let grid = s.grid();
    let umax = d.velocity(s).max_abs();
    let mut bound = cfg.dt;
    if umax > 0.0 {
        bound = bound.min(grid.spacing() / umax);
    }
    let rate = d.explicit_rate();
    if rate > 0.0 {
        bound = bound.min(2.8 / rate);
    }
    if cfg.scheme == Scheme::Rk4 {
        let (c, gamma) = d.stiff_rates();
        if c > 0.0 {
            bound = bound.min(2.8 / (c * grid.k_max()));
        }
        if gamma > 0.0 {
            bound = bound.min(2.8 / gamma);
        }
    }
    cfg.cfl * bound
}

/// Drives a trajectory from `0` to `t_end`.
pub struct Stepper<'a, D: Dynamics> {
    dynamics: &'a D,
    cfg: StepperConfig,
    state: D::State,
    t: f64,
    steps: usize,
    fixed_h: f64,
    fixed_steps: usize,
}

impl<'a, D: Dynamics> Stepper<'a, D> {
    pub fn new(dynamics: &'a D, state: D::State, cfg: StepperConfig) -> Result<Self> {
        cfg.validate()?;
        let fixed_steps = (cfg.t_end / cfg.dt - 1e-9).ceil().max(0.0) as usize;
        let fixed_h = if fixed_steps == 0 {
            0.0
        } else {
            cfg.t_end / fixed_steps as f64
        };
        Ok(Self {
            dynamics,
            cfg,
            state,
            t: 0.0,
            steps: 0,
            fixed_h,
            fixed_steps,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn state(&self) -> &D::State {
        &self.state
    }

    pub fn into_state(self) -> D::State {
        self.state
    }

    pub fn done(&self) -> bool {
        match self.cfg.dt_mode {
            DtMode::Fixed => self.steps >= self.fixed_steps,
            DtMode::Cfl => self.t >= self.cfg.t_end,
        }
    }

    /// True when the current state should be recorded.
    pub fn at_sample(&self) -> bool {
        self.steps.is_multiple_of(self.cfg.stride) || self.done()
    }

    /// Takes one step and returns its size.
    pub fn advance(&mut self) -> Result<f64> {
        let h = match self.cfg.dt_mode {
            DtMode::Fixed => self.fixed_h,
            DtMode::Cfl => {
                let h = stable_dt(self.dynamics, &self.state, &self.cfg);
                let left = self.cfg.t_end - self.t;
                // avoid a sliver of a final step
                if h >= left || left - h < 1e-3 * h {
                    left
                } else {
                    h
                }
            }
        };
        self.state = step(self.dynamics, &self.state, self.cfg.scheme, h);
        self.steps += 1;
        self.t = match self.cfg.dt_mode {
            DtMode::Fixed => self.steps as f64 * self.fixed_h,
            DtMode::Cfl => {
                if self.cfg.t_end - (self.t + h) <= 0.0 {
                    self.cfg.t_end
                } else {
                    self.t + h
                }
            }
        };
        let linf = self.dynamics.vorticity(&self.state).max_abs();
        if !(linf <= self.cfg.blowup_guard) {
            return Err(Error::BlowupDetected {
                t: self.t,
                linf,
                guard: self.cfg.blowup_guard,
            });
        }
        Ok(h)
    }

    /// Runs to the end, calling `observe(t, state)` at every sample.
    pub fn run(mut self, mut observe: impl FnMut(f64, &D::State) -> Result<()>) -> Result<D::State> {
        observe(self.t, &self.state)?;
        while !self.done() {
            self.advance()?;
            if self.at_sample() {
                observe(self.t, &self.state)?;
            }
        }
        Ok(self.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Params, Perturbation, PerturbationState};
    use crate::spectral::{dealias, FourierGrid};

    /// The perturbation model with its nonlinearity switched off.
    struct LinearOnly(Perturbation);

    impl Dynamics for LinearOnly {
        type State = PerturbationState;
        fn rhs(&self, s: &Self::State) -> Self::State {
            let g = s.omega.grid();
            let c = self.0.params.c;
            PerturbationState::new(
                ScalarField2D::zeros(g),
                crate::spectral::laplacian(&s.a).scaled(c).axpy(-c * c, &s.e),
                s.e.scaled(c),
            )
        }
        fn nonlinear(&self, s: &Self::State) -> Self::State {
            PerturbationState::zeros(s.omega.grid())
        }
        fn propagate(&self, s: &Self::State, h: f64) -> Self::State {
            self.0.propagate(s, h)
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
    }

    fn em_datum(g: &std::sync::Arc<FourierGrid>) -> PerturbationState {
        let e = dealias(&ScalarField2D::from_fn(g, |x, y| {
            (x + 2.0 * y).sin() + 0.5 * (3.0 * x).cos()
        }));
        let a = dealias(&ScalarField2D::from_fn(g, |x, y| (2.0 * x - y).cos() * 0.3));
        PerturbationState::new(ScalarField2D::zeros(g), e, a)
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = FourierGrid::new(32).unwrap();
        let d = Perturbation::new(Params::default());
        for scheme in [Scheme::Rk4, Scheme::Ifrk4] {
            let s = step(&d, &PerturbationState::zeros(&g), scheme, 0.01);
            assert_eq!(s.max_abs_diff(&PerturbationState::zeros(&g)), 0.0);
        }
    }

    #[test]
    fn linear_data_follow_the_exact_exponential() {
        let g = FourierGrid::new(32).unwrap();
        let d = LinearOnly(Perturbation::new(Params::with_c(3.0)));
        let s0 = em_datum(&g);
        let mut s = s0.clone();
        for _ in 0..10 {
            s = ifrk4_step(&d, &s, 0.05);
        }
        let table = MaxwellModeExponential::build(&g, 3.0, 9.0, 0.5);
        let (e, a) = table.apply(&s0.e.spectral(), &s0.a.spectral());
        let exact = PerturbationState::new(
            ScalarField2D::zeros(&g),
            ScalarField2D::from_spectral(&g, e),
            ScalarField2D::from_spectral(&g, a),
        );
        assert!(s.max_abs_diff(&exact) < 1e-12);
        // plain RK4 on the same data is only approximate
        let mut r = s0.clone();
        for _ in 0..10 {
            r = rk4_step(&d, &r, 0.05);
        }
        assert!(r.max_abs_diff(&exact) > 1e-9);
    }

    #[test]
    fn stable_dt_bounds() {
        let g = FourierGrid::new(256).unwrap();
        let d = Perturbation::new(Params::default());
        let cfg = StepperConfig {
            dt: 10.0,
            cfl: 0.5,
            ..StepperConfig::default()
        };
        // u = 0: only the cap and the explicit coupling bound remain
        let z = PerturbationState::zeros(&g);
        assert!((stable_dt(&d, &z, &cfg) - 0.5 * 1.4).abs() < 1e-15);
        let capped = StepperConfig { dt: 0.01, ..cfg };
        assert!((stable_dt(&d, &z, &capped) - 0.005).abs() < 1e-15);
        // |u|_inf = 1 from omega = -cos x2 (u = (sin x2, 0))
        let s = PerturbationState::new(ScalarField2D::from_fn(&g, |_, y| -y.cos()), z.e.clone(), z.a.clone());
        let h = 2.0 * std::f64::consts::PI / 256.0;
        assert!((stable_dt(&d, &s, &cfg) - 0.5 * h).abs() < 1e-12);
        let rk = StepperConfig {
            scheme: Scheme::Rk4,
            ..cfg
        };
        let d10 = Perturbation::new(Params::with_c(10.0));
        let expect = 0.5 * 2.8 / (10.0 * g.k_max());
        assert!((stable_dt(&d10, &z, &rk) - expect).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(StepperConfig::default().validate().is_ok());
        assert!(StepperConfig {
            cfl: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(StepperConfig {
            dt: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(StepperConfig {
            stride: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn guard_trips() {
        let g = FourierGrid::new(32).unwrap();
        let d = Perturbation::new(Params::default());
        let s = PerturbationState::new(
            dealias(&ScalarField2D::from_fn(&g, |x, y| (x + y).sin())),
            em_datum(&g).e,
            em_datum(&g).a,
        );
        let cfg = StepperConfig {
            blowup_guard: 1e-3,
            ..Default::default()
        };
        let err = Stepper::new(&d, s, cfg).unwrap().run(|_, _| Ok(())).unwrap_err();
        assert!(matches!(err, Error::BlowupDetected { .. }));
    }

    #[test]
    fn fixed_mode_lands_on_t_end() {
        let g = FourierGrid::new(16).unwrap();
        let d = Perturbation::new(Params::default());
        let cfg = StepperConfig {
            dt: 0.03,
            t_end: 0.1,
            stride: 2,
            ..Default::default()
        };
        let mut times = Vec::new();
        Stepper::new(&d, PerturbationState::zeros(&g), cfg)
            .unwrap()
            .run(|t, _| {
                times.push(t);
                Ok(())
            })
            .unwrap();
        // four steps of 0.025, sampled at steps 0, 2, 4
        assert_eq!(times.len(), 3);
        assert!((times[2] - 0.1).abs() < 1e-15);
    }
}
