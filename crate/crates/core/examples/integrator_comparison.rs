//! Explicit RK4 against the integrating-factor scheme: observed order, the
//! adaptive step bound, and behaviour past the explicit wave limit.
//!
//!     cargo run --release --example integrator_comparison

use emlab::data::random_smooth_field;
use emlab::integrators::{stable_dt, step, Scheme, StepperConfig};
use emlab::models::{FieldState, Params, Perturbation, PerturbationState};
use emlab::spectral::FourierGrid;

fn integrate(d: &Perturbation, s0: &PerturbationState, scheme: Scheme, t: f64, steps: usize) -> PerturbationState {
    let h = t / steps as f64;
    (0..steps).fold(s0.clone(), |s, _| step(d, &s, scheme, h))
}

fn main() -> emlab::Result<()> {
    let g = FourierGrid::new(32)?;
    let f = |s| random_smooth_field(s, 6.0, &g);
    let s0 = PerturbationState::new(f(1)?, f(2)?.scaled(0.3), f(3)?.scaled(0.3)).dealiased();

    let d = Perturbation::new(Params::default());
    println!("observed order at t = 0.4 (10 vs 20 steps, reference 320):");
    for scheme in [Scheme::Rk4, Scheme::Ifrk4] {
        let r = integrate(&d, &s0, scheme, 0.4, 320);
        let e1 = integrate(&d, &s0, scheme, 0.4, 10).max_abs_diff(&r);
        let e2 = integrate(&d, &s0, scheme, 0.4, 20).max_abs_diff(&r);
        println!("  {scheme:?}: errors {e1:.3e} {e2:.3e}, order {:.2}", (e1 / e2).log2());
    }

    let stiff = Perturbation::new(Params::with_c(10.0));
    for scheme in [Scheme::Rk4, Scheme::Ifrk4] {
        let cfg = StepperConfig {
            scheme,
            dt: 1.0,
            cfl: 1.0,
            ..StepperConfig::default()
        };
        println!("c = 10, {scheme:?} step bound {:.4e}", stable_dt(&stiff, &s0, &cfg));
    }
    let h = 0.05;
    for scheme in [Scheme::Rk4, Scheme::Ifrk4] {
        let s = integrate(&stiff, &s0, scheme, 1.0, (1.0 / h) as usize);
        println!(
            "c = 10, h = {h}, {scheme:?}: energy {:.4e} -> {:.4e}",
            s0.energy_l2(),
            s.energy_l2()
        );
    }
    Ok(())
}
