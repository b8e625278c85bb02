//! Duhamel decomposition of the transported vorticity along a run of the
//! ill-posedness datum: linear Riesz part, commutator and forcing.
//!
//!     cargo run --release --example duhamel_split -- [N] [grid]

use emlab::experiment::{run_experiment, ExperimentConfig};

fn main() -> emlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let n_scales = args.next().map_or(3, |s| s.parse().expect("scale count"));
    let grid = args.next().map_or(128, |s| s.parse().expect("grid size"));
    let mut cfg = ExperimentConfig::illposed(n_scales, grid);
    cfg.stepper.t_end = 1.0;
    cfg.stepper.dt = 0.02;
    cfg.stepper.stride = 5;
    cfg.checks = vec!["duhamel".into()];

    let o = run_experiment(&cfg, None)?;
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>9}",
        "t", "|w|_inf", "linear", "commutator", "forcing", "residual", "dominance"
    );
    for p in o.duhamel.iter().flatten() {
        println!(
            "{:>6.3} {:>10.5} {:>10.5} {:>10.3e} {:>10.3e} {:>10.3e} {:>9.2}",
            p.t,
            p.linf_omega,
            p.linear,
            p.commutator,
            p.forcing,
            p.residual,
            p.dominance()
        );
    }
    for c in &o.checks {
        println!(
            "{} {} measured={:.4}",
            c.check,
            if c.pass { "PASS" } else { "FAIL" },
            c.measured
        );
    }
    Ok(())
}
