//! Small-`c` limit: the Euler–Maxwell perturbation model with zero
//! electromagnetic data approaches the Euler–Riesz model as `c -> 0`.
//!
//!     cargo run --release --example small_c_limit -- [grid]

use emlab::experiment::{run_limit, ExperimentConfig, LimitConfig};

fn main() -> emlab::Result<()> {
    let grid = std::env::args().nth(1).map_or(128, |s| s.parse().expect("grid size"));
    let mut cfg = ExperimentConfig {
        grid,
        limit: Some(LimitConfig {
            c_values: vec![0.4, 0.2, 0.1],
            t_star: Some(0.5),
        }),
        ..ExperimentConfig::default()
    };
    cfg.stepper.dt = 0.005;
    let o = run_limit(&cfg, None)?;
    println!("t* = {}, |omega_ER(t*)|_inf = {:.6}", o.t_star, o.reference_linf);
    for r in &o.rows {
        println!("c = {:<5} |omega_c - omega_ER|_inf = {:.6e}", r.c, r.discrepancy);
    }
    println!("monotone: {}", o.monotone);
    Ok(())
}
