//! A configured single run written to a self-describing directory: series,
//! auxiliary norms, snapshots, checks and the run record.
//!
//!     cargo run --release --example configured_run -- [out_dir]

use emlab::experiment::{read_series, run_experiment, ExperimentConfig};

fn main() -> emlab::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "runs/example".into());
    let mut cfg = ExperimentConfig::default();
    cfg.grid = 64;
    cfg.stepper.t_end = 1.0;
    cfg.snapshot_every = 5;

    let o = run_experiment(&cfg, Some(out.as_ref()))?;
    for c in &o.checks {
        println!(
            "{:<12} {} measured={:.4e} threshold={:.4e}",
            c.check,
            if c.pass { "PASS" } else { "FAIL" },
            c.measured,
            c.threshold
        );
    }
    let series = read_series(out.as_ref())?;
    println!("{} samples written to {out}", series.len());
    for p in series.iter().step_by(4) {
        println!("  t={:.3} |w|_inf={:.5} energy={:.8}", p.t, p.linf_omega, p.energy_l2);
    }
    Ok(())
}
