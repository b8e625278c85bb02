//! Scale sweep of the ill-posedness datum with normal-structure twins:
//! inflation table, twin ratios and the Lorentz split.
//!
//!     cargo run --release --example inflation_sweep -- [grid] [out_dir]

use emlab::experiment::{run_sweep, ExperimentConfig, SweepConfig};

fn main() -> emlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let grid = args.next().map_or(128, |s| s.parse().expect("grid size"));
    let out = args.next().unwrap_or_else(|| "runs/sweep".into());
    let mut cfg = ExperimentConfig::illposed(1, grid);
    cfg.stepper.t_end = 1.0;
    cfg.stepper.dt = 0.02;
    cfg.snapshot_every = 0;
    let max_n = emlab::data::max_admissible_n(2.0, &*emlab::spectral::FourierGrid::new(grid)?);
    cfg.sweep = Some(SweepConfig {
        n_scales: (1..=max_n).collect(),
        twins: true,
        window: None,
        thresholds: vec![1.5, 2.0],
    });

    let o = run_sweep(&cfg, Some(out.as_ref()))?;
    println!(
        "{:>2} {:>10} {:>8} {:>8} {:>8}",
        "N", "|w0|_inf", "ratio", "t_max", "twin"
    );
    for r in &o.table.rows {
        println!(
            "{:>2} {:>10.5} {:>8.4} {:>8.3} {:>8}",
            r.n_scales,
            r.linf0,
            r.ratio,
            r.t_at_max,
            r.twin_ratio.map_or("-".into(), |v| format!("{v:.4}"))
        );
    }
    println!(
        "monotone={} max twin ratio={:?} lorentz constant={:.4} pass={}",
        o.monotone, o.max_twin_ratio, o.lorentz_constant, o.pass
    );
    Ok(())
}
