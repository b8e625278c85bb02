use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use emlab::experiment::{run_experiment, run_lemma, run_limit, run_sweep, ExperimentConfig, LemmaKind};
use emlab::Result;

#[derive(Parser)]
#[command(name = "emlab", about = "Euler–Maxwell pseudospectral experiments", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// One run: series, snapshots and checks.
    Run,
    /// The ill-posed datum over a list of scale counts.
    Sweep,
    /// One estimate check: energy|maxwell|commutator|vishik|local_bound|lorentz|family.
    Lemma { which: String },
    /// Small-c comparison against the Euler–Riesz reference.
    Limit,
}

/// `Ok(true)` when every check passed.
fn execute(cli: &Cli, config: &Path) -> Result<bool> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let out = cli.out.clone().unwrap_or_else(|| cfg.output.clone());
    let pass = match &cli.command {
        Command::Run => {
            let o = run_experiment(&cfg, Some(&out))?;
            for c in &o.checks {
                println!(
                    "{:<12} {} measured={:.6e} threshold={:.6e}",
                    c.check,
                    verdict(c.pass),
                    c.measured,
                    c.threshold
                );
            }
            o.all_pass()
        }
        Command::Sweep => {
            let o = run_sweep(&cfg, Some(&out))?;
            for r in &o.table.rows {
                println!("N={:<4} ratio={:.4} twin={:?}", r.n_scales, r.ratio, r.twin_ratio);
            }
            for r in o.runs.iter().filter(|r| r.error.is_some()) {
                eprintln!("{}: {}", r.dir, r.error.as_deref().unwrap_or_default());
            }
            println!("sweep {}", verdict(o.pass));
            o.pass
        }
        Command::Lemma { which } => {
            let o = run_lemma(which.parse::<LemmaKind>()?, &cfg, Some(&out))?;
            println!(
                "{:<12} {} measured={:.6e} threshold={:.6e}",
                o.report.check,
                verdict(o.report.pass),
                o.report.measured,
                o.report.threshold
            );
            o.report.pass
        }
        Command::Limit => {
            let o = run_limit(&cfg, Some(&out))?;
            for r in &o.rows {
                println!("c={:<8} discrepancy={:.6e}", r.c, r.discrepancy);
            }
            println!("limit {}", verdict(o.monotone));
            o.monotone
        }
    };
    println!("output: {}", out.display());
    Ok(pass)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let Some(config) = cli.config.clone() else {
        eprintln!("error: --config <PATH> is required");
        return ExitCode::from(1);
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match execute(&cli, &config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
