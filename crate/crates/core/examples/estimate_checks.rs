//! Flow-map and data-family estimate checks: commutator constants across a
//! ten-flow suite (with grid refinement), composition constants, and the
//! scaling of the stacked-bump family.
//!
//!     cargo run --release --example estimate_checks -- [grid]

use emlab::experiment::{run_lemma, ExperimentConfig, LemmaKind};

fn main() -> emlab::Result<()> {
    let grid = std::env::args().nth(1).map_or(64, |s| s.parse().expect("grid size"));
    let cfg = ExperimentConfig {
        grid,
        ..ExperimentConfig::default()
    };
    for which in [LemmaKind::Commutator, LemmaKind::Vishik, LemmaKind::Family] {
        let r = run_lemma(which, &cfg, None)?.report;
        println!(
            "{:<11} {} measured={:.4} threshold={}",
            r.check,
            if r.pass { "PASS" } else { "FAIL" },
            r.measured,
            r.threshold
        );
        println!("{}", serde_json::to_string_pretty(&r.details)?);
    }
    Ok(())
}
