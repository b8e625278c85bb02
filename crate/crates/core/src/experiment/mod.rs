//! Configured experiments: single runs, scale sweeps, estimate checks and
//! the small-`c` limit, each writing a self-describing output directory.

pub mod config;
pub mod lemma;
pub mod limit;
pub mod persist;
pub mod run;
pub mod sweep;

pub use config::{DatumSpec, ExperimentConfig, LemmaConfig, LimitConfig, ModelKind, SweepConfig, RUN_CHECKS};
pub use lemma::{run_lemma, LemmaKind, LemmaOutcome};
pub use limit::{run_limit, LimitOutcome, LimitRow};
pub use persist::{read_aux, read_series, read_snapshot, write_snapshot, SnapshotHeader, DONE_MARKER};
pub use run::{run_experiment, RunOutcome};
pub use sweep::{run_sweep, SweepOutcome};
