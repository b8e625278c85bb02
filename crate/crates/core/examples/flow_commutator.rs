//! Lagrangian flow maps: roundtrip and Jacobian defects, commutator and
//! composition ratios over the standard flow suite.
//!
//!     cargo run --release --example flow_commutator -- [grid]

use emlab::besov::BesovSpec;
use emlab::data::random_smooth_field;
use emlab::experiment::lemma::flow_suite;
use emlab::flow::{commutator_ratio, vishik_ratio, Direction};
use emlab::spectral::FourierGrid;

fn main() -> emlab::Result<()> {
    let n = std::env::args().nth(1).map_or(64, |s| s.parse().expect("grid size"));
    let g = FourierGrid::new(n)?;
    let omega = random_smooth_field(7, 4.0, &g)?;
    println!(
        "{:<32} {:>10} {:>10} {:>8} {:>10} {:>8}",
        "flow", "roundtrip", "jacobian", "lip", "commutator", "vishik"
    );
    for s in flow_suite(&g, 0.5)? {
        let m = &s.map;
        println!(
            "{:<32} {:>10.2e} {:>10.2e} {:>8.4} {:>10.4} {:>8.4}",
            s.label,
            m.roundtrip_error(),
            m.jacobian_defect(),
            m.lipschitz_constant(Direction::Forward),
            commutator_ratio(&omega, m, BesovSpec::B1_21)?,
            vishik_ratio(&omega, m)
        );
    }
    Ok(())
}
