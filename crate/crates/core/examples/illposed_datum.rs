//! The ill-posedness datum: stacked bumps, the Riesz response near the
//! origin, and the smallness condition on the electromagnetic part.
//!
//!     cargo run --release --example illposed_datum -- [grid]

use emlab::data::{illposed_datum, max_admissible_n, smallness_assumption, Background};
use emlab::spectral::{riesz, FourierGrid};

fn main() -> emlab::Result<()> {
    let n = std::env::args().nth(1).map_or(256, |s| s.parse().expect("grid size"));
    let g = FourierGrid::new(n)?;
    let top = max_admissible_n(2.0, &g);
    println!("grid {n}: N up to {top} resolved");
    println!(
        "{:>2} {:>8} {:>10} {:>10} {:>10} {:>10}",
        "N", "eps", "|w0|_inf", "Rw0(0)", "lhs", "rhs"
    );
    for k in 1..=top {
        let d = illposed_datum(k, 2.0, None, Background::Unit, &g)?;
        let r0 = riesz(&d.state.omega).at(0, 0);
        let (lhs, rhs) = smallness_assumption(&d.state, 1.0);
        println!(
            "{k:>2} {:>8.4} {:>10.5} {:>10.5} {:>10.4} {:>10.4}",
            d.epsilon,
            d.state.omega.max_abs(),
            r0,
            lhs,
            rhs
        );
    }
    match illposed_datum(top + 1, 2.0, None, Background::Unit, &g) {
        Err(e) => println!("N = {}: {e}", top + 1),
        Ok(_) => println!("N = {} unexpectedly accepted", top + 1),
    }
    Ok(())
}
