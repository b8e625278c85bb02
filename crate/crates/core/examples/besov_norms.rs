//! Littlewood–Paley blocks and Besov norms of smooth fields and of the
//! stacked-bump family.
//!
//!     cargo run --release --example besov_norms -- [grid]

use emlab::besov::{besov_norm, lebesgue_norm, BesovSpec, LittlewoodPaley};
use emlab::data::{build_f_family, max_admissible_n, random_smooth_field};
use emlab::spectral::FourierGrid;

fn main() -> emlab::Result<()> {
    let n = std::env::args().nth(1).map_or(256, |s| s.parse().expect("grid size"));
    let g = FourierGrid::new(n)?;
    let lp = LittlewoodPaley::new(&g);
    println!(
        "grid {n}: blocks {}..={}, profile {}",
        lp.j_min(),
        lp.j_max(),
        lp.profile_hash()
    );

    let f = random_smooth_field(1, 4.0, &g)?;
    println!("random field, block L2 norms:");
    for (j, b) in lp.blocks().zip(lp.block_norms(&[&f], 2.0)) {
        println!("  j={j:>2}  {b:.4e}");
    }
    for (name, spec) in [
        ("B^1_{2,1}", BesovSpec::B1_21),
        ("B^2_{2,1}", BesovSpec::B2_21),
        ("B^0_{inf,1}", BesovSpec::B0_INF1),
    ] {
        println!("  {name:<12} {:.6}", besov_norm(&f, spec));
    }

    println!("stacked bumps (lambda = 2):");
    println!("  {:>2} {:>10} {:>12}", "N", "L^inf", "B^1_{2,1}");
    for k in 1..=max_admissible_n(2.0, &g) {
        let fam = build_f_family(k, 2.0, &g)?;
        println!(
            "  {k:>2} {:>10.6} {:>12.4}",
            lebesgue_norm(&fam, f64::INFINITY),
            besov_norm(&fam, BesovSpec::B1_21)
        );
    }
    Ok(())
}
