//! Spectral operators on a single Fourier mode: the Riesz-type operator, its
//! semigroup, derivatives and Biot–Savart against their closed forms.
//!
//!     cargo run --release --example spectral_operators -- [grid]

use emlab::spectral::{
    biot_savart, derivative, inverse_laplacian, riesz, riesz_semigroup, riesz_symbol, Axis, FourierGrid, ScalarField2D,
};

fn main() -> emlab::Result<()> {
    let n = std::env::args().nth(1).map_or(64, |s| s.parse().expect("grid size"));
    let g = FourierGrid::new(n)?;
    let (k1, k2) = (3.0, 2.0);
    let f = ScalarField2D::from_fn(&g, |x, y| (k1 * x + k2 * y).sin());
    let m = riesz_symbol(k1, k2);
    let k2sq = k1 * k1 + k2 * k2;

    let expect = |s: f64| ScalarField2D::from_fn(&g, move |x, y| s * (k1 * x + k2 * y).sin());
    let cos = |s: f64| ScalarField2D::from_fn(&g, move |x, y| s * (k1 * x + k2 * y).cos());
    let rows = [
        ("R", riesz(&f).max_abs_diff(&expect(m))),
        (
            "exp(0.7 R)",
            riesz_semigroup(&f, 0.7).max_abs_diff(&expect((0.7 * m).exp())),
        ),
        ("d1", derivative(&f, Axis::X1).max_abs_diff(&cos(k1))),
        ("d2", derivative(&f, Axis::X2).max_abs_diff(&cos(k2))),
        (
            "inv laplacian",
            inverse_laplacian(&f)?.max_abs_diff(&expect(-1.0 / k2sq)),
        ),
        ("roundtrip", f.to_spectral().to_physical().max_abs_diff(&f)),
    ];
    println!("grid {n}, mode ({k1}, {k2}), symbol of R = {m:.6}");
    for (name, err) in rows {
        println!("{name:<14} max error {err:.3e}");
    }
    let u = biot_savart(&f);
    let u1 = ScalarField2D::from_fn(&g, |x, y| k2 / k2sq * (k1 * x + k2 * y).cos());
    let u2 = ScalarField2D::from_fn(&g, |x, y| -k1 / k2sq * (k1 * x + k2 * y).cos());
    println!(
        "{:<14} max error {:.3e}",
        "biot-savart",
        u.x1.max_abs_diff(&u1).max(u.x2.max_abs_diff(&u2))
    );
    Ok(())
}
