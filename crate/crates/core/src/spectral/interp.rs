//! Periodic cubic B-spline interpolation of grid fields at arbitrary points.

use super::field::ScalarField2D;

/// Interpolant through the grid samples of a field, C^2 and fourth-order
/// accurate for smooth periodic data.
#[derive(Clone, Debug)]
pub struct SplineInterpolant {
    n: usize,
    inv_h: f64,
    coeffs: Vec<f64>,
}

impl SplineInterpolant {
    pub fn new(f: &ScalarField2D) -> Self {
        let grid = f.grid();
        let n = grid.n();
        // Divide out the sampled B-spline (1/6, 4/6, 1/6) along each axis.
        let symbol: Vec<f64> = (0..n)
            .map(|m| (4.0 + 2.0 * (grid.wavenumber(m) * grid.spacing()).cos()) / 6.0)
            .collect();
        let mut c = f.spectral().into_owned();
        for m1 in 0..n {
            for m2 in 0..n {
                c[m1 * n + m2] /= symbol[m1] * symbol[m2];
            }
        }
        Self {
            n,
            inv_h: 1.0 / grid.spacing(),
            coeffs: grid.inverse_real(&c),
        }
    }

    /// Value at `(x1, x2)`; any real coordinates, wrapped periodically.
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let n = self.n;
        let (i1, w1) = weights(x1 * self.inv_h, n);
        let (i2, w2) = weights(x2 * self.inv_h, n);
        let mut acc = 0.0;
        for (a, wa) in w1.iter().enumerate() {
            let row = ((i1 + a + n - 1) % n) * n;
            let mut inner = 0.0;
            for (b, wb) in w2.iter().enumerate() {
                inner += wb * self.coeffs[row + (i2 + b + n - 1) % n];
            }
            acc += wa * inner;
        }
        acc
    }
}

/// Base index (in `0..n`) and the four cubic B-spline weights for nodes
/// `base-1 ..= base+2`.
#[inline]
fn weights(s: f64, n: usize) -> (usize, [f64; 4]) {
    let fl = s.floor();
    let t = s - fl;
    let base = (fl as i64).rem_euclid(n as i64) as usize;
    let t2 = t * t;
    let t3 = t2 * t;
    let u = 1.0 - t;
    (
        base,
        [
            u * u * u / 6.0,
            (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
            (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0,
            t3 / 6.0,
        ],
    )
}
