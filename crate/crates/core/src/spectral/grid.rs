use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Coordinate axis of the torus `[0, 2pi)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

/// Uniform periodic grid on `[0, 2pi)^2` together with its FFT plans and
/// per-mode wavenumber tables.
///
/// Storage is row-major with the `x1` index outermost: the value at
/// `(x1, x2) = (i1 h, i2 h)` lives at `i1 * n + i2`. Spectral arrays use the
/// same layout over mode indices; mode index `m` maps to the signed
/// wavenumber `m` for `m < n/2` and `m - n` otherwise, so the Nyquist mode is
/// stored as `-n/2`.
pub struct FourierGrid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
    k_sq: Vec<f64>,
    mask: Vec<bool>,
}

impl fmt::Debug for FourierGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierGrid").field("n", &self.n).finish()
    }
}

impl PartialEq for FourierGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl FourierGrid {
    pub fn new(n: usize) -> Result<Arc<Self>> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(n));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let wavenumbers: Vec<f64> = (0..n)
            .map(|m| if m < n / 2 { m as f64 } else { m as f64 - n as f64 })
            .collect();
        let mut k_sq = vec![0.0; n * n];
        let mut mask = vec![false; n * n];
        for m1 in 0..n {
            let k1 = wavenumbers[m1];
            for m2 in 0..n {
                let k2 = wavenumbers[m2];
                k_sq[m1 * n + m2] = k1 * k1 + k2 * k2;
                // 2/3 rule, square truncation
                mask[m1 * n + m2] = 3.0 * k1.abs() < n as f64 && 3.0 * k2.abs() < n as f64;
            }
        }
        Ok(Arc::new(Self {
            n,
            forward,
            inverse,
            wavenumbers,
            k_sq,
            mask,
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2pi / n`.
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Quadrature weight of one cell, `h^2`.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Coordinate of index `i` in `[0, 2pi)`.
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Coordinate of index `i` in the centred cell `(-pi, pi]`.
    pub fn centered_coord(&self, i: usize) -> f64 {
        if i <= self.n / 2 {
            i as f64 * self.spacing()
        } else {
            (i as f64 - self.n as f64) * self.spacing()
        }
    }

    /// Signed wavenumber of mode index `m`.
    pub fn wavenumber(&self, m: usize) -> f64 {
        self.wavenumbers[m]
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// `|k|^2` per mode, in storage order.
    pub fn k_squared(&self) -> &[f64] {
        &self.k_sq
    }

    /// Dealiasing mask per mode (2/3 rule).
    pub fn dealias_mask(&self) -> &[bool] {
        &self.mask
    }

    /// Largest `|k|` on the grid (corner mode).
    pub fn k_max(&self) -> f64 {
        std::f64::consts::SQRT_2 * (self.n / 2) as f64
    }

    /// Largest `|k|` that survives dealiasing.
    pub fn k_max_dealiased(&self) -> f64 {
        let kc = ((self.n - 1) / 3) as f64;
        std::f64::consts::SQRT_2 * kc
    }

    pub fn is_nyquist(&self, m: usize) -> bool {
        m == self.n / 2
    }

    /// True when either index of the mode is a Nyquist index.
    pub fn touches_nyquist(&self, idx: usize) -> bool {
        let (m1, m2) = (idx / self.n, idx % self.n);
        self.is_nyquist(m1) || self.is_nyquist(m2)
    }

    /// Visits every mode as `(storage index, k1, k2)`.
    pub fn modes(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let n = self.n;
        (0..n * n).map(move |idx| (idx, self.wavenumbers[idx / n], self.wavenumbers[idx % n]))
    }

    /// Forward transform of real samples, normalised so the `k = 0`
    /// coefficient is the grid mean.
    pub fn forward_real(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut buf, false);
        let scale = 1.0 / (self.n * self.n) as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Inverse transform, keeping the real part.
    pub fn inverse_real(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.fft2(&mut buf, true);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// Two inverse transforms for the price of one: packs `a + i b` and
    /// splits real and imaginary parts. Both inputs must be Hermitian.
    pub fn inverse_real_pair(&self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let i = Complex64::new(0.0, 1.0);
        let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| x + i * y).collect();
        self.fft2(&mut buf, true);
        buf.into_iter().map(|c| (c.re, c.im)).unzip()
    }

    /// Two forward transforms of real data through one complex FFT.
    pub fn forward_real_pair(&self, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.n;
        let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
        self.fft2(&mut buf, false);
        let scale = 1.0 / (n * n) as f64;
        let mut fa = vec![Complex64::default(); n * n];
        let mut fb = vec![Complex64::default(); n * n];
        for m1 in 0..n {
            let r1 = (n - m1) % n;
            for m2 in 0..n {
                let r2 = (n - m2) % n;
                let z = buf[m1 * n + m2];
                let zr = buf[r1 * n + r2].conj();
                fa[m1 * n + m2] = (z + zr) * (0.5 * scale);
                fb[m1 * n + m2] = (z - zr) * Complex64::new(0.0, -0.5 * scale);
            }
        }
        (fa, fb)
    }

    /// Unnormalised in-place 2D DFT.
    fn fft2(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.n;
        assert_eq!(buf.len(), n * n, "buffer does not match grid");
        let plan = if inverse { &self.inverse } else { &self.forward };
        let scratch_len = plan.get_inplace_scratch_len();
        let pass = |buf: &mut [Complex64]| {
            buf.par_chunks_mut(n * 8).for_each_init(
                || vec![Complex64::default(); scratch_len],
                |scratch, rows| plan.process_with_scratch(rows, scratch),
            );
        };
        pass(buf);
        transpose_square(buf, n);
        pass(buf);
        transpose_square(buf, n);
    }
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    const BLOCK: usize = 32;
    for ib in (0..n).step_by(BLOCK) {
        for jb in (ib..n).step_by(BLOCK) {
            for i in ib..(ib + BLOCK).min(n) {
                let j0 = if ib == jb { i + 1 } else { jb };
                for j in j0..(jb + BLOCK).min(n) {
                    buf.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}
