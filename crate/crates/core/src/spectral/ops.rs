//! Fourier-multiplier operators and the dealiased product.
//!
//! The Riesz operator is `R = d11 (-Delta)^{-1}`, whose symbol is
//! `-k1^2 / |k|^2`; it annihilates the mean mode.

use rustfft::num_complex::Complex64;

use super::field::{ScalarField2D, VectorField2D};
use super::grid::{Axis, FourierGrid};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Symbol of the Riesz operator `d11 (-Delta)^{-1}`.
#[inline]
pub fn riesz_symbol(k1: f64, k2: f64) -> f64 {
    let k_sq = k1 * k1 + k2 * k2;
    if k_sq == 0.0 {
        0.0
    } else {
        -(k1 * k1) / k_sq
    }
}

// Slice-level kernels used by the right-hand sides; the public field API
// below wraps them.
impl FourierGrid {
    pub(crate) fn spec_derivative(&self, c: &[Complex64], axis: Axis) -> Vec<Complex64> {
        let n = self.n();
        let mut out = vec![Complex64::default(); n * n];
        for m1 in 0..n {
            if self.is_nyquist(m1) {
                continue;
            }
            for m2 in 0..n {
                if self.is_nyquist(m2) {
                    continue;
                }
                let k = match axis {
                    Axis::X1 => self.wavenumber(m1),
                    Axis::X2 => self.wavenumber(m2),
                };
                out[m1 * n + m2] = c[m1 * n + m2] * I * k;
            }
        }
        out
    }

    pub(crate) fn spec_laplacian(&self, c: &[Complex64]) -> Vec<Complex64> {
        c.iter().zip(self.k_squared()).map(|(&v, &k2)| v * -k2).collect()
    }

    /// `-1/|k|^2`, zero on the mean mode.
    pub(crate) fn spec_inverse_laplacian(&self, c: &[Complex64]) -> Vec<Complex64> {
        c.iter()
            .zip(self.k_squared())
            .map(|(&v, &k2)| {
                if k2 == 0.0 {
                    Complex64::default()
                } else {
                    v * (-1.0 / k2)
                }
            })
            .collect()
    }

    pub(crate) fn spec_riesz(&self, c: &[Complex64]) -> Vec<Complex64> {
        self.modes()
            .map(|(idx, k1, k2)| c[idx] * riesz_symbol(k1, k2))
            .collect()
    }

    pub(crate) fn spec_riesz_semigroup(&self, c: &[Complex64], t: f64) -> Vec<Complex64> {
        self.modes()
            .map(|(idx, k1, k2)| c[idx] * (t * riesz_symbol(k1, k2)).exp())
            .collect()
    }

    /// Velocity `grad^perp Delta^{-1} omega` as two spectra.
    pub(crate) fn spec_biot_savart(&self, omega: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let psi = self.spec_inverse_laplacian(omega);
        self.spec_perp_gradient(&psi)
    }

    /// `grad^perp a = (-d2 a, d1 a)`.
    pub(crate) fn spec_perp_gradient(&self, a: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut v1 = self.spec_derivative(a, Axis::X2);
        v1.iter_mut().for_each(|c| *c = -*c);
        let v2 = self.spec_derivative(a, Axis::X1);
        (v1, v2)
    }

    /// Zeroes every mode outside the 2/3-rule mask.
    pub(crate) fn truncate(&self, c: &mut [Complex64]) {
        for (v, &keep) in c.iter_mut().zip(self.dealias_mask()) {
            if !keep {
                *v = Complex64::default();
            }
        }
    }

    pub(crate) fn truncated(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut out = c.to_vec();
        self.truncate(&mut out);
        out
    }
}

pub fn derivative(f: &ScalarField2D, axis: Axis) -> ScalarField2D {
    let grid = f.grid();
    ScalarField2D::from_spectral(grid, grid.spec_derivative(&f.spectral(), axis))
}

pub fn laplacian(f: &ScalarField2D) -> ScalarField2D {
    let grid = f.grid();
    ScalarField2D::from_spectral(grid, grid.spec_laplacian(&f.spectral()))
}

/// Solves `Delta g = f` for mean-free `f`; the result is mean-free.
pub fn inverse_laplacian(f: &ScalarField2D) -> Result<ScalarField2D> {
    check_mean_free(f)?;
    let grid = f.grid();
    Ok(ScalarField2D::from_spectral(
        grid,
        grid.spec_inverse_laplacian(&f.spectral()),
    ))
}

pub(crate) fn check_mean_free(f: &ScalarField2D) -> Result<()> {
    let mean = f.mean();
    let sup = f.max_abs();
    if mean.abs() > 1e-12 * sup {
        return Err(Error::NonzeroMean { mean, sup });
    }
    Ok(())
}

pub fn riesz(f: &ScalarField2D) -> ScalarField2D {
    let grid = f.grid();
    ScalarField2D::from_spectral(grid, grid.spec_riesz(&f.spectral()))
}

/// `exp(t R) f` for `t >= 0`.
pub fn riesz_semigroup(f: &ScalarField2D, t: f64) -> ScalarField2D {
    assert!(t >= 0.0, "riesz_semigroup needs t >= 0, got {t}");
    let grid = f.grid();
    ScalarField2D::from_spectral(grid, grid.spec_riesz_semigroup(&f.spectral(), t))
}

/// `u = grad^perp Delta^{-1} omega`. The mean of `omega` is dropped.
pub fn biot_savart(omega: &ScalarField2D) -> VectorField2D {
    let grid = omega.grid();
    let (u1, u2) = grid.spec_biot_savart(&omega.spectral());
    VectorField2D {
        x1: ScalarField2D::from_spectral(grid, u1),
        x2: ScalarField2D::from_spectral(grid, u2),
        divergence_free: true,
    }
}

/// `grad^perp a = (-d2 a, d1 a)`; divergence-free by construction.
pub fn perp_gradient(a: &ScalarField2D) -> VectorField2D {
    let grid = a.grid();
    let (v1, v2) = grid.spec_perp_gradient(&a.spectral());
    VectorField2D {
        x1: ScalarField2D::from_spectral(grid, v1),
        x2: ScalarField2D::from_spectral(grid, v2),
        divergence_free: true,
    }
}

pub fn gradient(f: &ScalarField2D) -> VectorField2D {
    VectorField2D::new(derivative(f, Axis::X1), derivative(f, Axis::X2))
}

/// Scalar curl `d1 v2 - d2 v1`.
pub fn curl(v: &VectorField2D) -> ScalarField2D {
    derivative(&v.x2, Axis::X1).sub(&derivative(&v.x1, Axis::X2))
}

pub fn divergence(v: &VectorField2D) -> ScalarField2D {
    derivative(&v.x1, Axis::X1).add(&derivative(&v.x2, Axis::X2))
}

/// Truncates a field to the dealiasing mask.
pub fn dealias(f: &ScalarField2D) -> ScalarField2D {
    let grid = f.grid();
    ScalarField2D::from_spectral(grid, grid.truncated(&f.spectral()))
}

/// Pseudospectral product with inputs and output truncated by the 2/3 mask.
pub fn dealiased_product(f: &ScalarField2D, g: &ScalarField2D) -> ScalarField2D {
    let grid = f.grid();
    let (pf, pg) = grid.inverse_real_pair(&grid.truncated(&f.spectral()), &grid.truncated(&g.spectral()));
    let prod: Vec<f64> = pf.iter().zip(&pg).map(|(a, b)| a * b).collect();
    let mut c = grid.forward_real(&prod);
    grid.truncate(&mut c);
    ScalarField2D::from_spectral(grid, c)
}

/// Dealiased `v . grad f`.
pub fn dealiased_advection(v: &VectorField2D, f: &ScalarField2D) -> ScalarField2D {
    dealiased_product(&v.x1, &derivative(f, Axis::X1)).add(&dealiased_product(&v.x2, &derivative(f, Axis::X2)))
}
