use std::borrow::Cow;
use std::sync::Arc;

use rustfft::num_complex::Complex64;

use super::grid::FourierGrid;
use crate::error::{Error, Result};

/// Which representation of a [`ScalarField2D`] is currently stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Physical,
    Spectral,
}

#[derive(Clone, Debug)]
enum Data {
    Physical(Vec<f64>),
    Spectral(Vec<Complex64>),
}

/// Real scalar field on a [`FourierGrid`], held either as grid samples or as
/// Fourier coefficients. Conversions are exact discrete Fourier pairs.
#[derive(Clone, Debug)]
pub struct ScalarField2D {
    grid: Arc<FourierGrid>,
    data: Data,
}

impl ScalarField2D {
    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        Self::from_physical(grid, vec![0.0; grid.len()])
    }

    pub fn from_physical(grid: &Arc<FourierGrid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count does not match grid");
        Self {
            grid: Arc::clone(grid),
            data: Data::Physical(values),
        }
    }

    /// Caller guarantees Hermitian symmetry.
    pub fn from_spectral(grid: &Arc<FourierGrid>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), grid.len(), "coefficient count does not match grid");
        Self {
            grid: Arc::clone(grid),
            data: Data::Spectral(coeffs),
        }
    }

    /// Samples `f(x1, x2)` on the grid, `x` in `[0, 2pi)`.
    pub fn from_fn(grid: &Arc<FourierGrid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(n * n);
        for i1 in 0..n {
            let x1 = grid.coord(i1);
            for i2 in 0..n {
                values.push(f(x1, grid.coord(i2)));
            }
        }
        Self::from_physical(grid, values)
    }

    /// Samples `f` in centred coordinates `x in (-pi, pi]^2`.
    pub fn from_centered_fn(grid: &Arc<FourierGrid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(n * n);
        for i1 in 0..n {
            let x1 = grid.centered_coord(i1);
            for i2 in 0..n {
                values.push(f(x1, grid.centered_coord(i2)));
            }
        }
        Self::from_physical(grid, values)
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        &self.grid
    }

    pub fn view(&self) -> View {
        match self.data {
            Data::Physical(_) => View::Physical,
            Data::Spectral(_) => View::Spectral,
        }
    }

    pub fn to_spectral(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            data: Data::Spectral(self.spectral().into_owned()),
        }
    }

    pub fn to_physical(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            data: Data::Physical(self.physical().into_owned()),
        }
    }

    pub fn into_spectral_vec(self) -> Vec<Complex64> {
        match self.data {
            Data::Spectral(c) => c,
            Data::Physical(v) => self.grid.forward_real(&v),
        }
    }

    pub fn into_physical_vec(self) -> Vec<f64> {
        match self.data {
            Data::Physical(v) => v,
            Data::Spectral(c) => self.grid.inverse_real(&c),
        }
    }

    /// Grid samples, transforming if needed.
    pub fn physical(&self) -> Cow<'_, [f64]> {
        match &self.data {
            Data::Physical(v) => Cow::Borrowed(v),
            Data::Spectral(c) => Cow::Owned(self.grid.inverse_real(c)),
        }
    }

    /// Fourier coefficients, transforming if needed.
    pub fn spectral(&self) -> Cow<'_, [Complex64]> {
        match &self.data {
            Data::Spectral(c) => Cow::Borrowed(c),
            Data::Physical(v) => Cow::Owned(self.grid.forward_real(v)),
        }
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid.n() != other.grid.n() {
            return Err(Error::GridMismatch {
                left: self.grid.n(),
                right: other.grid.n(),
            });
        }
        Ok(())
    }

    /// Grid mean (equals the `k = 0` coefficient).
    pub fn mean(&self) -> f64 {
        match &self.data {
            Data::Spectral(c) => c[0].re,
            Data::Physical(v) => pairwise_sum(v) / v.len() as f64,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.physical().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Value at grid index `(i1, i2)`.
    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        let n = self.grid.n();
        self.physical()[i1 * n + i2]
    }

    /// Returns the field with its mean removed.
    pub fn without_mean(&self) -> Self {
        let mut c = self.spectral().into_owned();
        c[0] = Complex64::default();
        Self::from_spectral(&self.grid, c)
    }

    pub fn scaled(&self, s: f64) -> Self {
        match &self.data {
            Data::Physical(v) => Self::from_physical(&self.grid, v.iter().map(|x| x * s).collect()),
            Data::Spectral(c) => Self::from_spectral(&self.grid, c.iter().map(|x| x * s).collect()),
        }
    }

    /// `self + s * other`, in the view of `self`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        match &self.data {
            Data::Physical(v) => {
                let o = other.physical();
                Self::from_physical(&self.grid, v.iter().zip(o.iter()).map(|(a, b)| a + s * b).collect())
            }
            Data::Spectral(c) => {
                let o = other.spectral();
                Self::from_spectral(&self.grid, c.iter().zip(o.iter()).map(|(a, b)| a + b * s).collect())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    /// Pointwise map in physical space.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_physical(&self.grid, self.physical().iter().map(|&v| f(v)).collect())
    }

    /// Sup-norm distance between two fields on the same grid.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let a = self.physical();
        let b = other.physical();
        a.iter().zip(b.iter()).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
    }

    /// Applies a per-mode multiplier `m(k1, k2)`.
    pub fn apply_multiplier(&self, m: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut c = self.spectral().into_owned();
        for (idx, k1, k2) in self.grid.modes() {
            c[idx] *= m(k1, k2);
        }
        Self::from_spectral(&self.grid, c)
    }
}

/// A pair of scalar components `(v1, v2)`.
#[derive(Clone, Debug)]
pub struct VectorField2D {
    pub x1: ScalarField2D,
    pub x2: ScalarField2D,
    /// Set by constructors that are divergence-free by construction.
    pub divergence_free: bool,
}

impl VectorField2D {
    pub fn new(x1: ScalarField2D, x2: ScalarField2D) -> Self {
        Self {
            x1,
            x2,
            divergence_free: false,
        }
    }

    pub fn zeros(grid: &Arc<FourierGrid>) -> Self {
        Self {
            x1: ScalarField2D::zeros(grid),
            x2: ScalarField2D::zeros(grid),
            divergence_free: true,
        }
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        self.x1.grid()
    }

    /// Largest Euclidean length over the grid.
    pub fn max_abs(&self) -> f64 {
        let a = self.x1.physical();
        let b = self.x2.physical();
        a.iter().zip(b.iter()).fold(0.0_f64, |m, (x, y)| m.max(x.hypot(*y)))
    }

    /// `v^perp = (-v2, v1)`.
    pub fn perp(&self) -> Self {
        Self {
            x1: self.x2.scaled(-1.0),
            x2: self.x1.clone(),
            divergence_free: false,
        }
    }
}

/// Deterministic pairwise summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}
