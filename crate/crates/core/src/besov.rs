//! Littlewood–Paley blocks and the Lebesgue, Besov and Lipschitz norms built
//! on them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::spectral::{derivative, pairwise_sum, Axis, FourierGrid, ScalarField2D, VectorField2D};

/// Radial cutoff: 1 on `[0, 1]`, `cos^2(pi/2 log2 r)` on `[1, 2]`, 0 beyond.
pub fn cutoff(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        (FRAC_PI_2 * r.log2()).cos().powi(2)
    }
}

/// Dyadic partition of unity on a grid, blocks `j = -1 ..= j_max`.
///
/// Block `-1` is `cutoff(2r)`, block `j` is `cutoff(r/2^j) - cutoff(r/2^(j-1))`,
/// and the top block absorbs everything above `2^(j_max-1)` so the blocks sum
/// to one on every mode of the grid.
#[derive(Clone, Debug)]
pub struct LittlewoodPaley {
    grid: Arc<FourierGrid>,
    j_max: i32,
    radius: Vec<f64>,
}

pub type DyadicPartition = LittlewoodPaley;

impl LittlewoodPaley {
    pub fn new(grid: &Arc<FourierGrid>) -> Self {
        let j_max = grid.k_max().log2().floor() as i32;
        let radius = grid.k_squared().iter().map(|k2| k2.sqrt()).collect();
        Self {
            grid: Arc::clone(grid),
            j_max,
            radius,
        }
    }

    pub fn grid(&self) -> &Arc<FourierGrid> {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        -1
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        -1..=self.j_max
    }

    /// Radial weight of block `j` at `|k| = r`.
    pub fn weight(&self, j: i32, r: f64) -> f64 {
        if j == -1 {
            cutoff(2.0 * r)
        } else if j == self.j_max {
            1.0 - cutoff(r / 2f64.powi(j - 1))
        } else {
            cutoff(r / 2f64.powi(j)) - cutoff(r / 2f64.powi(j - 1))
        }
    }

    fn check(&self, j: i32) -> Result<()> {
        if j < -1 || j > self.j_max {
            return Err(Error::OutOfRange { j, j_max: self.j_max });
        }
        Ok(())
    }

    fn block_spectrum(&self, f: &ScalarField2D, j: i32) -> Vec<rustfft::num_complex::Complex64> {
        f.spectral()
            .iter()
            .zip(&self.radius)
            .map(|(&c, &r)| c * self.weight(j, r))
            .collect()
    }

    /// `Delta_j f`.
    pub fn block(&self, f: &ScalarField2D, j: i32) -> Result<ScalarField2D> {
        self.check(j)?;
        Ok(ScalarField2D::from_spectral(&self.grid, self.block_spectrum(f, j)))
    }

    /// Per-block `L^p` norms of a (possibly multi-component) field, joint
    /// across components, in block order.
    pub fn block_norms(&self, components: &[&ScalarField2D], p: f64) -> Vec<f64> {
        self.blocks()
            .map(|j| {
                if p == 2.0 {
                    // Parseval: |Delta_j f|_{L^2} = 2 pi |phi_j f^|_{l^2}
                    let s: f64 = components
                        .iter()
                        .map(|f| {
                            let sq: Vec<f64> = self.block_spectrum(f, j).iter().map(|c| c.norm_sqr()).collect();
                            pairwise_sum(&sq)
                        })
                        .sum();
                    2.0 * PI * s.sqrt()
                } else {
                    let blocks: Vec<Vec<f64>> = components
                        .iter()
                        .map(|f| self.grid.inverse_real(&self.block_spectrum(f, j)))
                        .collect();
                    let pointwise: Vec<f64> = (0..self.grid.len())
                        .map(|i| blocks.iter().map(|b| b[i] * b[i]).sum::<f64>().sqrt())
                        .collect();
                    lp_of_samples(&pointwise, p, self.grid.cell_area())
                }
            })
            .collect()
    }

    /// `|f|_{B^s_{p,q}}`; low block weighted by 1, block `j >= 0` by `2^{js}`.
    pub fn besov_norm(&self, f: &ScalarField2D, spec: BesovSpec) -> f64 {
        self.besov_norm_multi(&[f], spec)
    }

    /// Besov norm of a vector-valued field (joint `L^p` norm per block).
    pub fn besov_norm_multi(&self, components: &[&ScalarField2D], spec: BesovSpec) -> f64 {
        let terms: Vec<f64> = self
            .block_norms(components, spec.p)
            .into_iter()
            .zip(self.blocks())
            .map(|(b, j)| if j < 0 { b } else { 2f64.powf(j as f64 * spec.s) * b })
            .collect();
        if spec.q.is_infinite() {
            terms.into_iter().fold(0.0, f64::max)
        } else if spec.q == 1.0 {
            pairwise_sum(&terms)
        } else {
            let t: Vec<f64> = terms.iter().map(|t| t.powf(spec.q)).collect();
            pairwise_sum(&t).powf(1.0 / spec.q)
        }
    }

    /// SHA-256 of the tabulated radial profile, hex encoded.
    pub fn profile_hash(&self) -> String {
        profile_hash()
    }
}

/// Identifies the radial cutoff so records computed with different profiles
/// are never compared silently.
pub fn profile_hash() -> String {
    let mut h = Sha256::new();
    h.update(b"lp-cos2-log2-v1");
    for i in 0..=2048 {
        h.update(cutoff(i as f64 / 1024.0).to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Indices `(s, p, q)` of `B^s_{p,q}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovSpec {
    pub const B1_21: Self = Self { s: 1.0, p: 2.0, q: 1.0 };
    pub const B2_21: Self = Self { s: 2.0, p: 2.0, q: 1.0 };
    pub const B0_INF1: Self = Self {
        s: 0.0,
        p: f64::INFINITY,
        q: 1.0,
    };

    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        if !s.is_finite() || !(p >= 1.0) || !(q >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Besov indices need p, q in [1, inf]; got s={s}, p={p}, q={q}"
            )));
        }
        Ok(Self { s, p, q })
    }

    /// The critical space `B^{2/p}_{p,1}` in two dimensions.
    pub fn critical(p: f64) -> Result<Self> {
        Self::new(2.0 / p, p, 1.0)
    }
}

pub fn dyadic_block(f: &ScalarField2D, j: i32) -> Result<ScalarField2D> {
    LittlewoodPaley::new(f.grid()).block(f, j)
}

pub fn besov_norm(f: &ScalarField2D, spec: BesovSpec) -> f64 {
    LittlewoodPaley::new(f.grid()).besov_norm(f, spec)
}

/// Joint norm of a vector field: per block, the `L^p` norm of the pointwise
/// Euclidean length.
pub fn besov_norm_multi(components: &[&ScalarField2D], spec: BesovSpec) -> f64 {
    LittlewoodPaley::new(components[0].grid()).besov_norm_multi(components, spec)
}

fn lp_of_samples(v: &[f64], p: f64, cell: f64) -> f64 {
    if p.is_infinite() {
        return v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    }
    let pow: Vec<f64> = v.iter().map(|x| x.abs().powf(p)).collect();
    (pairwise_sum(&pow) * cell).powf(1.0 / p)
}

/// Midpoint-rule `L^p` norm over the torus; `p = inf` gives the max.
pub fn lebesgue_norm(f: &ScalarField2D, p: f64) -> f64 {
    lp_of_samples(&f.physical(), p, f.grid().cell_area())
}

/// Joint `L^p` norm of several components (pointwise Euclidean length).
pub fn lebesgue_norm_multi(components: &[&ScalarField2D], p: f64) -> f64 {
    let phys: Vec<_> = components.iter().map(|f| f.physical()).collect();
    let n = components[0].grid().len();
    let pointwise: Vec<f64> = (0..n)
        .map(|i| phys.iter().map(|v| v[i] * v[i]).sum::<f64>().sqrt())
        .collect();
    lp_of_samples(&pointwise, p, components[0].grid().cell_area())
}

/// `max_x max_{i,l} |d_i v_l(x)|` with spectral derivatives.
pub fn lipschitz_seminorm(v: &VectorField2D) -> f64 {
    [&v.x1, &v.x2]
        .into_iter()
        .flat_map(|c| [derivative(c, Axis::X1), derivative(c, Axis::X2)])
        .map(|d| d.max_abs())
        .fold(0.0, f64::max)
}
