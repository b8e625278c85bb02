//! Periodic grids, fields and Fourier-multiplier operators.

mod field;
mod grid;
mod interp;
mod ops;

pub use field::{pairwise_sum, ScalarField2D, VectorField2D, View};
pub use grid::{Axis, FourierGrid};
pub use interp::SplineInterpolant;
pub use ops::*;
