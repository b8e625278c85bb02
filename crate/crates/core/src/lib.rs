//! Pseudospectral laboratory for the two-dimensional incompressible
//! Euler–Maxwell system on the torus `[0, 2pi)^2`.

pub mod besov;
pub mod data;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod flow;
pub mod integrators;
pub mod models;
pub mod spectral;

pub use error::{Error, Result};
