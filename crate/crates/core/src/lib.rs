//! Topological flow data analysis for doubly periodic two-dimensional
//! Hamiltonian (stream-function) fields.
//!
//! The pipeline turns a periodic scalar field into a Reeb graph on the torus,
//! cuts the graph's single cycle along an essential periodic orbit, labels
//! the resulting rooted tree with orbit-structure symbols and serializes it
//! as a COT string. Terminal vortices are read off the filtered tree and
//! summarized statistically.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the common `f64` instantiations.

pub mod calculus;
pub mod cot;
pub mod cotlang;
mod error;
pub mod fieldio;
pub mod mesh;
pub mod morse;
pub mod pipeline;
pub mod reeb;
mod scalar;
pub mod special;
pub mod stats;
pub mod vortex;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double precision scalar field.
pub type Field = fieldio::ScalarField<f64>;
/// Single precision scalar field.
pub type Field32 = fieldio::ScalarField<f32>;
pub type Velocity = calculus::VectorField<f64>;
pub type EnergySpectrum = calculus::Spectrum<f64>;
pub type Critical = morse::CriticalPoint<f64>;
pub type Reeb = reeb::ReebGraph<f64>;
pub type Cot = cot::CotTree<f64>;
pub type Vortex = vortex::TerminalVortex<f64>;
pub type Fit = stats::FitResult<f64>;
pub type Analysis = pipeline::Analysis<f64>;
