//! Numerical laboratory for emergent gauge structure of neutral spin-1/2 and
//! spin-1 particles moving through vortex magnetic fields.
//!
//! All quantities use units with ħ = 1 unless a function takes ħ explicitly.

pub mod boson;
pub mod error;
pub mod field;
pub mod fringe;
pub mod linalg;
pub mod partition;
pub mod revival;
pub mod rotor;
pub mod spin;
pub mod spin1;
pub mod tdse;
pub mod wilson;

pub use error::{Error, Result};

/// Crate version, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use num_complex::Complex64;
