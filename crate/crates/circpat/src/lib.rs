//! Circle patterns with prescribed intersection angles on disk-like cell
//! complexes: variational solvers, conjugation, layout and diagnostics.

pub mod analysis;
pub mod cell_complex;
pub mod cli_io;
pub mod error;
pub mod functionals;
pub mod kite_geometry;
pub mod pattern_engine;

pub use error::{Error, Result};
