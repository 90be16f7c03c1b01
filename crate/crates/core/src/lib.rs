//! Symbolic–numeric verification of a Moralès–Ramis non-integrability argument
//! for the minimum-time controlled Kepler problem.

pub mod classify;
pub mod error;
pub mod exactfield;
pub mod fixtures;
pub mod mechanics;
pub mod monodromy;
pub mod ode;
pub mod opalgebra;
pub mod symexpr;
pub mod variational;

pub use error::{Error, ParseError, Result};
