//! Phase operators on a finite-dimensional Hilbert space, the deformed
//! oscillator at `q = exp(2πi/(s+1))`, and cyclic evolution, together with
//! numerical checks of the identities that tie them together.

pub mod error;
pub mod evolution;
pub mod gdo;
pub mod cli;
pub mod json;
pub mod numerics;
pub mod phase;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{OperatorMatrix, StateVector, Tag, TolerancePolicy, C64};
pub use phase::SpaceConfig;
