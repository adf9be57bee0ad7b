//! Weak-coupling thermodynamics of small quantum systems between two
//! fermionic thermal reservoirs.
//!
//! The crate builds Davies generators for a finite-dimensional system
//! coupled to left/right reservoirs with KMS spectral functions, computes
//! the non-equilibrium steady state, and evaluates the algebraic criteria
//! (effective coupling and trivial commutants) that guarantee strictly
//! positive entropy production together with the resulting energy flux.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod lindblad;
pub mod matrix;
pub mod models;
pub mod report;
pub mod reservoir;
pub mod spectral;

pub use analysis::{CommutantReport, CriteriaVerdicts, ThermoReport};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use lindblad::SuperOperator;
pub use matrix::{ComplexMatrix, EigenSystem};
pub use models::ModelSpec;
pub use reservoir::{LambShiftMode, ReservoirSpec, SpectralFamily};
pub use spectral::{JumpOperators, SpectralDecomposition};
