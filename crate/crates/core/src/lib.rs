//! Quantum hydrodynamics toolkit.
//!
//! - [`fields`]: Madelung decomposition and local hydrodynamic fields of a 1D wavefunction.
//! - [`propagators`]: split-step engines for the standard, Caldirola-Kanai and Kostin
//!   Schrödinger equations, closed-form Gaussian solutions and the classical
//!   Caldirola-Kanai oscillator.
//! - [`trajectory`]: Bohmian trajectory ensembles, non-crossing and probability-tube diagnostics.
//! - [`optics`]: two-Gaussian-slit diffraction, Poynting vector and energy streamlines.
//! - [`scenario`]: line-oriented scenario files, the built-in catalog and run orchestration.

pub mod error;
pub mod fields;
pub mod grid;
pub mod optics;
pub mod propagators;
pub mod scenario;
pub mod table;
pub mod trajectory;

pub use error::{FieldError, OpticsError, PropagationError, ScenarioError, TrajectoryError};
pub use fields::{ComplexField, PhysicalConstants, PolarFields, ScalarField, VelocityField};
pub use grid::{GridSpec, Stencil};
pub use propagators::{Model, PotentialSpec, Propagator, PropagatorConfig};
