//! Two-particle scattering in the two-dimensional Galilean Lee model.
//!
//! The model couples a heavy composite `V` to an `N` + `theta` pair through a
//! Yukawa-type vertex with a momentum-space form factor. This crate computes
//! the pair self-energy, the dressed inverse propagator of `V`, the
//! interaction-induced bound state and its renormalized couplings, and the
//! s-wave scattering observables (differential and total cross section, phase
//! shift, S-matrix element). The contact limit of an infinite bare coupling
//! reproduces the cross section of a two-dimensional delta-function potential.
//!
//! Conventions used throughout:
//!
//! * masses `M` (for `N`) and `m` (for `theta`) combine as `calM = M + m` and
//!   `mu = M m / calM`; energies split as `E = P^2/(2 calM) + k^2/(2 mu)`;
//! * the scattering boundary value is taken at `U = E + i0+`, with the branch
//!   `ln(-U) = ln E - i pi` on the upper lip of the cut;
//! * form factors are real, normalized to `f(0) = 1`, non-increasing in the
//!   relative momentum.

pub mod cli;
pub mod error;
pub mod model;
pub mod propagator;
pub mod renorm;
pub mod scattering;
pub mod verify;

mod quad;

pub use error::{Error, Result};
pub use model::{BareCouplings, FormFactor, KinematicState, MassSpectrum, ModelParams};
pub use propagator::EvaluationPoint;
pub use renorm::{BareCouplingSq, PhysicalParams};
pub use scattering::CrossSectionPoint;
pub use verify::OracleReport;
