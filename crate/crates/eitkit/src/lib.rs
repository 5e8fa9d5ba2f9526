//! Simulation and classification toolkit for the 2D EIT inclusion problem.
//!
//! The crate simulates Dirichlet-to-Neumann (D-N) matrices for a circular
//! saline tank with circular inclusions using a P1 finite-element forward
//! solver, and trains a feed-forward network and a quadratic-kernel SVM to
//! detect inclusion presence, count, radius, and anisotropy from those
//! matrices.
//!
//! Pipeline: [`phantom`] describes conductivity scenarios, [`mesh`] builds
//! the disk triangulation, [`forward`] solves the Dirichlet problem and
//! assembles D-N matrices, [`dataset`] orchestrates labeled generation and
//! persistence, [`ann`] / [`svm`] are the classifiers, and [`experiments`]
//! reproduces the end-to-end classification tasks and sweeps.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod ann;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod forward;
pub mod geom;
pub mod linalg;
pub mod mesh;
pub mod phantom;
pub mod svm;

pub use error::{EitError, Result};

/// Tank radius used throughout the experiments, in meters.
pub const TANK_RADIUS: f64 = 0.28;

/// Background (saline) conductivity in S/m.
pub const TANK_CONDUCTIVITY: f64 = 1.45;
