//! Optimal symmetric 1→2 cloning of qubits drawn from axisymmetric
//! distributions on the Bloch sphere.
//!
//! The optimal cloner depends on the input ensemble only through its first
//! two Legendre moments. The crate is layered accordingly:
//!
//! - [`dist`]: distributions and their moments, backed by [`quadrature`].
//! - [`optimal`]: closed-form optimal angles and fidelities.
//! - [`qsim`]: exact three-qubit simulation of the cloning isometry.
//! - [`choi`]: Choi-matrix view, merit operator and numerical optimality checks.
//! - [`circuit`]: the gate sequence realizing the cloner.
//! - [`distspec`]: textual distribution and sweep specifications.

pub mod choi;
pub mod circuit;
pub mod dist;
pub mod distspec;
pub mod error;
pub mod legendre;
pub mod linalg;
pub mod optimal;
pub mod qsim;
pub mod quadrature;
pub mod search;
pub mod table;

pub use dist::{validate_moments, AxisDirection, AxisDistribution, DistKind, MomentPair};
pub use error::{Error, Result};
pub use optimal::{
    average_fidelity, numeric_optimum, optimal_angles, single_copy_fidelity, ClonerParams,
    CloningAngles, Regime,
};
