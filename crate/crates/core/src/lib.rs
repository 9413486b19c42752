//! Contraction and synchronization certificates for diffusively coupled systems.
//!
//! The crate is layered bottom-up:
//!
//! * [`matrix`] / [`linalg`]: small dense matrices and a cyclic Jacobi eigensolver.
//! * [`measures`]: weighted `p`-norms (`p ∈ {1, 2, ∞}`), induced norms, matrix
//!   measures (logarithmic norms) and semi-inner products.
//! * [`graphs`]: Laplacians, incidence and edge Laplacians, algebraic connectivity.
//! * [`models`]: built-in vector fields with analytic Jacobians.
//! * [`certify`]: sampled suprema of shifted-Jacobian measures and the
//!   synchronization conditions built on them.
//! * [`simulate`]: network assembly, RK4 integration, norm series and bound checks.

pub mod certify;
pub mod error;
pub mod graphs;
pub mod linalg;
pub mod matrix;
pub mod measures;
pub mod models;
pub mod simulate;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use measures::{Norm, NormSpec};
