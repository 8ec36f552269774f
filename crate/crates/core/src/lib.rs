//! Matrix-level geometry of the real Jacobi group `G^J_n(R) = H_n(R) ⋊ Sp(n, R)`.
//!
//! The crate covers the Heisenberg and symplectic factors, the embedding of
//! the Jacobi group into `Sp(n+1, R)`, its actions on the Siegel-Jacobi upper
//! half space, invariant one-forms and vector fields, invariant metrics and
//! Kähler forms, and numerical invariance checks.

pub mod algebra;
pub mod error;
pub mod fd;
pub mod forms;
pub mod heisenberg;
pub mod invariance;
pub mod jacobi;
pub mod linalg;
pub mod metrics;
pub mod sampling;
pub mod symplectic;

pub use error::{Error, Result};
