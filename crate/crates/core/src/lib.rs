//! Wigner-Yanase-Dyson uncertainty measures for finite-dimensional density
//! matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, a Jacobi eigensolver for Hermitian
//!   matrices, spectral powers, tensor products and partial traces.
//! * [`states`]: validated density matrices, named states (Werner family,
//!   Hansen's example, pure and maximally mixed) and the JSON state file.
//! * [`observables`]: Hermitian observables and orthonormal observable bases.
//! * [`measures`]: variance, WYD information `I_α(ρ, X)`, Luo's `L(ρ)`,
//!   `Q_α(ρ)`, `Q*(ρ)`, entropies, the critical-α solver and the property
//!   ledger.
//! * [`cli`]: the `qumetrics` command-line front end.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod observables;
pub mod random;
pub mod states;

pub use error::{Error, Result};
