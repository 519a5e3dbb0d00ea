//! SO(5)-invariant interacting boson model interpolating between the U(5)
//! and O(6) dynamical symmetries,
//!
//! ```text
//! H(alpha) = (1 - alpha) n_d + (alpha / N) S+ S-
//! ```
//!
//! The Hamiltonian conserves d-boson seniority `v`, so every computation runs
//! on tridiagonal blocks in the `|N, n, v>` basis generated by the
//! SU(1,1)^s x SU(1,1)^d pair algebra. Around the exact solutions sit two
//! harmonic pictures: the RPA about the s-boson condensate (alpha < 1/2) and a
//! continuum Gaussian approximation of the deformed phase (alpha > 1/2).
//! A brute-force m-scheme Fock-space construction ([`oracle`]) backs the
//! reduced matrix elements.

pub mod classical;
pub mod eigen;
mod error;
pub mod harmonic;
pub mod observables;
pub mod oracle;
pub mod rpa;
pub mod scan;
pub mod sector;

pub use eigen::{solve, EigenDecomposition};
pub use error::{Error, Result};
pub use sector::{ModelParams, ModelSector, TridiagonalOperator};
