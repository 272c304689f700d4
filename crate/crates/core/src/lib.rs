//! Spectral solver for the quantum Rabi model
//!
//! ```text
//! H = ω a†a + g σz (a + a†) + Δ σx
//! ```
//!
//! The regular spectrum is obtained from the zeros of the transcendental
//! functions `G±(x)`, with `E = x − g²/ω`. Eigenvalues sitting exactly on
//! `x = nω` (the exceptional spectrum) are classified from the pole structure
//! of `G±`: the Juddian constraint `K_n(nω) = 0` removes the pole from both
//! functions and yields a doubly degenerate level, while a vanishing residue
//! cofactor removes it from only one of them.
//!
//! Everything is checked against an independent exact diagonalization of the
//! Hamiltonian in a truncated Fock basis (see [`oracle`]).

pub mod contour;
pub mod eigen;
mod error;
pub mod exceptional;
pub mod gfunction;
pub mod oracle;
pub mod params;
pub mod rootfinder;
pub mod verify;

pub use error::{Error, Result};
pub use params::{energy_from_x, validate_params, x_from_energy, Energy, EnergyKind, ModelParams, Parity, SpectralPoint};
