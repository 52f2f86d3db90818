//! Ground-state degeneracy of qubit Hamiltonians from their ququart lift.
//!
//! A Hamiltonian `H` on `n` qubits is mapped to a Hamiltonian `H̃` on `n`
//! ququarts whose states are vectorized operators. Evolving the vacuum
//! `|0̃⟩ = 2^{-n/2}|I⟩` towards the ground sector of `H̃` and reading out
//! `2^n |⟨0̃|ψ̃⟩|²` gives the degeneracy of the ground level of `H`.

pub mod dense;
pub mod error;
pub mod hamiltonian;
pub mod ite;
pub mod kernel;
pub mod lanczos;
pub mod mps;
pub mod pauli_algebra;
pub mod readout;
pub mod runner;
pub mod scalar;
pub mod super_map;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use hamiltonian::{HamiltonianSpec, LocalSpace, PauliTerm};
pub use pauli_algebra::{BasisCode, Variant};
pub use readout::DegeneracyResult;
