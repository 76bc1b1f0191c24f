//! Numerical laboratory for ground-state preparation by imaginary time
//! evolution (ITE) and its unitary approximation (QITE).
//!
//! The crate builds spin and fermionic lattice Hamiltonians as well as
//! molecular active-space Hamiltonians, prepares mean-field initial states
//! from generalized Hartree-Fock over fermionic Gaussian states, evolves
//! statevectors by exact ITE, second-order trotterized ITE and QITE, and
//! measures energies, fidelities and entanglement diagnostics against an
//! exact-diagonalization oracle.

pub mod diagnostics;
pub mod evolution;
pub mod fgs;
pub mod hamiltonians;
pub mod operators;
pub mod qite;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("site index {index} out of range for {n_qubits} qubits")]
    SiteOutOfRange { index: usize, n_qubits: usize },
    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeOutOfRange { index: usize, n_modes: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("exponential series did not converge within {max_terms} terms (last term norm {last:.3e})")]
    SeriesDiverged { max_terms: usize, last: f64 },
    #[error("matrix has odd dimension {0}, Pfaffian undefined")]
    OddDimension(usize),
    #[error("repeated Majorana index {0} in monomial")]
    RepeatedIndex(usize),
    #[error("covariance matrix is not pure (|Γ²+1| = {0:.3e})")]
    NotPure(f64),
    #[error("columns are not orthonormal (Gram deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("eigensolver did not converge: {0}")]
    EigenFailed(String),
    #[error("iteration did not converge: {0}")]
    NotConverged(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration refused: {0}")]
    Infeasible(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
