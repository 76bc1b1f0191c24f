//! Generalized Hartree-Fock over fermionic Gaussian states: covariance
//! matrices, Pfaffian machinery, Wick expectation values, energy
//! minimization and statevector synthesis.

pub mod covariance;
pub mod energy;
pub mod minimize;
pub mod pfaffian;
pub mod synthesis;

pub use covariance::{CovarianceMatrix, MajoranaOrdering};
pub use energy::{ghf_energy, mean_field_matrix, wick_expectation, MajoranaPolynomialEnergy};
pub use minimize::{ghf_minimize, GhfOptions, GhfResult, Parity};
pub use pfaffian::{pfaffian, pfaffian_gradient};
pub use synthesis::{covariance_from_state, occupied_orbitals, slater_determinant, synthesize_fgs_state};
