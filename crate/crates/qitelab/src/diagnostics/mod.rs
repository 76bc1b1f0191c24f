//! Exact-diagonalization oracle, fidelities, reduced density matrices,
//! orbital entropies, mutual information and the multi-configurational
//! diagnostic.

pub mod rdm;
pub mod spectrum;

pub use rdm::{multiref_diagnostic, mutual_information, orbital_rdm, MutualInfoMatrix};
pub use spectrum::{
    spectrum, spectrum_of_operator, SpectrumConfig, SpectrumMethod, SpectrumResult,
};

use crate::operators::StateVector;
use crate::Result;

/// Squared overlap `|⟨ψ|φ⟩|²`.
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    psi.fidelity(phi)
}
