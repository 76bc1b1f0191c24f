//! Exact and second-order trotterized imaginary time evolution.

pub mod exact;
pub mod trace;
pub mod trotter;

pub use exact::{exact_ite, ExactIteConfig};
pub use trace::{EvolutionTrace, TraceRow};
pub use trotter::trotterized_ite;

use crate::{Error, Result};

/// Planning estimate for the imaginary time needed to reach overlap error
/// `η`: `τ_η = log(1/(γ_init·η)) / Δ` with the big-O constant set to one.
pub fn estimate_tau_eta(gap_lower_bound: f64, gamma_init: f64, eta: f64) -> Result<f64> {
    if gap_lower_bound <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "gap lower bound must be positive, got {gap_lower_bound}"
        )));
    }
    if !(0.0 < gamma_init && gamma_init <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "initial overlap must lie in (0, 1], got {gamma_init}"
        )));
    }
    if !(0.0 < eta && eta <= 1.0) {
        return Err(Error::InvalidArgument(format!("precision must lie in (0, 1], got {eta}")));
    }
    Ok((1.0 / (gamma_init * eta)).ln() / gap_lower_bound)
}
