//! Second-order trotterized imaginary time evolution: per-substep
//! `e^{-Δτ·fraction·h[f(l)]}` with renormalization, recording once per full
//! step.

use num_complex::Complex64;

use super::trace::{EvolutionTrace, TraceRow};
use crate::hamiltonians::{ProblemHamiltonian, TrotterSchedule};
use crate::operators::{apply_exp_hermitian, expectation, SpinOperator, StateVector};
use crate::{Error, Result};

/// Run the schedule over `h`'s terms. Records `(τ, energy, fidelity, c)` per
/// full step, where `c` is the product of the substep normalization
/// constants `c_l = ‖e^{-Δτ·frac·h[l]}ψ‖²`.
pub fn trotterized_ite(
    h: &ProblemHamiltonian,
    schedule: &TrotterSchedule,
    psi_init: &StateVector,
    reference: Option<&StateVector>,
) -> Result<(EvolutionTrace, StateVector)> {
    let n = h.n_qubits();
    if psi_init.n_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "state has {} qubits, Hamiltonian needs {n}",
            psi_init.n_qubits()
        )));
    }
    let term_ops: Vec<SpinOperator> =
        (0..h.n_terms()).map(|i| h.term_spin_operator(i)).collect::<Result<_>>()?;
    for (idx, _) in &schedule.per_step {
        if *idx >= term_ops.len() {
            return Err(Error::InvalidArgument(format!(
                "schedule references term {idx}, Hamiltonian has {}",
                term_ops.len()
            )));
        }
    }
    let total_op = h.total_spin_operator()?;

    let mut trace = EvolutionTrace::new();
    let e0 = expectation(&total_op, psi_init)?.re;
    let f0 = match reference {
        Some(r) => Some(psi_init.fidelity(r)?),
        None => None,
    };
    trace.push(TraceRow { tau: 0.0, energy: e0, fidelity: f0, c_norm: None, residual: None });

    let mut psi = psi_init.clone();
    for step in 1..=schedule.n_steps {
        let mut log_c = 0.0f64;
        for &(idx, frac) in &schedule.per_step {
            let scale = Complex64::new(-schedule.dtau * frac, 0.0);
            let r = apply_exp_hermitian(&term_ops[idx], scale, &psi, 1e-14)?;
            psi = r.state;
            // c_l = ‖e^{-Δτ·frac·h}ψ‖²
            log_c += 2.0 * r.log_norm;
        }
        let tau = schedule.dtau * step as f64;
        let energy = expectation(&total_op, &psi)?.re;
        let fidelity = match reference {
            Some(r) => Some(psi.fidelity(r)?),
            None => None,
        };
        trace.push(TraceRow {
            tau,
            energy,
            fidelity,
            c_norm: Some(log_c.exp()),
            residual: None,
        });
    }
    Ok((trace, psi))
}
