//! Exact (untrotterized) imaginary time evolution `e^{-τH}ψ / ‖·‖`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::trace::{EvolutionTrace, TraceRow};
use crate::diagnostics::spectrum::DENSE_QUBIT_CAP;
use crate::hamiltonians::ProblemHamiltonian;
use crate::operators::dense::spin_operator_matrix_real;
use crate::operators::{apply_exp_hermitian, expectation, SpinOperator, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ExactIteConfig {
    /// Recording interval in imaginary time.
    pub record_stride: f64,
    /// Sub-step used by the series path above the dense cutoff
    /// (quasi-exact: no term splitting, short exponential steps).
    pub series_dtau: f64,
}

impl Default for ExactIteConfig {
    fn default() -> Self {
        ExactIteConfig { record_stride: 0.1, series_dtau: 0.01 }
    }
}

/// Evolve `ψ` to `e^{-τ_max H}ψ/‖·‖`, recording energy (and fidelity against
/// `reference`, when given) every `record_stride` of imaginary time.
///
/// Up to 14 qubits this uses a dense eigendecomposition; above, repeated
/// short exponential steps of the full Hamiltonian.
///
/// The initial state must have nonzero ground-state overlap for the infinite
/// time limit to reach the ground state; this is not checkable a priori.
pub fn exact_ite(
    h: &ProblemHamiltonian,
    psi_init: &StateVector,
    tau_max: f64,
    reference: Option<&StateVector>,
    cfg: &ExactIteConfig,
) -> Result<(EvolutionTrace, StateVector)> {
    if tau_max < 0.0 {
        return Err(Error::InvalidArgument(format!("negative evolution time {tau_max}")));
    }
    let n = h.n_qubits();
    if psi_init.n_qubits() != n {
        return Err(Error::DimensionMismatch(format!(
            "state has {} qubits, Hamiltonian needs {n}",
            psi_init.n_qubits()
        )));
    }
    let op = h.total_spin_operator()?;
    if n <= DENSE_QUBIT_CAP {
        dense_exact_ite(&op, n, psi_init, tau_max, reference, cfg)
    } else {
        series_exact_ite(&op, psi_init, tau_max, reference, cfg)
    }
}

fn record(
    trace: &mut EvolutionTrace,
    tau: f64,
    op: &SpinOperator,
    psi: &StateVector,
    reference: Option<&StateVector>,
    c_norm: Option<f64>,
) -> Result<()> {
    let energy = expectation(op, psi)?.re;
    let fidelity = match reference {
        Some(r) => Some(psi.fidelity(r)?),
        None => None,
    };
    trace.push(TraceRow { tau, energy, fidelity, c_norm, residual: None });
    Ok(())
}

fn dense_exact_ite(
    op: &SpinOperator,
    n: usize,
    psi_init: &StateVector,
    tau_max: f64,
    reference: Option<&StateVector>,
    cfg: &ExactIteConfig,
) -> Result<(EvolutionTrace, StateVector)> {
    let m = spin_operator_matrix_real(op, n)?;
    let eig = nalgebra::SymmetricEigen::new(m);
    let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    // complex amplitudes in the eigenbasis
    let dim = 1usize << n;
    let basis: &DMatrix<f64> = &eig.eigenvectors;
    let re = DVector::from_iterator(dim, psi_init.amplitudes().iter().map(|a| a.re));
    let im = DVector::from_iterator(dim, psi_init.amplitudes().iter().map(|a| a.im));
    let coeff_re = basis.transpose() * re;
    let coeff_im = basis.transpose() * im;

    let state_at = |tau: f64| -> Result<StateVector> {
        let mut wr = DVector::zeros(dim);
        let mut wi = DVector::zeros(dim);
        for k in 0..dim {
            // shift by e0 so weights stay bounded
            let w = (-(eig.eigenvalues[k] - e0) * tau).exp();
            wr[k] = coeff_re[k] * w;
            wi[k] = coeff_im[k] * w;
        }
        let vr = basis * wr;
        let vi = basis * wi;
        let amps: Vec<Complex64> =
            (0..dim).map(|i| Complex64::new(vr[i], vi[i])).collect();
        StateVector::from_amplitudes(amps)
    };

    let mut trace = EvolutionTrace::new();
    let mut tau = 0.0;
    record(&mut trace, 0.0, op, psi_init, reference, None)?;
    let stride = cfg.record_stride.max(1e-12);
    while tau + stride <= tau_max + 1e-12 {
        tau += stride;
        let s = state_at(tau)?;
        record(&mut trace, tau, op, &s, reference, None)?;
    }
    let final_state = state_at(tau_max)?;
    if tau_max > tau + 1e-12 {
        record(&mut trace, tau_max, op, &final_state, reference, None)?;
    }
    Ok((trace, final_state))
}

fn series_exact_ite(
    op: &SpinOperator,
    psi_init: &StateVector,
    tau_max: f64,
    reference: Option<&StateVector>,
    cfg: &ExactIteConfig,
) -> Result<(EvolutionTrace, StateVector)> {
    let mut trace = EvolutionTrace::new();
    record(&mut trace, 0.0, op, psi_init, reference, None)?;
    let mut psi = psi_init.clone();
    let dt = cfg.series_dtau;
    let n_steps = (tau_max / dt).round().max(0.0) as usize;
    let mut tau = 0.0;
    let mut next_record = cfg.record_stride;
    for _ in 0..n_steps {
        let r = apply_exp_hermitian(op, Complex64::new(-dt, 0.0), &psi, 1e-14)?;
        psi = r.state;
        tau += dt;
        if tau + 1e-12 >= next_record {
            record(&mut trace, tau, op, &psi, reference, None)?;
            next_record += cfg.record_stride;
        }
    }
    Ok((trace, psi))
}
