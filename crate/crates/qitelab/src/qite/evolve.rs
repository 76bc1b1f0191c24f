//! The unitary-fit evolution loop: per grouped term per substep, build the
//! Gram system, solve for the Hermitian generator, apply its exponential.

use num_complex::Complex64;

use super::basis::{fermionic_basis, spin_basis, FermionicGenerator, SpinBasis};
use super::domains::{BasisKind, DomainPlan};
use super::linsys::{
    build_fermionic_linear_system, build_spin_linear_system, coeffs_to_window, solve_for_a,
    window_view, SolverConfig, WindowView,
};
use super::window::FermionWindowEngine;
use crate::evolution::trace::{EvolutionTrace, TraceRow};
use crate::hamiltonians::schedule::make_trotter_schedule_over;
use crate::hamiltonians::{ProblemHamiltonian, TermOperator};
use crate::operators::jw::jordan_wigner;
use crate::operators::pauli::SpinOperator;
use crate::operators::statevector::{apply_exp_hermitian, expectation};
use crate::operators::{FermionOperator, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct QiteConfig {
    pub dtau: f64,
    pub n_steps: usize,
    pub solver: SolverConfig,
    /// Cap on spin domains (`4^cap` basis strings).
    pub spin_domain_cap: usize,
    /// Use the mode-window engine for fermionic systems above this qubit
    /// count; below it the generic statevector path is cheaper.
    pub window_engine_above: usize,
}

impl Default for QiteConfig {
    fn default() -> Self {
        QiteConfig {
            dtau: 0.1,
            n_steps: 100,
            solver: SolverConfig::default(),
            spin_domain_cap: super::basis::SPIN_DOMAIN_CAP,
            window_engine_above: 14,
        }
    }
}

enum GroupEngine {
    Spin { basis: SpinBasis, h_group: SpinOperator, view: WindowView },
    FermionGeneric { generators: Vec<FermionicGenerator>, h_group: SpinOperator },
    FermionWindow(FermionWindowEngine),
}

/// Evolve `ψ` by the grouped unitary fit; records one row per full step
/// with the largest solver residual over the step's substeps. A zero-step
/// run records the initial state only.
pub fn qite_evolve(
    h: &ProblemHamiltonian,
    plan: &DomainPlan,
    cfg: &QiteConfig,
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
    if plan.kind != h.kind || plan.n_sites != h.n_sites {
        return Err(Error::InvalidArgument(
            "domain plan was built for a different Hamiltonian".into(),
        ));
    }

    // grouped operators and engines
    let mut engines = Vec::with_capacity(plan.groups.len());
    for group in &plan.groups {
        match plan.basis {
            BasisKind::FullPauli => {
                let mut acc = SpinOperator::zero();
                for &idx in &group.term_indices {
                    match &h.terms[idx].operator {
                        TermOperator::Spin(op) => acc = acc.add(op),
                        TermOperator::Fermion(_) => {
                            return Err(Error::InvalidArgument(
                                "fermionic term under a full Pauli plan".into(),
                            ))
                        }
                    }
                }
                let basis = spin_basis(&group.domain, cfg.spin_domain_cap)?;
                let view = window_view(basis.sites(), n);
                engines.push(GroupEngine::Spin { basis, h_group: acc, view });
            }
            BasisKind::SinglesDoubles => {
                let mut acc = FermionOperator::zero();
                for &idx in &group.term_indices {
                    match &h.terms[idx].operator {
                        TermOperator::Fermion(op) => acc = acc.add(op),
                        TermOperator::Spin(_) => {
                            return Err(Error::InvalidArgument(
                                "spin term under a singles/doubles plan".into(),
                            ))
                        }
                    }
                }
                let h_group = jordan_wigner(&acc, h.n_modes)?;
                let generators = fermionic_basis(&group.domain, h.n_sites)?;
                if n > cfg.window_engine_above {
                    let modes: Vec<usize> =
                        group.domain.iter().flat_map(|&p| [2 * p, 2 * p + 1]).collect();
                    engines.push(GroupEngine::FermionWindow(FermionWindowEngine::build(
                        &modes,
                        &generators,
                        &h_group,
                        n,
                    )?));
                } else {
                    engines.push(GroupEngine::FermionGeneric { generators, h_group });
                }
            }
        }
    }

    let total_op = h.total_spin_operator()?;
    let mut trace = EvolutionTrace::new();
    let record = |trace: &mut EvolutionTrace,
                  tau: f64,
                  psi: &StateVector,
                  residual: Option<f64>|
     -> Result<()> {
        let energy = expectation(&total_op, psi)?.re;
        let fidelity = match reference {
            Some(r) => Some(psi.fidelity(r)?),
            None => None,
        };
        trace.push(TraceRow { tau, energy, fidelity, c_norm: None, residual });
        Ok(())
    };
    record(&mut trace, 0.0, psi_init, None)?;
    if cfg.n_steps == 0 {
        return Ok((trace, psi_init.clone()));
    }

    let schedule = make_trotter_schedule_over(plan.groups.len(), cfg.dtau, cfg.n_steps)?;
    // adjacent same-group substeps merge exactly (same generator basis)
    let substeps = schedule.merged_per_step();

    let mut psi = psi_init.clone();
    for step in 1..=cfg.n_steps {
        let mut max_residual = 0.0f64;
        for &(gidx, frac) in &substeps {
            let dt = cfg.dtau * frac;
            match &engines[gidx] {
                GroupEngine::Spin { basis, h_group, view } => {
                    let sys = build_spin_linear_system(basis, h_group, &psi)?;
                    let sol = solve_for_a(&sys, &cfg.solver)?;
                    max_residual = max_residual.max(sol.residual);
                    psi = apply_spin_window_exp(&psi, basis, view, &sol.a, dt)?;
                }
                GroupEngine::FermionGeneric { generators, h_group } => {
                    let sys = build_fermionic_linear_system(generators, h_group, &psi)?;
                    let sol = solve_for_a(&sys, &cfg.solver)?;
                    max_residual = max_residual.max(sol.residual);
                    let mut gen_sum = SpinOperator::zero();
                    for (a, g) in sol.a.iter().zip(generators) {
                        if a.abs() > 1e-15 {
                            gen_sum =
                                gen_sum.add(&g.spin_op.scale(Complex64::new(*a, 0.0)));
                        }
                    }
                    if !gen_sum.is_zero() {
                        let r = apply_exp_hermitian(
                            &gen_sum,
                            Complex64::new(0.0, -dt),
                            &psi,
                            1e-14,
                        )?;
                        psi = r.state;
                    }
                }
                GroupEngine::FermionWindow(engine) => {
                    let sys = engine.build_system(&psi)?;
                    let sol = solve_for_a(&sys, &cfg.solver)?;
                    max_residual = max_residual.max(sol.residual);
                    psi = engine.apply_update(&psi, &sol.a, dt)?;
                }
            }
        }
        record(&mut trace, cfg.dtau * step as f64, &psi, Some(max_residual))?;
    }
    Ok((trace, psi))
}

/// Apply `exp(-i·dt·Σ a_I σ_I)` over a spin domain through the dense window
/// matrix exponential.
fn apply_spin_window_exp(
    psi: &StateVector,
    basis: &SpinBasis,
    view: &WindowView,
    a: &[f64],
    dt: f64,
) -> Result<StateVector> {
    let d = basis.n_sites();
    let dim = 1usize << d;
    let a_window = coeffs_to_window(a, d);
    // U = exp(-i dt A): scaled Taylor on the window matrix
    let u = expm_complex_window(&a_window, Complex64::new(0.0, -dt), dim);
    let amps = psi.amplitudes();
    let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
    let mut sub = vec![Complex64::new(0.0, 0.0); dim];
    for &rest in &view.rest_scatter {
        for (aidx, s) in sub.iter_mut().enumerate() {
            *s = amps[(rest | view.dom_scatter[aidx]) as usize];
        }
        for r in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &u[r * dim..(r + 1) * dim];
            for (uv, sv) in row.iter().zip(&sub) {
                acc += uv * sv;
            }
            out[(rest | view.dom_scatter[r]) as usize] = acc;
        }
    }
    let mut sv = StateVector::from_amplitudes(out)?;
    sv.normalize();
    Ok(sv)
}

/// `exp(scale·M)` for a row-major square complex matrix by scaled Taylor
/// series with squaring.
fn expm_complex_window(m: &[Complex64], scale: Complex64, dim: usize) -> Vec<Complex64> {
    let norm: f64 = m.iter().map(|v| v.norm()).sum::<f64>() * scale.norm() / dim as f64;
    let k = (norm.log2().ceil().max(0.0) as i32 + 2).max(0) as u32;
    let s = scale / 2f64.powi(k as i32);
    let mut ident = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        ident[i * dim + i] = Complex64::new(1.0, 0.0);
    }
    let mut acc = ident.clone();
    let mut term = ident;
    for j in 1..40 {
        // term = (s/j) · m · term
        let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for kk in 0..dim {
                let mv = m[r * dim + kk];
                if mv.norm_sqr() == 0.0 {
                    continue;
                }
                let w = mv * s / j as f64;
                let src = &term[kk * dim..(kk + 1) * dim];
                let dst = &mut next[r * dim..(r + 1) * dim];
                for (o, &t) in dst.iter_mut().zip(src) {
                    *o += w * t;
                }
            }
        }
        let tn: f64 = next.iter().map(|v| v.norm_sqr()).sum::<f64>();
        for (o, &t) in acc.iter_mut().zip(&next) {
            *o += t;
        }
        term = next;
        if tn.sqrt() < 1e-18 {
            break;
        }
    }
    for _ in 0..k {
        let mut sq = vec![Complex64::new(0.0, 0.0); dim * dim];
        matmul_into(&mut sq, &acc, &acc, dim);
        acc = sq;
    }
    acc
}

fn matmul_into(out: &mut [Complex64], a: &[Complex64], b: &[Complex64], n: usize) {
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (o, &bv) in dst.iter_mut().zip(row) {
                *o += aik * bv;
            }
        }
    }
}
