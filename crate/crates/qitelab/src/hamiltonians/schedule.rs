//! Second-order split-step schedule over Hamiltonian terms.

use super::models::ProblemHamiltonian;
use crate::{Error, Result};

/// Palindromic per-step sequence of `(term index, step fraction)` realizing a
/// second-order splitting: terms `0..m̃` at fraction ½ followed by the same
/// in reverse.
#[derive(Debug, Clone)]
pub struct TrotterSchedule {
    /// Substeps of one full step.
    pub per_step: Vec<(usize, f64)>,
    /// Number of full steps.
    pub n_steps: usize,
    /// Step size Δτ.
    pub dtau: f64,
}

impl TrotterSchedule {
    /// Total substep count over the whole evolution.
    pub fn total_substeps(&self) -> usize {
        self.per_step.len() * self.n_steps
    }

    /// The per-step sequence with adjacent same-term substeps merged
    /// (fractions added). For a single term this is one full-fraction entry.
    pub fn merged_per_step(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(self.per_step.len());
        for &(idx, frac) in &self.per_step {
            match out.last_mut() {
                Some((last_idx, last_frac)) if *last_idx == idx => *last_frac += frac,
                _ => out.push((idx, frac)),
            }
        }
        out
    }
}

/// Build the second-order schedule for `n` steps of size `dtau` over the
/// Hamiltonian's term list.
pub fn make_trotter_schedule(
    h: &ProblemHamiltonian,
    dtau: f64,
    n: usize,
) -> Result<TrotterSchedule> {
    make_trotter_schedule_over(h.n_terms(), dtau, n)
}

/// Schedule over an arbitrary term count (used for grouped term lists too).
pub fn make_trotter_schedule_over(
    n_terms: usize,
    dtau: f64,
    n: usize,
) -> Result<TrotterSchedule> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one step".into()));
    }
    if dtau <= 0.0 {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {dtau}")));
    }
    if n_terms == 0 {
        return Err(Error::InvalidArgument("Hamiltonian has no terms".into()));
    }
    let mut per_step = Vec::with_capacity(2 * n_terms);
    for idx in 0..n_terms {
        per_step.push((idx, 0.5));
    }
    for idx in (0..n_terms).rev() {
        per_step.push((idx, 0.5));
    }
    Ok(TrotterSchedule { per_step, n_steps: n, dtau })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{build_heisenberg, CouplingSpec, LatticeGraph};

    fn ham(n_terms: usize) -> ProblemHamiltonian {
        // heisenberg on a ring with enough edges, truncated to n_terms
        let g = LatticeGraph::ring(n_terms.max(3)).unwrap();
        let mut h = build_heisenberg(&g, CouplingSpec::Nearest { j: 1.0 }, 0.0).unwrap();
        h.terms.truncate(n_terms);
        h
    }

    #[test]
    fn single_term_step_is_two_halves() {
        let s = make_trotter_schedule(&ham(1), 0.1, 3).unwrap();
        assert_eq!(s.per_step, vec![(0, 0.5), (0, 0.5)]);
        assert_eq!(s.merged_per_step(), vec![(0, 1.0)]);
        assert_eq!(s.n_steps, 3);
        assert_eq!(s.total_substeps(), 6);
    }

    #[test]
    fn three_term_palindrome() {
        let s = make_trotter_schedule(&ham(3), 0.05, 1).unwrap();
        assert_eq!(
            s.per_step,
            vec![(0, 0.5), (1, 0.5), (2, 0.5), (2, 0.5), (1, 0.5), (0, 0.5)]
        );
        assert_eq!(
            s.merged_per_step(),
            vec![(0, 0.5), (1, 0.5), (2, 1.0), (1, 0.5), (0, 0.5)]
        );
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(make_trotter_schedule(&ham(2), 0.1, 0).is_err());
        assert!(make_trotter_schedule(&ham(2), -0.1, 1).is_err());
        assert!(make_trotter_schedule_over(0, 0.1, 1).is_err());
    }
}
