//! Mean-field energy of a Gaussian state: Wick expectation values of a
//! Majorana polynomial and the matrix gradient (mean-field matrix).

use nalgebra::DMatrix;

use super::covariance::{CovarianceMatrix, MajoranaOrdering};
use super::pfaffian::{pfaffian, pfaffian_gradient};
use crate::hamiltonians::{HamiltonianKind, ProblemHamiltonian, TermOperator};
use crate::operators::jw::spin_to_majorana;
use crate::operators::majorana::{MajoranaMonomial, MajoranaOperator};
use crate::{Error, Result};

/// Hermitian Majorana polynomial with real coefficients in the
/// `γ = (-i)^{k(k-1)/2} Π a_μ` basis, representing a target Hamiltonian.
#[derive(Debug, Clone)]
pub struct MajoranaPolynomialEnergy {
    /// `(real coefficient, ascending Majorana index list)`, even degree.
    terms: Vec<(f64, Vec<usize>)>,
    pub constant: f64,
    pub n_modes: usize,
}

impl MajoranaPolynomialEnergy {
    pub fn new(terms: Vec<(f64, Vec<usize>)>, constant: f64, n_modes: usize) -> Result<Self> {
        for (_, idx) in &terms {
            if idx.len() % 2 != 0 {
                return Err(Error::InvalidArgument(
                    "parity-violating odd-degree Majorana term".into(),
                ));
            }
            for w in idx.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::RepeatedIndex(w[1]));
                }
            }
            if let Some(&last) = idx.last() {
                if last >= 2 * n_modes {
                    return Err(Error::ModeOutOfRange { index: last / 2, n_modes });
                }
            }
        }
        Ok(MajoranaPolynomialEnergy { terms, constant, n_modes })
    }

    pub fn terms(&self) -> &[(f64, Vec<usize>)] {
        &self.terms
    }

    /// Convert a problem Hamiltonian. Spin Hamiltonians pass through the
    /// qubit-to-fermion mapping (one mode per spin); fermionic ones expand
    /// ladder products directly.
    pub fn from_problem_hamiltonian(h: &ProblemHamiltonian) -> Result<Self> {
        let n_modes = match h.kind {
            HamiltonianKind::Spin => h.n_sites,
            HamiltonianKind::Fermionic => h.n_modes,
        };
        let mut poly = MajoranaOperator::zero();
        for t in &h.terms {
            let part = match &t.operator {
                TermOperator::Spin(op) => spin_to_majorana(op, n_modes)?,
                TermOperator::Fermion(op) => MajoranaOperator::from_fermion_operator(op),
            };
            poly.add_assign(&part);
        }
        let mut constant = h.constant;
        let mut terms = Vec::new();
        for mono in poly.monomials() {
            if mono.indices().is_empty() {
                let c = mono.coefficient;
                if c.im.abs() > 1e-10 {
                    return Err(Error::NotHermitian(c.im.abs()));
                }
                constant += c.re;
                continue;
            }
            let h_coeff = mono.hermitian_coefficient();
            if h_coeff.im.abs() > 1e-10 {
                return Err(Error::NotHermitian(h_coeff.im.abs()));
            }
            if h_coeff.re.abs() < 1e-14 {
                continue;
            }
            terms.push((h_coeff.re, mono.indices().to_vec()));
        }
        Self::new(terms, constant, n_modes)
    }
}

/// Wick expectation of one monomial (given with its coefficient):
/// `⟨c·Π a_μ⟩ = c·(-i)^m·Pf(Γ|_μ)` for `|μ| = 2m` distinct indices. For a
/// Hermitian monomial the value is real; the real part is returned.
pub fn wick_expectation(gamma: &CovarianceMatrix, mono: &MajoranaMonomial) -> Result<f64> {
    if gamma.ordering() != MajoranaOrdering::Interleaved {
        return Err(Error::InvalidArgument(
            "Wick evaluation expects the interleaved ordering".into(),
        ));
    }
    let idx = mono.indices();
    if idx.is_empty() {
        return Ok(mono.coefficient.re);
    }
    let m = idx.len() / 2;
    let sub = submatrix(gamma.matrix(), idx);
    let pf = pfaffian(&sub)?;
    // (-i)^m · c, projected on the real axis
    let c = mono.coefficient;
    let val = match m % 4 {
        0 => c.re,
        1 => c.im,
        2 => -c.re,
        _ => -c.im,
    };
    Ok(val * pf)
}

/// Mean-field energy `E(Γ) = Σ c·(-1)^m·Pf(Γ|_μ) + constant` of a Hermitian
/// polynomial.
pub fn ghf_energy(gamma: &CovarianceMatrix, e: &MajoranaPolynomialEnergy) -> Result<f64> {
    if gamma.n_modes() != e.n_modes {
        return Err(Error::DimensionMismatch(format!(
            "covariance over {} modes, polynomial over {}",
            gamma.n_modes(),
            e.n_modes
        )));
    }
    let g = gamma.matrix();
    let mut acc = e.constant;
    for (c, idx) in &e.terms {
        let m = idx.len() / 2;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc += c * sign * pfaffian(&submatrix(g, idx))?;
    }
    Ok(acc)
}

/// Mean-field matrix `F = 4 ∂E/∂Γ`, antisymmetric.
pub fn mean_field_matrix(
    gamma: &CovarianceMatrix,
    e: &MajoranaPolynomialEnergy,
) -> Result<DMatrix<f64>> {
    if gamma.n_modes() != e.n_modes {
        return Err(Error::DimensionMismatch(format!(
            "covariance over {} modes, polynomial over {}",
            gamma.n_modes(),
            e.n_modes
        )));
    }
    let g = gamma.matrix();
    let n = g.nrows();
    let mut f = DMatrix::zeros(n, n);
    for (c, idx) in &e.terms {
        let m = idx.len() / 2;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let w = 4.0 * c * sign;
        if idx.len() == 2 {
            // ∂Pf(Γ|_{a,b})/∂Γ_{ab} = ½
            f[(idx[0], idx[1])] += 0.5 * w;
            f[(idx[1], idx[0])] -= 0.5 * w;
            continue;
        }
        let sub = submatrix(g, idx);
        let grad = pfaffian_gradient(&sub)?;
        for (i, &a) in idx.iter().enumerate() {
            for (j, &b) in idx.iter().enumerate() {
                f[(a, b)] += w * grad[(i, j)];
            }
        }
    }
    Ok(f)
}

fn submatrix(g: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| g[(idx[i], idx[j])])
}
