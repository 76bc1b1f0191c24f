//! Dense-matrix builders for small systems.
//!
//! These serve the exact-diagonalization paths and act as independent
//! oracles in tests: the fermionic builder applies ladder operators with
//! explicit occupation-number signs and never goes through the qubit
//! mapping.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::fermion::{FermionOperator, Ladder};
use super::pauli::{i_pow, PauliString, SpinOperator};
use crate::{Error, Result};

/// Dense matrix of a Pauli string on `n` qubits.
pub fn pauli_matrix(s: &PauliString, n: usize) -> Result<DMatrix<Complex64>> {
    if s.min_qubits() > n {
        return Err(Error::SiteOutOfRange { index: s.min_qubits() - 1, n_qubits: n });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    let x = s.x_mask() as usize;
    let z = s.z_mask();
    let base = s.phase * i_pow(s.y_count());
    for b in 0..dim {
        let sign = if ((b as u64) & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        m[(b ^ x, b)] = base * sign;
    }
    Ok(m)
}

/// Dense matrix of a spin operator on `n` qubits.
pub fn spin_operator_matrix(op: &SpinOperator, n: usize) -> Result<DMatrix<Complex64>> {
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for (c, s) in op.terms() {
        let x = s.x_mask() as usize;
        let z = s.z_mask();
        let base = c * s.phase * i_pow(s.y_count());
        for b in 0..dim {
            let sign = if ((b as u64) & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(b ^ x, b)] += base * sign;
        }
    }
    Ok(m)
}

/// Dense real matrix of a Hermitian spin operator whose matrix elements are
/// real (every string carries an even number of Y letters).
pub fn spin_operator_matrix_real(op: &SpinOperator, n: usize) -> Result<DMatrix<f64>> {
    let m = spin_operator_matrix(op, n)?;
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    let mut max_im = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] = m[(i, j)].re;
            max_im = max_im.max(m[(i, j)].im.abs());
        }
    }
    if max_im > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "operator has complex matrix elements (max imag {max_im:.3e})"
        )));
    }
    Ok(out)
}

/// Apply one ladder operator to a basis state, returning `(sign, new_state)`
/// or `None` if annihilated. Sign convention: `c†_j |b⟩ = (-1)^{Σ_{k<j} b_k} |b ∪ j⟩`.
fn ladder_on_basis(l: Ladder, b: u64) -> Option<(f64, u64)> {
    let (j, create) = match l {
        Ladder::Create(j) => (j, true),
        Ladder::Annihilate(j) => (j, false),
    };
    let bit = 1u64 << j;
    let occupied = b & bit != 0;
    if create == occupied {
        return None;
    }
    let sign = if (b & (bit - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, b ^ bit))
}

/// Dense matrix of a fermionic operator on `n_modes` modes, built by direct
/// second quantization in the occupation basis.
pub fn fermion_operator_matrix(
    op: &FermionOperator,
    n_modes: usize,
) -> Result<DMatrix<Complex64>> {
    op.check_modes(n_modes)?;
    let dim = 1usize << n_modes;
    let mut m = DMatrix::zeros(dim, dim);
    for (c, ops) in op.terms() {
        for b in 0..dim as u64 {
            let mut state = b;
            let mut sign = 1.0;
            let mut alive = true;
            // rightmost factor acts first
            for l in ops.iter().rev() {
                match ladder_on_basis(*l, state) {
                    Some((s, ns)) => {
                        sign *= s;
                        state = ns;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                m[(state as usize, b as usize)] += c * sign;
            }
        }
    }
    Ok(m)
}

/// Hermiticity deviation of a dense matrix.
pub fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}
