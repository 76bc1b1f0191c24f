//! Statevector representation and application kernels.
//!
//! Basis convention: amplitude index `b` encodes the computational basis
//! state with qubit `j` in state `(b >> j) & 1`; the least significant bit is
//! qubit 0. Under the Jordan-Wigner mapping, bit `j` is the occupation of
//! fermionic mode `j`.

use num_complex::Complex64;

use super::pauli::{i_pow, PauliString, SpinOperator};
use crate::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;

/// Normalized complex amplitude vector over `2^n_qubits` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis_state(n_qubits: usize, index: u64) -> Self {
        let dim = 1usize << n_qubits;
        assert!((index as usize) < dim, "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index as usize] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    /// `|0…0⟩`.
    pub fn vacuum(n_qubits: usize) -> Self {
        Self::basis_state(n_qubits, 0)
    }

    /// Uniform superposition `|+…+⟩`.
    pub fn plus_state(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        StateVector { n_qubits, amps: vec![a; dim] }
    }

    /// Build from amplitudes, normalizing. Errors on a zero vector or a
    /// length that is not a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || dim & (dim - 1) != 0 {
            return Err(Error::DimensionMismatch(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let mut sv = StateVector { n_qubits, amps };
        let n = sv.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        sv.scale(1.0 / n);
        Ok(sv)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
    }

    /// Renormalize in place and return the prior norm.
    pub fn normalize(&mut self) -> f64 {
        let n = self.norm();
        if n > 0.0 {
            self.scale(1.0 / n);
        }
        n
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch(format!(
                "inner product of {} and {} qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared overlap `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Are all imaginary parts negligible?
    pub fn is_real(&self, tol: f64) -> bool {
        self.amps.iter().all(|a| a.im.abs() <= tol)
    }
}

/// Apply a Pauli string: `s · ψ`. Norm is preserved when `s.phase` is unit.
pub fn apply_pauli_string(s: &PauliString, psi: &StateVector) -> Result<StateVector> {
    let n = psi.n_qubits;
    if s.min_qubits() > n {
        return Err(Error::SiteOutOfRange { index: s.min_qubits() - 1, n_qubits: n });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
    apply_pauli_into(s, n, &psi.amps, &mut out);
    Ok(StateVector { n_qubits: n, amps: out })
}

/// `out += s·amps` without allocation; `out` must be zeroed or pre-filled by
/// the caller with the intended accumulation target.
pub(crate) fn accumulate_pauli(
    coeff: Complex64,
    s: &PauliString,
    amps: &[Complex64],
    out: &mut [Complex64],
) {
    let x = s.x_mask() as usize;
    let z = s.z_mask();
    let base = coeff * s.phase * i_pow(s.y_count());
    for (b, &a) in amps.iter().enumerate() {
        let sign = if ((b as u64) & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        out[b ^ x] += base * sign * a;
    }
}

fn apply_pauli_into(s: &PauliString, _n: usize, amps: &[Complex64], out: &mut [Complex64]) {
    accumulate_pauli(Complex64::new(1.0, 0.0), s, amps, out);
}

/// Apply a spin operator: `op · ψ` (not normalized).
pub fn apply_spin_operator(op: &SpinOperator, psi: &StateVector) -> Result<StateVector> {
    let n = psi.n_qubits;
    if op.min_qubits() > n {
        return Err(Error::SiteOutOfRange { index: op.min_qubits() - 1, n_qubits: n });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for (c, s) in op.terms() {
        accumulate_pauli(*c, s, &psi.amps, &mut out);
    }
    Ok(StateVector { n_qubits: n, amps: out })
}

/// `⟨ψ|op|ψ⟩`. Real within 1e-12 when `op` is Hermitian.
pub fn expectation(op: &SpinOperator, psi: &StateVector) -> Result<Complex64> {
    let n = psi.n_qubits;
    if op.min_qubits() > n {
        return Err(Error::DimensionMismatch(format!(
            "operator on {} qubits applied to {} qubit state",
            op.min_qubits(),
            n
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, s) in op.terms() {
        let x = s.x_mask() as usize;
        let z = s.z_mask();
        let base = c * s.phase * i_pow(s.y_count());
        let mut t = Complex64::new(0.0, 0.0);
        for (b, &a) in psi.amps.iter().enumerate() {
            let sign = if ((b as u64) & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            t += psi.amps[b ^ x].conj() * (sign * a);
        }
        acc += base * t;
    }
    Ok(acc)
}

/// Result of an exponential application.
#[derive(Debug, Clone)]
pub struct ExpResult {
    /// Normalized `e^{scale·A}ψ / ‖e^{scale·A}ψ‖`.
    pub state: StateVector,
    /// Pre-normalization norm `‖e^{scale·A}ψ‖` (1 for unit `ψ` and unitary
    /// evolution). May under/overflow to 0/∞ for extreme scales; `log_norm`
    /// is always finite.
    pub norm: f64,
    /// Natural log of the pre-normalization norm.
    pub log_norm: f64,
}

/// Hard cap on Taylor terms per sub-step.
const MAX_TAYLOR_TERMS: usize = 128;
/// Target per-sub-step `|scale|·‖A‖₁` to keep the series short and avoid
/// cancellation.
const SUBSTEP_BUDGET: f64 = 0.5;

/// Apply `e^{scale·A}` to `ψ` and renormalize, where `A` is Hermitian.
///
/// The exponential is evaluated by an adaptive Taylor series, sub-stepped so
/// each piece has small `|scale|·‖A‖₁`. Diagonal operators (all-Z strings)
/// take an exact elementwise fast path. Errors if `A` is not Hermitian or if
/// the series fails to converge within the term cap.
pub fn apply_exp_hermitian(
    a: &SpinOperator,
    scale: Complex64,
    psi: &StateVector,
    tol: f64,
) -> Result<ExpResult> {
    let dev = a.hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let n = psi.n_qubits;
    if a.min_qubits() > n {
        return Err(Error::DimensionMismatch(format!(
            "operator on {} qubits applied to {} qubit state",
            a.min_qubits(),
            n
        )));
    }
    if scale.norm() == 0.0 || a.is_zero() {
        return Ok(ExpResult { state: psi.clone(), norm: 1.0, log_norm: 0.0 });
    }

    if a.terms().iter().all(|(_, s)| s.x_mask() == 0) {
        return Ok(apply_exp_diagonal(a, scale, psi));
    }

    let weight = scale.norm() * a.one_norm();
    let n_sub = (weight / SUBSTEP_BUDGET).ceil().max(1.0) as usize;
    let sub_scale = scale / n_sub as f64;

    let mut cur = psi.amps.clone();
    let mut log_norm = 0.0f64;
    let mut term = vec![Complex64::new(0.0, 0.0); cur.len()];
    let mut next = vec![Complex64::new(0.0, 0.0); cur.len()];
    for _ in 0..n_sub {
        // acc = Σ_k (sub_scale·A)^k ψ / k!
        let mut acc = cur.clone();
        term.copy_from_slice(&cur);
        let mut converged = false;
        let mut last = f64::INFINITY;
        for k in 1..=MAX_TAYLOR_TERMS {
            for v in next.iter_mut() {
                *v = Complex64::new(0.0, 0.0);
            }
            for (c, s) in a.terms() {
                accumulate_pauli(*c, s, &term, &mut next);
            }
            let f = sub_scale / k as f64;
            for (t, v) in term.iter_mut().zip(&next) {
                *t = f * v;
            }
            let mut tn = 0.0;
            let mut an = 0.0;
            for (acc_v, t) in acc.iter_mut().zip(&term) {
                *acc_v += t;
                tn += t.norm_sqr();
                an += acc_v.norm_sqr();
            }
            last = tn.sqrt();
            if last <= tol * an.sqrt().max(1e-300) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::SeriesDiverged { max_terms: MAX_TAYLOR_TERMS, last });
        }
        let nrm = acc.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            return Err(Error::InvalidArgument(
                "exponential annihilated the state within numerical precision".into(),
            ));
        }
        log_norm += nrm.ln();
        for v in acc.iter_mut() {
            *v /= nrm;
        }
        cur = acc;
    }

    let state = StateVector { n_qubits: n, amps: cur };
    Ok(ExpResult { state, norm: log_norm.exp(), log_norm })
}

/// Exact elementwise exponential for diagonal operators (Z/identity strings).
fn apply_exp_diagonal(a: &SpinOperator, scale: Complex64, psi: &StateVector) -> ExpResult {
    let dim = psi.dim();
    let mut amps = psi.amps.clone();
    // Diagonal entries are real for Hermitian diagonal operators.
    let mut max_re = f64::NEG_INFINITY;
    let mut diag = vec![0.0f64; dim];
    for (b, d) in diag.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, s) in a.terms() {
            let sign = if ((b as u64) & s.z_mask()).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            acc += c.re * sign;
        }
        *d = acc;
        max_re = max_re.max(scale.re * acc);
    }
    // Shift by the max real exponent so magnitudes stay bounded by 1.
    let mut norm_sqr = 0.0;
    for (b, v) in amps.iter_mut().enumerate() {
        let e = scale * diag[b] - Complex64::new(max_re, 0.0);
        *v *= e.exp();
        norm_sqr += v.norm_sqr();
    }
    let nrm = norm_sqr.sqrt();
    let log_norm = nrm.ln() + max_re;
    for v in amps.iter_mut() {
        *v /= nrm;
    }
    ExpResult {
        state: StateVector { n_qubits: psi.n_qubits, amps },
        norm: log_norm.exp(),
        log_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::dense::spin_operator_matrix;
    use crate::operators::pauli::PauliLetter;
    use nalgebra::DVector;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(rng: &mut StdRng, n: usize) -> StateVector {
        let amps: Vec<Complex64> =
            (0..1usize << n).map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        StateVector::from_amplitudes(amps).unwrap()
    }

    fn random_hermitian(rng: &mut StdRng, n: usize, k: usize) -> SpinOperator {
        let letters = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
        let terms: Vec<(Complex64, PauliString)> = (0..k)
            .map(|_| {
                let pairs: Vec<(usize, PauliLetter)> =
                    (0..n).map(|s| (s, letters[rng.gen_range(0..4)])).collect();
                let s = PauliString::from_letters(c(1.0, 0.0), &pairs).unwrap();
                (c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5), s)
            })
            .collect();
        let op = SpinOperator::from_terms(terms);
        op.add(&op.adjoint()).scale(c(0.5, 0.0))
    }

    #[test]
    fn x_flips_and_z_phases() {
        let psi = StateVector::basis_state(1, 0);
        let out = apply_pauli_string(&PauliString::single(0, PauliLetter::X), &psi).unwrap();
        assert!((out.amplitudes()[1] - c(1.0, 0.0)).norm() < 1e-15);

        let plus = StateVector::plus_state(1);
        let out = apply_pauli_string(&PauliString::single(0, PauliLetter::Z), &plus).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((out.amplitudes()[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((out.amplitudes()[1] - c(-s, 0.0)).norm() < 1e-15);

        let ident = PauliString::identity();
        let out = apply_pauli_string(&ident, &plus).unwrap();
        assert_eq!(out, plus);
    }

    #[test]
    fn site_out_of_range_is_an_error() {
        let psi = StateVector::basis_state(1, 0);
        let s = PauliString::single(3, PauliLetter::X);
        assert!(apply_pauli_string(&s, &psi).is_err());
    }

    #[test]
    fn expectation_basic_and_oracle() {
        let zero = StateVector::basis_state(1, 0);
        let z = SpinOperator::from_string(PauliString::single(0, PauliLetter::Z));
        assert!((expectation(&z, &zero).unwrap() - c(1.0, 0.0)).norm() < 1e-14);

        let plus = StateVector::plus_state(1);
        let x = SpinOperator::from_string(PauliString::single(0, PauliLetter::X));
        assert!((expectation(&x, &plus).unwrap() - c(1.0, 0.0)).norm() < 1e-14);

        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..10 {
            let op = random_hermitian(&mut rng, 3, 5);
            let psi = random_state(&mut rng, 3);
            let m = spin_operator_matrix(&op, 3).unwrap();
            let v = DVector::from_column_slice(psi.amplitudes());
            let dense = (v.adjoint() * &m * &v)[(0, 0)];
            let fast = expectation(&op, &psi).unwrap();
            assert!((dense - fast).norm() < 1e-12);
            assert!(fast.im.abs() < 1e-12);
        }
    }

    #[test]
    fn exp_zero_scale_is_identity() {
        let psi = StateVector::plus_state(2);
        let z = SpinOperator::from_string(PauliString::single(0, PauliLetter::Z));
        let r = apply_exp_hermitian(&z, c(0.0, 0.0), &psi, 1e-14).unwrap();
        assert_eq!(r.state, psi);
        assert!((r.norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exp_diagonal_matches_analytic() {
        // e^{-dtau Z} |+> ∝ (e^{-dtau}, e^{+dtau})/√2
        let dtau = 0.37;
        let plus = StateVector::plus_state(1);
        let z = SpinOperator::from_string(PauliString::single(0, PauliLetter::Z));
        let r = apply_exp_hermitian(&z, c(-dtau, 0.0), &plus, 1e-14).unwrap();
        let raw = [(-dtau).exp(), dtau.exp()];
        let nrm = (raw[0] * raw[0] + raw[1] * raw[1]).sqrt() / 2f64.sqrt();
        for (a, e) in r.state.amplitudes().iter().zip(raw) {
            assert!((a - c(e / (2f64.sqrt() * nrm), 0.0)).norm() < 1e-13);
        }
        assert!((r.norm - nrm).abs() < 1e-13);
    }

    #[test]
    fn exp_rotation_matches_2x2_exponential() {
        // e^{-i dtau Y}|+> = cos(dtau)|+> - sin(dtau)|->
        let dtau = 0.81;
        let plus = StateVector::plus_state(1);
        let y = SpinOperator::from_string(PauliString::single(0, PauliLetter::Y));
        let r = apply_exp_hermitian(&y, c(0.0, -dtau), &plus, 1e-14).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [
            c(s * (dtau.cos() - dtau.sin()), 0.0),
            c(s * (dtau.cos() + dtau.sin()), 0.0),
        ];
        for (a, e) in r.state.amplitudes().iter().zip(expect) {
            assert!((a - e).norm() < 1e-12);
        }
        assert!((r.norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_imaginary_scale_preserves_norm() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..5 {
            let op = random_hermitian(&mut rng, 3, 6);
            let psi = random_state(&mut rng, 3);
            let r = apply_exp_hermitian(&op, c(0.0, -0.9), &psi, 1e-14).unwrap();
            assert!((r.state.norm() - 1.0).abs() < 1e-12);
            assert!((r.norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn exp_rejects_non_hermitian() {
        let op = SpinOperator::from_terms(vec![(
            c(0.0, 1.0),
            PauliString::single(0, PauliLetter::X),
        )]);
        let psi = StateVector::plus_state(1);
        assert!(apply_exp_hermitian(&op, c(1.0, 0.0), &psi, 1e-14).is_err());
    }

    #[test]
    fn exp_large_scale_substeps_stay_accurate() {
        // e^{-i θ Y} for θ = 12 still matches the closed form
        let theta = 12.0;
        let plus = StateVector::plus_state(1);
        let y = SpinOperator::from_string(PauliString::single(0, PauliLetter::Y));
        let r = apply_exp_hermitian(&y, c(0.0, -theta), &plus, 1e-14).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [
            c(s * (theta.cos() - theta.sin()), 0.0),
            c(s * (theta.cos() + theta.sin()), 0.0),
        ];
        for (a, e) in r.state.amplitudes().iter().zip(expect) {
            assert!((a - e).norm() < 1e-11);
        }
    }
}
