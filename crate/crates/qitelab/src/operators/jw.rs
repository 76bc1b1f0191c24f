//! Jordan-Wigner mapping between fermionic modes and qubits, in both
//! directions: ladder operators to Pauli strings, and Pauli strings to
//! Majorana monomials.
//!
//! Convention: mode `j` maps to qubit `j`; `c_j = (Π_{k<j} Z_k)(X_j + iY_j)/2`.

use num_complex::Complex64;

use super::fermion::{FermionOperator, Ladder};
use super::majorana::{MajoranaMonomial, MajoranaOperator};
use super::pauli::{PauliLetter, PauliString, SpinOperator};
use crate::{Error, Result};

/// Pauli string of the Majorana generator with 0-based index `m`:
/// `a_{2p} = Z_0…Z_{p-1} X_p`, `a_{2p+1} = Z_0…Z_{p-1} Y_p`.
pub fn majorana_pauli_string(m: usize, n_modes: usize) -> Result<PauliString> {
    let p = m / 2;
    if p >= n_modes {
        return Err(Error::ModeOutOfRange { index: p, n_modes });
    }
    let string_z = (1u64 << p) - 1;
    let (x, z) = if m % 2 == 0 {
        (1u64 << p, string_z)
    } else {
        (1u64 << p, string_z | (1u64 << p))
    };
    Ok(PauliString::from_masks(Complex64::new(1.0, 0.0), x, z))
}

/// Map a fermionic operator to a spin operator on `n_modes` qubits with the
/// identical matrix representation.
pub fn jordan_wigner(op: &FermionOperator, n_modes: usize) -> Result<SpinOperator> {
    op.check_modes(n_modes)?;
    let half = Complex64::new(0.5, 0.0);
    let mut out = SpinOperator::zero();
    for (c, ops) in op.terms() {
        let mut acc = SpinOperator::identity(1.0).scale(*c);
        for l in ops {
            let (j, sgn) = match *l {
                // c_j  -> Z…Z (X + iY)/2
                Ladder::Annihilate(j) => (j, 1.0),
                // c†_j -> Z…Z (X - iY)/2
                Ladder::Create(j) => (j, -1.0),
            };
            let string_z = (1u64 << j) - 1;
            let sx = PauliString::from_masks(Complex64::new(1.0, 0.0), 1 << j, string_z);
            let sy =
                PauliString::from_masks(Complex64::new(1.0, 0.0), 1 << j, string_z | (1 << j));
            let factor = SpinOperator::from_terms(vec![
                (half, sx),
                (half * Complex64::new(0.0, sgn), sy),
            ]);
            acc = acc.mul(&factor);
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// Map a single Pauli string to the unique Majorana monomial (times a phase)
/// it represents under the Jordan-Wigner convention above.
pub fn pauli_to_majorana(s: &PauliString, n_modes: usize) -> Result<MajoranaMonomial> {
    if s.min_qubits() > n_modes {
        return Err(Error::ModeOutOfRange { index: s.min_qubits() - 1, n_modes });
    }
    // Walk sites from high to low. `parity` records whether an odd number of
    // generators was emitted at higher sites, i.e. whether their Z strings
    // act at the current site.
    let mut indices: Vec<usize> = Vec::new();
    let mut parity = false;
    for q in (0..n_modes).rev() {
        let letter = s.letter(q);
        match (letter, parity) {
            (PauliLetter::I, false) | (PauliLetter::Z, true) => {}
            (PauliLetter::I, true) | (PauliLetter::Z, false) => {
                indices.push(2 * q + 1);
                indices.push(2 * q);
            }
            (PauliLetter::X, false) | (PauliLetter::Y, true) => {
                indices.push(2 * q);
                parity = !parity;
            }
            (PauliLetter::X, true) | (PauliLetter::Y, false) => {
                indices.push(2 * q + 1);
                parity = !parity;
            }
        }
    }
    indices.reverse();

    // Fix the phase by rebuilding the ordered product as a Pauli string.
    let mut prod = PauliString::identity();
    for &m in &indices {
        prod = prod.product(&majorana_pauli_string(m, n_modes)?);
    }
    debug_assert_eq!(prod.x_mask(), s.x_mask());
    debug_assert_eq!(prod.z_mask(), s.z_mask());
    let coefficient = s.phase / prod.phase;
    MajoranaMonomial::new(coefficient, indices)
}

/// Expand a spin operator into a Majorana polynomial under Jordan-Wigner.
pub fn spin_to_majorana(op: &SpinOperator, n_modes: usize) -> Result<MajoranaOperator> {
    let mut out = MajoranaOperator::zero();
    for (c, s) in op.terms() {
        let mono = pauli_to_majorana(s, n_modes)?;
        let scaled = MajoranaMonomial::new(c * mono.coefficient, mono.indices().to_vec())?;
        out.add_assign(&MajoranaOperator::from_monomial(&scaled));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::dense::{fermion_operator_matrix, pauli_matrix, spin_operator_matrix};
    use crate::operators::fermion::excitation;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn number_operator_maps_to_half_one_minus_z() {
        let n0 = FermionOperator::hop(c(1.0, 0.0), 0, 0);
        let jw = jordan_wigner(&n0, 1).unwrap();
        let m = spin_operator_matrix(&jw, 1).unwrap();
        assert!((m[(0, 0)] - c(0.0, 0.0)).norm() < 1e-15);
        assert!((m[(1, 1)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hopping_maps_to_xx_plus_yy_over_two() {
        let hop = FermionOperator::hop(c(1.0, 0.0), 0, 1)
            .add(&FermionOperator::hop(c(1.0, 0.0), 1, 0));
        let jw = jordan_wigner(&hop, 2).unwrap();
        let lhs = spin_operator_matrix(&jw, 2).unwrap();
        let rhs = fermion_operator_matrix(&hop, 2).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
        // two strings: XX/2 and YY/2
        assert_eq!(jw.n_terms(), 2);
        for (coeff, _) in jw.terms() {
            assert!((coeff - c(0.5, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn orbital_excitation_diagonal_case() {
        // Ê_00 on one spatial orbital -> (1-Z0)/2 + (1-Z1)/2
        let e00 = excitation(0, 0);
        let jw = jordan_wigner(&e00, 2).unwrap();
        let lhs = spin_operator_matrix(&jw, 2).unwrap();
        let rhs = fermion_operator_matrix(&e00, 2).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn random_operators_match_brute_force_matrices() {
        let mut rng = StdRng::seed_from_u64(17);
        for n in 1..=4usize {
            for _ in 0..12 {
                let k = rng.gen_range(1..=4);
                let ops: Vec<Ladder> = (0..k)
                    .map(|_| {
                        let m = rng.gen_range(0..n);
                        if rng.gen() {
                            Ladder::Create(m)
                        } else {
                            Ladder::Annihilate(m)
                        }
                    })
                    .collect();
                let coeff = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                let f = FermionOperator::term(coeff, ops);
                let lhs = spin_operator_matrix(&jordan_wigner(&f, n).unwrap(), n).unwrap();
                let rhs = fermion_operator_matrix(&f, n).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn jw_preserves_anticommutation() {
        let n = 4;
        let dim = 1usize << n;
        let id = DMatrix::<Complex64>::identity(dim, dim);
        for p in 0..n {
            for q in 0..n {
                let cp = jordan_wigner(
                    &FermionOperator::term(c(1.0, 0.0), vec![Ladder::Annihilate(p)]),
                    n,
                )
                .unwrap();
                let cqd = jordan_wigner(
                    &FermionOperator::term(c(1.0, 0.0), vec![Ladder::Create(q)]),
                    n,
                )
                .unwrap();
                let mp = spin_operator_matrix(&cp, n).unwrap();
                let mq = spin_operator_matrix(&cqd, n).unwrap();
                let anti = &mp * &mq + &mq * &mp;
                let expect = if p == q { id.clone() } else { DMatrix::zeros(dim, dim) };
                assert!((anti - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn majorana_generators_are_hermitian_and_anticommute() {
        let n = 3;
        let dim = 1usize << n;
        let mats: Vec<DMatrix<Complex64>> = (0..2 * n)
            .map(|m| pauli_matrix(&majorana_pauli_string(m, n).unwrap(), n).unwrap())
            .collect();
        for (i, a) in mats.iter().enumerate() {
            assert!((a - a.adjoint()).norm() < 1e-13);
            for (j, b) in mats.iter().enumerate() {
                let anti = a * b + b * a;
                let expect = if i == j {
                    DMatrix::<Complex64>::identity(dim, dim) * c(2.0, 0.0)
                } else {
                    DMatrix::zeros(dim, dim)
                };
                assert!((anti - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pauli_to_majorana_examples() {
        // Z0 = -i a0 a1
        let z0 = PauliString::single(0, PauliLetter::Z);
        let m = pauli_to_majorana(&z0, 1).unwrap();
        assert_eq!(m.indices(), &[0, 1]);
        assert!((m.coefficient - c(0.0, -1.0)).norm() < 1e-14);
        assert!((m.hermitian_coefficient() - c(1.0, 0.0)).norm() < 1e-14);

        // identity
        let ident = PauliString::identity();
        let m = pauli_to_majorana(&ident, 2).unwrap();
        assert!(m.indices().is_empty());
        assert!((m.coefficient - c(1.0, 0.0)).norm() < 1e-14);

        // X0 on one mode -> a0
        let x0 = PauliString::single(0, PauliLetter::X);
        let m = pauli_to_majorana(&x0, 1).unwrap();
        assert_eq!(m.indices(), &[0]);
        assert!((m.coefficient - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pauli_to_majorana_round_trips_through_matrices() {
        let mut rng = StdRng::seed_from_u64(23);
        let letters =
            [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
        for n in 1..=4usize {
            for _ in 0..20 {
                let pairs: Vec<(usize, PauliLetter)> =
                    (0..n).map(|s| (s, letters[rng.gen_range(0..4)])).collect();
                let s = PauliString::from_letters(c(1.0, 0.0), &pairs).unwrap();
                let mono = pauli_to_majorana(&s, n).unwrap();
                // rebuild as matrix from the Majorana product
                let dim = 1usize << n;
                let mut prod = DMatrix::<Complex64>::identity(dim, dim);
                for &m in mono.indices() {
                    let g = pauli_matrix(&majorana_pauli_string(m, n).unwrap(), n).unwrap();
                    prod = prod * g;
                }
                let lhs = pauli_matrix(&s, n).unwrap();
                let rhs = prod * mono.coefficient;
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }
}
