//! Pauli strings and linear combinations of them.
//!
//! A string is stored as a pair of bit masks in the symplectic convention:
//! site `i` carries X iff bit `i` of `x` is set, Z iff bit `i` of `z` is set,
//! and Y iff both are set. The stored operator is the tensor product of the
//! Hermitian letters `{1, X, Y, Z}` times the explicit `phase`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Coefficients with magnitude below this are dropped by canonicalization.
pub const COEFF_PRUNE: f64 = 1e-14;

/// Maximum number of sites supported by the bit-mask representation.
pub const MAX_SITES: usize = 64;

/// Single-site Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliLetter::I,
            (true, false) => PauliLetter::X,
            (true, true) => PauliLetter::Y,
            (false, true) => PauliLetter::Z,
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// A phase times a tensor product of Hermitian Pauli letters.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub phase: Complex64,
    x: u64,
    z: u64,
}

/// i^k for k mod 4.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    /// The identity string.
    pub fn identity() -> Self {
        PauliString { phase: Complex64::new(1.0, 0.0), x: 0, z: 0 }
    }

    /// Build from explicit masks.
    pub fn from_masks(phase: Complex64, x: u64, z: u64) -> Self {
        PauliString { phase, x, z }
    }

    /// Build from (site, letter) pairs; identity letters are ignored.
    pub fn from_letters(phase: Complex64, letters: &[(usize, PauliLetter)]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(site, letter) in letters {
            if site >= MAX_SITES {
                return Err(Error::SiteOutOfRange { index: site, n_qubits: MAX_SITES });
            }
            let bit = 1u64 << site;
            match letter {
                PauliLetter::I => {}
                PauliLetter::X => x |= bit,
                PauliLetter::Y => {
                    x |= bit;
                    z |= bit;
                }
                PauliLetter::Z => z |= bit,
            }
        }
        Ok(PauliString { phase, x, z })
    }

    /// Single-letter string on one site with unit phase.
    pub fn single(site: usize, letter: PauliLetter) -> Self {
        Self::from_letters(Complex64::new(1.0, 0.0), &[(site, letter)]).expect("site in range")
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Letter acting on `site`.
    pub fn letter(&self, site: usize) -> PauliLetter {
        let bit = 1u64 << site;
        PauliLetter::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    /// Sites on which the string acts non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut m = self.x | self.z;
        let mut out = Vec::with_capacity(m.count_ones() as usize);
        while m != 0 {
            let s = m.trailing_zeros() as usize;
            out.push(s);
            m &= m - 1;
        }
        out
    }

    /// Largest acted-on site plus one, or 0 for the identity.
    pub fn min_qubits(&self) -> usize {
        let m = self.x | self.z;
        if m == 0 {
            0
        } else {
            64 - m.leading_zeros() as usize
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of sites carrying the letter Y.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Product of two strings. The result's phase lies in `{±1, ±i}` times
    /// the operand phases.
    pub fn product(&self, other: &PauliString) -> PauliString {
        let (x, z, k) = product_masks(self.x, self.z, other.x, other.z);
        PauliString { phase: self.phase * other.phase * i_pow(k), x, z }
    }

    /// Hermitian adjoint (letters are Hermitian, so only the phase conjugates).
    pub fn adjoint(&self) -> PauliString {
        PauliString { phase: self.phase.conj(), x: self.x, z: self.z }
    }

    /// True iff the two strings commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }
}

/// Mask-level product: returns `(x, z, k)` with
/// `letters(a) · letters(b) = i^k · letters(a ⊕ b)`.
pub(crate) fn product_masks(xa: u64, za: u64, xb: u64, zb: u64) -> (u64, u64, u32) {
    let x = xa ^ xb;
    let z = za ^ zb;
    // letter_a letter_b = i^{ya + yb - yc + 2 (za·xb)} X^x Z^z-letter form
    let k = (xa & za).count_ones() + (xb & zb).count_ones() + 2 * (za & xb).count_ones()
        + 3 * (x & z).count_ones();
    (x, z, k % 4)
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.3}{:+.3}i)", self.phase.re, self.phase.im)?;
        if self.is_identity() {
            return write!(f, " 1");
        }
        for site in self.support() {
            write!(f, " {}{}", self.letter(site), site)?;
        }
        Ok(())
    }
}

/// A linear combination of Pauli strings in canonical form: phases folded
/// into coefficients, identical strings merged, negligible terms dropped,
/// terms ordered by `(z, x)` mask.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpinOperator {
    terms: Vec<(Complex64, PauliString)>,
}

impl SpinOperator {
    pub fn zero() -> Self {
        SpinOperator { terms: Vec::new() }
    }

    pub fn identity(scale: f64) -> Self {
        SpinOperator::from_terms(vec![(Complex64::new(scale, 0.0), PauliString::identity())])
    }

    /// Canonicalize a term list.
    pub fn from_terms(terms: Vec<(Complex64, PauliString)>) -> Self {
        let mut map: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for (c, s) in terms {
            let key = (s.z, s.x);
            *map.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c * s.phase;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm() >= COEFF_PRUNE)
            .map(|((z, x), c)| (c, PauliString { phase: Complex64::new(1.0, 0.0), x, z }))
            .collect();
        SpinOperator { terms }
    }

    pub fn from_string(s: PauliString) -> Self {
        SpinOperator::from_terms(vec![(Complex64::new(1.0, 0.0), s)])
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest acted-on site plus one.
    pub fn min_qubits(&self) -> usize {
        self.terms.iter().map(|(_, s)| s.min_qubits()).max().unwrap_or(0)
    }

    /// Union of the term supports, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut mask = 0u64;
        for (_, s) in &self.terms {
            mask |= s.x | s.z;
        }
        let mut out = Vec::new();
        let mut m = mask;
        while m != 0 {
            out.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> SpinOperator {
        SpinOperator::from_terms(self.terms.iter().map(|(a, s)| (c * a, s.clone())).collect())
    }

    pub fn add(&self, other: &SpinOperator) -> SpinOperator {
        let mut v: Vec<_> = self.terms.clone();
        v.extend(other.terms.iter().cloned());
        SpinOperator::from_terms(v)
    }

    pub fn sub(&self, other: &SpinOperator) -> SpinOperator {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Operator product.
    pub fn mul(&self, other: &SpinOperator) -> SpinOperator {
        let mut v = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, sa) in &self.terms {
            for (cb, sb) in &other.terms {
                let p = sa.product(sb);
                v.push((ca * cb * p.phase, PauliString { phase: Complex64::new(1.0, 0.0), x: p.x, z: p.z }));
            }
        }
        SpinOperator::from_terms(v)
    }

    pub fn adjoint(&self) -> SpinOperator {
        SpinOperator::from_terms(self.terms.iter().map(|(c, s)| (c.conj(), s.clone())).collect())
    }

    /// Deviation from Hermiticity: canonical terms have Hermitian strings, so
    /// this is the largest imaginary part over coefficients.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Sum of coefficient magnitudes; an upper bound on the spectral norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm()).sum()
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &SpinOperator) -> SpinOperator {
        self.mul(other).sub(&other.mul(self))
    }
}

impl fmt::Display for SpinOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, s)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:+.6}{:+.6}i)·{}", c.re, c.im, s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::dense::{pauli_matrix, spin_operator_matrix};
    use nalgebra::DMatrix;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::single(0, PauliLetter::X);
        let y = PauliString::single(0, PauliLetter::Y);
        let z = PauliString::single(0, PauliLetter::Z);

        let xy = x.product(&y);
        assert_eq!(xy.letter(0), PauliLetter::Z);
        assert!((xy.phase - c(0.0, 1.0)).norm() < 1e-15);

        let xx = x.product(&x);
        assert!(xx.is_identity());
        assert!((xx.phase - c(1.0, 0.0)).norm() < 1e-15);

        let yx = y.product(&x);
        assert!((yx.phase - c(0.0, -1.0)).norm() < 1e-15);

        let zy = z.product(&y);
        assert_eq!(zy.letter(0), PauliLetter::X);
        assert!((zy.phase - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn two_qubit_product_matches_matrix_oracle() {
        // (X0 Z1) · (Y0) = i Z0 Z1
        let a = PauliString::from_letters(
            c(1.0, 0.0),
            &[(0, PauliLetter::X), (1, PauliLetter::Z)],
        )
        .unwrap();
        let b = PauliString::single(0, PauliLetter::Y);
        let p = a.product(&b);
        assert_eq!(p.letter(0), PauliLetter::Z);
        assert_eq!(p.letter(1), PauliLetter::Z);
        assert!((p.phase - c(0.0, 1.0)).norm() < 1e-15);

        let ma = pauli_matrix(&a, 2).unwrap();
        let mb = pauli_matrix(&b, 2).unwrap();
        let mp = pauli_matrix(&p, 2).unwrap();
        assert!((&ma * &mb - mp).norm() < 1e-14);
    }

    fn random_string(rng: &mut StdRng, n: usize) -> PauliString {
        let letters = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];
        let pairs: Vec<(usize, PauliLetter)> =
            (0..n).map(|s| (s, letters[rng.gen_range(0..4)])).collect();
        let phases = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        PauliString::from_letters(phases[rng.gen_range(0..4)], &pairs).unwrap()
    }

    #[test]
    fn random_products_match_matrices_exactly() {
        let mut rng = StdRng::seed_from_u64(7);
        for n in 1..=4usize {
            for _ in 0..50 {
                let a = random_string(&mut rng, n);
                let b = random_string(&mut rng, n);
                let p = a.product(&b);
                let lhs = pauli_matrix(&a, n).unwrap() * pauli_matrix(&b, n).unwrap();
                let rhs = pauli_matrix(&p, n).unwrap();
                assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn canonical_form_merges_and_prunes() {
        let x = PauliString::single(0, PauliLetter::X);
        let op = SpinOperator::from_terms(vec![
            (c(1.0, 0.0), x.clone()),
            (c(1.0, 0.0), x.clone()),
            (c(-2.0, 0.0), x.clone()),
            (c(1e-16, 0.0), PauliString::single(1, PauliLetter::Z)),
        ]);
        assert!(op.is_zero());
    }

    #[test]
    fn hermitian_iff_adjoint_equal() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..20 {
            let s = random_string(&mut rng, 3);
            let coeff = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let op = SpinOperator::from_terms(vec![(coeff, s)]);
            let herm = op.add(&op.adjoint());
            assert!(herm.is_hermitian(1e-12));
            let m = spin_operator_matrix(&herm, 3).unwrap();
            let dev = (&m - m.adjoint()).norm();
            assert!(dev < 1e-13);
        }
    }

    #[test]
    fn operator_product_matches_matrix() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let a = SpinOperator::from_terms(
                (0..3).map(|_| (c(rng.gen(), rng.gen()), random_string(&mut rng, 3))).collect(),
            );
            let b = SpinOperator::from_terms(
                (0..3).map(|_| (c(rng.gen(), rng.gen()), random_string(&mut rng, 3))).collect(),
            );
            let lhs = spin_operator_matrix(&a.mul(&b), 3).unwrap();
            let rhs = spin_operator_matrix(&a, 3).unwrap() * spin_operator_matrix(&b, 3).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn commutes_with_agrees_with_matrices() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let a = random_string(&mut rng, 3);
            let b = random_string(&mut rng, 3);
            let ma = pauli_matrix(&a, 3).unwrap();
            let mb = pauli_matrix(&b, 3).unwrap();
            let comm: DMatrix<Complex64> = &ma * &mb - &mb * &ma;
            assert_eq!(a.commutes_with(&b), comm.norm() < 1e-12);
        }
    }
}
