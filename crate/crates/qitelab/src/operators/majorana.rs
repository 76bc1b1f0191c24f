//! Majorana monomials and polynomials.
//!
//! Mode `p` owns two Majorana indices: `2p` for `c†_p + c_p` and `2p+1` for
//! `i(c†_p − c_p)`. A monomial stores the coefficient of the plain ordered
//! product `Π_{μ ascending} a_μ`; the Hermitian-normalized form carries an
//! extra `(-i)^{k(k-1)/2}` prefactor, so `hermitian_coefficient` is real for
//! Hermitian operators.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::fermion::{FermionOperator, Ladder};
use super::pauli::{i_pow, COEFF_PRUNE};
use crate::{Error, Result};

/// Coefficient times an ascending product of Majorana generators.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaMonomial {
    pub coefficient: Complex64,
    indices: Vec<usize>,
}

impl MajoranaMonomial {
    /// Requires strictly increasing indices.
    pub fn new(coefficient: Complex64, indices: Vec<usize>) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::RepeatedIndex(w[1]));
            }
        }
        Ok(MajoranaMonomial { coefficient, indices })
    }

    pub fn identity(c: Complex64) -> Self {
        MajoranaMonomial { coefficient: c, indices: Vec::new() }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    /// Coefficient in the Hermitian basis `γ = (-i)^{k(k-1)/2} Π a_μ`:
    /// `coefficient · i^{k(k-1)/2}`.
    pub fn hermitian_coefficient(&self) -> Complex64 {
        let k = self.indices.len() as u32;
        self.coefficient * i_pow(k * (k.wrapping_sub(1)) / 2)
    }

    pub fn has_even_degree(&self) -> bool {
        self.indices.len() % 2 == 0
    }
}

/// Multiply two ascending index lists, returning the sign from reordering and
/// the reduced ascending list (using `a_μ² = 1`).
pub(crate) fn multiply_index_lists(a: &[usize], b: &[usize]) -> (f64, Vec<usize>) {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut sign = 1.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            merged.push(a[i]);
            i += 1;
        } else {
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            merged.push(b[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    let mut out = Vec::with_capacity(merged.len());
    let mut k = 0;
    while k < merged.len() {
        if k + 1 < merged.len() && merged[k] == merged[k + 1] {
            k += 2;
        } else {
            out.push(merged[k]);
            k += 1;
        }
    }
    (sign, out)
}

/// Polynomial in Majorana generators, canonicalized by index list.
#[derive(Debug, Clone, Default)]
pub struct MajoranaOperator {
    terms: BTreeMap<Vec<usize>, Complex64>,
}

impl MajoranaOperator {
    pub fn zero() -> Self {
        MajoranaOperator { terms: BTreeMap::new() }
    }

    pub fn identity(c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), c);
        MajoranaOperator { terms }
    }

    pub fn from_monomial(m: &MajoranaMonomial) -> Self {
        let mut op = MajoranaOperator::zero();
        op.accumulate(m.coefficient, m.indices.clone());
        op
    }

    fn accumulate(&mut self, c: Complex64, idx: Vec<usize>) {
        *self.terms.entry(idx).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= COEFF_PRUNE);
    }

    pub fn monomials(&self) -> impl Iterator<Item = MajoranaMonomial> + '_ {
        self.terms.iter().map(|(idx, c)| MajoranaMonomial {
            coefficient: *c,
            indices: idx.clone(),
        })
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_assign(&mut self, other: &MajoranaOperator) {
        for (idx, c) in &other.terms {
            self.accumulate(*c, idx.clone());
        }
        self.prune();
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), c * v)).collect();
        MajoranaOperator { terms }
    }

    pub fn mul(&self, other: &MajoranaOperator) -> Self {
        let mut out = MajoranaOperator::zero();
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                let (sign, idx) = multiply_index_lists(ia, ib);
                out.accumulate(ca * cb * sign, idx);
            }
        }
        out.prune();
        out
    }

    /// Expand a ladder-operator polynomial into Majorana generators.
    pub fn from_fermion_operator(op: &FermionOperator) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let ihalf = Complex64::new(0.0, 0.5);
        let mut out = MajoranaOperator::zero();
        for (c, ops) in op.terms() {
            let mut acc = MajoranaOperator::identity(*c);
            for l in ops {
                let (m, sgn) = match *l {
                    // c_p  = (a_{2p} + i a_{2p+1}) / 2
                    Ladder::Annihilate(p) => (p, 1.0),
                    // c†_p = (a_{2p} - i a_{2p+1}) / 2
                    Ladder::Create(p) => (p, -1.0),
                };
                let mut factor = MajoranaOperator::zero();
                factor.accumulate(half, vec![2 * m]);
                factor.accumulate(ihalf * sgn, vec![2 * m + 1]);
                acc = acc.mul(&factor);
            }
            out.add_assign(&acc);
        }
        out.prune();
        out
    }

    /// Largest referenced Majorana index plus one.
    pub fn min_majorana_indices(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|k| k.last().map(|m| m + 1))
            .max()
            .unwrap_or(0)
    }
}
