//! Second-quantized fermionic operators as lists of ladder-operator products.

use num_complex::Complex64;

use crate::{Error, Result};

/// Creation or annihilation on a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

impl Ladder {
    pub fn mode(&self) -> usize {
        match *self {
            Ladder::Create(m) | Ladder::Annihilate(m) => m,
        }
    }
}

/// Sum of complex coefficients times products of ladder operators, applied
/// left to right as written (the first factor acts last on a ket).
#[derive(Debug, Clone, Default)]
pub struct FermionOperator {
    terms: Vec<(Complex64, Vec<Ladder>)>,
}

impl FermionOperator {
    pub fn zero() -> Self {
        FermionOperator { terms: Vec::new() }
    }

    pub fn identity(c: Complex64) -> Self {
        FermionOperator { terms: vec![(c, Vec::new())] }
    }

    pub fn from_terms(terms: Vec<(Complex64, Vec<Ladder>)>) -> Self {
        FermionOperator { terms }
    }

    pub fn term(c: Complex64, ops: Vec<Ladder>) -> Self {
        FermionOperator { terms: vec![(c, ops)] }
    }

    /// `c†_p c_q`.
    pub fn hop(c: Complex64, p: usize, q: usize) -> Self {
        Self::term(c, vec![Ladder::Create(p), Ladder::Annihilate(q)])
    }

    pub fn terms(&self) -> &[(Complex64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FermionOperator) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        FermionOperator { terms: t }
    }

    pub fn sub(&self, other: &FermionOperator) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FermionOperator {
            terms: self.terms.iter().map(|(a, ops)| (c * a, ops.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &FermionOperator) -> Self {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, oa) in &self.terms {
            for (cb, ob) in &other.terms {
                let mut ops = oa.clone();
                ops.extend(ob.iter().copied());
                t.push((ca * cb, ops));
            }
        }
        FermionOperator { terms: t }
    }

    /// Hermitian adjoint: reverse each product, swap create/annihilate,
    /// conjugate coefficients.
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, ops)| {
                let rev: Vec<Ladder> = ops
                    .iter()
                    .rev()
                    .map(|l| match *l {
                        Ladder::Create(m) => Ladder::Annihilate(m),
                        Ladder::Annihilate(m) => Ladder::Create(m),
                    })
                    .collect();
                (c.conj(), rev)
            })
            .collect();
        FermionOperator { terms }
    }

    /// Largest referenced mode plus one.
    pub fn min_modes(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(_, ops)| ops.iter().map(|l| l.mode() + 1))
            .max()
            .unwrap_or(0)
    }

    /// Sorted set of referenced modes.
    pub fn support_modes(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|(_, ops)| ops.iter().map(|l| l.mode()))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn check_modes(&self, n_modes: usize) -> Result<()> {
        let m = self.min_modes();
        if m > n_modes {
            return Err(Error::ModeOutOfRange { index: m - 1, n_modes });
        }
        Ok(())
    }
}

/// Spin-orbital layout: spatial orbital `p` owns modes `(2p, 2p+1)` for the
/// `(α, β)` spin pair.
pub fn alpha_mode(orbital: usize) -> usize {
    2 * orbital
}

pub fn beta_mode(orbital: usize) -> usize {
    2 * orbital + 1
}

/// Orbital excitation operator `Ê_pq = c†_{pα}c_{qα} + c†_{pβ}c_{qβ}`.
pub fn excitation(p: usize, q: usize) -> FermionOperator {
    let one = Complex64::new(1.0, 0.0);
    FermionOperator::hop(one, alpha_mode(p), alpha_mode(q))
        .add(&FermionOperator::hop(one, beta_mode(p), beta_mode(q)))
}
