//! Operator bases for the unitary fit.

use num_complex::Complex64;

use crate::operators::fermion::excitation;
use crate::operators::jw::jordan_wigner;
use crate::operators::pauli::{PauliString, SpinOperator};
use crate::operators::FermionOperator;
use crate::{Error, Result};

/// Default cap on the domain size of the full Pauli basis (`4^7 = 16384`).
pub const SPIN_DOMAIN_CAP: usize = 7;

/// The full Pauli basis over a domain, enumerated implicitly: basis index
/// `I` assigns letter `(I >> 2k) & 3` (0:identity, 1:X, 2:Y, 3:Z) to the
/// `k`-th domain site.
#[derive(Debug, Clone)]
pub struct SpinBasis {
    sites: Vec<usize>,
}

impl SpinBasis {
    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn len(&self) -> usize {
        1usize << (2 * self.sites.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Window-level masks of element `index` (bits relative to domain
    /// positions): X-mask and Z-mask of the letter string.
    pub fn window_masks(&self, index: usize) -> (u64, u64) {
        let mut x = 0u64;
        let mut z = 0u64;
        for k in 0..self.sites.len() {
            match (index >> (2 * k)) & 3 {
                1 => x |= 1 << k,
                2 => {
                    x |= 1 << k;
                    z |= 1 << k;
                }
                3 => z |= 1 << k,
                _ => {}
            }
        }
        (x, z)
    }

    /// The element as a Pauli string on the global sites.
    pub fn string(&self, index: usize) -> PauliString {
        let mut x = 0u64;
        let mut z = 0u64;
        for (k, &site) in self.sites.iter().enumerate() {
            match (index >> (2 * k)) & 3 {
                1 => x |= 1 << site,
                2 => {
                    x |= 1 << site;
                    z |= 1 << site;
                }
                3 => z |= 1 << site,
                _ => {}
            }
        }
        PauliString::from_masks(Complex64::new(1.0, 0.0), x, z)
    }

    /// Materialize the deterministic enumeration (small domains).
    pub fn strings(&self) -> Vec<PauliString> {
        (0..self.len()).map(|i| self.string(i)).collect()
    }
}

/// All `4^{|D|}` Pauli strings (including the identity) over the domain.
/// Refuses domains above `cap` with a cost report.
pub fn spin_basis(domain: &[usize], cap: usize) -> Result<SpinBasis> {
    let d = domain.len();
    if d > cap {
        return Err(Error::Infeasible(format!(
            "domain of {d} sites needs 4^{d} = {} basis strings and a {}×{0} Gram system; \
             cap is {cap} sites",
            4f64.powi(d as i32),
            4f64.powi(d as i32),
        )));
    }
    let mut sites = domain.to_vec();
    sites.sort_unstable();
    sites.dedup();
    if sites.len() != d {
        return Err(Error::InvalidArgument("repeated site in domain".into()));
    }
    Ok(SpinBasis { sites })
}

/// One Hermitian excitation generator with its qubit representation.
#[derive(Debug, Clone)]
pub struct FermionicGenerator {
    pub label: String,
    pub fermion_op: FermionOperator,
    pub spin_op: SpinOperator,
}

/// Hermitian singles `i(Ê_pq − Ê_qp)` over ordered pairs `p ≠ q` and
/// doubles `i(Ê_pq Ê_rs − Ê_sr Ê_qp)` over `p ≤ r`, `q ≤ s`, all indices in
/// the domain. The inclusive pair ordering keeps the same-pair generators
/// (`p = r` or `q = s`, e.g. the two-electron pair hop `i(Ê_pq² − h.c.)`)
/// that carry on-site pair fluctuations; identically vanishing generators
/// are dropped and the mapped qubit operators are canonicalized once and
/// cached.
pub fn fermionic_basis(domain: &[usize], n_orbitals: usize) -> Result<Vec<FermionicGenerator>> {
    let i1 = Complex64::new(0.0, 1.0);
    for &p in domain {
        if p >= n_orbitals {
            return Err(Error::ModeOutOfRange { index: p, n_modes: n_orbitals });
        }
    }
    let n_modes = 2 * n_orbitals;
    let mut out = Vec::new();
    for &p in domain {
        for &q in domain {
            if p == q {
                continue;
            }
            let f = excitation(p, q).sub(&excitation(q, p)).scale(i1);
            let s = jordan_wigner(&f, n_modes)?;
            if s.is_zero() {
                continue;
            }
            out.push(FermionicGenerator { label: format!("s({p},{q})"), fermion_op: f, spin_op: s });
        }
    }
    for (ia, &p) in domain.iter().enumerate() {
        for &r in &domain[ia..] {
            for (jb, &q) in domain.iter().enumerate() {
                for &s in &domain[jb..] {
                    let fwd = excitation(p, q).mul(&excitation(r, s));
                    let rev = excitation(s, r).mul(&excitation(q, p));
                    let f = fwd.sub(&rev).scale(i1);
                    let op = jordan_wigner(&f, n_modes)?;
                    if op.is_zero() {
                        continue;
                    }
                    out.push(FermionicGenerator {
                        label: format!("d({p},{q};{r},{s})"),
                        fermion_op: f,
                        spin_op: op,
                    });
                }
            }
        }
    }
    Ok(out)
}
