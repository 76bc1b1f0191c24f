//! The studied Hamiltonians as sums of local Hermitian terms.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::fcidump::FcidumpData;
use super::lattice::LatticeGraph;
use crate::operators::fermion::{excitation, FermionOperator};
use crate::operators::jw::jordan_wigner;
use crate::operators::pauli::{PauliLetter, PauliString, SpinOperator};
use crate::{Error, Result};

/// Interaction structure of a two-body lattice model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingSpec {
    /// Uniform coupling `j` on nearest-neighbor edges.
    Nearest { j: f64 },
    /// `j1` on nearest-neighbor edges and `j2` on pairs two hops apart.
    NextNearest { j1: f64, j2: f64 },
    /// `J_ij = d(i,j)^{-alpha}` on all pairs, hop distance `d`.
    LongRange { alpha: f64 },
}

#[derive(Debug, Clone)]
pub enum TermOperator {
    Spin(SpinOperator),
    Fermion(FermionOperator),
}

/// One Hermitian term together with the sites/orbitals it acts on.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    pub operator: TermOperator,
    /// Sorted site (spin) or spatial-orbital (fermionic) indices.
    pub support: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianKind {
    Spin,
    Fermionic,
}

/// Sum of local Hermitian terms plus a constant shift.
#[derive(Debug, Clone)]
pub struct ProblemHamiltonian {
    pub terms: Vec<HamiltonianTerm>,
    pub constant: f64,
    pub kind: HamiltonianKind,
    /// Number of spins, lattice sites or spatial orbitals.
    pub n_sites: usize,
    /// Number of fermionic modes (2·n_sites for fermionic systems); equals
    /// `n_sites` for spin systems.
    pub n_modes: usize,
    /// Electron count for particle-conserving systems (half filling for the
    /// Hubbard model, active-space electron count for molecules).
    pub n_electrons: Option<usize>,
}

impl ProblemHamiltonian {
    /// Number of qubits a statevector needs.
    pub fn n_qubits(&self) -> usize {
        match self.kind {
            HamiltonianKind::Spin => self.n_sites,
            HamiltonianKind::Fermionic => self.n_modes,
        }
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Qubit representation of one term.
    pub fn term_spin_operator(&self, idx: usize) -> Result<SpinOperator> {
        match &self.terms[idx].operator {
            TermOperator::Spin(op) => Ok(op.clone()),
            TermOperator::Fermion(op) => jordan_wigner(op, self.n_modes),
        }
    }

    /// Qubit representation of the full Hamiltonian including the constant.
    pub fn total_spin_operator(&self) -> Result<SpinOperator> {
        let mut acc = SpinOperator::identity(self.constant);
        for i in 0..self.terms.len() {
            acc = acc.add(&self.term_spin_operator(i)?);
        }
        Ok(acc)
    }
}

fn pair_couplings(g: &LatticeGraph, spec: CouplingSpec) -> Result<Vec<(usize, usize, f64)>> {
    let pairs = match spec {
        CouplingSpec::Nearest { j } => {
            g.edges().iter().map(|&(a, b)| (a, b, j)).collect()
        }
        CouplingSpec::NextNearest { j1, j2 } => {
            let mut v: Vec<(usize, usize, f64)> =
                g.edges().iter().map(|&(a, b)| (a, b, j1)).collect();
            for (a, b) in g.pairs_at_distance(2)? {
                v.push((a, b, j2));
            }
            v.sort_unstable_by_key(|&(a, b, _)| (a, b));
            v
        }
        CouplingSpec::LongRange { alpha } => {
            if alpha <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "long-range exponent must be positive, got {alpha}"
                )));
            }
            let mut v = Vec::new();
            for i in 0..g.n_sites() {
                let dist = g.distances_from(i)?;
                for j in (i + 1)..g.n_sites() {
                    let d = dist[j];
                    if d == 0 || d == usize::MAX {
                        continue;
                    }
                    v.push((i, j, (d as f64).powf(-alpha)));
                }
            }
            v
        }
    };
    Ok(order_into_matching_layers(pairs))
}

/// Order pair terms into greedy matching layers: repeatedly scan the
/// remaining pairs in lexicographic order and take a maximal set of
/// site-disjoint pairs. Pairs within one layer commute, so the split-step
/// sequence is insensitive to ordering inside a layer.
fn order_into_matching_layers(mut pairs: Vec<(usize, usize, f64)>) -> Vec<(usize, usize, f64)> {
    pairs.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let mut out = Vec::with_capacity(pairs.len());
    while !pairs.is_empty() {
        let mut used = std::collections::HashSet::new();
        let mut rest = Vec::new();
        for p in pairs {
            if used.contains(&p.0) || used.contains(&p.1) {
                rest.push(p);
            } else {
                used.insert(p.0);
                used.insert(p.1);
                out.push(p);
            }
        }
        pairs = rest;
    }
    out
}

fn two_site_exchange(i: usize, j: usize, weight: f64, letters: &[PauliLetter]) -> SpinOperator {
    let mut terms = Vec::new();
    for &l in letters {
        let s = PauliString::from_letters(Complex64::new(1.0, 0.0), &[(i, l), (j, l)])
            .expect("sites in range");
        terms.push((Complex64::new(weight, 0.0), s));
    }
    SpinOperator::from_terms(terms)
}

/// Heisenberg model: pair terms `J_ij (XX + YY + ZZ)` grouped per
/// interacting pair, plus per-site field terms `B Z_i`.
pub fn build_heisenberg(
    g: &LatticeGraph,
    spec: CouplingSpec,
    field: f64,
) -> Result<ProblemHamiltonian> {
    use PauliLetter::{X, Y, Z};
    let mut terms = Vec::new();
    for (i, j, w) in pair_couplings(g, spec)? {
        terms.push(HamiltonianTerm {
            operator: TermOperator::Spin(two_site_exchange(i, j, w, &[X, Y, Z])),
            support: vec![i, j],
        });
    }
    if field != 0.0 {
        for i in 0..g.n_sites() {
            let op = SpinOperator::from_terms(vec![(
                Complex64::new(field, 0.0),
                PauliString::single(i, Z),
            )]);
            terms.push(HamiltonianTerm { operator: TermOperator::Spin(op), support: vec![i] });
        }
    }
    Ok(ProblemHamiltonian {
        terms,
        constant: 0.0,
        kind: HamiltonianKind::Spin,
        n_sites: g.n_sites(),
        n_modes: g.n_sites(),
        n_electrons: None,
    })
}

/// Transverse-field Ising model: `J_ij X_i X_j` pair terms plus `B Z_i`
/// field terms.
pub fn build_tfim(g: &LatticeGraph, spec: CouplingSpec, field: f64) -> Result<ProblemHamiltonian> {
    use PauliLetter::{X, Z};
    let mut terms = Vec::new();
    for (i, j, w) in pair_couplings(g, spec)? {
        terms.push(HamiltonianTerm {
            operator: TermOperator::Spin(two_site_exchange(i, j, w, &[X])),
            support: vec![i, j],
        });
    }
    if field != 0.0 {
        for i in 0..g.n_sites() {
            let op = SpinOperator::from_terms(vec![(
                Complex64::new(field, 0.0),
                PauliString::single(i, Z),
            )]);
            terms.push(HamiltonianTerm { operator: TermOperator::Spin(op), support: vec![i] });
        }
    }
    Ok(ProblemHamiltonian {
        terms,
        constant: 0.0,
        kind: HamiltonianKind::Spin,
        n_sites: g.n_sites(),
        n_modes: g.n_sites(),
        n_electrons: None,
    })
}

/// Fermi-Hubbard model at half filling: `-t Ê_pq` hopping on nearest
/// neighbors and on-site `U/2 (Ê_pp² - Ê_pp)`.
pub fn build_fermi_hubbard(g: &LatticeGraph, t: f64, u: f64) -> Result<ProblemHamiltonian> {
    let one = Complex64::new(1.0, 0.0);
    let l = g.n_sites();
    let mut terms = Vec::new();
    for &(p, q) in g.edges() {
        let hop = excitation(p, q).add(&excitation(q, p)).scale(Complex64::new(-t, 0.0));
        terms.push(HamiltonianTerm { operator: TermOperator::Fermion(hop), support: vec![p, q] });
    }
    for p in 0..l {
        let epp = excitation(p, p);
        let onsite = epp.mul(&epp).sub(&epp).scale(Complex64::new(u / 2.0, 0.0));
        terms.push(HamiltonianTerm {
            operator: TermOperator::Fermion(onsite.scale(one)),
            support: vec![p],
        });
    }
    Ok(ProblemHamiltonian {
        terms,
        constant: 0.0,
        kind: HamiltonianKind::Fermionic,
        n_sites: l,
        n_modes: 2 * l,
        n_electrons: Some(l),
    })
}

/// Active-space molecular Hamiltonian
/// `Σ h_pq Ê_pq + ½ Σ g_pqrs (Ê_pq Ê_rs − Ê_ps δ_qr) + h_nuc`.
///
/// Pieces are aggregated into one Hermitian term per distinct spatial-orbital
/// set, which becomes the term's support.
pub fn build_active_space_hamiltonian(f: &FcidumpData) -> Result<ProblemHamiltonian> {
    let n = f.n_orb;
    let mut groups: BTreeMap<Vec<usize>, FermionOperator> = BTreeMap::new();
    let mut add = |orbitals: Vec<usize>, op: FermionOperator| {
        let entry = groups.entry(orbitals).or_insert_with(FermionOperator::zero);
        *entry = entry.add(&op);
    };

    for p in 0..n {
        for q in 0..n {
            let h = f.h1(p, q);
            if h.abs() < 1e-15 {
                continue;
            }
            let mut orbs = vec![p, q];
            orbs.sort_unstable();
            orbs.dedup();
            add(orbs, excitation(p, q).scale(Complex64::new(h, 0.0)));
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let gv = f.h2(p, q, r, s);
                    if gv.abs() < 1e-15 {
                        continue;
                    }
                    let mut orbs = vec![p, q, r, s];
                    orbs.sort_unstable();
                    orbs.dedup();
                    let mut op = excitation(p, q).mul(&excitation(r, s));
                    if q == r {
                        op = op.sub(&excitation(p, s));
                    }
                    add(orbs, op.scale(Complex64::new(gv / 2.0, 0.0)));
                }
            }
        }
    }

    let terms = groups
        .into_iter()
        .map(|(support, operator)| HamiltonianTerm {
            operator: TermOperator::Fermion(operator),
            support,
        })
        .collect();
    Ok(ProblemHamiltonian {
        terms,
        constant: f.core,
        kind: HamiltonianKind::Fermionic,
        n_sites: n,
        n_modes: 2 * n,
        n_electrons: Some(f.n_elec),
    })
}
