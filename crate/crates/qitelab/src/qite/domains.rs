//! Support/domain selection and grouped-term scheduling.
//!
//! Spin lattices take every site within hop distance ν of a term's support;
//! fermionic lattices add the ν sites nearest in hop distance with random
//! tie-breaking inside the last distance shell; molecular systems add the ν
//! orbitals with the largest mutual information toward any support orbital,
//! ties toward the lower index. Terms sharing an identical domain are united
//! into one group; domains that are proper subsets of another stay separate
//! groups automatically.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::MutualInfoMatrix;
use crate::hamiltonians::{HamiltonianKind, LatticeGraph, ProblemHamiltonian};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// All `4^{|D|}` Pauli strings over the domain.
    FullPauli,
    /// Single and double orbital-excitation generators over the domain.
    SinglesDoubles,
}

/// How domains are chosen for the Hamiltonian terms.
pub enum DomainSelector<'a> {
    /// Hop distances on the lattice (spin and fermionic-lattice systems).
    Lattice(&'a LatticeGraph),
    /// Orbital-pair mutual information (molecular systems).
    MutualInformation(&'a MutualInfoMatrix),
}

/// One grouped term.
#[derive(Debug, Clone)]
pub struct DomainGroup {
    /// Indices of the original Hamiltonian terms united here.
    pub term_indices: Vec<usize>,
    /// Union of the member supports, sorted.
    pub support: Vec<usize>,
    /// Sorted site/orbital domain.
    pub domain: Vec<usize>,
    /// Majorana index set of the domain (fermionic systems): indices
    /// `{4p, 4p+1, 4p+2, 4p+3}` for each domain orbital `p` under the
    /// two-modes-per-orbital layout.
    pub majorana_domain: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct DomainPlan {
    pub groups: Vec<DomainGroup>,
    pub nu: usize,
    pub seed: u64,
    pub basis: BasisKind,
    pub kind: HamiltonianKind,
    /// Whether ν was large enough that every domain covers the full system.
    pub covers_system: bool,
    pub n_sites: usize,
}

impl DomainPlan {
    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// Human-readable dump: term → support → domain → basis size.
    pub fn describe(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# domain plan: nu={} seed={} basis={:?} groups={}",
            self.nu,
            self.seed,
            self.basis,
            self.groups.len()
        );
        for (gi, g) in self.groups.iter().enumerate() {
            let size = match self.basis {
                BasisKind::FullPauli => 4usize.pow(g.domain.len() as u32).to_string(),
                BasisKind::SinglesDoubles => {
                    let k = g.domain.len();
                    let singles = k * k.saturating_sub(1);
                    // ordered index pairs incl. same-pair doubles, minus the
                    // diagonal-diagonal candidates that vanish identically
                    let pairs_le = k * (k + 1) / 2;
                    let doubles = pairs_le * pairs_le - pairs_le;
                    format!("{}", singles + doubles)
                }
            };
            let _ = writeln!(
                out,
                "group {gi}: terms {:?} support {:?} -> domain {:?} (basis size {size})",
                g.term_indices, g.support, g.domain
            );
        }
        out
    }
}

/// Choose domains for every term of `h` and group terms with identical
/// domains. ν large enough to exceed the system clamps to the full site set.
pub fn plan_domains(
    h: &ProblemHamiltonian,
    selector: &DomainSelector<'_>,
    nu: usize,
    seed: u64,
) -> Result<DomainPlan> {
    let n_sites = h.n_sites;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut domains: Vec<Vec<usize>> = Vec::with_capacity(h.terms.len());
    for term in &h.terms {
        let support = &term.support;
        for &s in support {
            if s >= n_sites {
                return Err(Error::SiteOutOfRange { index: s, n_qubits: n_sites });
            }
        }
        let domain = match selector {
            DomainSelector::Lattice(g) => {
                if g.n_sites() != n_sites {
                    return Err(Error::DimensionMismatch(format!(
                        "lattice has {} sites, Hamiltonian {}",
                        g.n_sites(),
                        n_sites
                    )));
                }
                match h.kind {
                    HamiltonianKind::Spin => ball_domain(g, support, nu)?,
                    HamiltonianKind::Fermionic => {
                        nearest_sites_domain(g, support, nu, &mut rng)?
                    }
                }
            }
            DomainSelector::MutualInformation(mi) => {
                if mi.n_orbitals() != n_sites {
                    return Err(Error::DimensionMismatch(format!(
                        "mutual information over {} orbitals, Hamiltonian {}",
                        mi.n_orbitals(),
                        n_sites
                    )));
                }
                mutual_information_domain(mi, support, nu)
            }
        };
        domains.push(domain);
    }

    // group by identical domain, preserving first-appearance order
    let mut groups: Vec<DomainGroup> = Vec::new();
    for (idx, domain) in domains.iter().enumerate() {
        if let Some(g) = groups.iter_mut().find(|g| &g.domain == domain) {
            g.term_indices.push(idx);
            for &s in &h.terms[idx].support {
                if !g.support.contains(&s) {
                    g.support.push(s);
                }
            }
            g.support.sort_unstable();
        } else {
            let majorana_domain = match h.kind {
                HamiltonianKind::Spin => Vec::new(),
                HamiltonianKind::Fermionic => domain
                    .iter()
                    .flat_map(|&p| [4 * p, 4 * p + 1, 4 * p + 2, 4 * p + 3])
                    .collect(),
            };
            groups.push(DomainGroup {
                term_indices: vec![idx],
                support: h.terms[idx].support.clone(),
                domain: domain.clone(),
                majorana_domain,
            });
        }
    }
    let covers_system = groups.iter().all(|g| g.domain.len() == n_sites);
    Ok(DomainPlan {
        groups,
        nu,
        seed,
        basis: match h.kind {
            HamiltonianKind::Spin => BasisKind::FullPauli,
            HamiltonianKind::Fermionic => BasisKind::SinglesDoubles,
        },
        kind: h.kind,
        covers_system,
        n_sites,
    })
}

/// All sites within hop distance ν of the support.
fn ball_domain(g: &LatticeGraph, support: &[usize], nu: usize) -> Result<Vec<usize>> {
    let mut min_dist = vec![usize::MAX; g.n_sites()];
    for &s in support {
        let d = g.distances_from(s)?;
        for (i, &v) in d.iter().enumerate() {
            min_dist[i] = min_dist[i].min(v);
        }
    }
    Ok((0..g.n_sites()).filter(|&i| min_dist[i] <= nu).collect())
}

/// Support plus the ν nearest additional sites; whole distance shells are
/// taken while they fit, the last partial shell is drawn randomly.
fn nearest_sites_domain(
    g: &LatticeGraph,
    support: &[usize],
    nu: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<usize>> {
    let mut min_dist = vec![usize::MAX; g.n_sites()];
    for &s in support {
        let d = g.distances_from(s)?;
        for (i, &v) in d.iter().enumerate() {
            min_dist[i] = min_dist[i].min(v);
        }
    }
    let mut domain: Vec<usize> = support.to_vec();
    let mut remaining = nu.min(g.n_sites() - support.len());
    let mut shell_dist = 1usize;
    while remaining > 0 {
        let mut shell: Vec<usize> =
            (0..g.n_sites()).filter(|&i| min_dist[i] == shell_dist).collect();
        if shell.is_empty() {
            break;
        }
        if shell.len() <= remaining {
            remaining -= shell.len();
            domain.extend(shell);
        } else {
            shell.shuffle(rng);
            domain.extend(shell.into_iter().take(remaining));
            remaining = 0;
        }
        shell_dist += 1;
    }
    domain.sort_unstable();
    domain.dedup();
    Ok(domain)
}

/// Support plus the ν orbitals with the largest mutual information toward
/// any support orbital; ties resolve toward the lower index.
fn mutual_information_domain(
    mi: &MutualInfoMatrix,
    support: &[usize],
    nu: usize,
) -> Vec<usize> {
    let n = mi.n_orbitals();
    let mut scored: Vec<(f64, usize)> = (0..n)
        .filter(|q| !support.contains(q))
        .map(|q| {
            let score = support.iter().map(|&p| mi.get(p, q)).fold(f64::MIN, f64::max);
            (score, q)
        })
        .collect();
    // descending score, ascending index on ties
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut domain: Vec<usize> = support.to_vec();
    domain.extend(scored.into_iter().take(nu).map(|(_, q)| q));
    domain.sort_unstable();
    domain.dedup();
    domain
}
