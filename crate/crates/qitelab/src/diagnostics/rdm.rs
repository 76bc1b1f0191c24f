//! Orbital reduced density matrices, entropies, mutual information and the
//! entanglement-based multi-configurational diagnostic.
//!
//! Orbital `p` owns modes `(2p, 2p+1)`. Reduced density matrices are formed
//! by direct amplitude contraction over the complement modes in the
//! occupation-number basis; local basis index bit `2k`/`2k+1` is the
//! occupation of the `k`-th kept orbital's α/β mode.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::operators::StateVector;
use crate::{Error, Result};

/// Eigenvalues below this are treated as exact zeros in entropies.
const ENTROPY_FLOOR: f64 = 1e-14;

/// Symmetric orbital-pair mutual information with zero diagonal.
#[derive(Debug, Clone)]
pub struct MutualInfoMatrix {
    n_orbitals: usize,
    entries: Vec<f64>,
    /// Single-orbital entropies `s_i(1)`.
    pub single_entropies: Vec<f64>,
}

impl MutualInfoMatrix {
    /// Assemble from raw entries (testing aid and file ingestion).
    pub fn from_raw_for_tests(n_orbitals: usize, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), n_orbitals * n_orbitals);
        MutualInfoMatrix { n_orbitals, entries, single_entropies: vec![0.0; n_orbitals] }
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n_orbitals + j]
    }

    /// Largest entry over `q ∉ exclude` of `max_{p ∈ probe} I(p, q)`;
    /// ties resolved toward the lower index.
    pub fn strongest_partner(&self, probe: &[usize], exclude: &[usize]) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for q in 0..self.n_orbitals {
            if exclude.contains(&q) {
                continue;
            }
            let v = probe.iter().map(|&p| self.get(p, q)).fold(f64::MIN, f64::max);
            match best {
                Some((bv, _)) if v <= bv => {}
                _ => best = Some((v, q)),
            }
        }
        best.map(|(_, q)| q)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n_orbitals {
            let row: Vec<String> =
                (0..self.n_orbitals).map(|j| format!("{:.12e}", self.get(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Reduced density matrix of 1 or 2 orbitals (4×4 or 16×16), Hermitian with
/// unit trace.
pub fn orbital_rdm(psi: &StateVector, orbitals: &[usize]) -> Result<DMatrix<Complex64>> {
    if orbitals.is_empty() || orbitals.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "orbital subsets of size 1 or 2 supported, got {}",
            orbitals.len()
        )));
    }
    if orbitals.len() == 2 && orbitals[0] == orbitals[1] {
        return Err(Error::InvalidArgument("repeated orbital index".into()));
    }
    let n = psi.n_qubits();
    if n % 2 != 0 {
        return Err(Error::DimensionMismatch(format!(
            "state has {n} modes, expected an even spin-orbital count"
        )));
    }
    let mut modes = Vec::with_capacity(2 * orbitals.len());
    for &p in orbitals {
        if 2 * p + 1 >= n {
            return Err(Error::ModeOutOfRange { index: 2 * p + 1, n_modes: n });
        }
        modes.push(2 * p);
        modes.push(2 * p + 1);
    }
    Ok(reduced_density_matrix(psi, &modes))
}

/// Occupation-basis reduced density matrix over an arbitrary sorted mode
/// subset.
pub fn reduced_density_matrix(psi: &StateVector, modes: &[usize]) -> DMatrix<Complex64> {
    let n = psi.n_qubits();
    let k = modes.len();
    let kept: u64 = modes.iter().map(|&m| 1u64 << m).sum();
    let rest_modes: Vec<usize> = (0..n).filter(|m| kept & (1 << m) == 0).collect();
    let dim_local = 1usize << k;
    let dim_rest = 1usize << rest_modes.len();

    let scatter_local: Vec<u64> = (0..dim_local)
        .map(|a| {
            let mut g = 0u64;
            for (bit, &m) in modes.iter().enumerate() {
                if a >> bit & 1 == 1 {
                    g |= 1 << m;
                }
            }
            g
        })
        .collect();
    let scatter_rest: Vec<u64> = (0..dim_rest)
        .map(|r| {
            let mut g = 0u64;
            for (bit, &m) in rest_modes.iter().enumerate() {
                if r >> bit & 1 == 1 {
                    g |= 1 << m;
                }
            }
            g
        })
        .collect();

    let amps = psi.amplitudes();
    let mut rho = DMatrix::<Complex64>::zeros(dim_local, dim_local);
    for r in 0..dim_rest {
        let base = scatter_rest[r];
        for a in 0..dim_local {
            let va = amps[(base | scatter_local[a]) as usize];
            if va.norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..dim_local {
                let vb = amps[(base | scatter_local[b]) as usize];
                rho[(a, b)] += va * vb.conj();
            }
        }
    }
    rho
}

/// Eigenvalues of a Hermitian complex matrix via the real symmetric
/// embedding (each eigenvalue appears twice in the embedding).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let d = m.nrows();
    let mut emb = DMatrix::<f64>::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let v = m[(i, j)];
            emb[(i, j)] = v.re;
            emb[(i + d, j + d)] = v.re;
            emb[(i + d, j)] = v.im;
            emb[(i, j + d)] = -v.im;
        }
    }
    let mut vals: Vec<f64> = nalgebra::SymmetricEigen::new(emb).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals.into_iter().step_by(2).collect()
}

/// Von Neumann entropy `-Σ ω ln ω` of a Hermitian density matrix.
pub fn von_neumann_entropy(rho: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&w| w > ENTROPY_FLOOR)
        .map(|w| -w * w.ln())
        .sum()
}

/// Orbital-pair mutual information
/// `I(i,j) = -½ (s_ij(2) - s_i(1) - s_j(1)) (1 - δ_ij)`, entries clipped at 0.
pub fn mutual_information(psi: &StateVector, n_orbitals: usize) -> Result<MutualInfoMatrix> {
    if 2 * n_orbitals != psi.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "{} orbitals need {} modes, state has {}",
            n_orbitals,
            2 * n_orbitals,
            psi.n_qubits()
        )));
    }
    let mut s1 = Vec::with_capacity(n_orbitals);
    for i in 0..n_orbitals {
        s1.push(von_neumann_entropy(&orbital_rdm(psi, &[i])?));
    }
    let mut entries = vec![0.0; n_orbitals * n_orbitals];
    for i in 0..n_orbitals {
        for j in (i + 1)..n_orbitals {
            let s2 = von_neumann_entropy(&orbital_rdm(psi, &[i, j])?);
            let v = (-0.5 * (s2 - s1[i] - s1[j])).max(0.0);
            entries[i * n_orbitals + j] = v;
            entries[j * n_orbitals + i] = v;
        }
    }
    Ok(MutualInfoMatrix { n_orbitals, entries, single_entropies: s1 })
}

/// Entanglement-based multi-configurational diagnostic
/// `Z_{s(1)} = Σ_i s_i(1) / (L ln 4)`, in `[0, 1]`.
pub fn multiref_diagnostic(psi: &StateVector, n_orbitals: usize) -> Result<f64> {
    if 2 * n_orbitals != psi.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "{} orbitals need {} modes, state has {}",
            n_orbitals,
            2 * n_orbitals,
            psi.n_qubits()
        )));
    }
    let mut total = 0.0;
    for i in 0..n_orbitals {
        total += von_neumann_entropy(&orbital_rdm(psi, &[i])?);
    }
    Ok(total / (n_orbitals as f64 * 4f64.ln()))
}
