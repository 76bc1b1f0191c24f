//! Mode-window engine for fermionic-lattice systems beyond dense reach.
//!
//! A group's generators act on its domain modes plus parity strings through
//! the complement; every operator splits as `W ⊗ Z_P` with `W` on the
//! window and a Z-pattern `P` on the rest. For real-amplitude states (real
//! integrals) every generator is `i·K` with `K` real antisymmetric, so the
//! whole substep runs in real arithmetic: pattern-signed reduced densities,
//! sparse window contractions for the Gram data, and an orthogonal window
//! update `exp(Δτ·K)` per rest-parity class.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::basis::FermionicGenerator;
use super::linsys::{window_view, LinearSystem, WindowView};
use crate::fgs::covariance::expm_real;
use crate::operators::pauli::SpinOperator;
use crate::operators::StateVector;
use crate::{Error, Result};

/// Sparse real window matrix in coordinate form.
#[derive(Debug, Clone, Default)]
struct SparseReal {
    entries: Vec<(u32, u32, f64)>,
}

impl SparseReal {
    fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub(crate) struct FermionWindowEngine {
    w: usize,
    /// Distinct rest Z-patterns; index 0 is the empty pattern.
    patterns: Vec<u64>,
    /// Per generator, per pattern id: the real `K` with `G = iK`.
    gens: Vec<Vec<SparseReal>>,
    /// Grouped-term window parts (real symmetric), per pattern id.
    h_parts: Vec<SparseReal>,
    view: WindowView,
    /// Per rest index: sign bits over patterns.
    rest_class: Vec<u8>,
    n_qubits: usize,
}

impl FermionWindowEngine {
    pub fn build(
        domain_modes: &[usize],
        generators: &[FermionicGenerator],
        h_group: &SpinOperator,
        n_qubits: usize,
    ) -> Result<Self> {
        let mut modes = domain_modes.to_vec();
        modes.sort_unstable();
        modes.dedup();
        let w = modes.len();
        if w > 12 {
            return Err(Error::Infeasible(format!(
                "window of {w} modes exceeds the supported engine size"
            )));
        }
        let window_mask: u64 = modes.iter().map(|&m| 1u64 << m).sum();
        let mut patterns: Vec<u64> = vec![0];
        let pattern_id = |p: u64, patterns: &mut Vec<u64>| -> Result<usize> {
            if let Some(i) = patterns.iter().position(|&q| q == p) {
                return Ok(i);
            }
            if patterns.len() >= 8 {
                return Err(Error::Infeasible(
                    "domain induces more than 8 rest-parity patterns".into(),
                ));
            }
            patterns.push(p);
            Ok(patterns.len() - 1)
        };

        let mode_pos: std::collections::HashMap<usize, usize> =
            modes.iter().enumerate().map(|(k, &m)| (m, k)).collect();

        // split a qubit operator into (pattern, window matrix) parts; the
        // conversion factor turns G = iK into the real K
        let split =
            |op: &SpinOperator, to_real: num_complex::Complex64, patterns: &mut Vec<u64>| -> Result<Vec<SparseReal>> {
                let dim = 1usize << w;
                let mut dense: Vec<Vec<f64>> = Vec::new();
                let mut ids: Vec<usize> = Vec::new();
                for (c, s) in op.terms() {
                    let sx = s.x_mask();
                    let sz = s.z_mask();
                    if sx & !window_mask != 0 {
                        return Err(Error::Infeasible(
                            "generator flips a mode outside its window".into(),
                        ));
                    }
                    let p = sz & !window_mask;
                    let pid = pattern_id(p, patterns)?;
                    let slot = match ids.iter().position(|&i| i == pid) {
                        Some(k) => k,
                        None => {
                            ids.push(pid);
                            dense.push(vec![0.0; dim * dim]);
                            dense.len() - 1
                        }
                    };
                    // window-restricted masks
                    let mut wx = 0u64;
                    let mut wz = 0u64;
                    for (&m, k) in mode_pos.iter() {
                        if sx & (1 << m) != 0 {
                            wx |= 1 << k;
                        }
                        if sz & (1 << m) != 0 {
                            wz |= 1 << k;
                        }
                    }
                    let y = (wx & wz).count_ones();
                    let base = c
                        * s.phase
                        * crate::operators::pauli::i_pow(y)
                        * to_real;
                    for col in 0..dim {
                        let sign =
                            if ((col as u64) & wz).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                        let v = base * sign;
                        if v.im.abs() > 1e-10 {
                            return Err(Error::InvalidArgument(
                                "window part is not real; engine requires real integrals".into(),
                            ));
                        }
                        dense[slot][(col ^ wx as usize) * dim + col] += v.re;
                    }
                }
                let mut out = vec![SparseReal::default(); patterns.len()];
                for (slot, pid) in ids.iter().enumerate() {
                    let mut entries = Vec::new();
                    for r in 0..dim {
                        for cidx in 0..dim {
                            let v = dense[slot][r * dim + cidx];
                            if v.abs() > 1e-14 {
                                entries.push((r as u32, cidx as u32, v));
                            }
                        }
                    }
                    out[*pid] = SparseReal { entries };
                }
                Ok(out)
            };

        let minus_i = num_complex::Complex64::new(0.0, -1.0);
        let one = num_complex::Complex64::new(1.0, 0.0);
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            gens.push(split(&g.spin_op, minus_i, &mut patterns)?);
        }
        let h_parts = split(h_group, one, &mut patterns)?;
        // close the pattern set under xor so products stay representable
        loop {
            let mut added = false;
            'outer: for i in 0..patterns.len() {
                for j in 0..patterns.len() {
                    let x = patterns[i] ^ patterns[j];
                    if !patterns.contains(&x) {
                        if patterns.len() >= 8 {
                            return Err(Error::Infeasible(
                                "domain induces more than 8 rest-parity patterns".into(),
                            ));
                        }
                        patterns.push(x);
                        added = true;
                        break 'outer;
                    }
                }
            }
            if !added {
                break;
            }
        }
        let np = patterns.len();
        for g in gens.iter_mut() {
            g.resize(np, SparseReal::default());
        }
        let mut h_parts = h_parts;
        h_parts.resize(np, SparseReal::default());

        let view = window_view(&modes, n_qubits);
        let rest_class: Vec<u8> = view
            .rest_scatter
            .iter()
            .map(|&rest_bits| {
                let mut c = 0u8;
                for (k, &p) in patterns.iter().enumerate() {
                    if (rest_bits & p).count_ones() % 2 == 1 {
                        c |= 1 << k;
                    }
                }
                c
            })
            .collect();
        let _ = modes;
        Ok(FermionWindowEngine { w, patterns, gens, h_parts, view, rest_class, n_qubits })
    }

    /// Gather the real amplitudes into window-major layout `Ψ[a][e]`.
    fn gather(&self, psi: &StateVector) -> Result<Vec<f64>> {
        if !psi.is_real(1e-9) {
            return Err(Error::InvalidArgument(
                "window engine requires a real-amplitude state".into(),
            ));
        }
        let dim_w = 1usize << self.w;
        let amps = psi.amplitudes();
        let n_rest = self.view.rest_scatter.len();
        let mut out = vec![0.0f64; dim_w * n_rest];
        for (a, &dom_bits) in self.view.dom_scatter.iter().enumerate() {
            let row = &mut out[a * n_rest..(a + 1) * n_rest];
            for (e, &rest_bits) in self.view.rest_scatter.iter().enumerate() {
                row[e] = amps[(dom_bits | rest_bits) as usize].re;
            }
        }
        Ok(out)
    }

    fn scatter(&self, data: &[f64], n_qubits: usize) -> StateVector {
        let n_rest = self.view.rest_scatter.len();
        let mut amps =
            vec![num_complex::Complex64::new(0.0, 0.0); 1usize << n_qubits];
        for (a, &dom_bits) in self.view.dom_scatter.iter().enumerate() {
            let row = &data[a * n_rest..(a + 1) * n_rest];
            for (e, &rest_bits) in self.view.rest_scatter.iter().enumerate() {
                amps[(dom_bits | rest_bits) as usize] =
                    num_complex::Complex64::new(row[e], 0.0);
            }
        }
        let mut sv = StateVector::from_amplitudes(amps).expect("norm preserved");
        sv.normalize();
        sv
    }

    /// Pattern-signed reduced densities `ρ^{(P)} = Ψ diag(±) Ψᵀ`.
    fn reduced_densities(&self, big_psi: &[f64]) -> Vec<DMatrix<f64>> {
        let dim_w = 1usize << self.w;
        let n_rest = self.view.rest_scatter.len();
        self.patterns
            .iter()
            .enumerate()
            .map(|(pid, _)| {
                let bit = 1u8 << pid;
                let mut rho = DMatrix::<f64>::zeros(dim_w, dim_w);
                let cols: Vec<Vec<f64>> = (0..dim_w)
                    .into_par_iter()
                    .map(|a| {
                        let ra = &big_psi[a * n_rest..(a + 1) * n_rest];
                        let mut out = vec![0.0f64; dim_w];
                        for (b, o) in out.iter_mut().enumerate().take(a + 1) {
                            let rb = &big_psi[b * n_rest..(b + 1) * n_rest];
                            let mut acc = 0.0f64;
                            if pid == 0 {
                                for (x, y) in ra.iter().zip(rb) {
                                    acc += x * y;
                                }
                            } else {
                                for ((x, y), cls) in
                                    ra.iter().zip(rb).zip(&self.rest_class)
                                {
                                    let s = if cls & bit == 0 { 1.0 } else { -1.0 };
                                    acc += s * x * y;
                                }
                            }
                            *o = acc;
                        }
                        out
                    })
                    .collect();
                for (a, row) in cols.iter().enumerate() {
                    for b in 0..=a {
                        rho[(a, b)] = row[b];
                        rho[(b, a)] = row[b];
                    }
                }
                rho
            })
            .collect()
    }

    /// Build the Gram system on the current state.
    pub fn build_system(&self, psi: &StateVector) -> Result<LinearSystem> {
        let big_psi = self.gather(psi)?;
        let rhos = self.reduced_densities(&big_psi);
        let dim_w = 1usize << self.w;
        let m = self.gens.len();
        let np = self.patterns.len();

        // S_{μν} = -2 Σ_{P,Q} tr(ρ^{(P xor Q)} K_μ^P K_ν^Q)
        //        = -2 Σ_{P,Q} Σ_{(b,c) in K_μ^P} val · (K_ν^Q ρ^{(P xor Q)})[c, b]
        // computed one ν-column at a time to keep the dense intermediates
        // K_ν^Q ρ^{(R)} small; columns are independent.
        let columns: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|nu| {
                let z_nu: Vec<Vec<Option<DMatrix<f64>>>> = self.gens[nu]
                    .iter()
                    .map(|k| {
                        (0..np)
                            .map(|r| {
                                if k.is_empty() {
                                    None
                                } else {
                                    Some(sparse_times_dense(k, &rhos[r], dim_w))
                                }
                            })
                            .collect()
                    })
                    .collect();
                let mut col = vec![0.0f64; nu + 1];
                for (mu, cv) in col.iter_mut().enumerate() {
                    let mut acc = 0.0f64;
                    for p in 0..np {
                        let kp = &self.gens[mu][p];
                        if kp.is_empty() {
                            continue;
                        }
                        for q in 0..np {
                            let r = self.pattern_xor(p, q);
                            if let Some(zq) = &z_nu[q][r] {
                                for &(bb, cc, val) in &kp.entries {
                                    acc += val * zq[(cc as usize, bb as usize)];
                                }
                            }
                        }
                    }
                    *cv = -2.0 * acc;
                }
                col
            })
            .collect();
        let mut s = DMatrix::<f64>::zeros(m, m);
        for (nu, col) in columns.iter().enumerate() {
            for (mu, &v) in col.iter().enumerate() {
                s[(mu, nu)] = v;
                s[(nu, mu)] = v;
            }
        }

        // b_ν = -Σ_{P,Q} tr(ρ^{(P xor Q)} (K_ν^P H^Q − H^Q K_ν^P))
        let hrho: Vec<Vec<DMatrix<f64>>> = self
            .h_parts
            .iter()
            .map(|hq| (0..np).map(|r| sparse_times_dense(hq, &rhos[r], dim_w)).collect())
            .collect();
        let mut b = vec![0.0f64; m];
        for nu in 0..m {
            let mut acc = 0.0f64;
            for p in 0..np {
                let kp = &self.gens[nu][p];
                if kp.is_empty() {
                    continue;
                }
                for q in 0..np {
                    if self.h_parts[q].is_empty() {
                        continue;
                    }
                    let r = self.pattern_xor(p, q);
                    // tr(ρ K H) = Σ_{(b,c) in K} val·(H ρ)[c, b]
                    let h_rho = &hrho[q][r];
                    let mut t1 = 0.0;
                    for &(bb, cc, val) in &kp.entries {
                        t1 += val * h_rho[(cc as usize, bb as usize)];
                    }
                    // tr(ρ H K) = Σ_{(b,c) in K} val·(ρ H)[b→?]. Use
                    // tr(ρHK) = Σ_{(b,c)} K[b,c]·(ρH)[c, b]; ρH = (Hᵀρᵀ)ᵀ…
                    // with ρ symmetric and H symmetric: ρH = (Hρ)ᵀ.
                    let mut t2 = 0.0;
                    for &(bb, cc, val) in &kp.entries {
                        t2 += val * h_rho[(bb as usize, cc as usize)];
                    }
                    acc += t1 - t2;
                }
            }
            b[nu] = -acc;
        }

        let expectations = m * (m + 1) / 2 + m;
        Ok(LinearSystem::dense(s, b, expectations))
    }

    fn pattern_xor(&self, p: usize, q: usize) -> usize {
        let mask = self.patterns[p] ^ self.patterns[q];
        self.patterns
            .iter()
            .position(|&x| x == mask)
            .expect("pattern set closed under xor")
    }

    /// Apply `exp(-i·scale·Σ a_μ G_μ) = exp(scale·Σ a_μ K_μ)` per
    /// rest-parity class; orthogonal, so the norm is preserved.
    pub fn apply_update(&self, psi: &StateVector, a: &[f64], scale: f64) -> Result<StateVector> {
        let dim_w = 1usize << self.w;
        let np = self.patterns.len();
        // per-pattern combined K
        let mut k_pat: Vec<DMatrix<f64>> = vec![DMatrix::zeros(dim_w, dim_w); np];
        for (amu, parts) in a.iter().zip(&self.gens) {
            if *amu == 0.0 {
                continue;
            }
            for (pid, part) in parts.iter().enumerate() {
                for &(r, c, v) in &part.entries {
                    k_pat[pid][(r as usize, c as usize)] += amu * v;
                }
            }
        }
        // distinct classes present
        let mut classes: Vec<u8> = self.rest_class.clone();
        classes.sort_unstable();
        classes.dedup();
        let mut big_psi = self.gather(psi)?;
        let n_rest = self.view.rest_scatter.len();
        for &cls in &classes {
            let mut k = DMatrix::<f64>::zeros(dim_w, dim_w);
            for (pid, kp) in k_pat.iter().enumerate() {
                let sgn = if cls & (1 << pid) == 0 { 1.0 } else { -1.0 };
                k += kp * sgn;
            }
            let u = expm_real(&(k * scale));
            // gather class columns, multiply, scatter
            let cols: Vec<usize> =
                (0..n_rest).filter(|&e| self.rest_class[e] == cls).collect();
            let mut block = vec![0.0f64; dim_w * cols.len()];
            for (j, &e) in cols.iter().enumerate() {
                for aidx in 0..dim_w {
                    block[aidx * cols.len() + j] = big_psi[aidx * n_rest + e];
                }
            }
            let out = real_gemm(&u, &block, dim_w, cols.len());
            for (j, &e) in cols.iter().enumerate() {
                for aidx in 0..dim_w {
                    big_psi[aidx * n_rest + e] = out[aidx * cols.len() + j];
                }
            }
        }
        Ok(self.scatter(&big_psi, self.n_qubits))
    }
}

fn sparse_times_dense(k: &SparseReal, rho: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    for &(r, c, v) in &k.entries {
        let (r, c) = (r as usize, c as usize);
        for j in 0..dim {
            out[(r, j)] += v * rho[(c, j)];
        }
    }
    out
}

/// `u (dim×dim) · block (dim×cols)` row-major, parallel over output rows.
fn real_gemm(u: &DMatrix<f64>, block: &[f64], dim: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; dim * cols];
    out.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
        for k in 0..dim {
            let w = u[(i, k)];
            if w == 0.0 {
                continue;
            }
            let src = &block[k * cols..(k + 1) * cols];
            for (o, &s) in row.iter_mut().zip(src) {
                *o += w * s;
            }
        }
    });
    out
}
