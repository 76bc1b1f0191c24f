//! Gram systems `S a = -b` for the unitary fit and their solvers.
//!
//! Spin path: with the full Pauli basis over a domain of `d` sites, the
//! Gram matrix entries are `S_IJ = 2·Re[α(I,J)·⟨σ_{I∘J}⟩]`, so only `4^d`
//! expectation values are ever evaluated. Both those expectations and the
//! matrix-vector product are computed in the reduced domain picture: the
//! expectation vector is the Pauli transform of the reduced density matrix,
//! and `S·v` is the coefficient vector of the anticommutator `{Ê, V}` with
//! `Ê = 2^d·ρ_D`, costing two `2^d × 2^d` matrix products per application.
//!
//! Fermionic path: the singles/doubles generators give a small dense Gram
//! matrix, evaluated either directly on the statevector (small systems) or
//! through a mode-window reduction with rest-parity patterns (lattice
//! systems whose domains are contiguous up to wrap-around).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::{FermionicGenerator, SpinBasis};
use crate::operators::pauli::{product_masks, SpinOperator};
use crate::operators::statevector::{apply_spin_operator, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    ConjugateGradient,
    TruncatedSvd,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub method: SolverMethod,
    /// Relative residual target.
    pub tol: f64,
    /// Iteration cap; defaults to 10× the system dimension.
    pub max_iters: Option<usize>,
    /// Relative singular-value cutoff of the fallback solver.
    pub svd_cutoff: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: SolverMethod::ConjugateGradient,
            tol: 1e-10,
            max_iters: None,
            svd_cutoff: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub a: Vec<f64>,
    /// Relative residual `‖S a + b‖ / ‖b‖` (0 for zero `b`).
    pub residual: f64,
    pub iterations: usize,
    /// The direct method failed its tolerance and the truncated-SVD
    /// fallback produced the returned solution.
    pub fallback_used: bool,
}

enum GramRepr {
    /// Spin path: expectation vector over the implicit Pauli basis plus the
    /// window operator `Ê = 2^d ρ_D`.
    PauliConv { e: Vec<f64>, e_window: Vec<Complex64>, d: usize },
    /// Dense symmetric Gram matrix.
    Dense(DMatrix<f64>),
}

/// A built Gram system.
pub struct LinearSystem {
    pub dim: usize,
    pub b: Vec<f64>,
    /// Number of distinct statevector expectation values the build consumed.
    pub expectations_evaluated: usize,
    repr: GramRepr,
}

impl LinearSystem {
    /// Assemble a dense system directly (testing aid).
    pub fn from_dense_for_tests(s: DMatrix<f64>, b: Vec<f64>) -> Self {
        Self::dense(s, b, 0)
    }

    pub(crate) fn dense(s: DMatrix<f64>, b: Vec<f64>, expectations: usize) -> Self {
        LinearSystem {
            dim: b.len(),
            b,
            expectations_evaluated: expectations,
            repr: GramRepr::Dense(s),
        }
    }

    /// Gram entry `S_ij`.
    pub fn gram_entry(&self, i: usize, j: usize) -> f64 {
        match &self.repr {
            GramRepr::Dense(m) => m[(i, j)],
            GramRepr::PauliConv { e, d, .. } => {
                let bi = window_masks(i, *d);
                let bj = window_masks(j, *d);
                let (x, z, k) = product_masks(bi.0, bi.1, bj.0, bj.1);
                let idx = basis_index_from_masks(x, z, *d);
                // 2·Re[i^k e_idx]
                match k % 4 {
                    0 => 2.0 * e[idx],
                    2 => -2.0 * e[idx],
                    _ => 0.0,
                }
            }
        }
    }

    /// Materialized Gram matrix (small systems / tests).
    pub fn gram_dense(&self) -> DMatrix<f64> {
        match &self.repr {
            GramRepr::Dense(m) => m.clone(),
            GramRepr::PauliConv { .. } => {
                DMatrix::from_fn(self.dim, self.dim, |i, j| self.gram_entry(i, j))
            }
        }
    }

    /// `S · v`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        match &self.repr {
            GramRepr::Dense(m) => {
                let x = nalgebra::DVector::from_column_slice(v);
                (m * x).iter().copied().collect()
            }
            GramRepr::PauliConv { e_window, d, .. } => {
                // coefficients of {Ê, V}
                let vw = coeffs_to_window(v, *d);
                let dim = 1usize << *d;
                let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
                matmul_acc(&mut acc, e_window, &vw, dim);
                matmul_acc(&mut acc, &vw, e_window, dim);
                window_to_coeffs(&acc, *d)
            }
        }
    }
}

fn window_masks(index: usize, d: usize) -> (u64, u64) {
    let mut x = 0u64;
    let mut z = 0u64;
    for k in 0..d {
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

fn basis_index_from_masks(x: u64, z: u64, d: usize) -> usize {
    let mut idx = 0usize;
    for k in 0..d {
        let letter = match ((x >> k) & 1, (z >> k) & 1) {
            (0, 0) => 0usize,
            (1, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        idx |= letter << (2 * k);
    }
    idx
}

/// `acc += a·b` for row-major square complex matrices.
fn matmul_acc(acc: &mut [Complex64], a: &[Complex64], b: &[Complex64], n: usize) {
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            let row = &b[k * n..(k + 1) * n];
            let out = &mut acc[i * n..(i + 1) * n];
            for (o, &bv) in out.iter_mut().zip(row) {
                *o += aik * bv;
            }
        }
    }
}

/// Window matrix `Σ_I v_I σ_I` of a real coefficient vector.
pub(crate) fn coeffs_to_window(v: &[f64], d: usize) -> Vec<Complex64> {
    let dim = 1usize << d;
    let mut m = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (idx, &c) in v.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        add_window_string(&mut m, idx, Complex64::new(c, 0.0), d);
    }
    m
}

/// `m += coeff · σ_index` on the window.
fn add_window_string(m: &mut [Complex64], index: usize, coeff: Complex64, d: usize) {
    let dim = 1usize << d;
    let (x, z) = window_masks(index, d);
    let y = (x & z).count_ones();
    let base = coeff
        * match y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    for col in 0..dim {
        let sign = if ((col as u64) & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        m[(col ^ x as usize) * dim + col] += base * sign;
    }
}

/// Coefficients `(1/2^d)·tr(σ_I ·)` of a window matrix; imaginary parts are
/// discarded (callers pass Hermitian combinations).
fn window_to_coeffs(m: &[Complex64], d: usize) -> Vec<f64> {
    let dim = 1usize << d;
    let norm = 1.0 / dim as f64;
    let n_basis = 1usize << (2 * d);
    let mut out = vec![0.0f64; n_basis];
    for (idx, o) in out.iter_mut().enumerate() {
        let (x, z) = window_masks(idx, d);
        let y = (x & z).count_ones();
        let conj_base = match y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        // tr(σ_I m) = Σ_col (σ_I)[col, col^x] m[col^x, col]
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..dim {
            let row = col ^ x as usize;
            // (σ_I)[col, row]: σ_I maps |row⟩ to phase·|row ^ x⟩ = |col⟩
            let sign = if ((row as u64) & z).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            acc += conj_base * sign * m[row * dim + col];
        }
        *o = (acc * norm).re;
    }
    out
}

/// Reduced density matrix of `ψ` over the window sites (row-major window
/// matrix), plus the scatter tables used to move between pictures.
pub(crate) struct WindowView {
    pub dom_scatter: Vec<u64>,
    pub rest_scatter: Vec<u64>,
    pub d: usize,
}

pub(crate) fn window_view(sites: &[usize], n_qubits: usize) -> WindowView {
    let d = sites.len();
    let kept: u64 = sites.iter().map(|&s| 1u64 << s).sum();
    let rest_sites: Vec<usize> = (0..n_qubits).filter(|s| kept & (1 << s) == 0).collect();
    let dom_scatter: Vec<u64> = (0..1usize << d)
        .map(|a| {
            let mut g = 0u64;
            for (bit, &s) in sites.iter().enumerate() {
                if a >> bit & 1 == 1 {
                    g |= 1 << s;
                }
            }
            g
        })
        .collect();
    let rest_scatter: Vec<u64> = (0..1usize << rest_sites.len())
        .map(|r| {
            let mut g = 0u64;
            for (bit, &s) in rest_sites.iter().enumerate() {
                if r >> bit & 1 == 1 {
                    g |= 1 << s;
                }
            }
            g
        })
        .collect();
    WindowView { dom_scatter, rest_scatter, d }
}

pub(crate) fn reduced_density_window(view: &WindowView, psi: &StateVector) -> Vec<Complex64> {
    let dim = 1usize << view.d;
    let amps = psi.amplitudes();
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    for &rest in &view.rest_scatter {
        for a in 0..dim {
            let va = amps[(rest | view.dom_scatter[a]) as usize];
            if va.norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..dim {
                let vb = amps[(rest | view.dom_scatter[b]) as usize];
                rho[a * dim + b] += va * vb.conj();
            }
        }
    }
    rho
}

/// Build the spin-path Gram system for a grouped term over its domain:
/// `S_IJ = ⟨{σ_I, σ_J}⟩`, `b_I = i⟨[σ_I, h]⟩`, evaluated through `4^d`
/// expectation values of the domain basis.
pub fn build_spin_linear_system(
    basis: &SpinBasis,
    h_group: &SpinOperator,
    psi: &StateVector,
) -> Result<LinearSystem> {
    let d = basis.n_sites();
    let n = psi.n_qubits();
    for s in basis.sites() {
        if *s >= n {
            return Err(Error::SiteOutOfRange { index: *s, n_qubits: n });
        }
    }
    // h must act within the domain
    for site in h_group.support() {
        if !basis.sites().contains(&site) {
            return Err(Error::InvalidArgument(format!(
                "grouped term acts on site {site} outside its domain"
            )));
        }
    }
    let view = window_view(basis.sites(), n);
    let rho = reduced_density_window(&view, psi);
    let dim = 1usize << d;

    // expectation vector e_K = tr(σ_K ρ_D): the 4^d statevector expectations
    let e = {
        let coeffs = window_to_coeffs(&rho, d);
        coeffs.iter().map(|c| c * dim as f64).collect::<Vec<f64>>()
    };

    // h as a window matrix
    let mut h_window = vec![Complex64::new(0.0, 0.0); dim * dim];
    let site_pos: std::collections::HashMap<usize, usize> =
        basis.sites().iter().enumerate().map(|(k, &s)| (s, k)).collect();
    for (c, s) in h_group.terms() {
        let mut idx = 0usize;
        for site in s.support() {
            let k = site_pos[&site];
            let letter = match s.letter(site) {
                crate::operators::pauli::PauliLetter::X => 1usize,
                crate::operators::pauli::PauliLetter::Y => 2,
                crate::operators::pauli::PauliLetter::Z => 3,
                crate::operators::pauli::PauliLetter::I => 0,
            };
            idx |= letter << (2 * k);
        }
        add_window_string(&mut h_window, idx, c * s.phase, d);
    }

    // b_I = i·tr(σ_I [h, ρ]) : coefficients of i[h, ρ] scaled by 2^d
    let mut comm = vec![Complex64::new(0.0, 0.0); dim * dim];
    matmul_acc(&mut comm, &h_window, &rho, dim);
    let mut neg = vec![Complex64::new(0.0, 0.0); dim * dim];
    matmul_acc(&mut neg, &rho, &h_window, dim);
    for (cv, nv) in comm.iter_mut().zip(&neg) {
        *cv = Complex64::new(0.0, 1.0) * (*cv - nv);
    }
    let b: Vec<f64> = window_to_coeffs(&comm, d).iter().map(|c| c * dim as f64).collect();

    // Ê = 2^d ρ
    let e_window: Vec<Complex64> =
        rho.iter().map(|v| v * Complex64::new(dim as f64, 0.0)).collect();

    Ok(LinearSystem {
        dim: basis.len(),
        b,
        expectations_evaluated: basis.len(),
        repr: GramRepr::PauliConv { e, e_window, d },
    })
}

/// Build the fermionic Gram system over the cached generators by direct
/// statevector evaluation: `S_{μν} = 2Re⟨G_μψ|G_νψ⟩`,
/// `b_ν = -2Im⟨G_νψ|hψ⟩`.
pub fn build_fermionic_linear_system(
    generators: &[FermionicGenerator],
    h_group: &SpinOperator,
    psi: &StateVector,
) -> Result<LinearSystem> {
    let m = generators.len();
    let mut applied = Vec::with_capacity(m);
    for g in generators {
        applied.push(apply_spin_operator(&g.spin_op, psi)?);
    }
    let h_psi = apply_spin_operator(h_group, psi)?;
    let mut s = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = 2.0 * applied[i].inner(&applied[j])?.re;
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    let mut b = Vec::with_capacity(m);
    let mut expectations = m * (m + 1) / 2;
    for u in &applied {
        b.push(-2.0 * u.inner(&h_psi)?.im);
        expectations += 1;
    }
    Ok(LinearSystem { dim: m, b, expectations_evaluated: expectations, repr: GramRepr::Dense(s) })
}

/// Minimal-norm least-squares solution of `S a = -b`: conjugate gradients
/// from the zero vector (which stays in the range of `S`, so the limit is
/// the pseudo-inverse solution), with a truncated-SVD fallback when the
/// iteration fails its tolerance on a system small enough to factor.
pub fn solve_for_a(sys: &LinearSystem, cfg: &SolverConfig) -> Result<SolveResult> {
    let dim = sys.dim;
    let rhs: Vec<f64> = sys.b.iter().map(|v| -v).collect();
    let b_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
    if b_norm == 0.0 {
        return Ok(SolveResult { a: vec![0.0; dim], residual: 0.0, iterations: 0, fallback_used: false });
    }
    if cfg.method == SolverMethod::TruncatedSvd {
        let a = svd_solve(&sys.gram_dense(), &rhs, cfg.svd_cutoff)?;
        let res = residual_of(sys, &a, &rhs) / b_norm;
        return Ok(SolveResult { a, residual: res, iterations: 0, fallback_used: false });
    }

    let max_iters = cfg.max_iters.unwrap_or(10 * dim);
    let mut x = vec![0.0f64; dim];
    let mut r = rhs.clone();
    let mut p = r.clone();
    let mut rs_old: f64 = r.iter().map(|v| v * v).sum();
    let mut best = (x.clone(), rs_old.sqrt());
    let mut iterations = 0usize;
    for it in 0..max_iters {
        iterations = it + 1;
        let sp = sys.matvec(&p);
        let denom: f64 = p.iter().zip(&sp).map(|(a, b)| a * b).sum();
        if denom <= 0.0 {
            // left positive-semidefinite territory (roundoff); stop
            break;
        }
        let alpha = rs_old / denom;
        for ((xv, pv), _) in x.iter_mut().zip(&p).zip(0..dim) {
            *xv += alpha * pv;
        }
        for ((rv, spv), _) in r.iter_mut().zip(&sp).zip(0..dim) {
            *rv -= alpha * spv;
        }
        let rs_new: f64 = r.iter().map(|v| v * v).sum();
        if rs_new.sqrt() < best.1 {
            best = (x.clone(), rs_new.sqrt());
        }
        if rs_new.sqrt() <= cfg.tol * b_norm {
            return Ok(SolveResult {
                a: x,
                residual: rs_new.sqrt() / b_norm,
                iterations,
                fallback_used: false,
            });
        }
        let beta = rs_new / rs_old;
        for (pv, rv) in p.iter_mut().zip(&r) {
            *pv = rv + beta * *pv;
        }
        rs_old = rs_new;
    }

    // fallback for factorable sizes
    if dim <= 2048 {
        let a = svd_solve(&sys.gram_dense(), &rhs, cfg.svd_cutoff)?;
        let res = residual_of(sys, &a, &rhs) / b_norm;
        if res < best.1 / b_norm {
            return Ok(SolveResult { a, residual: res, iterations, fallback_used: true });
        }
    }
    Ok(SolveResult {
        a: best.0,
        residual: best.1 / b_norm,
        iterations,
        fallback_used: false,
    })
}

fn residual_of(sys: &LinearSystem, a: &[f64], rhs: &[f64]) -> f64 {
    let sa = sys.matvec(a);
    sa.iter()
        .zip(rhs)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn svd_solve(s: &DMatrix<f64>, rhs: &[f64], rel_cutoff: f64) -> Result<Vec<f64>> {
    let svd = s.clone().svd(true, true);
    let u = svd.u.as_ref().ok_or_else(|| Error::EigenFailed("svd failed".into()))?;
    let vt = svd.v_t.as_ref().ok_or_else(|| Error::EigenFailed("svd failed".into()))?;
    let smax = svd.singular_values.max();
    let y = u.transpose() * nalgebra::DVector::from_column_slice(rhs);
    let mut z = nalgebra::DVector::zeros(y.len());
    for i in 0..svd.singular_values.len() {
        let sv = svd.singular_values[i];
        if sv > rel_cutoff * smax {
            z[i] = y[i] / sv;
        }
    }
    Ok((vt.transpose() * z).iter().copied().collect())
}
