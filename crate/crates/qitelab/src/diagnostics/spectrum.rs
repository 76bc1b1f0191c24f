//! Lowest eigenpairs of a problem Hamiltonian: dense symmetric
//! diagonalization at small sizes, Lanczos with full reorthogonalization and
//! thick restarts above that.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::hamiltonians::ProblemHamiltonian;
use crate::operators::pauli::{i_pow, SpinOperator};
use crate::operators::StateVector;
use crate::{Error, Result};

pub const DENSE_QUBIT_CAP: usize = 14;
pub const LANCZOS_QUBIT_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    Dense,
    Lanczos,
}

#[derive(Debug, Clone)]
pub struct SpectrumConfig {
    /// Force a method; `None` picks dense for ≤ 10 qubits, Lanczos above.
    pub method: Option<SpectrumMethod>,
    pub seed: u64,
    /// Relative residual target for Lanczos Ritz pairs.
    pub tol: f64,
    pub max_basis: usize,
    pub max_restarts: usize,
    /// Restrict to the occupation sector with this particle count
    /// (`spectrum` fills it from the Hamiltonian's electron count).
    pub particle_sector: Option<usize>,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            method: None,
            seed: 1,
            tol: 1e-10,
            max_basis: 60,
            max_restarts: 80,
            particle_sector: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Lowest eigenvalues, ascending (constant shift included).
    pub eigenvalues: Vec<f64>,
    pub ground_state: StateVector,
    pub method: SpectrumMethod,
    /// `‖Hx - θx‖` per returned eigenpair.
    pub residuals: Vec<f64>,
    /// Ground level within 1e-10 of the next one.
    pub degenerate_ground: bool,
}

impl SpectrumResult {
    pub fn e0(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn e1(&self) -> f64 {
        self.eigenvalues[1]
    }

    pub fn gap(&self) -> f64 {
        self.e1() - self.e0()
    }
}

/// Lowest `k ≥ 2` eigenpairs of `h`. For particle-conserving fermionic
/// Hamiltonians the search is restricted to the recorded electron-count
/// sector, matching the convention of fixed-particle-number
/// diagonalization.
pub fn spectrum(h: &ProblemHamiltonian, k: usize, cfg: &SpectrumConfig) -> Result<SpectrumResult> {
    let op = h.total_spin_operator()?;
    let mut cfg = cfg.clone();
    if cfg.particle_sector.is_none() {
        cfg.particle_sector = h.n_electrons;
    }
    spectrum_of_operator(&op, h.n_qubits(), k, &cfg)
}

/// Lowest `k ≥ 2` eigenpairs of a Hermitian spin operator with real matrix
/// elements.
pub fn spectrum_of_operator(
    op: &SpinOperator,
    n_qubits: usize,
    k: usize,
    cfg: &SpectrumConfig,
) -> Result<SpectrumResult> {
    let k = k.max(2);
    if !op.is_hermitian(1e-10) {
        return Err(Error::NotHermitian(op.hermiticity_deviation()));
    }
    let method = cfg.method.unwrap_or(if n_qubits <= 10 {
        SpectrumMethod::Dense
    } else {
        SpectrumMethod::Lanczos
    });
    match method {
        SpectrumMethod::Dense => {
            if n_qubits > DENSE_QUBIT_CAP {
                return Err(Error::Infeasible(format!(
                    "dense diagonalization capped at {DENSE_QUBIT_CAP} qubits, got {n_qubits}"
                )));
            }
            dense_spectrum(op, n_qubits, k, cfg.particle_sector)
        }
        SpectrumMethod::Lanczos => {
            if n_qubits > LANCZOS_QUBIT_CAP {
                return Err(Error::Infeasible(format!(
                    "iterative diagonalization capped at {LANCZOS_QUBIT_CAP} qubits, got {n_qubits}"
                )));
            }
            lanczos_spectrum(op, n_qubits, k, cfg)
        }
    }
}

/// Apply a real-matrix-element spin operator to a real vector.
pub(crate) fn apply_real(op: &SpinOperator, n_qubits: usize, v: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|x| *x = 0.0);
    let _ = n_qubits;
    for (c, s) in op.terms() {
        let base = c * s.phase * i_pow(s.y_count());
        debug_assert!(base.im.abs() < 1e-12);
        let w = base.re;
        let x = s.x_mask() as usize;
        let z = s.z_mask();
        for (b, &a) in v.iter().enumerate() {
            let sign = if ((b as u64) & z).count_ones() % 2 == 0 { w } else { -w };
            out[b ^ x] += sign * a;
        }
    }
}

/// Check that every term has real matrix elements (even number of Y letters
/// and real coefficient at canonical phase).
fn check_real_matrix(op: &SpinOperator) -> Result<()> {
    for (c, s) in op.terms() {
        let base = c * s.phase * i_pow(s.y_count());
        if base.im.abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "operator has complex matrix elements; iterative solver requires a real \
                 representation"
                    .into(),
            ));
        }
    }
    Ok(())
}

fn real_to_state(v: &DVector<f64>, n_qubits: usize) -> StateVector {
    let amps: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut sv = StateVector::from_amplitudes(amps).expect("nonzero eigenvector");
    debug_assert_eq!(sv.n_qubits(), n_qubits);
    sv.normalize();
    sv
}

fn dense_spectrum(
    op: &SpinOperator,
    n_qubits: usize,
    k: usize,
    sector: Option<usize>,
) -> Result<SpectrumResult> {
    let full_dim = 1usize << n_qubits;
    // basis of the restricted (or full) occupation sector
    let basis_states: Vec<usize> = match sector {
        Some(n_el) => (0..full_dim).filter(|b| b.count_ones() as usize == n_el).collect(),
        None => (0..full_dim).collect(),
    };
    let dim = basis_states.len();
    if dim == 0 {
        return Err(Error::InvalidArgument("empty occupation sector".into()));
    }
    let mut pos = vec![usize::MAX; full_dim];
    for (i, &b) in basis_states.iter().enumerate() {
        pos[b] = i;
    }
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    let mut col = vec![0.0f64; full_dim];
    let mut out = vec![0.0f64; full_dim];
    for (j, &b) in basis_states.iter().enumerate() {
        col.iter_mut().for_each(|x| *x = 0.0);
        col[b] = 1.0;
        apply_real(op, n_qubits, &col, &mut out);
        for (g, &v) in out.iter().enumerate() {
            if v != 0.0 {
                let i = pos[g];
                if i == usize::MAX {
                    return Err(Error::InvalidArgument(
                        "operator does not preserve the requested sector".into(),
                    ));
                }
                m[(i, j)] = v;
            }
        }
    }
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| sym.eigenvalues[a].total_cmp(&sym.eigenvalues[b]));
    let k_eff = k.min(dim);
    let eigenvalues: Vec<f64> = order[..k_eff].iter().map(|&i| sym.eigenvalues[i]).collect();
    let mut gs_full = DVector::zeros(full_dim);
    for (i, &b) in basis_states.iter().enumerate() {
        gs_full[b] = sym.eigenvectors[(i, order[0])];
    }
    let mut residuals = Vec::with_capacity(k_eff);
    for &i in &order[..k_eff] {
        let v = sym.eigenvectors.column(i);
        let r = &m * v - sym.eigenvalues[i] * v;
        residuals.push(r.norm());
    }
    let degenerate_ground =
        eigenvalues.len() > 1 && (eigenvalues[1] - eigenvalues[0]).abs() < 1e-10;
    Ok(SpectrumResult {
        eigenvalues,
        ground_state: real_to_state(&gs_full, n_qubits),
        method: SpectrumMethod::Dense,
        residuals,
        degenerate_ground,
    })
}

fn lanczos_spectrum(
    op: &SpinOperator,
    n_qubits: usize,
    k: usize,
    cfg: &SpectrumConfig,
) -> Result<SpectrumResult> {
    check_real_matrix(op)?;
    let dim = 1usize << n_qubits;
    let scale = op.one_norm().max(1.0);
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let max_basis = cfg.max_basis.min(dim).max(k + 8);
    let keep = (k + 6).min(max_basis - 2);

    // basis vectors and their images under H
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(max_basis);
    let mut images: Vec<DVector<f64>> = Vec::with_capacity(max_basis);
    let mut t = DMatrix::<f64>::zeros(max_basis, max_basis);

    let mut v0 = DVector::from_fn(dim, |_, _| rng.gen::<f64>() - 0.5);
    project_sector(&mut v0, cfg.particle_sector);
    let n0 = v0.norm();
    if n0 == 0.0 {
        return Err(Error::InvalidArgument("empty occupation sector".into()));
    }
    v0 /= n0;
    push_vector(op, n_qubits, v0, &mut basis, &mut images, &mut t);

    let mut buf = vec![0.0f64; dim];
    for _restart in 0..cfg.max_restarts {
        while basis.len() < max_basis {
            // next direction: H v_last reorthogonalized against the basis
            let mut w = images.last().expect("nonempty").clone();
            project_sector(&mut w, cfg.particle_sector);
            orthogonalize(&mut w, &basis);
            orthogonalize(&mut w, &basis);
            let nrm = w.norm();
            let v = if nrm < 1e-12 * scale {
                // invariant subspace: restart with a fresh random direction
                let mut r = DVector::from_fn(dim, |_, _| rng.gen::<f64>() - 0.5);
                project_sector(&mut r, cfg.particle_sector);
                orthogonalize(&mut r, &basis);
                orthogonalize(&mut r, &basis);
                let rn = r.norm();
                if rn < 1e-12 {
                    break;
                }
                r / rn
            } else {
                w / nrm
            };
            push_vector(op, n_qubits, v, &mut basis, &mut images, &mut t);
            let _ = &mut buf;
        }

        let m = basis.len();
        let tm = t.view((0, 0), (m, m)).into_owned();
        let sym = nalgebra::SymmetricEigen::new(tm);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| sym.eigenvalues[a].total_cmp(&sym.eigenvalues[b]));

        // Ritz residuals for the lowest k pairs
        let k_eff = k.min(m);
        let mut ritz_vecs: Vec<DVector<f64>> = Vec::with_capacity(keep.min(m));
        let mut ritz_images: Vec<DVector<f64>> = Vec::with_capacity(keep.min(m));
        let mut vals = Vec::with_capacity(keep.min(m));
        for &i in order.iter().take(keep.min(m)) {
            let s = sym.eigenvectors.column(i);
            let mut x = DVector::zeros(dim);
            let mut hx = DVector::zeros(dim);
            for (j, (b, im)) in basis.iter().zip(&images).enumerate() {
                x.axpy(s[j], b, 1.0);
                hx.axpy(s[j], im, 1.0);
            }
            ritz_vecs.push(x);
            ritz_images.push(hx);
            vals.push(sym.eigenvalues[i]);
        }
        let residuals: Vec<f64> = ritz_vecs
            .iter()
            .zip(&ritz_images)
            .zip(&vals)
            .map(|((x, hx), &th)| (hx - th * x).norm())
            .collect();
        let converged = residuals.iter().take(k_eff).all(|&r| r <= cfg.tol * scale);
        if converged && m >= k_eff {
            let eigenvalues = vals[..k_eff].to_vec();
            let degenerate_ground =
                eigenvalues.len() > 1 && (eigenvalues[1] - eigenvalues[0]).abs() < 1e-10;
            return Ok(SpectrumResult {
                eigenvalues,
                ground_state: real_to_state(&ritz_vecs[0], n_qubits),
                method: SpectrumMethod::Lanczos,
                residuals: residuals[..k_eff].to_vec(),
                degenerate_ground,
            });
        }

        // thick restart: re-seed the subspace with the kept Ritz vectors
        basis.clear();
        images.clear();
        t.fill(0.0);
        for (mut x, hx) in ritz_vecs.into_iter().zip(ritz_images) {
            orthogonalize(&mut x, &basis);
            let nrm = x.norm();
            if nrm < 1e-12 {
                continue;
            }
            x /= nrm;
            // recompute the image to keep t consistent after normalization
            let _ = hx;
            push_vector(op, n_qubits, x, &mut basis, &mut images, &mut t);
        }
        if basis.is_empty() {
            return Err(Error::EigenFailed("restart lost the whole subspace".into()));
        }
    }
    Err(Error::NotConverged(format!(
        "Lanczos did not reach tol {} within {} restarts",
        cfg.tol, cfg.max_restarts
    )))
}

fn push_vector(
    op: &SpinOperator,
    n_qubits: usize,
    v: DVector<f64>,
    basis: &mut Vec<DVector<f64>>,
    images: &mut Vec<DVector<f64>>,
    t: &mut DMatrix<f64>,
) {
    let dim = v.len();
    let mut out = vec![0.0f64; dim];
    apply_real(op, n_qubits, v.as_slice(), &mut out);
    let hv = DVector::from_vec(out);
    let j = basis.len();
    for (i, b) in basis.iter().enumerate() {
        let tij = b.dot(&hv);
        t[(i, j)] = tij;
        t[(j, i)] = tij;
    }
    t[(j, j)] = v.dot(&hv);
    basis.push(v);
    images.push(hv);
}

fn project_sector(v: &mut DVector<f64>, sector: Option<usize>) {
    if let Some(n_el) = sector {
        for (b, x) in v.iter_mut().enumerate() {
            if b.count_ones() as usize != n_el {
                *x = 0.0;
            }
        }
    }
}

fn orthogonalize(w: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for b in basis {
        let c = b.dot(w);
        w.axpy(-c, b, 1.0);
    }
}
