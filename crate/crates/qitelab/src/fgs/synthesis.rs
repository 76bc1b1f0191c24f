//! Statevector synthesis of pure Gaussian states and Slater determinants,
//! plus the reverse map from a statevector to its covariance matrix.
//!
//! Route: reorder the pure covariance to the pq convention, factor it as
//! `Γ̃ = -QΥQᵀ` against the vacuum form `Υ = [[0, 1],[-1, 0]]` (blockwise
//! over the two pq halves), branch on `det(Q)` into the even (`|vac⟩`) or
//! odd (`|0…01⟩`, last mode occupied) sector, take the real logarithm of the
//! special-orthogonal factor, convert it to a quadratic fermionic generator
//! through the Majorana-to-ladder transformation, and exponentiate in Fock
//! space.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::covariance::{CovarianceMatrix, MajoranaOrdering};
use crate::operators::fermion::FermionOperator;
use crate::operators::jw::{jordan_wigner, majorana_pauli_string};
use crate::operators::pauli::SpinOperator;
use crate::operators::statevector::{apply_exp_hermitian, expectation};
use crate::operators::{Ladder, StateVector};
use crate::{Error, Result};

const PURITY_TOL: f64 = 1e-8;

/// Build the statevector of a pure Gaussian state from its covariance
/// matrix (any ordering). Desk scale: `2^L` amplitudes.
pub fn synthesize_fgs_state(gamma: &CovarianceMatrix) -> Result<StateVector> {
    let dev = gamma.purity_deviation();
    if dev > PURITY_TOL {
        return Err(Error::NotPure(dev));
    }
    let l = gamma.n_modes();
    let gpq = gamma.with_ordering(MajoranaOrdering::PQ);

    // Γ̃ = O J Oᵀ with J the canonical antisymmetric form, then Q = O·S·Bᵀ
    // with the in-plane swap S and the block permutation B (Υ = B J Bᵀ).
    let o = plane_factorization(gpq.matrix())?;
    let n = 2 * l;
    let mut q = DMatrix::<f64>::zeros(n, n);
    // columns of Q: Q e_k = O S Bᵀ e_k; Bᵀ e_k maps pq-position k to the
    // interleaved-block position, S swaps within each block pair.
    for k in 0..n {
        // B: interleaved block index 2p+m ↦ pq position p + m·L
        // Bᵀ e_k = e_{interleaved(k)} with interleaved(p + mL) = 2p + m
        let (p, m) = if k < l { (k, 0) } else { (k - l, 1) };
        let inter = 2 * p + m;
        // S on interleaved: swaps 2p ↔ 2p+1
        let swapped = if inter % 2 == 0 { inter + 1 } else { inter - 1 };
        for row in 0..n {
            q[(row, k)] = o[(row, swapped)];
        }
    }
    let det = q.determinant();

    let (r, base_index) = if det > 0.0 {
        (q, 0u64)
    } else {
        // negate the last column (the a_{2L}-type generator) and start from
        // the one-particle state with the last mode occupied
        let mut r = q;
        for row in 0..n {
            r[(row, n - 1)] = -r[(row, n - 1)];
        }
        (r, 1u64 << (l - 1))
    };

    let xi = so_log(&r)?;
    let hq = quadratic_generator(&xi, l)?;
    let base = StateVector::basis_state(l, base_index);
    if hq.is_empty() {
        return Ok(base);
    }
    let op = jordan_wigner(&hq, l)?;
    if !op.is_hermitian(1e-8) {
        return Err(Error::NotHermitian(op.hermiticity_deviation()));
    }
    // U = e^{i H_q}
    let r = apply_exp_hermitian(&op, Complex64::new(0.0, 1.0), &base, 1e-14)?;
    Ok(r.state)
}

/// Covariance matrix of an arbitrary statevector (interleaved ordering):
/// `Γ_{μν} = i⟨a_μ a_ν⟩` for `μ < ν`.
pub fn covariance_from_state(psi: &StateVector) -> Result<CovarianceMatrix> {
    let l = psi.n_qubits();
    let n = 2 * l;
    let mut m = DMatrix::zeros(n, n);
    let strings: Vec<_> =
        (0..n).map(|k| majorana_pauli_string(k, l)).collect::<Result<Vec<_>>>()?;
    for mu in 0..n {
        for nu in (mu + 1)..n {
            let prod = strings[mu].product(&strings[nu]);
            let op = SpinOperator::from_string(prod);
            let v = expectation(&op, psi)?;
            // i⟨a_mu a_nu⟩ must be real
            let val = -v.im;
            if (v.re).abs() > 1e-9 {
                // ⟨a_mu a_nu⟩ has a real part only through the
                // anticommutator, which vanishes for mu != nu
                return Err(Error::InvalidArgument(format!(
                    "generator pair ({mu},{nu}) expectation not imaginary: {v}"
                )));
            }
            m[(mu, nu)] = val;
            m[(nu, mu)] = -val;
        }
    }
    CovarianceMatrix::new(m, MajoranaOrdering::Interleaved)
}

/// Occupied-orbital columns of a number-conserving pure state: the
/// eigenvectors of the one-particle density matrix with occupation ≈ 1.
pub fn occupied_orbitals(
    gamma: &CovarianceMatrix,
    n_el: usize,
) -> Result<DMatrix<Complex64>> {
    let rho = gamma.one_rdm();
    let (vals, vecs) = super::minimize::hermitian_eigen(&rho);
    let l = rho.nrows();
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    if order.len() < n_el || vals[order[n_el - 1]] < 0.99 {
        return Err(Error::InvalidArgument(format!(
            "state is not a rank-{n_el} determinant (occupations {:?})",
            order.iter().take(n_el).map(|&k| vals[k]).collect::<Vec<_>>()
        )));
    }
    let mut c = DMatrix::zeros(l, n_el);
    for (col, &k) in order.iter().take(n_el).enumerate() {
        for row in 0..l {
            c[(row, col)] = vecs[(row, k)];
        }
    }
    // When the occupied space is closed under conjugation (real density),
    // rotate to a real orthonormal basis; the determinant state is basis
    // independent up to a global phase.
    if let Some(real) = realify_span(&c) {
        return Ok(real);
    }
    Ok(c)
}

/// Real orthonormal basis of the column span, when one exists.
fn realify_span(c: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    let (l, k) = (c.nrows(), c.ncols());
    let mut real_basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    for part in 0..2 {
        for col in 0..k {
            let mut v: Vec<f64> = (0..l)
                .map(|r| if part == 0 { c[(r, col)].re } else { c[(r, col)].im })
                .collect();
            for b in &real_basis {
                let dot: f64 = b.iter().zip(&v).map(|(x, y)| x * y).sum();
                for (vv, bb) in v.iter_mut().zip(b) {
                    *vv -= dot * bb;
                }
            }
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nrm > 1e-8 {
                for x in v.iter_mut() {
                    *x /= nrm;
                }
                real_basis.push(v);
            }
            if real_basis.len() == k {
                break;
            }
        }
    }
    if real_basis.len() != k {
        return None;
    }
    // confirm the real basis spans the same space: project each original
    // column and check nothing is lost
    for col in 0..k {
        let mut residual = 0.0;
        for r in 0..l {
            let mut proj = Complex64::new(0.0, 0.0);
            for b in &real_basis {
                let amp: Complex64 =
                    (0..l).map(|i| Complex64::new(b[i], 0.0) * c[(i, col)]).sum();
                proj += amp * b[r];
            }
            residual += (c[(r, col)] - proj).norm_sqr();
        }
        if residual.sqrt() > 1e-8 {
            return None;
        }
    }
    Some(DMatrix::from_fn(l, k, |r, col| Complex64::new(real_basis[col][r], 0.0)))
}

/// Determinant state `d†_1 … d†_{n_el} |vac⟩` from orthonormal occupied
/// orbital columns (`n_modes × n_el`).
pub fn slater_determinant(orbitals: &DMatrix<Complex64>, n_modes: usize) -> Result<StateVector> {
    if orbitals.nrows() != n_modes {
        return Err(Error::DimensionMismatch(format!(
            "orbital rows {} != modes {n_modes}",
            orbitals.nrows()
        )));
    }
    let n_el = orbitals.ncols();
    if n_el > n_modes {
        return Err(Error::InvalidArgument(format!("{n_el} orbitals in {n_modes} modes")));
    }
    // Gram check
    let gram = orbitals.adjoint() * orbitals;
    let mut dev = 0.0f64;
    for i in 0..n_el {
        for j in 0..n_el {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    if dev > 1e-10 {
        return Err(Error::NotOrthonormal(dev));
    }

    let dim = 1usize << n_modes;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(1.0, 0.0);
    let mut next = vec![Complex64::new(0.0, 0.0); dim];
    for k in 0..n_el {
        for v in next.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for p in 0..n_modes {
            let c = orbitals[(p, k)];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let bit = 1usize << p;
            let low_mask = (bit - 1) as u64;
            for (b, &a) in amps.iter().enumerate() {
                if a.norm_sqr() == 0.0 || b & bit != 0 {
                    continue;
                }
                let sign =
                    if ((b as u64) & low_mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                next[b | bit] += c * sign * a;
            }
        }
        std::mem::swap(&mut amps, &mut next);
    }
    let mut sv = StateVector::from_amplitudes(amps)?;
    sv.normalize();
    Ok(sv)
}

/// Factor a real antisymmetric matrix with `Γ² = -1` as `Γ = O J Oᵀ` where
/// `J = ⊕ [[0, 1],[-1, 0]]`; returns orthogonal `O`.
fn plane_factorization(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = g.nrows();
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(n);
    for seed in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v = nalgebra::DVector::zeros(n);
        v[seed] = 1.0;
        for b in &basis {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
        let nrm = v.norm();
        if nrm < 1e-8 {
            continue;
        }
        v /= nrm;
        // partner column: J e_{2k} has -1 at 2k+1 ⇒ v2 = -Γ v1
        let mut w = -(g * &v);
        for b in &basis {
            let c = b.dot(&w);
            w.axpy(-c, b, 1.0);
        }
        let c = v.dot(&w);
        w.axpy(-c, &v, 1.0);
        let wn = w.norm();
        if wn < 1e-8 {
            return Err(Error::NotPure(wn));
        }
        w /= wn;
        basis.push(v);
        basis.push(w);
    }
    if basis.len() != n {
        return Err(Error::EigenFailed("plane factorization lost rank".into()));
    }
    let mut o = DMatrix::zeros(n, n);
    for (k, b) in basis.iter().enumerate() {
        for row in 0..n {
            o[(row, k)] = b[row];
        }
    }
    Ok(o)
}

/// Real logarithm of a (special) orthogonal matrix: antisymmetric `ξ` with
/// `e^ξ = R`. Input is re-orthogonalized by polar projection first.
pub(crate) fn so_log(r: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = r.nrows();
    let svd = r.clone().svd(true, true);
    let u = svd.u.as_ref().ok_or_else(|| Error::EigenFailed("svd failed".into()))?;
    let vt = svd.v_t.as_ref().ok_or_else(|| Error::EigenFailed("svd failed".into()))?;
    let r = u * vt;

    let a_s = (&r + &r.transpose()) * 0.5;
    let a_a = (&r - &r.transpose()) * 0.5;
    let m_s = -(&a_a * &a_a); // PSD with eigenvalues sin²θ (doubled)
    let eig = nalgebra::SymmetricEigen::new(m_s);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut xi = DMatrix::<f64>::zeros(n, n);
    let mut used: Vec<nalgebra::DVector<f64>> = Vec::new();
    let mut minus_ones: Vec<nalgebra::DVector<f64>> = Vec::new();

    let mut k = 0usize;
    while k < n {
        // cluster of (numerically) equal sin² eigenvalues
        let s2 = eig.eigenvalues[order[k]].max(0.0);
        let mut cluster = vec![order[k]];
        let mut j = k + 1;
        while j < n && (eig.eigenvalues[order[j]] - s2).abs() < 1e-9 {
            cluster.push(order[j]);
            j += 1;
        }
        k = j;
        // orthonormal basis of the cluster space after removing used planes
        let mut space: Vec<nalgebra::DVector<f64>> = Vec::new();
        for &ci in &cluster {
            let mut v = eig.eigenvectors.column(ci).into_owned();
            for b in used.iter().chain(space.iter()) {
                let c = b.dot(&v);
                v.axpy(-c, b, 1.0);
            }
            let nrm = v.norm();
            if nrm > 1e-6 {
                space.push(v / nrm);
            }
        }
        if space.is_empty() {
            continue;
        }
        // diagonalize the symmetric part within the cluster to split planes
        // with cos θ of opposite sign
        let d = space.len();
        let mut small = DMatrix::<f64>::zeros(d, d);
        for a in 0..d {
            let asv = &a_s * &space[a];
            for b in 0..d {
                small[(b, a)] = space[b].dot(&asv);
            }
        }
        let small = (small.clone() + small.transpose()) * 0.5;
        let sub = nalgebra::SymmetricEigen::new(small);
        let rotated: Vec<nalgebra::DVector<f64>> = (0..d)
            .map(|col| {
                let mut v = nalgebra::DVector::zeros(n);
                for row in 0..d {
                    v.axpy(sub.eigenvectors[(row, col)], &space[row], 1.0);
                }
                v
            })
            .collect();
        let s = s2.sqrt();
        let mut remaining: Vec<(f64, nalgebra::DVector<f64>)> = sub
            .eigenvalues
            .iter()
            .copied()
            .zip(rotated)
            .collect();
        while let Some((c, mut u_vec)) = remaining.pop() {
            // re-orthogonalize against used
            for b in &used {
                let cc = b.dot(&u_vec);
                u_vec.axpy(-cc, b, 1.0);
            }
            let nrm = u_vec.norm();
            if nrm < 1e-6 {
                continue;
            }
            u_vec /= nrm;
            if s > 1e-7 {
                let mut v_vec = &a_a * &u_vec / s;
                for b in &used {
                    let cc = b.dot(&v_vec);
                    v_vec.axpy(-cc, b, 1.0);
                }
                let cc = u_vec.dot(&v_vec);
                v_vec.axpy(-cc, &u_vec, 1.0);
                let vn = v_vec.norm();
                if vn < 1e-6 {
                    continue;
                }
                v_vec /= vn;
                let theta = s.atan2(c);
                // ξ acts as θ(v uᵀ − u vᵀ) on this plane
                for a in 0..n {
                    for b in 0..n {
                        xi[(a, b)] += theta * (v_vec[a] * u_vec[b] - u_vec[a] * v_vec[b]);
                    }
                }
                used.push(u_vec);
                used.push(v_vec);
            } else if c < 0.0 {
                minus_ones.push(u_vec.clone());
                used.push(u_vec);
            } else {
                // +1 eigendirection: no contribution
                used.push(u_vec);
            }
        }
    }
    if minus_ones.len() % 2 != 0 {
        return Err(Error::EigenFailed(
            "orthogonal matrix has an odd count of -1 eigenvalues (det = -1)".into(),
        ));
    }
    for pair in minus_ones.chunks(2) {
        let (u, v) = (&pair[0], &pair[1]);
        for a in 0..n {
            for b in 0..n {
                xi[(a, b)] += std::f64::consts::PI * (v[a] * u[b] - u[a] * v[b]);
            }
        }
    }
    Ok(xi)
}

/// Quadratic generator from the pq-ordered antisymmetric `ξ`:
/// `T = -(i/2) W_mᵀ ξ W_m` yields the coefficient blocks `M` (Hermitian) and
/// `Δ` (antisymmetric) of `H_q = Σ M_pq c†_p c_q + ½ Σ (Δ_pq c†_p c†_q + h.c.)`.
fn quadratic_generator(xi: &DMatrix<f64>, l: usize) -> Result<FermionOperator> {
    let n = 2 * l;
    // W_m = [[1, 1], [-i, i]] blockwise maps (c, c†) to the pq Majorana list
    let mut w = DMatrix::<Complex64>::zeros(n, n);
    for p in 0..l {
        w[(p, p)] = Complex64::new(1.0, 0.0);
        w[(p, p + l)] = Complex64::new(1.0, 0.0);
        w[(p + l, p)] = Complex64::new(0.0, -1.0);
        w[(p + l, p + l)] = Complex64::new(0.0, 1.0);
    }
    let xi_c = DMatrix::from_fn(n, n, |i, j| Complex64::new(xi[(i, j)], 0.0));
    let t = w.transpose() * xi_c * &w * Complex64::new(0.0, -0.5);
    // blocks: [[-Δ*, -M*], [M, Δ]]
    let m_block = t.view((l, 0), (l, l)).into_owned();
    let d_block = t.view((l, l), (l, l)).into_owned();
    // clean: M Hermitian, Δ antisymmetric
    let m_block = (&m_block + m_block.adjoint()) * Complex64::new(0.5, 0.0);
    let d_block = (&d_block - d_block.transpose()) * Complex64::new(0.5, 0.0);

    let mut op = FermionOperator::zero();
    for p in 0..l {
        for q in 0..l {
            let m = m_block[(p, q)];
            if m.norm() > 1e-13 {
                op = op.add(&FermionOperator::hop(m, p, q));
            }
            let d = d_block[(p, q)];
            if d.norm() > 1e-13 {
                op = op.add(&FermionOperator::term(
                    d * Complex64::new(0.5, 0.0),
                    vec![Ladder::Create(p), Ladder::Create(q)],
                ));
                op = op.add(&FermionOperator::term(
                    d.conj() * Complex64::new(0.5, 0.0),
                    vec![Ladder::Annihilate(q), Ladder::Annihilate(p)],
                ));
            }
        }
    }
    Ok(op)
}
