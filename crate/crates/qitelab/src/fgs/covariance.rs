//! Covariance matrices of fermionic Gaussian states.
//!
//! `Γ_{μν} = (i/2)⟨[a_μ, a_ν]⟩` over Majorana generators. Two index
//! orderings appear: `Interleaved` lists `(a_0, a_1, a_2, a_3, …)` mode by
//! mode (mode `p` owns `a_{2p}`, `a_{2p+1}`); `PQ` lists all even-type
//! generators first `(a_0, a_2, …, a_1, a_3, …)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::pfaffian::pfaffian;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajoranaOrdering {
    Interleaved,
    PQ,
}

/// Real antisymmetric `2L×2L` matrix fully describing a fermionic Gaussian
/// state.
#[derive(Debug, Clone)]
pub struct CovarianceMatrix {
    mat: DMatrix<f64>,
    ordering: MajoranaOrdering,
}

impl CovarianceMatrix {
    pub fn new(mat: DMatrix<f64>, ordering: MajoranaOrdering) -> Result<Self> {
        let n = mat.nrows();
        if n != mat.ncols() || n % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "covariance matrix must be even square, got {}×{}",
                n,
                mat.ncols()
            )));
        }
        let dev = antisymmetry_deviation(&mat);
        if dev > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "covariance matrix not antisymmetric (deviation {dev:.3e})"
            )));
        }
        // exact antisymmetrization
        let m = (mat.clone() - mat.transpose()) * 0.5;
        Ok(CovarianceMatrix { mat: m, ordering })
    }

    /// Vacuum state: per-mode blocks `[[0, -1], [1, 0]]` (interleaved).
    pub fn vacuum(n_modes: usize) -> Self {
        let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for p in 0..n_modes {
            m[(2 * p, 2 * p + 1)] = -1.0;
            m[(2 * p + 1, 2 * p)] = 1.0;
        }
        CovarianceMatrix { mat: m, ordering: MajoranaOrdering::Interleaved }
    }

    pub fn n_modes(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn ordering(&self) -> MajoranaOrdering {
        self.ordering
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.mat
    }

    /// `‖Γ² + 1‖_max`; zero for pure states.
    pub fn purity_deviation(&self) -> f64 {
        let g2 = &self.mat * &self.mat;
        let n = g2.nrows();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { -1.0 } else { 0.0 };
                dev = dev.max((g2[(i, j)] - target).abs());
            }
        }
        dev
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.purity_deviation() <= tol
    }

    /// Largest singular value (must be ≤ 1 for a physical state).
    pub fn max_singular_value(&self) -> f64 {
        self.mat.clone().svd(false, false).singular_values.max()
    }

    pub fn pfaffian(&self) -> Result<f64> {
        pfaffian(&self.mat)
    }

    /// Reorder between the two index conventions.
    pub fn with_ordering(&self, target: MajoranaOrdering) -> CovarianceMatrix {
        if self.ordering == target {
            return self.clone();
        }
        let l = self.n_modes();
        // position of interleaved index m in the pq list
        let pq_pos = |m: usize| -> usize {
            if m % 2 == 0 {
                m / 2
            } else {
                l + m / 2
            }
        };
        let n = 2 * l;
        let mut out = DMatrix::zeros(n, n);
        match (self.ordering, target) {
            (MajoranaOrdering::Interleaved, MajoranaOrdering::PQ) => {
                for i in 0..n {
                    for j in 0..n {
                        out[(pq_pos(i), pq_pos(j))] = self.mat[(i, j)];
                    }
                }
            }
            (MajoranaOrdering::PQ, MajoranaOrdering::Interleaved) => {
                for i in 0..n {
                    for j in 0..n {
                        out[(i, j)] = self.mat[(pq_pos(i), pq_pos(j))];
                    }
                }
            }
            _ => unreachable!(),
        }
        CovarianceMatrix { mat: out, ordering: target }
    }

    /// One-particle reduced density matrix `ρ_pq = ⟨c†_p c_q⟩` (interleaved
    /// ordering required).
    pub fn one_rdm(&self) -> DMatrix<Complex64> {
        assert_eq!(self.ordering, MajoranaOrdering::Interleaved);
        let l = self.n_modes();
        let g = &self.mat;
        DMatrix::from_fn(l, l, |p, q| {
            let d = if p == q { 1.0 } else { 0.0 };
            let re = 2.0 * d + g[(2 * p, 2 * q + 1)] - g[(2 * p + 1, 2 * q)];
            let im = -(g[(2 * p, 2 * q)] + g[(2 * p + 1, 2 * q + 1)]);
            Complex64::new(re / 4.0, im / 4.0)
        })
    }

    /// Pairing matrix `κ_pq = ⟨c_p c_q⟩` (interleaved ordering required).
    pub fn pairing(&self) -> DMatrix<Complex64> {
        assert_eq!(self.ordering, MajoranaOrdering::Interleaved);
        let l = self.n_modes();
        let g = &self.mat;
        DMatrix::from_fn(l, l, |p, q| {
            let re = g[(2 * p, 2 * q + 1)] + g[(2 * p + 1, 2 * q)];
            let im = -g[(2 * p, 2 * q)] + g[(2 * p + 1, 2 * q + 1)];
            Complex64::new(re / 4.0, im / 4.0)
        })
    }

    /// Number-conserving covariance from a Hermitian one-particle density
    /// matrix (pairing set to zero).
    pub fn from_one_rdm(rho: &DMatrix<Complex64>) -> Result<Self> {
        let l = rho.nrows();
        if rho.ncols() != l {
            return Err(Error::DimensionMismatch("one-particle density must be square".into()));
        }
        let mut m = DMatrix::zeros(2 * l, 2 * l);
        for p in 0..l {
            for q in 0..l {
                let r = rho[(p, q)];
                // Γ_xx = Γ_yy = -2 Im ρ; Γ_xy = 2 Re ρ - δ
                m[(2 * p, 2 * q)] = -2.0 * r.im;
                m[(2 * p + 1, 2 * q + 1)] = -2.0 * r.im;
                let d = if p == q { 1.0 } else { 0.0 };
                m[(2 * p, 2 * q + 1)] = 2.0 * r.re - d;
                m[(2 * p + 1, 2 * q)] = -(2.0 * r.re - d);
            }
        }
        CovarianceMatrix::new(m, MajoranaOrdering::Interleaved)
    }

    /// Project onto the pure-state manifold: `Γ ← -i·sgn(iΓ)` through the
    /// spectral factorization. Near-zero eigenvalues are pushed to +1
    /// deterministically; returns whether that degenerate fixup fired.
    pub fn purify(&mut self) -> bool {
        let (mat, flagged) = sign_function(&self.mat, -1.0);
        self.mat = mat;
        flagged
    }

    /// Plain-text serialization with an ordering-tag header.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let tag = match self.ordering {
            MajoranaOrdering::Interleaved => "interleaved",
            MajoranaOrdering::PQ => "pq",
        };
        let n = self.mat.nrows();
        let mut out = format!("# covariance ordering={tag} dim={n}\n");
        for i in 0..n {
            let row: Vec<String> =
                (0..n).map(|j| format!("{:.17e}", self.mat[(i, j)])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Parse the `to_text` format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty covariance file".into()))?;
        let ordering = if header.contains("ordering=interleaved") {
            MajoranaOrdering::Interleaved
        } else if header.contains("ordering=pq") {
            MajoranaOrdering::PQ
        } else {
            return Err(Error::Parse("missing ordering tag in covariance header".into()));
        };
        let rows: Vec<Vec<f64>> = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t}"))))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("covariance matrix is not square".into()));
        }
        let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        CovarianceMatrix::new(m, ordering)
    }

    /// Random pure covariance: vacuum conjugated by a random orthogonal
    /// matrix, with randomly chosen parity sector.
    pub fn random_pure<R: Rng>(n_modes: usize, rng: &mut R) -> Self {
        let n = 2 * n_modes;
        let mut k = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = rng.gen::<f64>() * 2.0 - 1.0;
                k[(i, j)] = v;
                k[(j, i)] = -v;
            }
        }
        let o = expm_real(&k);
        let mut vac = CovarianceMatrix::vacuum(n_modes).into_matrix();
        if rng.gen::<bool>() {
            // flip parity: conjugate by the reflection negating a_0
            for i in 0..n {
                vac[(0, i)] = -vac[(0, i)];
            }
            for i in 0..n {
                vac[(i, 0)] = -vac[(i, 0)];
            }
        }
        let m = &o * vac * o.transpose();
        CovarianceMatrix::new(m, MajoranaOrdering::Interleaved).expect("construction is exact")
    }
}

pub(crate) fn antisymmetry_deviation(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((m[(i, j)] + m[(j, i)]).abs());
        }
    }
    dev
}

/// Real matrix exponential by scaled Taylor series.
pub(crate) fn expm_real(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.amax() * n as f64;
    let k = norm.log2().ceil().max(0.0) as i32 + 2;
    let a = m / 2f64.powi(k);
    let mut acc = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for j in 1..32 {
        term = (&a * &term) / j as f64;
        acc += &term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    for _ in 0..k {
        acc = &acc * &acc;
    }
    acc
}

/// `scale · sgn(iΓ)` for real antisymmetric `Γ`, computed via the real
/// symmetric embedding of the Hermitian matrix `iΓ`; the result is again
/// real antisymmetric (times `i·scale`; `scale = -1` gives the purification
/// map, `+1` the mean-field fixed-point map). Returns the matrix and whether
/// near-zero eigenvalues were forced to +1.
pub(crate) fn sign_function(gamma: &DMatrix<f64>, scale: f64) -> (DMatrix<f64>, bool) {
    let n = gamma.nrows();
    // iΓ = A + iB with A = 0, B = Γ; embedding [[A, -B], [B, A]]
    let mut emb = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            emb[(i + n, j)] = gamma[(i, j)];
            emb[(i, j + n)] = -gamma[(i, j)];
        }
    }
    let eig = nalgebra::SymmetricEigen::new(emb);
    let mut flagged = false;
    // K = ½ Σ_k sgn(λ_k) w_k w_k† over complex vectors w = u + iv;
    // output = scale · Im(i·K)… assembled directly in real arithmetic:
    // i·K real part is Re(iK) = -Im(K); we want O = scale·(i·K) real matrix:
    // (iK)_{ab} = i Σ sgn·w_a w̄_b / 2; real part = -Im(Σ)/2… compute and
    // take the real part, asserting the imaginary part vanishes.
    let mut re_k = DMatrix::<f64>::zeros(n, n);
    let mut im_k = DMatrix::<f64>::zeros(n, n);
    for k in 0..2 * n {
        let lam = eig.eigenvalues[k];
        let mut s = if lam >= 0.0 { 1.0 } else { -1.0 };
        if lam.abs() < 1e-12 {
            s = 1.0;
            flagged = true;
        }
        let col = eig.eigenvectors.column(k);
        for a in 0..n {
            let (ua, va) = (col[a], col[a + n]);
            for b in 0..n {
                let (ub, vb) = (col[b], col[b + n]);
                // w_a w̄_b = (ua + i va)(ub - i vb)
                re_k[(a, b)] += 0.5 * s * (ua * ub + va * vb);
                im_k[(a, b)] += 0.5 * s * (va * ub - ua * vb);
            }
        }
    }
    // i·K: real part = -Im(K)
    let mut out = im_k * (-scale);
    let _ = re_k;
    let outt = out.transpose();
    out = (out - outt) * 0.5;
    (out, flagged)
}
