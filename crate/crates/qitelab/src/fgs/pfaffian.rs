//! Pfaffian of real skew-symmetric matrices and its matrix gradient.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Pfaffian by Parlett-Reid tridiagonalization with partial pivoting,
/// O(n³). The input is symmetrized as `(A - Aᵀ)/2` first; odd dimension is
/// an error.
pub fn pfaffian(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!("{}×{} is not square", n, a.ncols())));
    }
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = 0.5 * (a[(i, j)] - a[(j, i)]);
        }
    }

    let mut pf = 1.0f64;
    for k in (0..n - 1).step_by(2) {
        // pivot: largest |m[i, k]| for i > k
        let mut p = k + 1;
        let mut best = m[(k + 1, k)].abs();
        for i in (k + 2)..n {
            let v = m[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Ok(0.0);
        }
        if p != k + 1 {
            m.swap_rows(k + 1, p);
            m.swap_columns(k + 1, p);
            pf = -pf;
        }
        pf *= m[(k, k + 1)];
        let pivot = m[(k + 1, k)];
        // congruence elimination of column/row k below k+1
        for j in (k + 2)..n {
            let factor = m[(j, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            for col in k..n {
                let t = m[(k + 1, col)];
                m[(j, col)] -= factor * t;
            }
            for row in k..n {
                let t = m[(row, k + 1)];
                m[(row, j)] -= factor * t;
            }
        }
    }
    Ok(pf)
}

/// Gradient `∂Pf(A)/∂A_{ab}` in the antisymmetrized convention
/// (`∂A_{kl}/∂A_{mn} = (δ_km δ_ln − δ_kn δ_lm)/2`), returned as an
/// antisymmetric matrix.
///
/// For a well-conditioned `A` this is `-½ Pf(A) A⁻¹`; near-singular input
/// falls back to the adjugate limit via Pfaffian minors.
pub fn pfaffian_gradient(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let pf = pfaffian(a)?;
    let scale = a.amax().max(1.0);
    if pf.abs() > 1e-10 * scale.powi((n as i32) / 2) {
        if let Some(inv) = a.clone().try_inverse() {
            let mut g = inv * (-0.5 * pf);
            // clean numerical asymmetry
            let gt = g.transpose();
            g = (g - gt) * 0.5;
            return Ok(g);
        }
    }
    // adjugate limit: ∂Pf/∂A_{ab} = ½ σ_ab Pf(A without rows/cols a,b)
    let mut g = DMatrix::zeros(n, n);
    for b in 0..n {
        for a_idx in 0..b {
            let minor = delete_two(a, a_idx, b);
            let v = 0.5 * minor_sign(a_idx, b) * pfaffian(&minor)?;
            g[(a_idx, b)] = v;
            g[(b, a_idx)] = -v;
        }
    }
    Ok(g)
}

fn minor_sign(a: usize, b: usize) -> f64 {
    // sign of the (a, b) Pfaffian cofactor, a < b
    if (a + b) % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

fn delete_two(m: &DMatrix<f64>, a: usize, b: usize) -> DMatrix<f64> {
    let n = m.nrows();
    let keep: Vec<usize> = (0..n).filter(|&i| i != a && i != b).collect();
    DMatrix::from_fn(n - 2, n - 2, |i, j| m[(keep[i], keep[j])])
}
