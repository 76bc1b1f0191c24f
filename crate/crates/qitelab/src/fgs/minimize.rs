//! Energy minimization over fermionic Gaussian states: fixed-point warm-up,
//! imaginary-time flow of the covariance matrix with purity re-projection,
//! seeded restarts, and a number-conserving (determinant) mode.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::covariance::{sign_function, CovarianceMatrix, MajoranaOrdering};
use super::energy::{ghf_energy, mean_field_matrix, MajoranaPolynomialEnergy};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone)]
pub struct GhfOptions {
    pub seed: u64,
    pub restarts: usize,
    /// Fixed-point iterations before the flow.
    pub warmup_iters: usize,
    /// Initial flow step; halved whenever a step raises the energy.
    pub flow_step: f64,
    /// Convergence threshold on the energy decrease per accepted step.
    pub tol: f64,
    pub max_flow_iters: usize,
    /// Constrain to number-conserving states (determinants) with
    /// `n_electrons` particles via self-consistent occupation of the
    /// one-particle mean-field spectrum.
    pub number_conserving: Option<usize>,
}

impl Default for GhfOptions {
    fn default() -> Self {
        GhfOptions {
            seed: 1,
            restarts: 4,
            warmup_iters: 500,
            flow_step: 0.05,
            tol: 1e-12,
            max_flow_iters: 20_000,
            number_conserving: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GhfResult {
    pub gamma: CovarianceMatrix,
    pub energy: f64,
    pub parity: Parity,
    pub converged: bool,
    /// A degenerate mean-field spectrum forced a deterministic sign choice.
    pub degenerate_flag: bool,
    /// Seed of the winning restart.
    pub seed: u64,
    /// Per-restart `(seed, iterations, energy, purity residual)` summary.
    pub restart_summary: Vec<(u64, usize, f64, f64)>,
}

/// Best-of-restarts minimization of `e` over pure Gaussian states.
pub fn ghf_minimize(e: &MajoranaPolynomialEnergy, opts: &GhfOptions) -> Result<GhfResult> {
    if let Some(n_el) = opts.number_conserving {
        return number_conserving_minimize(e, n_el, opts);
    }
    let restarts = opts.restarts.max(1);
    let runs: Vec<Result<RunOutcome>> = (0..restarts)
        .into_par_iter()
        .map(|r| single_run(e, opts, opts.seed.wrapping_add(r as u64)))
        .collect();
    let mut outcomes = Vec::with_capacity(restarts);
    for r in runs {
        outcomes.push(r?);
    }
    // deterministic selection: lowest energy, ties by lowest seed
    outcomes.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.seed.cmp(&b.seed)));
    let summary: Vec<(u64, usize, f64, f64)> = outcomes
        .iter()
        .map(|o| (o.seed, o.iterations, o.energy, o.gamma.purity_deviation()))
        .collect();
    let best = outcomes.into_iter().next().expect("at least one restart");
    let parity = parity_of(&best.gamma)?;
    Ok(GhfResult {
        energy: best.energy,
        parity,
        converged: best.converged,
        degenerate_flag: best.degenerate_flag,
        seed: best.seed,
        gamma: best.gamma,
        restart_summary: summary,
    })
}

struct RunOutcome {
    gamma: CovarianceMatrix,
    energy: f64,
    converged: bool,
    degenerate_flag: bool,
    seed: u64,
    iterations: usize,
}

fn single_run(e: &MajoranaPolynomialEnergy, opts: &GhfOptions, seed: u64) -> Result<RunOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gamma = CovarianceMatrix::random_pure(e.n_modes, &mut rng);
    let mut degenerate_flag = false;

    // warm-up: iterate the pure fixed-point map Γ ← i·sgn(i F(Γ))
    let mut prev = gamma.matrix().clone();
    for _ in 0..opts.warmup_iters {
        let f = mean_field_matrix(&gamma, e)?;
        let (next, flag) = sign_function(&f, 1.0);
        degenerate_flag |= flag;
        let delta = (&next - &prev).amax();
        prev = next.clone();
        gamma = CovarianceMatrix::new(next, MajoranaOrdering::Interleaved)?;
        if delta < 1e-10 {
            break;
        }
    }

    // imaginary-time flow dΓ/dτ = ½[Γ, [Γ, F]] with explicit Euler steps,
    // halving on energy increase and re-projecting onto the pure manifold
    let mut energy = ghf_energy(&gamma, e)?;
    let mut step = opts.flow_step;
    let mut converged = false;
    let mut iterations = 0usize;
    for it in 0..opts.max_flow_iters {
        iterations = it + 1;
        let f = mean_field_matrix(&gamma, e)?;
        let g = gamma.matrix();
        let inner = g * &f - &f * g;
        let bracket = (g * &inner - &inner * g) * 0.5;
        if bracket.amax() < 1e-13 {
            converged = true;
            break;
        }
        let mut accepted = false;
        for _ in 0..40 {
            let cand_mat = g + &bracket * step;
            let mut cand = CovarianceMatrix::new(
                (cand_mat.clone() - cand_mat.transpose()) * 0.5,
                MajoranaOrdering::Interleaved,
            )?;
            degenerate_flag |= cand.purify();
            let cand_energy = ghf_energy(&cand, e)?;
            if cand_energy <= energy + 1e-14 {
                let gain = energy - cand_energy;
                gamma = cand;
                energy = cand_energy;
                accepted = true;
                if gain < opts.tol {
                    converged = true;
                }
                step = (step * 1.3).min(opts.flow_step * 4.0);
                break;
            }
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
        }
        if !accepted || converged {
            converged = converged || !accepted;
            break;
        }
    }
    Ok(RunOutcome { gamma, energy, converged, degenerate_flag, seed, iterations })
}

/// Parity from the Pfaffian relative to the vacuum:
/// `Pf(Γ) = Pf(Γ_vac) = (-1)^L` for even states.
pub fn parity_of(gamma: &CovarianceMatrix) -> Result<Parity> {
    let l = gamma.n_modes();
    let pf = gamma.pfaffian()?;
    let vac_sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    Ok(if pf * vac_sign > 0.0 { Parity::Even } else { Parity::Odd })
}

/// Number-conserving minimization: self-consistent aufbau filling of the
/// one-particle mean field `∂E/∂ρ` at fixed electron count. Pairing stays
/// identically zero. The winning determinant's covariance is returned.
fn number_conserving_minimize(
    e: &MajoranaPolynomialEnergy,
    n_el: usize,
    opts: &GhfOptions,
) -> Result<GhfResult> {
    let l = e.n_modes;
    if n_el > l {
        return Err(Error::InvalidArgument(format!("{n_el} electrons in {l} modes")));
    }
    let restarts = opts.restarts.max(1);
    let mut outcomes: Vec<RunOutcome> = Vec::new();
    for r in 0..restarts {
        let seed = opts.seed.wrapping_add(r as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // random initial Hermitian ρ with trace n_el from a random filling
        let mut rho = random_projector(l, n_el, &mut rng);
        let mut energy = f64::INFINITY;
        let mut converged = false;
        let mut iterations = 0usize;
        let damping = 0.4f64;
        for it in 0..1000 {
            iterations = it + 1;
            let gamma = CovarianceMatrix::from_one_rdm(&rho)?;
            let f = mean_field_matrix(&gamma, e)?;
            let fock = fock_from_mean_field(&f, l);
            let new_rho = aufbau(&fock, n_el)?;
            let mixed = &rho * Complex64::new(1.0 - damping, 0.0)
                + &new_rho * Complex64::new(damping, 0.0);
            let delta = (&mixed - &rho).iter().map(|c| c.norm()).fold(0.0f64, f64::max);
            rho = mixed;
            let g_now = CovarianceMatrix::from_one_rdm(&aufbau_round(&rho, n_el)?)?;
            let e_now = ghf_energy(&g_now, e)?;
            energy = e_now;
            if delta < 1e-12 {
                converged = true;
                break;
            }
        }
        let rho_final = aufbau_round(&rho, n_el)?;
        let gamma = CovarianceMatrix::from_one_rdm(&rho_final)?;
        let energy_final = ghf_energy(&gamma, e)?;
        outcomes.push(RunOutcome {
            gamma,
            energy: energy_final.min(energy),
            converged,
            degenerate_flag: false,
            seed,
            iterations,
        });
    }
    outcomes.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.seed.cmp(&b.seed)));
    let summary: Vec<(u64, usize, f64, f64)> = outcomes
        .iter()
        .map(|o| (o.seed, o.iterations, o.energy, o.gamma.purity_deviation()))
        .collect();
    let best = outcomes.into_iter().next().expect("at least one restart");
    Ok(GhfResult {
        energy: best.energy,
        parity: if n_el % 2 == 0 { Parity::Even } else { Parity::Odd },
        converged: best.converged,
        degenerate_flag: best.degenerate_flag,
        seed: best.seed,
        gamma: best.gamma,
        restart_summary: summary,
    })
}

/// Occupy the `n_el` lowest orbitals of a Hermitian Fock matrix.
fn aufbau(fock: &DMatrix<Complex64>, n_el: usize) -> Result<DMatrix<Complex64>> {
    let (vals, vecs) = hermitian_eigen(fock);
    let l = fock.nrows();
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut rho = DMatrix::zeros(l, l);
    for &k in order.iter().take(n_el) {
        let col = vecs.column(k);
        for p in 0..l {
            for q in 0..l {
                rho[(p, q)] += col[p] * col[q].conj();
            }
        }
    }
    Ok(rho)
}

/// Project a mixed ρ back to the nearest rank-`n_el` projector.
fn aufbau_round(rho: &DMatrix<Complex64>, n_el: usize) -> Result<DMatrix<Complex64>> {
    // occupy the n_el largest natural orbitals
    let neg = rho * Complex64::new(-1.0, 0.0);
    aufbau(&neg, n_el)
}

/// Fock matrix `∂E/∂ρ` from the Majorana-space mean field `F = 4 ∂E/∂Γ`:
/// with `G = F/4`, `Re(Fock) = 2(G_xy − G_yx)` and `Im(Fock) = -2(G_xx + G_yy)`
/// blockwise, Hermitized.
fn fock_from_mean_field(f: &DMatrix<f64>, l: usize) -> DMatrix<Complex64> {
    let mut fock = DMatrix::zeros(l, l);
    for p in 0..l {
        for q in 0..l {
            let gxx = f[(2 * p, 2 * q)] / 4.0;
            let gyy = f[(2 * p + 1, 2 * q + 1)] / 4.0;
            let gxy = f[(2 * p, 2 * q + 1)] / 4.0;
            let gyx = f[(2 * p + 1, 2 * q)] / 4.0;
            fock[(p, q)] = Complex64::new(2.0 * (gxy - gyx), -2.0 * (gxx + gyy));
        }
    }
    let adj = fock.adjoint();
    (fock + adj) * Complex64::new(0.5, 0.0)
}

fn random_projector(l: usize, n_el: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    use rand::Rng;
    // random Hermitian, take its lowest n_el eigenvectors
    let mut h = DMatrix::zeros(l, l);
    for p in 0..l {
        for q in 0..=p {
            let v = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            if p == q {
                h[(p, q)] = Complex64::new(v.re, 0.0);
            } else {
                h[(p, q)] = v;
                h[(q, p)] = v.conj();
            }
        }
    }
    aufbau(&h, n_el).expect("projector construction")
}

/// Eigendecomposition of a Hermitian complex matrix via the real symmetric
/// embedding; returns one representative per doubled eigenpair.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
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
    let eig = nalgebra::SymmetricEigen::new(emb);
    let mut order: Vec<usize> = (0..2 * d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    // Each complex eigendirection appears twice in the embedding (as w and
    // i·w). Walk in eigenvalue order, keep directions that are new under
    // complex Gram-Schmidt; duplicates project to nearly zero.
    let mut vals = Vec::with_capacity(d);
    let mut vecs: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for &k in &order {
        if vals.len() == d {
            break;
        }
        let col = eig.eigenvectors.column(k);
        let mut w: Vec<Complex64> =
            (0..d).map(|i| Complex64::new(col[i], col[i + d])).collect();
        for u in &vecs {
            let c: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (x, ui) in w.iter_mut().zip(u) {
                *x -= c * ui;
            }
        }
        let nrm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-6 {
            continue;
        }
        for x in w.iter_mut() {
            *x /= nrm;
        }
        vals.push(eig.eigenvalues[k]);
        vecs.push(w);
    }
    assert_eq!(vals.len(), d, "embedded eigenbasis failed to span");
    let out = DMatrix::from_fn(d, d, |i, j| vecs[j][i]);
    (vals, out)
}
