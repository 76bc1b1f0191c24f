//! Property suite for the Gaussian-state engine: Wick's theorem against
//! Fock-space brute force, mean-field matrix against finite differences,
//! synthesis round trips, and the analytic single-mode minimum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use qitelab::fgs::{
    covariance_from_state, ghf_energy, ghf_minimize, mean_field_matrix, slater_determinant,
    synthesize_fgs_state, wick_expectation, CovarianceMatrix, GhfOptions, MajoranaOrdering,
    MajoranaPolynomialEnergy, Parity,
};
use qitelab::hamiltonians::{build_heisenberg, build_tfim, CouplingSpec, LatticeGraph};
use qitelab::operators::dense::fermion_operator_matrix;
use qitelab::operators::jw::majorana_pauli_string;
use qitelab::operators::majorana::MajoranaMonomial;
use qitelab::operators::pauli::SpinOperator;
use qitelab::operators::{expectation, FermionOperator, Ladder, StateVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Ground state of a random quadratic fermionic Hamiltonian: an exact
/// Gaussian state, built without touching the covariance machinery.
fn random_gaussian_state(rng: &mut StdRng, l: usize) -> StateVector {
    let mut h = FermionOperator::zero();
    for p in 0..l {
        for q in 0..l {
            let m = if p == q {
                c(rng.gen::<f64>() - 0.5, 0.0)
            } else {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            };
            h = h.add(&FermionOperator::hop(m, p, q));
            h = h.add(&FermionOperator::hop(m.conj(), q, p));
        }
    }
    for p in 0..l {
        for q in (p + 1)..l {
            let d = c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            h = h.add(&FermionOperator::term(d, vec![Ladder::Create(p), Ladder::Create(q)]));
            h = h.add(&FermionOperator::term(
                d.conj(),
                vec![Ladder::Annihilate(q), Ladder::Annihilate(p)],
            ));
        }
    }
    let m = fermion_operator_matrix(&h, l).unwrap();
    // dense Hermitian ground state via the real symmetric embedding
    let dim = 1usize << l;
    let mut emb = DMatrix::<f64>::zeros(2 * dim, 2 * dim);
    for i in 0..dim {
        for j in 0..dim {
            let v = m[(i, j)];
            emb[(i, j)] = v.re;
            emb[(i + dim, j + dim)] = v.re;
            emb[(i + dim, j)] = v.im;
            emb[(i, j + dim)] = -v.im;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(emb);
    let k = (0..2 * dim)
        .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
        .unwrap();
    let col = eig.eigenvectors.column(k);
    let amps: Vec<Complex64> = (0..dim).map(|i| c(col[i], col[i + dim])).collect();
    StateVector::from_amplitudes(amps).unwrap()
}

fn hermitian_monomial(coeff: f64, idx: Vec<usize>) -> MajoranaMonomial {
    // raw coefficient = c_h · (-i)^{k(k-1)/2}
    let k = idx.len() as u32;
    let pow = (k * k.wrapping_sub(1) / 2) % 4;
    let phase = match pow {
        0 => c(1.0, 0.0),
        1 => c(0.0, -1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, 1.0),
    };
    MajoranaMonomial::new(phase * coeff, idx).unwrap()
}

fn majorana_spin_op(mono: &MajoranaMonomial, l: usize) -> SpinOperator {
    let mut acc = SpinOperator::identity(1.0).scale(mono.coefficient);
    for &m in mono.indices() {
        acc = acc.mul(&SpinOperator::from_string(majorana_pauli_string(m, l).unwrap()));
    }
    acc
}

#[test]
fn vacuum_wick_values() {
    let g = CovarianceMatrix::vacuum(1);
    // Hermitian normalized a0 a1 product has value 1 on the vacuum
    let herm = hermitian_monomial(1.0, vec![0, 1]);
    assert!((wick_expectation(&g, &herm).unwrap() - 1.0).abs() < 1e-14);
    // empty monomial
    let ident = MajoranaMonomial::identity(c(2.5, 0.0));
    assert!((wick_expectation(&g, &ident).unwrap() - 2.5).abs() < 1e-14);
    // raw product expectation is +i; projected real part vanishes
    let raw = MajoranaMonomial::new(c(1.0, 0.0), vec![0, 1]).unwrap();
    assert!(wick_expectation(&g, &raw).unwrap().abs() < 1e-14);
}

#[test]
fn wick_matches_fock_space_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut cases = 0usize;
    for l in 1..=3usize {
        for _ in 0..(if l == 3 { 25 } else { 10 }) {
            let psi = random_gaussian_state(&mut rng, l);
            let gamma = covariance_from_state(&psi).unwrap();
            assert!(gamma.is_pure(1e-6), "purity {}", gamma.purity_deviation());
            assert!(gamma.max_singular_value() <= 1.0 + 1e-8);
            // all even monomials of length ≤ 6
            let all: Vec<usize> = (0..2 * l).collect();
            for degree in [2usize, 4, 6] {
                if degree > 2 * l {
                    continue;
                }
                for combo in combinations(&all, degree) {
                    let mono = hermitian_monomial(1.0, combo);
                    let fast = wick_expectation(&gamma, &mono).unwrap();
                    let op = majorana_spin_op(&mono, l);
                    let slow = expectation(&op, &psi).unwrap();
                    assert!(slow.im.abs() < 1e-9);
                    assert!(
                        (fast - slow.re).abs() < 1e-9,
                        "l={l} mono={:?}: {fast} vs {}",
                        mono.indices(),
                        slow.re
                    );
                    cases += 1;
                }
            }
        }
    }
    assert!(cases >= 200, "exercised {cases} cases");
}

#[test]
fn wick_rejects_repeated_indices() {
    assert!(MajoranaMonomial::new(c(1.0, 0.0), vec![1, 1]).is_err());
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            let mut v = vec![x];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

#[test]
fn ghf_energy_matches_statevector_oracle() {
    let mut rng = StdRng::seed_from_u64(17);
    let g4 = LatticeGraph::ring(4).unwrap();
    for h in [
        build_heisenberg(&g4, CouplingSpec::Nearest { j: 1.0 }, 0.3).unwrap(),
        build_tfim(&g4, CouplingSpec::LongRange { alpha: 0.3 }, 0.4).unwrap(),
    ] {
        let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
        let op = h.total_spin_operator().unwrap();
        for _ in 0..6 {
            let psi = random_gaussian_state(&mut rng, 4);
            let gamma = covariance_from_state(&psi).unwrap();
            let fast = ghf_energy(&gamma, &poly).unwrap();
            let slow = expectation(&op, &psi).unwrap().re;
            assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
        }
    }
}

/// Closed-form pair-exchange energy functional for the Heisenberg model
/// (nearest or long-range couplings) used as an independent oracle.
fn heisenberg_energy_closed_form(
    gamma: &CovarianceMatrix,
    couplings: &[(usize, usize, f64)],
    field: f64,
    l: usize,
) -> f64 {
    use qitelab::fgs::pfaffian;
    let g = gamma.matrix();
    let sub = |idx: &[usize]| -> f64 {
        let m = DMatrix::from_fn(idx.len(), idx.len(), |a, b| g[(idx[a], idx[b])]);
        pfaffian(&m).unwrap()
    };
    let mut e = 0.0;
    for &(s, t, j) in couplings {
        let (s, t) = (s.min(t), s.max(t));
        // XX: contiguous [2s+1 .. 2t]
        let xx: Vec<usize> = (2 * s + 1..=2 * t).collect();
        // YY: {2s} ∪ [2s+2 .. 2t-1] ∪ {2t+1}
        let mut yy = vec![2 * s];
        yy.extend(2 * s + 2..=2 * t - 1);
        yy.push(2 * t + 1);
        // ZZ: {2s, 2s+1, 2t, 2t+1}
        let zz = vec![2 * s, 2 * s + 1, 2 * t, 2 * t + 1];
        let sign = if (t - s) % 2 == 0 { 1.0 } else { -1.0 };
        e += j * (sign * (sub(&xx) - sub(&yy)) + sub(&zz));
    }
    for s in 0..l {
        e -= field * g[(2 * s, 2 * s + 1)];
    }
    e
}

#[test]
fn heisenberg_closed_form_matches_general_path() {
    let mut rng = StdRng::seed_from_u64(23);
    let g6 = LatticeGraph::ring(6).unwrap();
    let h = build_heisenberg(&g6, CouplingSpec::Nearest { j: 1.0 }, 0.4).unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    let couplings: Vec<(usize, usize, f64)> =
        g6.edges().iter().map(|&(a, b)| (a, b, 1.0)).collect();
    for _ in 0..10 {
        let gamma = CovarianceMatrix::random_pure(6, &mut rng);
        let fast = ghf_energy(&gamma, &poly).unwrap();
        let closed = heisenberg_energy_closed_form(&gamma, &couplings, 0.4, 6);
        assert!((fast - closed).abs() < 1e-10, "{fast} vs {closed}");
    }
}

/// Transverse-field Ising closed form: XX term plus field.
#[test]
fn tfim_closed_form_matches_general_path() {
    use qitelab::fgs::pfaffian;
    let mut rng = StdRng::seed_from_u64(29);
    let g6 = LatticeGraph::ring(6).unwrap();
    let h = build_tfim(&g6, CouplingSpec::LongRange { alpha: 0.3 }, 0.4).unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    // reconstruct couplings
    let mut couplings = Vec::new();
    for i in 0..6usize {
        for j in (i + 1)..6 {
            let d = g6.manhattan_distance(i, j).unwrap() as f64;
            couplings.push((i, j, d.powf(-0.3)));
        }
    }
    for _ in 0..10 {
        let gamma = CovarianceMatrix::random_pure(6, &mut rng);
        let g = gamma.matrix();
        let mut closed = 0.0;
        for &(s, t, j) in &couplings {
            let xx: Vec<usize> = (2 * s + 1..=2 * t).collect();
            let m = DMatrix::from_fn(xx.len(), xx.len(), |a, b| g[(xx[a], xx[b])]);
            let sign = if (t - s) % 2 == 0 { 1.0 } else { -1.0 };
            closed += j * sign * pfaffian(&m).unwrap();
        }
        for s in 0..6 {
            closed -= 0.4 * g[(2 * s, 2 * s + 1)];
        }
        let fast = ghf_energy(&gamma, &poly).unwrap();
        assert!((fast - closed).abs() < 1e-10, "{fast} vs {closed}");
    }
}

#[test]
fn mean_field_matches_finite_differences() {
    let mut rng = StdRng::seed_from_u64(31);
    let g3 = LatticeGraph::ring(3).unwrap();
    let h = build_heisenberg(&g3, CouplingSpec::Nearest { j: 0.7 }, 0.2).unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    for trial in 0..6 {
        // mix of pure and mildly mixed covariance matrices
        let mut gamma = CovarianceMatrix::random_pure(3, &mut rng);
        if trial % 2 == 1 {
            let damped = gamma.matrix() * 0.9;
            gamma = CovarianceMatrix::new(damped, MajoranaOrdering::Interleaved).unwrap();
        }
        let f = mean_field_matrix(&gamma, &poly).unwrap();
        let step = 1e-5;
        for a in 0..6 {
            for b in (a + 1)..6 {
                let mut up = gamma.matrix().clone();
                up[(a, b)] += step;
                up[(b, a)] -= step;
                let mut dn = gamma.matrix().clone();
                dn[(a, b)] -= step;
                dn[(b, a)] += step;
                let eu = ghf_energy(
                    &CovarianceMatrix::new(up, MajoranaOrdering::Interleaved).unwrap(),
                    &poly,
                )
                .unwrap();
                let ed = ghf_energy(
                    &CovarianceMatrix::new(dn, MajoranaOrdering::Interleaved).unwrap(),
                    &poly,
                )
                .unwrap();
                let fd = (eu - ed) / (2.0 * step);
                // F = 4 ∂E/∂Γ in the half-convention = 2 × full derivative
                assert!(
                    (f[(a, b)] - 2.0 * fd).abs() < 1e-6,
                    "({a},{b}): {} vs {}",
                    f[(a, b)],
                    2.0 * fd
                );
            }
        }
    }
}

#[test]
fn quadratic_energy_has_constant_mean_field() {
    // E linear in Γ ⇒ F independent of Γ
    let poly = MajoranaPolynomialEnergy::new(vec![(0.8, vec![0, 1]), (-0.3, vec![1, 2])], 0.0, 2)
        .unwrap();
    let mut rng = StdRng::seed_from_u64(37);
    let f1 = mean_field_matrix(&CovarianceMatrix::random_pure(2, &mut rng), &poly).unwrap();
    let f2 = mean_field_matrix(&CovarianceMatrix::random_pure(2, &mut rng), &poly).unwrap();
    assert!((f1 - f2).amax() < 1e-12);

    let zero = MajoranaPolynomialEnergy::new(vec![], 0.0, 2).unwrap();
    let f0 = mean_field_matrix(&CovarianceMatrix::random_pure(2, &mut rng), &zero).unwrap();
    assert!(f0.amax() < 1e-15);
}

#[test]
fn single_mode_minimum_is_the_vacuum() {
    // E = ε n̂ = ε/2 − (ε/2)·γ(0,1): minimum at the vacuum with energy 0
    let eps = 0.9;
    let poly =
        MajoranaPolynomialEnergy::new(vec![(-eps / 2.0, vec![0, 1])], eps / 2.0, 1).unwrap();
    let r = ghf_minimize(&poly, &GhfOptions { restarts: 3, ..Default::default() }).unwrap();
    assert!(r.energy.abs() < 1e-9, "energy {}", r.energy);
    let vac = CovarianceMatrix::vacuum(1);
    assert!((r.gamma.matrix() - vac.matrix()).amax() < 1e-6);
    assert_eq!(r.parity, Parity::Even);
}

#[test]
fn minimizer_monotone_and_pure() {
    let g4 = LatticeGraph::ring(4).unwrap();
    let h = build_tfim(&g4, CouplingSpec::Nearest { j: 1.0 }, 0.4).unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    let r = ghf_minimize(&poly, &GhfOptions { restarts: 4, ..Default::default() }).unwrap();
    assert!(r.gamma.is_pure(1e-8));
    // mean-field energy upper-bounds the true ground energy
    use qitelab::diagnostics::{spectrum, SpectrumConfig, SpectrumMethod};
    let sr = spectrum(
        &h,
        2,
        &SpectrumConfig { method: Some(SpectrumMethod::Dense), ..Default::default() },
    )
    .unwrap();
    assert!(r.energy >= sr.e0() - 1e-9);
    assert!(r.energy.is_finite() && r.energy < 0.0);
    // and the synthesized state reproduces that energy
    let psi = synthesize_fgs_state(&r.gamma).unwrap();
    let e_state = expectation(&h.total_spin_operator().unwrap(), &psi).unwrap().re;
    assert!((e_state - r.energy).abs() < 1e-8, "{e_state} vs {}", r.energy);
}

#[test]
fn synthesis_round_trips_both_parities() {
    let mut rng = StdRng::seed_from_u64(41);
    let mut seen_even = false;
    let mut seen_odd = false;
    for l in 2..=4usize {
        for _ in 0..8 {
            let gamma = CovarianceMatrix::random_pure(l, &mut rng);
            let psi = synthesize_fgs_state(&gamma).unwrap();
            let back = covariance_from_state(&psi).unwrap();
            let err = (gamma.matrix() - back.matrix()).amax();
            assert!(err < 1e-8, "l={l} round-trip error {err}");
            // parity of the state matches the covariance parity
            let parity_op = (0..l).fold(SpinOperator::identity(1.0), |acc, s| {
                acc.mul(&SpinOperator::from_string(
                    qitelab::operators::pauli::PauliString::single(
                        s,
                        qitelab::operators::pauli::PauliLetter::Z,
                    ),
                ))
            });
            let z = expectation(&parity_op, &psi).unwrap().re;
            let parity = qitelab::fgs::minimize::parity_of(&gamma).unwrap();
            match parity {
                Parity::Even => {
                    seen_even = true;
                    assert!(z > 0.99);
                }
                Parity::Odd => {
                    seen_odd = true;
                    assert!(z < -0.99);
                }
            }
        }
    }
    assert!(seen_even && seen_odd);
}

#[test]
fn synthesis_base_cases() {
    // vacuum covariance -> |0…0⟩
    let vac = CovarianceMatrix::vacuum(3);
    let psi = synthesize_fgs_state(&vac).unwrap();
    assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-10);

    // flipped last block -> |0…01⟩ with the last mode occupied
    let mut m = vac.matrix().clone();
    m[(4, 5)] = 1.0;
    m[(5, 4)] = -1.0;
    let g = CovarianceMatrix::new(m, MajoranaOrdering::Interleaved).unwrap();
    let psi = synthesize_fgs_state(&g).unwrap();
    assert!((psi.amplitudes()[0b100].norm() - 1.0).abs() < 1e-10);

    // non-pure input is rejected
    let damped =
        CovarianceMatrix::new(vac.matrix() * 0.5, MajoranaOrdering::Interleaved).unwrap();
    assert!(synthesize_fgs_state(&damped).is_err());
}

#[test]
fn slater_determinant_cases() {
    // identity rotation occupying modes {0, 1}
    let mut cmat = DMatrix::<Complex64>::zeros(4, 2);
    cmat[(0, 0)] = c(1.0, 0.0);
    cmat[(1, 1)] = c(1.0, 0.0);
    let psi = slater_determinant(&cmat, 4).unwrap();
    assert!((psi.amplitudes()[0b0011].norm() - 1.0).abs() < 1e-12);

    // rotation by θ with one electron over two modes
    let theta = 0.7f64;
    let mut r1 = DMatrix::<Complex64>::zeros(2, 1);
    r1[(0, 0)] = c(theta.cos(), 0.0);
    r1[(1, 0)] = c(theta.sin(), 0.0);
    let psi = slater_determinant(&r1, 2).unwrap();
    assert!((psi.amplitudes()[0b01] - c(theta.cos(), 0.0)).norm() < 1e-12);
    assert!((psi.amplitudes()[0b10] - c(theta.sin(), 0.0)).norm() < 1e-12);

    // non-orthonormal columns rejected
    let mut bad = DMatrix::<Complex64>::zeros(2, 2);
    bad[(0, 0)] = c(1.0, 0.0);
    bad[(0, 1)] = c(1.0, 0.0);
    assert!(slater_determinant(&bad, 2).is_err());

    // determinant states have zero pairing and idempotent 1-RDM
    let mut rng = StdRng::seed_from_u64(43);
    let raw = DMatrix::<Complex64>::from_fn(4, 2, |_, _| {
        c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    let qr = raw.qr();
    let q = qr.q();
    let psi = slater_determinant(&q, 4).unwrap();
    let gamma = covariance_from_state(&psi).unwrap();
    assert!(gamma.is_pure(1e-8));
    assert!(gamma.pairing().iter().map(|v| v.norm()).fold(0.0f64, f64::max) < 1e-9);
    let rho = gamma.one_rdm();
    let diff = (&rho * &rho - &rho).iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    assert!(diff < 1e-9);
    let tr: Complex64 = rho.trace();
    assert!((tr.re - 2.0).abs() < 1e-9);
}
