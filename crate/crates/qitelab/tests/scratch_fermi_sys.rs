// scratch: dense validation of the fermionic Gram system (removed later)
use nalgebra::DMatrix;
use num_complex::Complex64;
use qitelab::hamiltonians::{build_fermi_hubbard, LatticeGraph, TermOperator};
use qitelab::operators::dense::spin_operator_matrix;
use qitelab::operators::{jordan_wigner, StateVector};
use qitelab::qite::{build_fermionic_linear_system, fermionic_basis, solve_for_a};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn fermionic_system_matches_dense_formulas() {
    let g = LatticeGraph::ring(2).unwrap();
    let h = build_fermi_hubbard(&g, 1.0, 1.0).unwrap();
    // grouped hop term
    let hop = h
        .terms
        .iter()
        .find(|t| t.support.len() == 2)
        .map(|t| match &t.operator {
            TermOperator::Fermion(op) => op.clone(),
            _ => unreachable!(),
        })
        .unwrap();
    let h_group = jordan_wigner(&hop, 4).unwrap();
    let gens = fermionic_basis(&[0, 1], 2).unwrap();
    println!("{} generators", gens.len());

    let mut rng = StdRng::seed_from_u64(3);
    let amps: Vec<Complex64> =
        (0..16).map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
    let psi = StateVector::from_amplitudes(amps).unwrap();
    let v = DMatrix::from_fn(16, 1, |i, _| psi.amplitudes()[i]);

    let sys = build_fermionic_linear_system(&gens, &h_group, &psi).unwrap();
    let hm = spin_operator_matrix(&h_group, 4).unwrap();
    let gm: Vec<DMatrix<Complex64>> =
        gens.iter().map(|g| spin_operator_matrix(&g.spin_op, 4).unwrap()).collect();
    let mut worst_s = 0.0f64;
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            let anti = &gm[i] * &gm[j] + &gm[j] * &gm[i];
            let dense = (v.adjoint() * anti * &v)[(0, 0)];
            worst_s = worst_s.max((sys.gram_entry(i, j) - dense.re).abs() + dense.im.abs());
        }
    }
    let mut worst_b = 0.0f64;
    for i in 0..gens.len() {
        let comm = &gm[i] * &hm - &hm * &gm[i];
        let dense = (v.adjoint() * comm * &v)[(0, 0)] * c(0.0, 1.0);
        worst_b = worst_b.max((sys.b[i] - dense.re).abs() + dense.im.abs());
    }
    println!("worst S dev {worst_s:.2e}, worst b dev {worst_b:.2e}");
    assert!(worst_s < 1e-10 && worst_b < 1e-10);

    // does one substep reduce the distance to the exact flow?
    let dt = 0.05;
    let sol = solve_for_a(&sys, &Default::default()).unwrap();
    println!("residual {:.2e}", sol.residual);
    let mut a_op = DMatrix::<Complex64>::zeros(16, 16);
    for (a, g) in sol.a.iter().zip(&gm) {
        a_op += g * c(*a, 0.0);
    }
    // U ψ vs normalized e^{-dt h}ψ
    let exact = {
        let mut acc = v.clone();
        let mut term = v.clone();
        for k in 1..40 {
            term = (&hm * &term) * c(-dt / k as f64, 0.0);
            acc += &term;
        }
        let n = acc.norm();
        acc / c(n, 0.0)
    };
    let fitted = {
        let mut acc = v.clone();
        let mut term = v.clone();
        for k in 1..40 {
            term = (&a_op * &term) * c(0.0, -dt / k as f64);
            acc += &term;
        }
        let n = acc.norm();
        acc / c(n, 0.0)
    };
    let untouched = (&exact - &v).norm();
    let dist = (&exact - &fitted).norm();
    println!("‖exact - ψ‖ = {untouched:.3e}, ‖exact - fitted‖ = {dist:.3e}");
    assert!(dist < untouched, "the fitted step should move toward the exact flow");
}
