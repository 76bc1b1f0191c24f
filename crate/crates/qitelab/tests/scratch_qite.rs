// scratch: QITE physics probes (removed later)
use num_complex::Complex64;
use qitelab::diagnostics::{spectrum, SpectrumConfig, SpectrumMethod};
use qitelab::evolution::trotterized_ite;
use qitelab::fgs::{ghf_minimize, synthesize_fgs_state, GhfOptions, MajoranaPolynomialEnergy};
use qitelab::hamiltonians::{build_heisenberg, make_trotter_schedule, CouplingSpec, LatticeGraph};
use qitelab::qite::{plan_domains, qite_evolve, DomainSelector, QiteConfig};

#[test]
fn probe_hm1_qite() {
    let g = LatticeGraph::ring(10).unwrap();
    let h = build_heisenberg(&g, CouplingSpec::Nearest { j: 1.0 }, 0.0).unwrap();
    let spec = spectrum(
        &h,
        2,
        &SpectrumConfig { method: Some(SpectrumMethod::Lanczos), ..Default::default() },
    )
    .unwrap();
    // GHF initial state
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    let r = ghf_minimize(&poly, &GhfOptions { restarts: 4, seed: 1, ..Default::default() }).unwrap();
    let psi0 = synthesize_fgs_state(&r.gamma).unwrap();
    println!("init: E={:.4} F={:.5}", r.energy, psi0.fidelity(&spec.ground_state).unwrap());

    // reference trotterized ITE value at τ=3
    let sched = make_trotter_schedule(&h, 0.1, 30).unwrap();
    let (ttrace, _) = trotterized_ite(&h, &sched, &psi0, Some(&spec.ground_state)).unwrap();
    let tl = ttrace.last().unwrap();
    println!("trot(τ=3): E={:.5} F={:.5}", tl.energy, tl.fidelity.unwrap());

    // ν = 2 fit to τ = 3
    let t0 = std::time::Instant::now();
    let plan = plan_domains(&h, &DomainSelector::Lattice(&g), 2, 1).unwrap();
    println!("plan: {} groups, max domain {}", plan.n_groups(),
        plan.groups.iter().map(|g| g.domain.len()).max().unwrap());
    let cfg = QiteConfig { dtau: 0.1, n_steps: 30, ..Default::default() };
    let (trace, _) = qite_evolve(&h, &plan, &cfg, &psi0, Some(&spec.ground_state)).unwrap();
    for row in trace.rows().iter().step_by(5) {
        println!(
            "ν=2 τ={:.1}: E={:.5} F={:.5} res={:.2e}",
            row.tau,
            row.energy,
            row.fidelity.unwrap(),
            row.residual.unwrap_or(0.0)
        );
    }
    let last = trace.last().unwrap();
    println!(
        "ν=2 final: E={:.5} (|ΔE_trot|={:.3e}) F={:.5}  [{}s]",
        last.energy,
        (last.energy - tl.energy).abs(),
        last.fidelity.unwrap(),
        t0.elapsed().as_secs_f32()
    );
}

#[test]
fn probe_hm1_nu1_deviation() {
    let g = LatticeGraph::ring(10).unwrap();
    let h = build_heisenberg(&g, CouplingSpec::Nearest { j: 1.0 }, 0.0).unwrap();
    let spec = spectrum(
        &h,
        2,
        &SpectrumConfig { method: Some(SpectrumMethod::Lanczos), ..Default::default() },
    )
    .unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    let r = ghf_minimize(&poly, &GhfOptions { restarts: 4, seed: 1, ..Default::default() }).unwrap();
    let psi0 = synthesize_fgs_state(&r.gamma).unwrap();
    let plan = plan_domains(&h, &DomainSelector::Lattice(&g), 1, 1).unwrap();
    let t0 = std::time::Instant::now();
    let cfg = QiteConfig { dtau: 0.1, n_steps: 100, ..Default::default() };
    let (trace, _) = qite_evolve(&h, &plan, &cfg, &psi0, Some(&spec.ground_state)).unwrap();
    let mut running_max = 0.0f64;
    let mut max_drop: f64 = 0.0;
    for row in trace.rows() {
        let f = row.fidelity.unwrap();
        if running_max - f > max_drop {
            max_drop = running_max - f;
            println!("drop at τ={:.2}: F={:.5} below max {running_max:.5}", row.tau, f);
        }
        running_max = running_max.max(f);
        if (row.tau * 10.0).round() as i64 % 5 == 0 {
            println!("ν=1 τ={:.2}: E={:.5} F={:.5}", row.tau, row.energy, f);
        }
    }
    println!("max fidelity drop below running max: {max_drop:.4} [{}s]", t0.elapsed().as_secs_f32());
}

#[test]
fn probe_fhm_qite_short() {
    use qitelab::fgs::{occupied_orbitals, slater_determinant};
    use qitelab::hamiltonians::build_fermi_hubbard;

    let g = LatticeGraph::ring(10).unwrap();
    let h = build_fermi_hubbard(&g, 1.0, 1.0).unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    let r = ghf_minimize(
        &poly,
        &GhfOptions { restarts: 2, seed: 1, number_conserving: Some(10), ..Default::default() },
    )
    .unwrap();
    let orbitals = occupied_orbitals(&r.gamma, 10).unwrap();
    let psi0 = slater_determinant(&orbitals, 20).unwrap();
    println!("init built, E_HF={:.4}, real={}", r.energy, psi0.is_real(1e-12));

    let plan = plan_domains(&h, &DomainSelector::Lattice(&g), 2, 1).unwrap();
    println!(
        "plan: {} groups, max |D| {}",
        plan.n_groups(),
        plan.groups.iter().map(|gr| gr.domain.len()).max().unwrap()
    );
    let t0 = std::time::Instant::now();
    let cfg = QiteConfig { dtau: 0.1, n_steps: 3, ..Default::default() };
    let (trace, _) = qite_evolve(&h, &plan, &cfg, &psi0, None).unwrap();
    for row in trace.rows() {
        println!(
            "fqite τ={:.1}: E={:.5} res={:.2e}",
            row.tau,
            row.energy,
            row.residual.unwrap_or(0.0)
        );
    }
    println!("3 steps in {}s -> per-step {}s", t0.elapsed().as_secs_f32(), t0.elapsed().as_secs_f32() / 3.0);
}

#[test]
fn probe_nu1_seed_sensitivity() {
    let g = LatticeGraph::ring(10).unwrap();
    let h = build_heisenberg(&g, CouplingSpec::Nearest { j: 1.0 }, 0.0).unwrap();
    let spec = spectrum(
        &h,
        2,
        &SpectrumConfig { method: Some(SpectrumMethod::Lanczos), ..Default::default() },
    )
    .unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    for ghf_seed in [1u64, 7, 23] {
        let r = ghf_minimize(&poly, &GhfOptions { restarts: 1, seed: ghf_seed, ..Default::default() })
            .unwrap();
        let psi0 = synthesize_fgs_state(&r.gamma).unwrap();
        let plan = plan_domains(&h, &DomainSelector::Lattice(&g), 1, 1).unwrap();
        let cfg = QiteConfig { dtau: 0.01, n_steps: 200, ..Default::default() };
        let (trace, _) = qite_evolve(&h, &plan, &cfg, &psi0, Some(&spec.ground_state)).unwrap();
        let mut running = 0.0f64;
        let mut drop: f64 = 0.0;
        for row in trace.rows() {
            let f = row.fidelity.unwrap();
            drop = drop.max(running - f);
            running = running.max(f);
        }
        println!(
            "seed {ghf_seed}: E_ghf={:.4} F0={:.4} -> max drop before τ=2: {drop:.5}",
            r.energy,
            trace.rows()[0].fidelity.unwrap()
        );
    }
}

#[test]
#[ignore]
fn probe_fhm_criterion7_full() {
    use qitelab::fgs::{occupied_orbitals, slater_determinant};
    use qitelab::hamiltonians::build_fermi_hubbard;

    let g = LatticeGraph::ring(10).unwrap();
    let h = build_fermi_hubbard(&g, 1.0, 1.0).unwrap();
    let spec = spectrum(
        &h,
        2,
        &SpectrumConfig { method: Some(SpectrumMethod::Lanczos), ..Default::default() },
    )
    .unwrap();
    println!("spectrum done: E0={:.4}", spec.e0());
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    let r = ghf_minimize(
        &poly,
        &GhfOptions { restarts: 2, seed: 1, number_conserving: Some(10), ..Default::default() },
    )
    .unwrap();
    let orbitals = occupied_orbitals(&r.gamma, 10).unwrap();
    let psi0 = slater_determinant(&orbitals, 20).unwrap();

    let t0 = std::time::Instant::now();
    let sched = make_trotter_schedule(&h, 0.1, 100).unwrap();
    let (ttrace, _) = trotterized_ite(&h, &sched, &psi0, Some(&spec.ground_state)).unwrap();
    let tl = ttrace.last().unwrap();
    println!(
        "trot(τ=10): E={:.5} F={:.5} [{}s]",
        tl.energy,
        tl.fidelity.unwrap(),
        t0.elapsed().as_secs_f32()
    );

    let plan = plan_domains(&h, &DomainSelector::Lattice(&g), 2, 1).unwrap();
    let t0 = std::time::Instant::now();
    let cfg = QiteConfig { dtau: 0.1, n_steps: 100, ..Default::default() };
    let (trace, _) = qite_evolve(&h, &plan, &cfg, &psi0, Some(&spec.ground_state)).unwrap();
    let mut max_dev = 0.0f64;
    for (qr, tr) in trace.rows().iter().zip(ttrace.rows()) {
        max_dev = max_dev.max((qr.energy - tr.energy).abs());
    }
    let last = trace.last().unwrap();
    println!(
        "fqite(τ=10): E={:.5} F={:.5} maxdev={:.4e} [{}s]",
        last.energy,
        last.fidelity.unwrap(),
        max_dev,
        t0.elapsed().as_secs_f32()
    );
}

#[test]
fn probe_fhm_small_diagnosis() {
    use qitelab::evolution::exact_ite;
    use qitelab::evolution::ExactIteConfig;
    use qitelab::fgs::{occupied_orbitals, slater_determinant};
    use qitelab::hamiltonians::build_fermi_hubbard;

    // ring(6) Hubbard: 12 qubits, generic engine, dense-verifiable
    let g = LatticeGraph::ring(6).unwrap();
    let h = build_fermi_hubbard(&g, 1.0, 1.0).unwrap();
    let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(&h).unwrap();
    let r = ghf_minimize(
        &poly,
        &GhfOptions { restarts: 2, seed: 1, number_conserving: Some(6), ..Default::default() },
    )
    .unwrap();
    let orbitals = occupied_orbitals(&r.gamma, 6).unwrap();
    let psi0 = slater_determinant(&orbitals, 12).unwrap();
    let spec = spectrum(
        &h,
        2,
        &SpectrumConfig { method: Some(SpectrumMethod::Lanczos), ..Default::default() },
    )
    .unwrap();
    println!("E_HF={:.4} E0={:.4} F0={:.4}", r.energy, spec.e0(),
        psi0.fidelity(&spec.ground_state).unwrap());

    // exact ITE reference
    let (etrace, _) = exact_ite(&h, &psi0, 3.0, Some(&spec.ground_state),
        &ExactIteConfig { record_stride: 0.1, ..Default::default() }).unwrap();
    // trotterized reference
    let sched = make_trotter_schedule(&h, 0.1, 30).unwrap();
    let (ttrace, _) = trotterized_ite(&h, &sched, &psi0, Some(&spec.ground_state)).unwrap();

    for nu in [2usize, 6] {
        let plan = plan_domains(&h, &DomainSelector::Lattice(&g), nu, 1).unwrap();
        let cfg = QiteConfig { dtau: 0.1, n_steps: 30, ..Default::default() };
        let (trace, _) = qite_evolve(&h, &plan, &cfg, &psi0, Some(&spec.ground_state)).unwrap();
        println!("--- nu={nu} ({} groups, max|D|={}) ---", plan.n_groups(),
            plan.groups.iter().map(|gr| gr.domain.len()).max().unwrap());
        for (i, row) in trace.rows().iter().enumerate() {
            if i % 5 == 0 || i == trace.rows().len() - 1 {
                let te = ttrace.rows()[i].energy;
                let ee = etrace.rows()[i].energy;
                println!(
                    "τ={:.1}: E_q={:.5} E_t={:.5} E_e={:.5} F={:.4} res={:.1e}",
                    row.tau, row.energy, te, ee,
                    row.fidelity.unwrap(), row.residual.unwrap_or(0.0)
                );
            }
        }
    }
}
