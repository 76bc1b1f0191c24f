//! Experiment runner: wires the system, initial state, evolver and
//! diagnostics together and writes reproducible artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qitelab::diagnostics::{
    fidelity, multiref_diagnostic, mutual_information, spectrum, MutualInfoMatrix,
    SpectrumConfig, SpectrumResult,
};
use qitelab::evolution::{exact_ite, trotterized_ite, EvolutionTrace, ExactIteConfig};
use qitelab::fgs::{
    ghf_minimize, occupied_orbitals, slater_determinant, synthesize_fgs_state, GhfOptions,
    GhfResult, MajoranaPolynomialEnergy,
};
use qitelab::hamiltonians::{make_trotter_schedule, HamiltonianKind};
use qitelab::operators::StateVector;
use qitelab::qite::{
    estimate_running_time, plan_domains, qite_evolve, DomainPlan, DomainSelector, QiteConfig,
    SolverConfig, SolverMethod,
};

use crate::config::ExperimentConfig;
use crate::presets::{build_preset, BuiltSystem};

const TRACE_VERSION: &str = "# qitelab trace v1: tau,energy,fidelity,c_norm,residual";
const SUMMARY_VERSION: &str =
    "# qitelab summary v1: e_init,e_final,f_init,f_final,e0,e1";

pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub summary_line: String,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.12e}")).unwrap_or_default()
}

/// Resolve the output directory under `QITELAB_OUT_ROOT` when set.
pub fn resolve_out_dir(dir: Option<&str>, default_name: &str) -> PathBuf {
    let dir = dir.map(PathBuf::from).unwrap_or_else(|| PathBuf::from(default_name));
    if dir.is_absolute() {
        return dir;
    }
    match std::env::var_os("QITELAB_OUT_ROOT") {
        Some(root) => PathBuf::from(root).join(dir),
        None => dir,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome, String> {
    let preset = cfg
        .system
        .preset
        .as_deref()
        .ok_or_else(|| "no system preset given (use --preset or [system] preset)".to_string())?;
    let system = build_preset(preset, cfg.system.fcidump.as_deref())?;
    let h = &system.hamiltonian;

    let out_dir = resolve_out_dir(cfg.output.dir.as_deref(), &format!("runs/{preset}"));
    fs::create_dir_all(&out_dir).map_err(|e| format!("creating {}: {e}", out_dir.display()))?;

    // reference spectrum
    let spec: Option<SpectrumResult> = if cfg.diagnostics.spectrum {
        let sc = SpectrumConfig { seed: cfg.seed, ..Default::default() };
        Some(spectrum(h, 2, &sc).map_err(|e| format!("diagonalization: {e}"))?)
    } else {
        None
    };
    let reference = spec.as_ref().map(|s| &s.ground_state);

    // mutual information (for molecular domain selection and on request)
    let needs_mi = cfg.evolver.kind == "qite" && system.lattice.is_none();
    let mi: Option<MutualInfoMatrix> = if needs_mi || cfg.diagnostics.mutual_information {
        if h.kind != HamiltonianKind::Fermionic {
            if needs_mi {
                return Err("mutual-information domain selection needs a fermionic system".into());
            }
            None
        } else {
            let gs = reference.ok_or_else(|| {
                "mutual information needs the reference state; enable diagnostics.spectrum".to_string()
            })?;
            Some(
                mutual_information(gs, h.n_sites)
                    .map_err(|e| format!("mutual information: {e}"))?,
            )
        }
    } else {
        None
    };

    // initial state
    let (psi_init, ghf_result) = build_initial_state(cfg, &system)?;
    if let Some(r) = &ghf_result {
        write_ghf_outputs(&out_dir, r)?;
    }

    // evolver
    let n_steps = (cfg.evolver.tau / cfg.evolver.dtau).round().max(0.0) as usize;
    let (trace, final_state): (EvolutionTrace, StateVector) = match cfg.evolver.kind.as_str() {
        "exact-ite" => {
            let ec = ExactIteConfig { record_stride: cfg.evolver.dtau, ..Default::default() };
            exact_ite(h, &psi_init, cfg.evolver.tau, reference, &ec)
                .map_err(|e| format!("exact evolution: {e}"))?
        }
        "trot-ite" => {
            let sched = make_trotter_schedule(h, cfg.evolver.dtau, n_steps.max(1))
                .map_err(|e| format!("schedule: {e}"))?;
            if n_steps == 0 {
                let sched0 = make_trotter_schedule(h, cfg.evolver.dtau, 1).unwrap();
                let (mut t, _) = trotterized_ite(h, &sched0, &psi_init, reference)
                    .map_err(|e| format!("trotterized evolution: {e}"))?;
                let first = t.rows()[0].clone();
                let mut only = EvolutionTrace::new();
                only.push(first);
                t = only;
                (t, psi_init.clone())
            } else {
                trotterized_ite(h, &sched, &psi_init, reference)
                    .map_err(|e| format!("trotterized evolution: {e}"))?
            }
        }
        "qite" => {
            let selector = match (&system.lattice, &mi) {
                (Some(g), _) => DomainSelector::Lattice(g),
                (None, Some(m)) => DomainSelector::MutualInformation(m),
                (None, None) => return Err("no domain selector available".into()),
            };
            let plan = plan_domains(h, &selector, cfg.evolver.nu, cfg.seed)
                .map_err(|e| format!("domain planning: {e}"))?;
            refuse_if_infeasible(&plan, h.kind, n_steps)?;
            fs::write(out_dir.join("plan.txt"), plan.describe())
                .map_err(|e| format!("writing plan: {e}"))?;
            let qc = QiteConfig {
                dtau: cfg.evolver.dtau,
                n_steps,
                solver: SolverConfig {
                    method: match cfg.evolver.solver.as_str() {
                        "cg" => SolverMethod::ConjugateGradient,
                        "svd" => SolverMethod::TruncatedSvd,
                        other => return Err(format!("unknown solver `{other}`")),
                    },
                    tol: cfg.evolver.solver_tol,
                    ..Default::default()
                },
                ..Default::default()
            };
            qite_evolve(h, &plan, &qc, &psi_init, reference)
                .map_err(|e| format!("unitary-fit evolution: {e}"))?
        }
        other => return Err(format!("unknown evolver `{other}`")),
    };

    // artifacts
    let trace_path = out_dir.join("trace.csv");
    fs::write(&trace_path, format!("{TRACE_VERSION}\n{}", trace.to_csv()))
        .map_err(|e| format!("writing trace: {e}"))?;

    let first = trace.rows().first().ok_or("empty trace")?;
    let last = trace.last().ok_or("empty trace")?;
    let f_final = match reference {
        Some(r) => Some(fidelity(&final_state, r).map_err(|e| e.to_string())?),
        None => None,
    };
    let summary_line = format!(
        "{:.12e},{:.12e},{},{},{},{}",
        first.energy,
        last.energy,
        fmt_opt(first.fidelity),
        fmt_opt(f_final),
        fmt_opt(spec.as_ref().map(|s| s.e0())),
        fmt_opt(spec.as_ref().map(|s| s.e1())),
    );
    fs::write(
        out_dir.join("summary.csv"),
        format!("{SUMMARY_VERSION}\ne_init,e_final,f_init,f_final,e0,e1\n{summary_line}\n"),
    )
    .map_err(|e| format!("writing summary: {e}"))?;

    if let Some(m) = &mi {
        if cfg.diagnostics.mutual_information {
            fs::write(out_dir.join("mi.csv"), m.to_csv())
                .map_err(|e| format!("writing mutual information: {e}"))?;
            if let Some(gs) = reference {
                let z = multiref_diagnostic(gs, h.n_sites).map_err(|e| e.to_string())?;
                fs::write(out_dir.join("multiref.txt"), format!("{z:.12e}\n"))
                    .map_err(|e| e.to_string())?;
            }
        }
    }
    if let Some(s) = &spec {
        let mut lines = String::from("# qitelab spectrum v1: index,energy,residual\n");
        for (i, (e, r)) in s.eigenvalues.iter().zip(&s.residuals).enumerate() {
            lines.push_str(&format!("{i},{e:.12e},{r:.3e}\n"));
        }
        fs::write(out_dir.join("spectrum.csv"), lines).map_err(|e| e.to_string())?;
    }
    fs::write(out_dir.join("config.echo"), cfg.to_toml()).map_err(|e| e.to_string())?;
    Ok(RunOutcome { out_dir, summary_line })
}

fn refuse_if_infeasible(
    plan: &DomainPlan,
    kind: HamiltonianKind,
    n_steps: usize,
) -> Result<(), String> {
    let max_domain = plan.groups.iter().map(|g| g.domain.len()).max().unwrap_or(0);
    match kind {
        HamiltonianKind::Spin => {
            if max_domain > qitelab::qite::basis::SPIN_DOMAIN_CAP {
                let t = estimate_running_time(
                    plan.groups.len() as f64,
                    n_steps as f64,
                    2.0 * 4f64.ln() / 2.0,
                    max_domain as f64,
                    1.0,
                );
                return Err(format!(
                    "refusing: largest domain has {max_domain} sites (4^{max_domain} = {} basis \
                     strings per group); scaling estimate T = m·n·e^(k·ν^d) ≈ {t:.3e}",
                    4f64.powi(max_domain as i32)
                ));
            }
        }
        HamiltonianKind::Fermionic => {
            if max_domain > 8 {
                return Err(format!(
                    "refusing: largest fermionic domain has {max_domain} orbitals; the \
                     singles/doubles basis and window engine support at most 8"
                ));
            }
        }
    }
    Ok(())
}

fn build_initial_state(
    cfg: &ExperimentConfig,
    system: &BuiltSystem,
) -> Result<(StateVector, Option<GhfResult>), String> {
    let h = &system.hamiltonian;
    let n_qubits = h.n_qubits();
    match cfg.initial.kind.as_str() {
        "ghf" => {
            let poly = MajoranaPolynomialEnergy::from_problem_hamiltonian(h)
                .map_err(|e| format!("mean-field setup: {e}"))?;
            let opts = GhfOptions {
                seed: cfg.seed,
                restarts: cfg.initial.restarts,
                number_conserving: if h.kind == HamiltonianKind::Fermionic {
                    h.n_electrons
                } else {
                    None
                },
                ..Default::default()
            };
            let r = ghf_minimize(&poly, &opts).map_err(|e| format!("mean field: {e}"))?;
            let psi = match (h.kind, h.n_electrons) {
                (HamiltonianKind::Fermionic, Some(n_el)) => {
                    let orbitals = occupied_orbitals(&r.gamma, n_el)
                        .map_err(|e| format!("orbital extraction: {e}"))?;
                    slater_determinant(&orbitals, h.n_modes)
                        .map_err(|e| format!("determinant synthesis: {e}"))?
                }
                _ => synthesize_fgs_state(&r.gamma)
                    .map_err(|e| format!("state synthesis: {e}"))?,
            };
            Ok((psi, Some(r)))
        }
        "determinant" => {
            let occ = cfg
                .initial
                .occupation
                .as_ref()
                .ok_or_else(|| "determinant initial state needs [initial] occupation".to_string())?;
            let mut index = 0u64;
            for &m in occ {
                if m >= n_qubits {
                    return Err(format!("occupation mode {m} out of range"));
                }
                index |= 1 << m;
            }
            Ok((StateVector::basis_state(n_qubits, index), None))
        }
        "file" => {
            let path = cfg
                .initial
                .path
                .as_ref()
                .ok_or_else(|| "file initial state needs [initial] path".to_string())?;
            let text = fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?;
            let amps: Vec<Complex64> = text
                .lines()
                .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
                .map(|l| {
                    let mut it = l.split_whitespace();
                    let re: f64 = it
                        .next()
                        .ok_or_else(|| "missing real part".to_string())?
                        .parse()
                        .map_err(|e| format!("{e}"))?;
                    let im: f64 = it.next().unwrap_or("0").parse().map_err(|e| format!("{e}"))?;
                    Ok::<Complex64, String>(Complex64::new(re, im))
                })
                .collect::<Result<_, _>>()?;
            let sv = StateVector::from_amplitudes(amps).map_err(|e| e.to_string())?;
            if sv.n_qubits() != n_qubits {
                return Err(format!(
                    "state file has {} qubits, system needs {n_qubits}",
                    sv.n_qubits()
                ));
            }
            Ok((sv, None))
        }
        other => Err(format!("unknown initial state kind `{other}`")),
    }
}

fn write_ghf_outputs(out_dir: &Path, r: &GhfResult) -> Result<(), String> {
    let mut csv = String::from("# qitelab ghf v1: restart_seed,iterations,energy,purity_residual\n");
    for (seed, iters, energy, purity) in &r.restart_summary {
        csv.push_str(&format!("{seed},{iters},{energy:.12e},{purity:.3e}\n"));
    }
    fs::write(out_dir.join("ghf.csv"), csv).map_err(|e| e.to_string())?;
    fs::write(out_dir.join("covariance.txt"), r.gamma.to_text()).map_err(|e| e.to_string())?;
    Ok(())
}

/// `spectrum` subcommand: reference energies to stdout and CSV.
pub fn cmd_spectrum(
    preset: &str,
    fcidump: Option<&str>,
    k: usize,
    out: Option<&str>,
) -> Result<String, String> {
    let system = build_preset(preset, fcidump)?;
    let sc = SpectrumConfig::default();
    let s = spectrum(&system.hamiltonian, k, &sc).map_err(|e| e.to_string())?;
    let mut text = String::new();
    for (i, e) in s.eigenvalues.iter().enumerate() {
        text.push_str(&format!("E{i} = {e:.6}\n"));
    }
    if s.degenerate_ground {
        text.push_str("note: ground level is degenerate\n");
    }
    if let Some(dir) = out {
        let out_dir = resolve_out_dir(Some(dir), "spectrum");
        fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;
        let mut lines = String::from("# qitelab spectrum v1: index,energy,residual\n");
        for (i, (e, r)) in s.eigenvalues.iter().zip(&s.residuals).enumerate() {
            lines.push_str(&format!("{i},{e:.12e},{r:.3e}\n"));
        }
        fs::write(out_dir.join("spectrum.csv"), lines).map_err(|e| e.to_string())?;
    }
    Ok(text)
}

/// `ghf` subcommand: mean-field baseline for a preset.
pub fn cmd_ghf(
    preset: &str,
    fcidump: Option<&str>,
    restarts: usize,
    seed: u64,
    out: Option<&str>,
) -> Result<String, String> {
    let system = build_preset(preset, fcidump)?;
    let h = &system.hamiltonian;
    let poly =
        MajoranaPolynomialEnergy::from_problem_hamiltonian(h).map_err(|e| e.to_string())?;
    let opts = GhfOptions {
        seed,
        restarts,
        number_conserving: if h.kind == HamiltonianKind::Fermionic { h.n_electrons } else { None },
        ..Default::default()
    };
    let r = ghf_minimize(&poly, &opts).map_err(|e| e.to_string())?;
    let mut text = format!(
        "E = {:.6}  parity = {:?}  converged = {}  winning seed = {}\n",
        r.energy, r.parity, r.converged, r.seed
    );
    if r.degenerate_flag {
        text.push_str("note: degenerate mean-field spectrum; deterministic sign fixup applied\n");
    }
    if let Some(dir) = out {
        let out_dir = resolve_out_dir(Some(dir), "ghf");
        fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;
        write_ghf_outputs(&out_dir, &r)?;
        text.push_str(&format!("artifacts in {}\n", out_dir.display()));
    }
    Ok(text)
}

/// `mi` subcommand: orbital mutual information of the exact ground state.
pub fn cmd_mi(preset: &str, fcidump: Option<&str>, out: Option<&str>) -> Result<String, String> {
    let system = build_preset(preset, fcidump)?;
    let h = &system.hamiltonian;
    if h.kind != HamiltonianKind::Fermionic {
        return Err("mutual information applies to fermionic systems".into());
    }
    let s = spectrum(h, 2, &SpectrumConfig::default()).map_err(|e| e.to_string())?;
    let mi = mutual_information(&s.ground_state, h.n_sites).map_err(|e| e.to_string())?;
    let z = multiref_diagnostic(&s.ground_state, h.n_sites).map_err(|e| e.to_string())?;
    let mut text = format!("multi-configurational diagnostic = {z:.4}\n");
    let mut best = (0usize, 0usize, f64::MIN);
    for i in 0..h.n_sites {
        for j in (i + 1)..h.n_sites {
            if mi.get(i, j) > best.2 {
                best = (i, j, mi.get(i, j));
            }
        }
    }
    text.push_str(&format!(
        "largest orbital correlation: I({},{}) = {:.4}\n",
        best.0, best.1, best.2
    ));
    if let Some(dir) = out {
        let out_dir = resolve_out_dir(Some(dir), "mi");
        fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;
        fs::write(out_dir.join("mi.csv"), mi.to_csv()).map_err(|e| e.to_string())?;
        text.push_str(&format!("matrix in {}/mi.csv\n", out_dir.display()));
    }
    Ok(text)
}
