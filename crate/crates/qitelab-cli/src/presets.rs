//! Named system presets: the studied lattice models with their parameters,
//! plus integral-file-gated molecular active spaces.

use qitelab::hamiltonians::{
    build_active_space_hamiltonian, build_fermi_hubbard, build_heisenberg, build_tfim,
    fcidump::parse_fcidump, CouplingSpec, LatticeGraph, ProblemHamiltonian,
};

pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub parameters: &'static str,
    pub needs_fcidump: bool,
}

pub const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "hm1",
        description: "HM I: Heisenberg ring, nearest neighbor",
        parameters: "L=10, J=1, B=0",
        needs_fcidump: false,
    },
    PresetInfo {
        name: "hm2",
        description: "HM II: Heisenberg ring, long range",
        parameters: "L=10, alpha=1, B=0.4",
        needs_fcidump: false,
    },
    PresetInfo {
        name: "hm3",
        description: "HM III: Heisenberg triangular ladder, nearest neighbor",
        parameters: "L=12, J=1, B=0.4",
        needs_fcidump: false,
    },
    PresetInfo {
        name: "tfim1",
        description: "TFIM I: transverse-field Ising ring, long range",
        parameters: "L=10, alpha=0.3, B=0.4",
        needs_fcidump: false,
    },
    PresetInfo {
        name: "tfim2",
        description: "TFIM II: transverse-field Ising ring, long range",
        parameters: "L=10, alpha=0.1, B=0.4",
        needs_fcidump: false,
    },
    PresetInfo {
        name: "j1j2",
        description: "J1J2: Heisenberg honeycomb strip, NN + NNN",
        parameters: "L=12, J1=1, J2=-0.5, B=0.1",
        needs_fcidump: false,
    },
    PresetInfo {
        name: "fhm",
        description: "FHM: Hubbard ring at half filling",
        parameters: "L=10 (20 modes), t=1, U=1",
        needs_fcidump: false,
    },
    PresetInfo {
        name: "ne",
        description: "Ne atom active space (8e, 8o), cc-pVDZ orbitals",
        parameters: "integrals from file",
        needs_fcidump: true,
    },
    PresetInfo {
        name: "fenta1",
        description: "Fe(III)-NTA low spin active space (5e, 5o), def2-QZVPP orbitals",
        parameters: "integrals from file",
        needs_fcidump: true,
    },
    PresetInfo {
        name: "fenta3",
        description: "Fe(III)-NTA intermediate spin active space (5e, 5o), def2-QZVPP orbitals",
        parameters: "integrals from file",
        needs_fcidump: true,
    },
    PresetInfo {
        name: "o2s",
        description: "singlet O2 active space (8e, 6o), cc-pVQZ orbitals",
        parameters: "integrals from file",
        needs_fcidump: true,
    },
    PresetInfo {
        name: "o2t",
        description: "triplet O2 active space (8e, 6o), cc-pVQZ orbitals",
        parameters: "integrals from file",
        needs_fcidump: true,
    },
    PresetInfo {
        name: "o3",
        description: "singlet O3 active space (12e, 9o), cc-pVQZ orbitals",
        parameters: "integrals from file",
        needs_fcidump: true,
    },
];

/// A built system: the Hamiltonian plus the lattice used for domain
/// selection (molecular systems have none and use mutual information).
pub struct BuiltSystem {
    pub hamiltonian: ProblemHamiltonian,
    pub lattice: Option<LatticeGraph>,
}

pub fn build_preset(name: &str, fcidump: Option<&str>) -> Result<BuiltSystem, String> {
    let lattice_system =
        |g: LatticeGraph, h: ProblemHamiltonian| BuiltSystem { hamiltonian: h, lattice: Some(g) };
    let err = |e: qitelab::Error| format!("building {name}: {e}");
    match name {
        "hm1" => {
            let g = LatticeGraph::ring(10).map_err(err)?;
            let h = build_heisenberg(&g, CouplingSpec::Nearest { j: 1.0 }, 0.0).map_err(err)?;
            Ok(lattice_system(g, h))
        }
        "hm2" => {
            let g = LatticeGraph::ring(10).map_err(err)?;
            let h =
                build_heisenberg(&g, CouplingSpec::LongRange { alpha: 1.0 }, 0.4).map_err(err)?;
            Ok(lattice_system(g, h))
        }
        "hm3" => {
            let g = LatticeGraph::triangular_ladder(6).map_err(err)?;
            let h = build_heisenberg(&g, CouplingSpec::Nearest { j: 1.0 }, 0.4).map_err(err)?;
            Ok(lattice_system(g, h))
        }
        "tfim1" => {
            let g = LatticeGraph::ring(10).map_err(err)?;
            let h = build_tfim(&g, CouplingSpec::LongRange { alpha: 0.3 }, 0.4).map_err(err)?;
            Ok(lattice_system(g, h))
        }
        "tfim2" => {
            let g = LatticeGraph::ring(10).map_err(err)?;
            let h = build_tfim(&g, CouplingSpec::LongRange { alpha: 0.1 }, 0.4).map_err(err)?;
            Ok(lattice_system(g, h))
        }
        "j1j2" => {
            let g = LatticeGraph::honeycomb_strip().map_err(err)?;
            let h = build_heisenberg(&g, CouplingSpec::NextNearest { j1: 1.0, j2: -0.5 }, 0.1)
                .map_err(err)?;
            Ok(lattice_system(g, h))
        }
        "fhm" => {
            let g = LatticeGraph::ring(10).map_err(err)?;
            let h = build_fermi_hubbard(&g, 1.0, 1.0).map_err(err)?;
            Ok(lattice_system(g, h))
        }
        "ne" | "fenta1" | "fenta3" | "o2s" | "o2t" | "o3" => {
            let path = fcidump.ok_or_else(|| {
                format!(
                    "preset `{name}` needs an integral file: pass --fcidump PATH \
                     (active-space integrals are not bundled; see README)"
                )
            })?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("reading {path}: {e}"))?;
            let data = parse_fcidump(&text).map_err(err)?;
            let h = build_active_space_hamiltonian(&data).map_err(err)?;
            Ok(BuiltSystem { hamiltonian: h, lattice: None })
        }
        other => Err(format!("unknown preset `{other}`; run `qitelab presets` for the list")),
    }
}

pub fn presets_table() -> String {
    let mut out = String::from("name     gated  description — parameters\n");
    for p in PRESETS {
        out.push_str(&format!(
            "{:<8} {:<6} {} — {}\n",
            p.name,
            if p.needs_fcidump { "file" } else { "-" },
            p.description,
            p.parameters
        ));
    }
    out.push_str(
        "\nfile-gated presets need --fcidump PATH with active-space integrals\n",
    );
    out
}
