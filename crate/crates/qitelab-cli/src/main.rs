//! Experiment runner for the imaginary-time-evolution laboratory.

mod commands;
mod config;
mod presets;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "qitelab", version, about = "ground-state preparation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write trace/summary artifacts.
    Run {
        /// Configuration file (flat key-value text with sections); flags
        /// override file keys.
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        preset: Option<String>,
        /// exact-ite | trot-ite | qite
        #[arg(long)]
        evolver: Option<String>,
        #[arg(long)]
        dtau: Option<f64>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        nu: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// ghf | determinant | file
        #[arg(long)]
        init: Option<String>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        fcidump: Option<String>,
        #[arg(long)]
        out: Option<String>,
        /// Also emit the orbital mutual-information matrix.
        #[arg(long)]
        mi: bool,
    },
    /// List the built-in system presets.
    Presets,
    /// Lowest eigenvalues of a preset Hamiltonian.
    Spectrum {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        fcidump: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Mean-field baseline of a preset Hamiltonian.
    Ghf {
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        fcidump: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Orbital mutual information of the exact ground state.
    Mi {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        fcidump: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run one config several times, varying one evolver key.
    Sweep {
        #[arg(long)]
        config: String,
        /// e.g. `nu=0,1,2` or `dtau=0.1,0.05`
        #[arg(long)]
        vary: String,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

struct RunOverrides {
    preset: Option<String>,
    evolver: Option<String>,
    dtau: Option<f64>,
    tau: Option<f64>,
    nu: Option<usize>,
    seed: Option<u64>,
    init: Option<String>,
    restarts: Option<usize>,
    fcidump: Option<String>,
    out: Option<String>,
    mi: bool,
}

fn apply_overrides(cfg: &mut ExperimentConfig, ov: RunOverrides) {
    if let Some(p) = ov.preset {
        cfg.system.preset = Some(p);
    }
    if let Some(e) = ov.evolver {
        cfg.evolver.kind = e;
    }
    if let Some(v) = ov.dtau {
        cfg.evolver.dtau = v;
    }
    if let Some(v) = ov.tau {
        cfg.evolver.tau = v;
    }
    if let Some(v) = ov.nu {
        cfg.evolver.nu = v;
    }
    if let Some(v) = ov.seed {
        cfg.seed = v;
    }
    if let Some(v) = ov.init {
        cfg.initial.kind = v;
    }
    if let Some(v) = ov.restarts {
        cfg.initial.restarts = v;
    }
    if let Some(v) = ov.fcidump {
        cfg.system.fcidump = Some(v);
    }
    if let Some(v) = ov.out {
        cfg.output.dir = Some(v);
    }
    if ov.mi {
        cfg.diagnostics.mutual_information = true;
    }
}

fn dispatch(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run {
            config,
            preset,
            evolver,
            dtau,
            tau,
            nu,
            seed,
            init,
            restarts,
            fcidump,
            out,
            mi,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("reading {path}: {e}"))?;
                    ExperimentConfig::from_toml(&text)?
                }
                None => ExperimentConfig::default(),
            };
            apply_overrides(
                &mut cfg,
                RunOverrides {
                    preset,
                    evolver,
                    dtau,
                    tau,
                    nu,
                    seed,
                    init,
                    restarts,
                    fcidump,
                    out,
                    mi,
                },
            );
            let outcome = commands::run_experiment(&cfg)?;
            println!("artifacts in {}", outcome.out_dir.display());
            println!("e_init,e_final,f_init,f_final,e0,e1");
            println!("{}", outcome.summary_line);
            Ok(())
        }
        Command::Presets => {
            print!("{}", presets::presets_table());
            Ok(())
        }
        Command::Spectrum { preset, k, fcidump, out } => {
            let text = commands::cmd_spectrum(&preset, fcidump.as_deref(), k, out.as_deref())?;
            print!("{text}");
            Ok(())
        }
        Command::Ghf { preset, restarts, seed, fcidump, out } => {
            let text =
                commands::cmd_ghf(&preset, fcidump.as_deref(), restarts, seed, out.as_deref())?;
            print!("{text}");
            Ok(())
        }
        Command::Mi { preset, fcidump, out } => {
            let text = commands::cmd_mi(&preset, fcidump.as_deref(), out.as_deref())?;
            print!("{text}");
            Ok(())
        }
        Command::Sweep { config, vary } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("reading {config}: {e}"))?;
            let base = ExperimentConfig::from_toml(&text)?;
            let (key, values) = vary
                .split_once('=')
                .ok_or_else(|| "expected --vary key=v1,v2,...".to_string())?;
            for value in values.split(',') {
                let mut cfg = base.clone();
                match key {
                    "nu" => cfg.evolver.nu = value.parse().map_err(|e| format!("{e}"))?,
                    "dtau" => cfg.evolver.dtau = value.parse().map_err(|e| format!("{e}"))?,
                    "tau" => cfg.evolver.tau = value.parse().map_err(|e| format!("{e}"))?,
                    "seed" => cfg.seed = value.parse().map_err(|e| format!("{e}"))?,
                    other => return Err(format!("cannot vary `{other}`")),
                }
                let base_dir = cfg.output.dir.clone().unwrap_or_else(|| {
                    format!("runs/{}", cfg.system.preset.as_deref().unwrap_or("sweep"))
                });
                cfg.output.dir = Some(format!("{base_dir}-{key}{value}"));
                let outcome = commands::run_experiment(&cfg)?;
                println!("{key}={value}: {}", outcome.summary_line);
                println!("  artifacts in {}", outcome.out_dir.display());
            }
            Ok(())
        }
    }
}
