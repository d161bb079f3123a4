use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lgt::resources::rows_to_csv;
use lgt::scenario::{resources, run, trotter_step_qasm, ScenarioConfig};
use lgt::LgtError;

/// Lattice gauge theory on qubits: dynamics, resource counts and circuits from a JSON scenario.
///
/// Worker threads default to the number of cores; set LGT_WORKERS to override.
#[derive(Parser)]
#[command(name = "lgt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the initial state and write time series plus metadata.
    Run { config: PathBuf },
    /// Print qubit, Pauli-string and CNOT counts as CSV.
    Resources { config: PathBuf },
    /// Emit OpenQASM 2.0 for one Trotter step at the first configured dt.
    Qasm {
        config: PathBuf,
        #[arg(long)]
        step: bool,
    },
}

fn init_workers() -> Result<(), LgtError> {
    let Ok(v) = std::env::var("LGT_WORKERS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| LgtError::config("LGT_WORKERS", format!("'{v}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| LgtError::config("LGT_WORKERS", e.to_string()))
}

fn write_or_print(cfg: &ScenarioConfig, file: &str, text: &str) -> Result<(), LgtError> {
    match &cfg.output {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| LgtError::io(dir, e))?;
            let p = dir.join(file);
            std::fs::write(&p, text).map_err(|e| LgtError::io(&p, e))?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), LgtError> {
    init_workers()?;
    match cli.command {
        Command::Run { config } => {
            let cfg = ScenarioConfig::from_file(&config)?;
            let report = run(&cfg)?;
            print!("{}", report.summary());
            if let Some(dir) = &cfg.output {
                for p in report.write(dir)? {
                    eprintln!("wrote {}", p.display());
                }
            }
        }
        Command::Resources { config } => {
            let cfg = ScenarioConfig::from_file(&config)?;
            write_or_print(&cfg, "resources.csv", &rows_to_csv(&resources(&cfg)?))?;
        }
        Command::Qasm { config, step } => {
            if !step {
                return Err(LgtError::config("--step", "only single Trotter steps are exported; pass --step"));
            }
            let cfg = ScenarioConfig::from_file(&config)?;
            let (qasm, counts) = trotter_step_qasm(&cfg)?;
            write_or_print(&cfg, "trotter_step.qasm", &qasm)?;
            eprintln!("{}", serde_json::to_string(&counts).expect("counts serialize"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
