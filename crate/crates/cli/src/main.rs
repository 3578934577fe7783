use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qclone_cli::machines::{evaluate, MachineId, Params};
use qclone_cli::sweep::run_sweep_file;
use qclone_cli::tables::{run_table, TableName};
use qclone_cli::verify::run_verify;
use qclone_cli::CliError;

#[derive(Parser)]
#[command(
    name = "qclone",
    version,
    about = "Quantum cloning machine tables, checks and sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one of the comparison tables as CSV.
    Table {
        #[arg(value_enum)]
        name: TableName,
    },
    /// Run the invariant suite; exits 1 if any group fails.
    Verify {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate a machine over a parameter grid described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fidelities and distortions of a single machine for one input.
    Fidelity {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        alpha2: f64,
        #[arg(long, default_value_t = 0.0)]
        phase: f64,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        xi: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        xi_prime: Option<f64>,
        #[arg(long)]
        eta_prime: Option<f64>,
    },
}

fn run(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Table { name } => {
            print!("{}", run_table(name)?);
            Ok(0)
        }
        Command::Verify { tol, seed } => {
            if tol.is_nan() || tol <= 0.0 {
                return Err(CliError::Config("--tol must be positive".into()));
            }
            let report = run_verify(tol, seed);
            print!("{report}");
            Ok(report.exit_code())
        }
        Command::Sweep { config, out } => {
            let rows = run_sweep_file(&config, &out)?;
            eprintln!("wrote {rows} rows to {}", out.display());
            Ok(0)
        }
        Command::Fidelity {
            machine,
            alpha2,
            phase,
            lambda,
            p,
            q,
            xi,
            eta,
            xi_prime,
            eta_prime,
        } => {
            let id: MachineId = machine.parse()?;
            let mut params = Params::new();
            params.insert("alpha2".into(), alpha2);
            params.insert("phase".into(), phase);
            let optional = [
                ("lambda", lambda),
                ("p", p),
                ("q", q),
                ("xi", xi),
                ("eta", eta),
                ("xi_prime", xi_prime),
                ("eta_prime", eta_prime),
            ];
            for (k, v) in optional {
                if let Some(v) = v {
                    if !id.params().contains(&k) {
                        return Err(CliError::Config(format!(
                            "machine {} has no parameter '{k}'",
                            id.name()
                        )));
                    }
                    params.insert(k.into(), v);
                }
            }
            if let Some(k) = id.required().iter().find(|k| !params.contains_key(**k)) {
                return Err(CliError::Config(format!(
                    "machine {} needs --{}",
                    id.name(),
                    k.replace('_', "-")
                )));
            }
            let e = evaluate(id, &params)?;
            println!(
                "F_a={:.6}\nF_b={:.6}\nD_a={:.6}\nD_b={:.6}\nD_ab={:.6}",
                e.f_a, e.f_b, e.d_a, e.d_b, e.d_ab
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
