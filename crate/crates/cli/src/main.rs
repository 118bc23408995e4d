use std::path::PathBuf;
use std::process::ExitCode;

use cavity_udw::config::{Format, Numerics, Scenario, Settings};
use cavity_udw::figures::{figures, render};
use cavity_udw::output::write_file;
use cavity_udw::run::{build_pool, run_scenario};
use cavity_udw::CliError;
use cavity_udw_core::registry::MethodNames;
use clap::{Parser, Subcommand};

/// Unruh-DeWitt detectors in a periodic cavity.
#[derive(Parser)]
#[command(name = "cavity-udw", version)]
struct Cli {
    /// Integration and summation tolerance, overriding the config.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Mode-sum term budget, overriding the config.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Worker threads for sweep points (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON scenario file.
    Run { config: PathBuf },
    /// Write the data of a figure preset to DIR/fig<N>.csv.
    Fig {
        #[arg(value_parser = ["1", "2", "3"])]
        which: String,
        #[arg(long)]
        out: PathBuf,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in &failures {
                eprintln!("not converged: {f}");
            }
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

/// Writes the output and returns the point failures.
fn execute(cli: &Cli) -> Result<Vec<String>, CliError> {
    let pool = build_pool(cli.threads)?;
    match &cli.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(config).map_err(|e| CliError::io(config.display(), e))?;
            let scenario = Scenario::parse(&text)?;
            let settings = scenario.settings(cli.tol, cli.max_terms)?;
            let out = run_scenario(&scenario, &settings, &pool)?;
            let text = match scenario.output.format {
                Format::Csv => out.table.to_csv(),
                Format::Json => out.table.to_json(&scenario),
            };
            write_file(&scenario.output.path, &text)?;
            Ok(out.failures)
        }
        Command::Fig { which, out } => {
            let fig = figures().get(which).map_err(|e| CliError::Field {
                field: "fig".into(),
                message: e.to_string(),
            })?;
            let numerics = Numerics {
                max_terms: 1_000_000,
                ..Numerics::default()
            };
            let settings = Settings::new(&numerics, &MethodNames::default(), cli.tol, cli.max_terms)?;
            let (table, failures) = render(fig.as_ref(), &settings, &pool).map_err(|e| CliError::Field {
                field: "fig".into(),
                message: e.to_string(),
            })?;
            write_file(&out.join(format!("{}.csv", fig.name())), &table.to_csv())?;
            Ok(failures)
        }
    }
}
