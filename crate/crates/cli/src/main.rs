use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dob_cli::{
    cmd_bode_integral, cmd_constraints, cmd_freq, cmd_rootlocus, cmd_sim, exit, CliError, Scenario,
    DEFAULT_FREQ_POINTS,
};

#[derive(Parser)]
#[command(name = "dobkit", version, about = "Disturbance-observer loop analysis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frequency responses of S, T and the noise path as CSV.
    Freq {
        scenario: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FREQ_POINTS)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Peak-gain design constraints and bandwidth limits.
    Constraints {
        scenario: PathBuf,
        #[arg(long = "gamma-s")]
        gamma_s: Option<f64>,
        #[arg(long = "gamma-t")]
        gamma_t: Option<f64>,
    },
    /// Numeric check of the sensitivity log-integral.
    BodeIntegral { scenario: PathBuf },
    /// Position-loop roots over a geometric sweep of the mismatch ratio.
    Rootlocus {
        scenario: PathBuf,
        #[arg(long = "alpha-from")]
        alpha_from: f64,
        #[arg(long = "alpha-to")]
        alpha_to: f64,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time-domain simulation; trace as CSV, summary on stderr.
    Sim {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Freq {
            scenario,
            points,
            out,
        } => {
            let o = cmd_freq(&Scenario::load(&scenario)?, points)?;
            emit(&o.output, out.as_deref())?;
            Ok(o.code)
        }
        Command::Constraints {
            scenario,
            gamma_s,
            gamma_t,
        } => {
            let o = cmd_constraints(&Scenario::load(&scenario)?, gamma_s, gamma_t)?;
            print!("{}", o.output);
            Ok(o.code)
        }
        Command::BodeIntegral { scenario } => {
            let o = cmd_bode_integral(&Scenario::load(&scenario)?)?;
            print!("{}", o.output);
            Ok(o.code)
        }
        Command::Rootlocus {
            scenario,
            alpha_from,
            alpha_to,
            steps,
            out,
        } => {
            let o = cmd_rootlocus(&Scenario::load(&scenario)?, alpha_from, alpha_to, steps)?;
            emit(&o.output, out.as_deref())?;
            Ok(o.code)
        }
        Command::Sim { scenario, out } => {
            let o = cmd_sim(&Scenario::load(&scenario)?)?;
            emit(&o.csv, out.as_deref())?;
            eprint!("{}", o.report);
            Ok(o.code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::CONFIG as u8 } else { exit::OK as u8 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
