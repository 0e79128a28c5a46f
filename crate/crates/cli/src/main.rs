use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qclone_cli::{
    check_report, cmd_circuit, cmd_params, cmd_simulate, cmd_sweep, cmd_verify, to_json, write_csv,
    CliError, CliResult,
};
use qclone_core::distspec::{DistSpec, SweepSpec};

/// Optimal symmetric 1→2 cloning for axisymmetric qubit ensembles.
#[derive(Parser, Debug)]
#[command(name = "qclone", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    /// Distribution, e.g. `vmf:kappa=1.5`, `brosseau:P=0.8,mu=0.5`, `table:path.csv`.
    #[arg(long, value_parser = parse_dist, allow_hyphen_values = true)]
    dist: DistSpec,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Moments, optimal angles and average fidelity.
    Params {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate the optimum along one parameter (CSV by default).
    Sweep {
        #[command(flatten)]
        common: Common,
        /// `<param>=<start>:<stop>:<n>`; tie keys with `+`, e.g. `P+mu=0:0.95:20`.
        #[arg(long, value_parser = parse_sweep, allow_hyphen_values = true)]
        sweep: SweepSpec,
    },
    /// Clone one input state by direct three-qubit simulation.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Polar angle of the input state (radians).
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        /// Azimuth of the input state (radians).
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi: f64,
    },
    /// Check the analytical optimum against random and structured channels.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Gate list realizing the optimal cloner.
    Circuit {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_dist(s: &str) -> Result<DistSpec, String> {
    DistSpec::parse(s).map_err(|e| e.to_string())
}

fn parse_sweep(s: &str) -> Result<SweepSpec, String> {
    SweepSpec::parse(s).map_err(|e| e.to_string())
}

fn emit(out: &Option<PathBuf>, body: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    match out {
        Some(p) => {
            let f = File::create(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(f);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn json_only(f: Option<Format>, cmd: &str) -> CliResult<()> {
    match f {
        Some(Format::Csv) => Err(CliError::Usage(format!("`{cmd}` writes JSON only"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Params { common } => {
            let r = cmd_params(&common.dist)?;
            emit(&common.out, |w| match common.format {
                Some(Format::Csv) => write_csv(&[r], w),
                _ => Ok(w.write_all(to_json(&r).as_bytes())?),
            })
        }
        Command::Sweep { common, sweep } => {
            let r = cmd_sweep(&common.dist, &sweep)?;
            for msg in &r.warnings {
                eprintln!("warning: {msg}");
            }
            emit(&common.out, |w| match common.format {
                Some(Format::Json) => Ok(w.write_all(to_json(&r.rows).as_bytes())?),
                _ => write_csv(&r.rows, w),
            })
        }
        Command::Simulate { common, theta, phi } => {
            json_only(common.format, "simulate")?;
            let r = cmd_simulate(&common.dist, theta, phi)?;
            emit(&common.out, |w| Ok(w.write_all(to_json(&r).as_bytes())?))
        }
        Command::Verify { common, samples, seed } => {
            let r = cmd_verify(&common.dist, samples, seed)?;
            emit(&common.out, |w| match common.format {
                Some(Format::Csv) => write_csv(std::slice::from_ref(&r), w),
                _ => Ok(w.write_all(to_json(&r).as_bytes())?),
            })?;
            check_report(&r)
        }
        Command::Circuit { common } => {
            json_only(common.format, "circuit")?;
            let r = cmd_circuit(&common.dist)?;
            emit(&common.out, |w| Ok(w.write_all(to_json(&r).as_bytes())?))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
