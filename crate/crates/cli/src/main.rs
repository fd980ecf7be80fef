use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qlangevin_core::config::{parse_config, preset, seed_override, RunConfig, SEED_ENV};
use qlangevin_core::csv_io::{compare, read_csv, to_csv_string, write_csv};
use qlangevin_core::{run_config, Error, RunOutput};

/// Exit status: `compare` found a difference above the tolerance.
const EXIT_MISMATCH: u8 = 1;
/// Exit status: bad configuration or arguments.
const EXIT_CONFIG: u8 = 2;
/// Exit status: numerical failure, or a run truncated by a grid spill
/// (its CSV is still written).
const EXIT_NUMERICAL: u8 = 3;
/// Exit status: a file could not be read, written or parsed.
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "qlangevin", version, about = "Open-system two-level and quantum Langevin simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a key=value configuration; CSV goes to `out.path` or stdout.
    Run { config: PathBuf },
    /// Print a figure preset, or with --out write `<name>.conf` and run it
    /// into `<name>.csv` there.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two CSV files channel by channel (sup norm).
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: f64,
    },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_io() {
        EXIT_IO
    } else if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Preset { name, out } => cmd_preset(&name, out.as_deref()),
        Command::Compare { a, b, tol } => cmd_compare(&a, &b, tol),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn apply_seed_env(cfg: &mut RunConfig) -> Result<(), Error> {
    if let Some(seed) = seed_override(std::env::var(SEED_ENV).ok().as_deref())? {
        cfg.run.seed = seed;
    }
    Ok(())
}

fn cmd_run(path: &Path) -> Result<u8, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut cfg = parse_config(&text)?;
    apply_seed_env(&mut cfg)?;
    let output = run_config(&cfg)?;
    match &cfg.out_path {
        Some(out) => write_csv(&output.series, out)?,
        None => print!("{}", to_csv_string(&output.series)?),
    }
    Ok(report(&output))
}

fn cmd_preset(name: &str, out: Option<&Path>) -> Result<u8, Error> {
    let mut cfg = preset(name)?;
    let Some(dir) = out else {
        print!("{}", cfg.serialize());
        return Ok(0);
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    apply_seed_env(&mut cfg)?;
    cfg.out_path = Some(dir.join(format!("{name}.csv")));
    let conf = dir.join(format!("{name}.conf"));
    std::fs::write(&conf, cfg.serialize()).map_err(|e| Error::Io { path: conf, source: e })?;
    let output = run_config(&cfg)?;
    write_csv(&output.series, cfg.out_path.as_deref().unwrap())?;
    Ok(report(&output))
}

/// Prints run diagnostics to stderr and picks the exit status.
fn report(output: &RunOutput) -> u8 {
    for (name, r) in &output.equilibration {
        eprintln!(
            "{name}: tail mean {:.6} at t = {}, drift {:.3e} (limit {:.3e}) -> {}",
            r.tail_mean,
            r.t_end,
            r.drift,
            r.drift_threshold,
            if r.equilibrated { "equilibrated" } else { "not equilibrated" }
        );
    }
    if output.truncated() {
        eprintln!(
            "warning: a wavefunction reached the grid boundary; output truncated at t = {}",
            output.series.t.last().copied().unwrap_or(0.0)
        );
        EXIT_NUMERICAL
    } else {
        0
    }
}

fn cmd_compare(a: &Path, b: &Path, tol: f64) -> Result<u8, Error> {
    let c = match compare(&read_csv(a)?, &read_csv(b)?, tol) {
        Err(Error::Shape(msg)) => {
            println!("not comparable: {msg}");
            return Ok(EXIT_MISMATCH);
        }
        other => other?,
    };
    for (name, d) in &c.channels {
        println!("{name}: {d:e}");
    }
    if c.passed() {
        println!("max difference {:e} <= {tol:e}", c.max_diff());
        Ok(0)
    } else {
        println!("max difference {:e} exceeds {tol:e}", c.max_diff());
        Ok(EXIT_MISMATCH)
    }
}
