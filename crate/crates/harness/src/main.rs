use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cascade_harness::runners::{self, check_bound_violations};
use cascade_harness::{empirical_threshold, ExperimentConfig, Result};
use clap::{Parser, Subcommand};

#[derive(Clone, Copy)]
enum Command {
    Analyze,
    Simulate,
    Sweep,
    Boundary,
    Kernel,
    CheckBound,
}

#[derive(Parser)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// check-bound: complete social graph on the members.
    #[arg(long)]
    complete_f: bool,
}

#[derive(Parser)]
#[command(name = "cascade", version, about = "Information cascades on social-physical network overlays")]
struct Args {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Threshold, epidemic size and mean outbreak size at the base point.
    Analyze(Common),
    /// Monte Carlo at the base point.
    Simulate(Common),
    /// Monte Carlo and theory along the `[sweep]` axis.
    Sweep(Common),
    /// Minimal social strength for an epidemic, per alpha.
    Boundary(Common),
    /// Spectral radius and survival probabilities of a kernel model.
    Kernel(Common),
    /// Checks the component-size bound for sublinear social networks.
    CheckBound(Common),
}

fn csv_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(sub: Sub) -> Result<()> {
    let (common, mode) = match sub {
        Sub::Analyze(c) => (c, Command::Analyze),
        Sub::Simulate(c) => (c, Command::Simulate),
        Sub::Sweep(c) => (c, Command::Sweep),
        Sub::Boundary(c) => (c, Command::Boundary),
        Sub::Kernel(c) => (c, Command::Kernel),
        Sub::CheckBound(c) => (c, Command::CheckBound),
    };
    let mut cfg = ExperimentConfig::from_file(&common.config)?;
    cfg.override_with(common.seed, common.reps, common.n)?;
    let stderr = &mut io::stderr().lock();
    match mode {
        Command::Analyze => {
            let r = runners::run_analyze(&cfg)?;
            r.write_summary(&mut io::stdout().lock())?;
            if common.out.is_some() {
                r.write_csv(csv_sink(&common.out)?)?;
            }
        }
        Command::Simulate => {
            let rows = runners::run_simulate(&cfg)?;
            runners::write_sweep_csv(&rows, None, csv_sink(&common.out)?)?;
        }
        Command::Sweep => {
            let rows = runners::run_sweep(&cfg)?;
            let axis = cfg.sweep.as_ref().map(|s| s.axis.name());
            runners::write_sweep_csv(&rows, axis, csv_sink(&common.out)?)?;
            match empirical_threshold(&rows) {
                Some(t) => writeln!(stderr, "empirical_threshold={t}")?,
                None => writeln!(stderr, "empirical_threshold=none")?,
            }
        }
        Command::Boundary => {
            let curves = runners::run_boundary(&cfg)?;
            runners::write_boundary_csv(&curves, csv_sink(&common.out)?)?;
            for c in &curves {
                writeln!(stderr, "alpha={} equal_point={}", c.alpha, c.equal_point)?;
            }
        }
        Command::Kernel => {
            let r = runners::run_kernel(&cfg)?;
            r.write_summary(&mut io::stdout().lock())?;
            if common.out.is_some() {
                r.write_csv(csv_sink(&common.out)?)?;
            }
        }
        Command::CheckBound => {
            let rows = runners::run_check_bound(&cfg, common.complete_f)?;
            runners::write_bound_csv(&rows, csv_sink(&common.out)?)?;
            let worst = rows.iter().map(|r| r.ratio()).fold(f64::NAN, f64::max);
            writeln!(stderr, "replicates={} max_ratio={worst}", rows.len())?;
            check_bound_violations(&rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
