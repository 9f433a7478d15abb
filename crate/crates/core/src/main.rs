use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hermite_kinetic::cli::{cmd_coeffs, cmd_moments, cmd_run, exit_code, Mode, RunConfig};
use hermite_kinetic::kernels::KernelSpec;
use hermite_kinetic::Error;

#[derive(Parser)]
#[command(name = "hermite-kinetic", version, about = "Hermite spectral Boltzmann solver")]
struct Cli {
    /// Worker threads (default: all cores). Affects wall-clock time only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kernel {
    Hs,
    Vhs,
    Ipl,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble the collision tensor and write it to a cache file.
    Coeffs {
        #[arg(long, value_enum, default_value = "ipl")]
        kernel: Kernel,
        /// IPL index η.
        #[arg(long, default_value_t = 10.0)]
        eta: f64,
        /// VHS exponent ν.
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long)]
        m0: usize,
        /// Drop entries below this fraction of max |A|.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a scenario from a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Tensor cache; assembled in memory when omitted.
        #[arg(long)]
        tensor: Option<PathBuf>,
        /// Moment CSV path, overriding `output.path`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `run` with `mode = "steady"`.
    Steady {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        tensor: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the moments of a snapshot as CSV.
    Moments {
        snapshot: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::config("--threads", e.to_string()))?;
    }
    let steady = matches!(cli.command, Command::Steady { .. });
    match cli.command {
        Command::Coeffs { kernel, eta, nu, m0, threshold, out } => {
            let spec = match kernel {
                Kernel::Hs => KernelSpec::HardSphere { d: 1.0 },
                Kernel::Vhs => KernelSpec::Vhs { d_ref: 1.0, g_ref: 1.0, nu },
                Kernel::Ipl => KernelSpec::Ipl { eta, kappa: 1.0 },
            };
            spec.validate().map_err(|e| Error::config("--eta/--nu", e.to_string()))?;
            let s = cmd_coeffs(&spec, m0, threshold, &out)?;
            println!("entries {}", s.entries);
            println!("max |A| {:.6e}", s.max_abs);
            println!("nu {:.6e}", s.nu);
        }
        Command::Run { config, tensor, out } | Command::Steady { config, tensor, out } => {
            let mut cfg = RunConfig::load(&config)?;
            if steady {
                cfg.mode = Mode::Steady;
            }
            let s = cmd_run(&cfg, tensor.as_deref(), out.as_deref())?;
            let unit = if s.mode == Mode::Steady { "iterations" } else { "steps" };
            println!("{} {unit}, residual {:.3e}, t = {:.6e} s", s.iterations, s.residual, s.time);
            if !s.converged {
                eprintln!("warning: stopped at the step cap before reaching the tolerance");
            }
            println!("wrote {} rows to {}", s.rows, s.csv.display());
        }
        Command::Moments { snapshot, out } => {
            let rows = cmd_moments(&snapshot, &out)?;
            println!("wrote {rows} rows to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
