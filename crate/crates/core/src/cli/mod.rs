//! Command implementations behind the `hermite-kinetic` binary.

mod config;
mod output;

use std::path::{Path, PathBuf};

pub use config::{DiscretizationBlock, FrameBlock, GasBlock, Mode, OutputBlock, RunBlock, RunConfig, ScenarioBlock};
pub use output::Snapshot;

use crate::coeffs::{assemble_tensor, linearized_matrix, load_cache_checked, save_cache, CollisionTensor};
use crate::collision::CollisionOperator;
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::solver::{run_steady_sgs, run_transient, scenario, SgsOptions, Solver, TransientOptions};

/// Process exit status for an error: 2 configuration, 3 numerical, 4 I/O.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. } | Error::InvalidParameter(_) | Error::Fingerprint { .. } => 2,
        Error::Io { .. } | Error::BadCache(_) | Error::Checksum { .. } => 4,
        Error::DegreeOverflow { .. }
        | Error::RootFinding(_)
        | Error::Quadrature(_)
        | Error::Eigen(_)
        | Error::InadmissibleState { .. }
        | Error::ConservationViolated { .. }
        | Error::IterationCap { .. } => 3,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffsSummary {
    pub entries: usize,
    pub max_abs: f64,
    pub nu: f64,
}

/// Assembles the tensor for `kernel` and writes it to `out`.
pub fn cmd_coeffs(kernel: &KernelSpec, m0: usize, threshold: Option<f64>, out: &Path) -> Result<CoeffsSummary> {
    if m0 < 2 {
        return Err(Error::config("m0", format!("M0 = {m0} must be at least 2")));
    }
    let tensor = assemble_tensor(kernel, m0, threshold)?;
    save_cache(&tensor, out)?;
    Ok(CoeffsSummary {
        entries: tensor.len(),
        max_abs: tensor.max_abs(),
        nu: linearized_matrix(&tensor)?.nu(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub mode: Mode,
    /// Time steps or SGS iterations.
    pub iterations: usize,
    pub residual: f64,
    pub time: f64,
    pub converged: bool,
    pub csv: PathBuf,
    pub rows: usize,
}

fn load_tensor(path: Option<&Path>, kernel: &KernelSpec, m0: usize) -> Result<CollisionTensor> {
    match path {
        None => assemble_tensor(kernel, m0, None),
        Some(p) if !p.exists() => Err(Error::io(
            p,
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                format!("tensor cache not found; build it with `hermite-kinetic coeffs --m0 {m0} --out {}`", p.display()),
            ),
        )),
        Some(p) => load_cache_checked(p, kernel, Some(m0)),
    }
}

/// Runs a configured scenario and writes the moment CSV (and snapshot, when requested).
///
/// Without `tensor` the collision tensor is assembled in memory. `out`
/// overrides `output.path`.
pub fn cmd_run(cfg: &RunConfig, tensor: Option<&Path>, out: Option<&Path>) -> Result<RunSummary> {
    cfg.validate()?;
    let params = cfg.scenario_params()?;
    let setup = scenario(&params)?;
    let d = &cfg.discretization;
    let tensor = load_tensor(tensor, &setup.gas.kernel, d.m0)?;
    let op = CollisionOperator::new(tensor, setup.gas.clone())?.with_tail_density(d.tail_density);
    let solver = Solver::new(setup.grid.clone(), &setup.field, Some(op))?
        .with_model(cfg.model()?)
        .with_scheme(cfg.scheme()?)
        .with_cfl(d.cfl)?;
    let csv = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.path.clone());
    let mut field = setup.field.clone();
    let snapshot = |field: &crate::solver::CellField| Snapshot {
        field: field.clone(),
        dims: setup.grid.dims(),
        cells: setup.grid.cells(),
        dx: setup.grid.dx(),
        origin: setup.grid.origin(),
        mass: setup.gas.mass,
        kb: setup.gas.kb,
    };
    let write = |field: &crate::solver::CellField| -> Result<usize> {
        let snap = snapshot(field);
        snap.write_csv(&csv)?;
        if let Some(p) = &cfg.output.snapshot {
            snap.save(p)?;
        }
        Ok(field.len())
    };

    let mut summary = RunSummary {
        mode: cfg.mode,
        iterations: 0,
        residual: f64::INFINITY,
        time: 0.0,
        converged: false,
        csv: csv.clone(),
        rows: 0,
    };
    match cfg.mode {
        Mode::Steady => {
            let opts = SgsOptions {
                tolerance: cfg.run.tolerance,
                max_iterations: cfg.run.max_iterations,
                relaxation: cfg.run.relaxation,
            };
            match run_steady_sgs(&solver, &mut field, &opts) {
                Ok(r) => {
                    summary.iterations = r.iterations;
                    summary.residual = r.residual;
                    summary.converged = true;
                }
                Err(e) => {
                    if matches!(e, Error::IterationCap { .. }) {
                        write(&field)?;
                    }
                    return Err(e);
                }
            }
        }
        Mode::Transient => {
            let stride = cfg.output.stride;
            while summary.iterations < cfg.run.max_steps {
                let chunk = TransientOptions {
                    t_end: cfg.run.t_end,
                    max_steps: stride.min(cfg.run.max_steps - summary.iterations),
                    steady_tol: cfg.run.t_end.is_none().then_some(cfg.run.tolerance),
                    ..Default::default()
                };
                let r = run_transient(&solver, &mut field, &chunk)?;
                summary.iterations += r.steps;
                summary.residual = r.residual;
                eprintln!("step {} t = {:.6e} s residual {:.3e}", summary.iterations, field.time, r.residual);
                if let Some(p) = &cfg.output.snapshot {
                    snapshot(&field).save(p)?;
                }
                let reached_end = cfg.run.t_end.is_some_and(|t| field.time >= t * (1.0 - 1e-12));
                if r.converged || reached_end || r.steps < chunk.max_steps {
                    summary.converged = r.converged || reached_end;
                    break;
                }
            }
        }
    }
    summary.time = field.time;
    summary.rows = write(&field)?;
    Ok(summary)
}

/// Exports the moments of a snapshot as CSV; returns the number of data rows.
pub fn cmd_moments(snapshot: &Path, out: &Path) -> Result<usize> {
    let snap = Snapshot::load(snapshot)?;
    snap.write_csv(out)?;
    Ok(snap.field.len())
}

#[cfg(test)]
mod tests;
