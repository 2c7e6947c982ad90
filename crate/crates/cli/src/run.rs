//! Run orchestration: mesh, problem, solver, stopping rule, output.

use std::fs;
use std::io;
use std::path::PathBuf;
use std::time::Instant;

use dg2d::solver::{Checkpoint, SolverError, SolverState};
use dg2d::{BasisTables, GasModel, Mesh, Solver, SolverOptions};
use thiserror::Error;

use crate::config::{ConfigError, OutputFormat, RunConfig, StopRule};
use crate::meshgen::{load_mesh, MeshLoadError};
use crate::output::{compute_l2_error, export_csv, export_vtk, ErrorReport};
use crate::problems::setup;

/// Environment variable that overrides the configured worker count.
pub const WORKERS_ENV: &str = "DG2D_WORKERS";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("mesh: {0}")]
    Mesh(#[from] MeshLoadError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("solver aborted: {0}")]
    Solver(#[from] SolverError),
}

impl RunError {
    /// Process exit code: 2 when the solver aborts, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Solver(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> RunError {
    let path = path.into();
    move |source| RunError::Io { path, source }
}

/// Worker count after the environment override, if it is set and valid.
pub fn effective_workers(configured: Option<usize>) -> Result<Option<usize>, RunError> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError::Value {
                key: WORKERS_ENV.to_string(),
                value: v,
            }
            .into()),
        },
        Err(_) => Ok(configured),
    }
}

/// Everything a run produces besides files.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: ErrorReport,
    pub state: SolverState,
    /// `max |c^{n+1} - c^n|` after every step.
    pub residuals: Vec<f64>,
    /// Files written, in order.
    pub files: Vec<PathBuf>,
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let mesh = load_mesh(&cfg.mesh, &cfg.vortex, cfg.shock.x0)?;
    run_on(cfg, &mesh)
}

/// [`run`] with an already loaded mesh.
pub fn run_on(cfg: &RunConfig, mesh: &Mesh) -> Result<RunOutcome, RunError> {
    let start = Instant::now();
    let problem = setup(cfg);
    let gas = GasModel { gamma: cfg.gamma };
    let tables = BasisTables::build(cfg.p).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let opts = SolverOptions {
        rk_order: cfg.rk_order,
        limiting: cfg.limiting,
        positivity: cfg.positivity,
        cfl: cfg.cfl,
        workers: cfg.workers,
        chunk_size: cfg.chunk_size,
    };
    let mut solver = Solver::new(mesh, tables, problem.law.clone(), opts)?;

    let mut state = match &cfg.restart {
        Some(path) => {
            let bytes = fs::read(path).map_err(io_err(path))?;
            let ck = Checkpoint::read_from(&bytes[..]).map_err(io_err(path))?;
            if ck.coeffs.n_modes() != solver.tables().n_modes || ck.coeffs.n_elements() != mesh.n_elements() {
                return Err(ConfigError::Invalid(format!("{}: checkpoint does not match mesh and p", path.display())).into());
            }
            SolverState {
                coeffs: ck.coeffs,
                t: ck.t,
                step: ck.step,
            }
        }
        None => {
            let init = problem.initial.clone();
            let mut c = solver.project(move |x| init(x).to_array())?;
            if cfg.limiting {
                solver.limit(&mut c)?;
            }
            SolverState::new(c)
        }
    };
    solver.reset_timings();

    let mut files = Vec::new();
    if cfg.output != OutputFormat::None {
        fs::create_dir_all(&cfg.out_dir).map_err(io_err(&cfg.out_dir))?;
    }
    let write_fields = |state: &SolverState, files: &mut Vec<PathBuf>| -> Result<(), RunError> {
        let ext = match cfg.output {
            OutputFormat::None => return Ok(()),
            OutputFormat::Csv => "csv",
            OutputFormat::Vtk => "vtk",
        };
        let path = cfg.out_dir.join(format!("{}_{:07}.{ext}", cfg.problem, state.step));
        match cfg.output {
            OutputFormat::Csv => export_csv(&state.coeffs, mesh, &gas, &path),
            _ => export_vtk(&state.coeffs, mesh, &gas, &path),
        }
        .map_err(io_err(&path))?;
        files.push(path);
        Ok(())
    };

    let mut residuals = Vec::new();
    let mut written = None;
    loop {
        let done = match cfg.stop {
            StopRule::TEnd(t) => state.t >= t,
            StopRule::Steps(n) => residuals.len() >= n,
            StopRule::Steady { tol, max_steps } => {
                let last = residuals.last().copied();
                if last.is_some_and(|r| r <= tol) {
                    true
                } else if residuals.len() >= max_steps {
                    return Err(SolverError::NotConverged {
                        steps: residuals.len(),
                        residual: last.unwrap_or(f64::NAN),
                    }
                    .into());
                } else {
                    false
                }
            }
        };
        if done {
            break;
        }
        let prev = state.coeffs.clone();
        match cfg.stop {
            StopRule::TEnd(t) => {
                let dt = solver.stable_dt(&state.coeffs)?.min(t - state.t);
                solver.rk_step(&mut state, dt)?;
            }
            _ => {
                solver.step(&mut state)?;
            }
        }
        let r = state.coeffs.max_abs_diff(&prev);
        if !r.is_finite() {
            return Err(SolverError::NotConverged {
                steps: residuals.len() + 1,
                residual: r,
            }
            .into());
        }
        residuals.push(r);
        if cfg.output_every > 0 && residuals.len() % cfg.output_every == 0 {
            write_fields(&state, &mut files)?;
            written = Some(state.step);
        }
    }
    if written != Some(state.step) {
        write_fields(&state, &mut files)?;
    }
    if let Some(path) = &cfg.checkpoint {
        let ck = Checkpoint {
            coeffs: state.coeffs.clone(),
            t: state.t,
            step: state.step,
        };
        let mut bytes = Vec::new();
        ck.write_to(&mut bytes).map_err(io_err(path))?;
        fs::write(path, bytes).map_err(io_err(path))?;
    }

    let l2 = problem
        .exact
        .as_ref()
        .map(|f| compute_l2_error(&state.coeffs, |x| f(x), mesh, solver.tables()));
    let report = ErrorReport {
        l2_density_error: l2,
        convergence_rate: None,
        steps: residuals.len(),
        t_final: state.t,
        last_residual: residuals.last().copied().unwrap_or(0.0),
        wall_time: start.elapsed(),
        shares: solver.timings().shares(),
        elements: mesh.n_elements(),
    };
    Ok(RunOutcome {
        report,
        state,
        residuals,
        files,
    })
}

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub mesh: String,
    pub p: usize,
    pub report: ErrorReport,
}

/// Run `cfg` on every mesh for every degree; rates are against the previous
/// mesh at the same degree.
pub fn convergence(cfg: &RunConfig, meshes: &[String], degrees: &[usize]) -> Result<Vec<ConvergenceRow>, RunError> {
    let mut rows = Vec::new();
    for &p in degrees {
        let mut prev: Option<ErrorReport> = None;
        for name in meshes {
            let mesh_name = if crate::meshgen::vortex_level(name).is_some() {
                format!("vortex:{name}")
            } else {
                name.clone()
            };
            let c = RunConfig {
                p,
                mesh: mesh_name,
                ..cfg.clone()
            };
            if c.limiting && p != 1 {
                return Err(ConfigError::Invalid(format!("limiting needs p = 1, got p = {p}")).into());
            }
            let mut report = run(&c)?.report;
            if let Some(prev) = &prev {
                report = report.with_previous(prev);
            }
            prev = Some(report.clone());
            rows.push(ConvergenceRow {
                mesh: name.clone(),
                p,
                report,
            });
        }
    }
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from("mesh,elements,p,l2_density_error,rate,steps\n");
    for r in rows {
        let e = r.report.l2_density_error.map_or("".into(), |v| format!("{v:.6e}"));
        let rate = r.report.convergence_rate.map_or("".into(), |v| format!("{v:.4}"));
        s.push_str(&format!("{},{},{},{e},{rate},{}\n", r.mesh, r.report.elements, r.p, r.report.steps));
    }
    s
}
