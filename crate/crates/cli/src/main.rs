use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dg2d::BasisTables;
use dg2d_cli::config::RawConfig;
use dg2d_cli::meshgen::{generated, load_mesh};
use dg2d_cli::problems::{ShockSetup, VortexGeometry};
use dg2d_cli::run::{convergence_csv, effective_workers};
use dg2d_cli::{convergence, run, RunConfig, RunError};

#[derive(Parser)]
#[command(name = "dg2d", version, about = "Modal DG solver for the 2D Euler equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Vtk,
}

#[derive(clap::Args)]
struct Overrides {
    /// Mesh file, or vortex:A..F, dmr:NXxNY
    #[arg(long)]
    mesh: Option<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_parser = ["2", "4"])]
    rk: Option<String>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    limit: Option<OnOff>,
    /// Worker threads (beats DG2D_WORKERS and the config file)
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured problem
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run over a mesh sequence and print the L2 error / rate table as CSV
    Convergence {
        config: PathBuf,
        /// Comma-separated meshes: vortex levels A..F or paths
        #[arg(long, value_delimiter = ',', required = true)]
        meshes: Vec<String>,
        /// Comma-separated degrees (default: the config's p)
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<usize>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write a generated mesh (vortex:A..F, dmr:NXxNY) as .msh
    Mesh {
        name: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the precomputed basis tables for degree p as CSV
    Tables {
        #[arg(long)]
        p: usize,
    },
    /// Print the edge connectivity of a mesh
    Connectivity { mesh: String },
}

fn load_config(path: &Path, o: &Overrides) -> Result<RunConfig, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut raw = RawConfig::parse(&text)?;
    if let Some(m) = &o.mesh {
        raw.set("mesh", m.clone());
    }
    if let Some(p) = o.p {
        raw.set("p", p.to_string());
    }
    if let Some(rk) = &o.rk {
        raw.set("rk", rk.clone());
    }
    if let Some(cfl) = o.cfl {
        raw.set("cfl", cfl.to_string());
    }
    if let Some(l) = o.limit {
        raw.set("limit", if matches!(l, OnOff::On) { "on" } else { "off" });
    }
    if let Some(out) = &o.out {
        raw.set("out_dir", out.to_string_lossy());
    }
    if let Some(f) = o.format {
        raw.set("output", if matches!(f, Format::Csv) { "csv" } else { "vtk" });
    }
    let mut cfg = raw.resolve()?;
    cfg.workers = match o.workers {
        Some(0) => return Err(dg2d_cli::ConfigError::Invalid("--workers must be positive".into()).into()),
        Some(n) => Some(n),
        None => effective_workers(cfg.workers)?,
    };
    Ok(cfg)
}

fn execute(cmd: Command) -> Result<(), RunError> {
    match cmd {
        Command::Run { config, overrides } => {
            let cfg = load_config(&config, &overrides)?;
            let outcome = run(&cfg)?;
            print!("{}", outcome.report.to_text());
            let path = cfg.out_dir.join("report.txt");
            std::fs::create_dir_all(&cfg.out_dir)
                .and_then(|_| std::fs::write(&path, outcome.report.to_key_values()))
                .map_err(|source| RunError::Io { path, source })?;
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
        }
        Command::Convergence {
            config,
            meshes,
            degrees,
            overrides,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let degrees = if degrees.is_empty() { vec![cfg.p] } else { degrees };
            let rows = convergence(&cfg, &meshes, &degrees)?;
            print!("{}", convergence_csv(&rows));
        }
        Command::Mesh { name, output } => {
            let src = generated(&name, &VortexGeometry::default(), ShockSetup::default().x0)?
                .ok_or_else(|| dg2d_cli::meshgen::MeshLoadError::BadName(name.clone()))?;
            std::fs::write(&output, src.to_msh()).map_err(|source| RunError::Io { path: output, source })?;
        }
        Command::Tables { p } => {
            let tables = BasisTables::build(p).map_err(|e| dg2d_cli::ConfigError::Invalid(e.to_string()))?;
            print!("{}", tables.to_csv());
        }
        Command::Connectivity { mesh } => {
            let mesh = load_mesh(&mesh, &VortexGeometry::default(), ShockSetup::default().x0)?;
            print!("{}", mesh.connectivity_dump());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dg2d: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
