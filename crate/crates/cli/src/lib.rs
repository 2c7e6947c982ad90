//! Driver for the `dg2d` command: configuration, benchmark problems,
//! generated meshes, output and run orchestration.

pub mod config;
pub mod meshgen;
pub mod output;
pub mod problems;
pub mod run;

pub use config::{ConfigError, RawConfig, RunConfig};
pub use output::{compute_l2_error, export_vtk, ErrorReport};
pub use problems::{vortex_exact, VortexGeometry};
pub use run::{convergence, run, RunError, RunOutcome};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
struct BookCli;
