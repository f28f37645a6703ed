//! Configuration-driven runs of the flux-mortar solver: convergence
//! studies, single solves, matching-grid oracle comparisons and raster
//! permeability demos.

pub mod config;
pub mod run;
pub mod vtk;

pub use config::{parse_config, Mode, RunConfig};
pub use run::{run, CliError};
