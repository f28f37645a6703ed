//! Manufactured solutions, error norms and refinement studies.

mod convergence;
mod demo;
mod manufactured;
mod norms;
mod table;

pub use convergence::{convergence_study, example1_decomposition, LevelResult, StudyConfig};
pub use demo::RasterDemo;
pub use manufactured::{example1_case, example1_case_with, linear_case, ManufacturedCase};
pub use norms::{
    error_flux, error_mortar, error_pressure, error_pressure_l2, error_projected_mortar, DdErrors, PressureNorm,
};
pub use table::{format_sci, rate, RateRow, RateTable};
