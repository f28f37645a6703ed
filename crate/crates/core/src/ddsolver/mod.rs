//! Domain decomposition driver.
//!
//! [`DDSystem`] owns per-subdomain Neumann and Dirichlet operators, the
//! mortar projections and the coarse operator. [`DDSystem::solve`] runs the
//! five steps: lift the floating-subdomain sources, solve the particular
//! problems, iterate on the interface, correct the floating pressures and
//! assemble the global fields.

mod exec;
mod monolithic;
mod solve;
mod system;

pub use exec::Executor;
pub use monolithic::{monolithic_solve, MonolithicSolution};
pub use solve::{DdSolution, SolveReport};
pub use system::{DDSystem, KrylovMethod, Problem, ScalarFn, SideFn, SolverSettings, Subdomain};
