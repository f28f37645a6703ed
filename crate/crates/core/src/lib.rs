//! Flux-mortar domain decomposition for single-phase Darcy flow.
//!
//! Subdomains are discretized with the MPFA-O cell-centered finite volume
//! method and coupled through a normal-flux mortar on non-matching
//! interfaces. The global system is reduced to a symmetric positive definite
//! interface problem that is solved with preconditioned conjugate gradients.
//!
//! Module map:
//!
//! * [`mesh`]: structured tessellations, uniform refinement, box decompositions
//! * [`mpfa`]: interaction regions, local elimination, subdomain operators
//! * [`mfmfe`]: vertex-quadrature BDM1 oracle used to cross-check MPFA stencils
//! * [`mortar`]: mortar spaces, trace projections and the coarse operator `B`
//! * [`ddsolver`]: the interface operator, preconditioner and five-step solve
//! * [`verify`]: manufactured solutions, error norms and rate tables
//! * [`linalg`]: sparse storage, cached factorizations and Krylov drivers

pub mod ddsolver;
pub mod error;
pub mod linalg;
pub mod mesh;
pub mod mfmfe;
pub mod mortar;
pub mod mpfa;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
