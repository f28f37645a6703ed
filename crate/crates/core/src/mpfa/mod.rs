//! MPFA-O cell-centred finite volumes.
//!
//! Every vertex carries an interaction region. Inside it the cell gradients
//! are reconstructed from the cell pressure and two sub-facet pressures,
//! flux continuity is imposed across every sub-facet and the sub-facet
//! pressures are eliminated. The resulting stencils are assembled into a
//! [`SubdomainOperator`].

mod assembly;
mod local;
mod perm;
mod raster;
mod region;

pub use assembly::{
    conservation_residual, region_stencils, source_integrals, BcKind, MpfaOptions, SubdomainOperator,
    SubdomainSolution,
};
pub use local::{local_gradient_system, LocalBc, LocalStencil};
pub use perm::{PermField, Tensor};
pub use raster::Raster;
pub use region::{build_interaction_regions, build_region, ContinuityPoint, Corner, InteractionRegion, SubFacet};
