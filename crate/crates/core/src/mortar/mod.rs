//! Mortar flux spaces, trace projections and the coarse operator.
//!
//! A mortar vector holds the normal flux on every interface, oriented by the
//! interface normal: the lower-indexed subdomain sees `+lambda` as outward
//! flux and the other side sees `-lambda`. Trace spaces are piecewise
//! constant on the subdomain boundary facets.

mod coarse;
mod projection;
mod space;

pub use coarse::CoarseOperator;
pub use projection::{InterfaceProjection, Projections, Variant};
pub use space::{InterfaceMortar, MortarKind, MortarSpace};
