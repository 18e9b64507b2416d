//! Point spectrum of the weighted linearization about a front.
//!
//! Two complementary tools live here. Energy estimates confine eigenvalues
//! to an explicit half-disk from nothing but sup norms of the profile, and
//! an Evans function counts the eigenvalues actually inside a contour by
//! the argument principle. The Evans function is built on the exterior
//! square of the first-order system, so the two-dimensional growing and
//! decaying subspaces ride along as single wedge vectors and no
//! orthogonalization is ever needed mid-integration.

mod bounds;
mod evans;
mod winding;

pub use bounds::{energy_bounds, EnergyBounds};
pub use evans::{
    asymptotic_spatial_eigs, evans_eval, induced, pair_wedge, wedge2, wedge_pair_product,
    EvansOptions, SpatialSplit, WeightedCoeffs,
};
pub use winding::{
    origin_circle, verify_numerical_observation, winding_number, ContourSpec, ObservationReport,
    WindingCount,
};
