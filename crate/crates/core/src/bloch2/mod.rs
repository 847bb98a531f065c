//! The 2x2 theory: the set S of strict trace-one contractions, Bloch
//! coordinates, the partner spheroid and the classification of compatible pairs.

mod classify;
mod geometry;

pub use classify::{classify_pair_2x2, MinimalProjection, PairClass};
pub use geometry::{
    bloch_frame, director_sphere_residual, ellipsoid_residual, in_s, partner, polynomial_residual, sample_ellipsoid,
    spheroid_params, strict_noncommuting_criterion, BlochFrame, BlochPoint, Branch, SpheroidParams, StrictParam,
    EXTREMITY_EXCLUSION_RADIUS,
};
