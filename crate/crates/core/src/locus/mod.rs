//! Numerical exploration of fixed-ratio loci of 2×3 matrices.
//!
//! The ambient space is the hyperplane `sum p_ij = 1` with the coordinate
//! hyperplanes removed; signs are not restricted. Points are found by Newton
//! refinement on randomly sliced polynomial systems and the local dimension
//! at each point is read off the Jacobian's singular values.
//!
//! Only real points are seen, so point counts on a slice are lower bounds on
//! the complex degree of the locus, never the degree itself.

mod dimension;
mod explore;
mod newton;
mod system;

pub use dimension::{
    local_dimension, numerical_rank, LocalDimension, RankEstimate, DEFAULT_SVD_THRESHOLD,
    MIN_GAP_RATIO,
};
pub use explore::{
    explore, explore_with, random_simplex_point, random_slice, BatchSummary, Bootstrap, Cluster,
    ExploreConfig, FoundPoint, LocusSample,
};
pub use newton::{newton_refine, NewtonConfig, NewtonResult, NewtonStatus};
pub use system::{
    build_system, membership, membership_with_floor, AffineSlice, Point, PolySystem,
    RatioEquation, DEFAULT_ENTRY_FLOOR, N_VARS,
};
