//! Exact finite-`n` ground truth on small hypercubes.
//!
//! Sets are enumerated explicitly, distance profiles are exact integers, and
//! rectangle probabilities come in two arithmetic modes: exact rationals
//! (`*_exact`, the test default) and log-domain floating point.

mod bits;
mod cube;
mod prob;
mod profile;

pub use bits::{complement_set, BitVector, CubeSet};
pub use cube::{fwht, inner_product, noise_operator, p_norm, CubeFunction, MAX_CUBE_DIM};
pub use prob::{
    log2_rational, rectangle_prob, rectangle_prob_direct, rectangle_prob_direct_exact,
    rectangle_prob_direct_with_budget, rectangle_prob_exact, ExactCorrelation, LogProb,
};
pub use profile::{
    binomial, mean_distance_exact, pair_distance_profile, pair_distance_profile_with_budget,
    sphere_distance_profile, DistanceProfile, DEFAULT_PAIR_BUDGET,
};
