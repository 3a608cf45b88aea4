//! Closed-form probabilities and their Monte Carlo counterparts.

pub mod closed;
pub mod montecarlo;
pub mod quadrature;
pub mod report;

pub use closed::{
    distance_density, expected_cut_ratio, extended_upper_bound_p_ov_given_sc, p_ov, p_ov_given_center,
    p_ov_given_sc, p_sc_given_ov, p_si_given_sc,
};
pub use montecarlo::{
    estimate_pair_probabilities, verify_center_distance_profile, CenterDistanceCheck, EstimatorConfig,
    EstimatorResult, PairCounts, PairMode, Strategy,
};
pub use report::{write_csv, ReportRow};
