//! Finite metric spaces, covers, distance-to-complement profiles, Lebesgue
//! numbers, multiplicities and approximate midpoints.

mod cover;
mod midpoint;
mod profile;
mod space;

pub use cover::{is_subset, label_order, Cover};
pub use midpoint::{
    discrete_path, midpoint_defect, top_two_bound_check, top_two_bound_check_with_tol, AmpStatus,
    DiscretePath, TopTwoReport, DEFAULT_AMP_RELATIVE_TOL,
};
pub use profile::{
    distance_profile, is_rho_disjoint, lebesgue_report, lebesgue_report_from_profile,
    min_separation, optimal_lebesgue, rho_multiplicity, DistanceProfile, LebesgueReport,
    RhoMultiplicity, EXACT_RHO_LIMIT,
};
pub use space::{validate_metric, MetricSpace, TAU_METRIC};
