//! The `l^p`-normalized partition of unity built from distance functions,
//! its partial sums, roots and vectorization, empirical Lipschitz sweeps,
//! and the theoretical bounds they are certified against.

mod bounds;
mod build;
mod certificate;
mod cp;
mod lipschitz;

pub use bounds::{interpolated_vector_bound, inv_q, theoretical_bounds, BoundSet};
pub use build::{
    build_partition, lq_distance, partial_sum, partial_sum_by_index, root_values,
    PartitionOfUnity, VectorizedPartition, TAU_SUM_PER_MEMBER,
};
pub use certificate::{
    certify, within, AmpSource, Empirical, LipschitzCertificate, Verdict, Verdicts, Witness,
    TAU_CERT,
};
pub use cp::{compute_cp, cp_quotient, cp_upper_bound, critical_residual, CpConstant};
pub use lipschitz::{
    empirical_lipschitz, optimal_subset, per_function_lipschitz, rooted_partial_sum_lipschitz,
    vector_lipschitz, worst_partial_sum_lipschitz, LipschitzEstimate, MemberEstimate,
    PartialSumEstimate,
};
