//! Lipschitz partitions of unity on finite metric spaces.
//!
//! The crate builds the standard `l^p`-normalized partition of unity
//! subordinate to a cover, measures its Lipschitz constants against the
//! sharp theoretical bounds, and implements the cover refinements used in
//! dimension theory: shrinking, ball expansion, recoloring, decomposition
//! into separated families, Freudenthal-Kuhn star covers and nerves.

pub mod error;
pub mod instances;
pub mod io;
pub mod kuhn;
pub mod metric;
pub mod nerve;
pub mod partition;
pub mod refine;

pub use error::{Error, Result};
pub use kuhn::{euclidean_refine, KuhnGrid};
pub use metric::{lebesgue_report, midpoint_defect, Cover, MetricSpace};
pub use nerve::{build_nerve, preimage_diameters, star_constants, NerveComplex};
pub use partition::{
    build_partition, certify, compute_cp, theoretical_bounds, BoundSet, LipschitzCertificate,
    PartitionOfUnity,
};
pub use refine::{
    default_params, disjoint_decomposition, expand_cover, recolor_refinement, shrink_cover,
    Refinement,
};
