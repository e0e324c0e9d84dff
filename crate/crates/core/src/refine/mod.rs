//! Cover operators: shrinking, ball expansion, recoloring and the
//! decomposition into separated families.

mod decompose;
mod refinement;

pub use decompose::{
    default_params, disjoint_decomposition, in_b_set, BSet, DecompositionParams,
    DisjointDecomposition, Family,
};
pub use refinement::{expand_cover, recolor_refinement, shrink_cover, Measured, Refinement};
