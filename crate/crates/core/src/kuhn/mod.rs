//! Scaled Freudenthal-Kuhn triangulation: point location, hat functions,
//! open stars, simplex geometry and the Euclidean star-cover refinement.

mod grid;
mod refine;

pub use grid::{distance_to_affine_hull, BarycentricCoords, KuhnGrid, SimplexGeometry, SimplexId};
pub use refine::{euclidean_refine, KuhnRefinement};
