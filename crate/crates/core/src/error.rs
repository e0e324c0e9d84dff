use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("distance matrix entry ({i}, {j}) is not finite")]
    NonFinite { i: usize, j: usize },
    #[error("distance matrix diagonal entry {i} is {value}, expected 0")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("distance matrix is asymmetric at ({i}, {j}): {dij} != {dji}")]
    AsymmetricMatrix { i: usize, j: usize, dij: f64, dji: f64 },
    #[error("distance matrix entry ({i}, {j}) is negative: {value}")]
    NegativeEntry { i: usize, j: usize, value: f64 },
    #[error("triangle inequality violated on ({i}, {j}, {k}): d(i,k) = {dik} > d(i,j) + d(j,k) = {through}")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        dik: f64,
        through: f64,
    },
    #[error("coordinates disagree with the distance matrix at ({i}, {j}): {matrix} vs {euclidean}")]
    CoordMismatch {
        i: usize,
        j: usize,
        matrix: f64,
        euclidean: f64,
    },
    #[error("label count {labels} does not match point count {points}")]
    LabelMismatch { labels: usize, points: usize },
    #[error("coordinate rows have inconsistent dimensions: row {row} has {len}, expected {expected}")]
    RaggedCoords {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("cover member {alpha:?} is empty")]
    EmptyMember { alpha: String },
    #[error("cover member {alpha:?} references unknown point {point} (space has {points} points)")]
    IndexMismatch {
        alpha: String,
        point: usize,
        points: usize,
    },
    #[error("cover does not contain point {point}")]
    NotCovered { point: usize },
    #[error("duplicate cover index {alpha:?}")]
    DuplicateIndex { alpha: String },
    #[error("unknown cover index {alpha:?}")]
    UnknownIndex { alpha: String },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("no {eps}-approximate {k}-discrete path from {source_point} to {target}: step {step} exceeds {bound}")]
    NoPathWithinEps {
        source_point: usize,
        target: usize,
        k: usize,
        eps: f64,
        step: f64,
        bound: f64,
    },
    #[error("bad exponent {0}: must be at least 1")]
    BadExponent(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bounds inconsistent with cover: {0}")]
    InconsistentBounds(String),
    #[error("fine member {fine:?} is contained in no coarse member")]
    NotARefinement { fine: String },
    #[error("no cover member contains the star of vertex {vertex:?}; the Lebesgue number is overstated")]
    CoverTooTight { vertex: Vec<i64> },
    #[error("point {0:?} is not a lattice vertex")]
    OffLattice(Vec<f64>),
    #[error("space has no coordinates")]
    MissingCoords,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}
