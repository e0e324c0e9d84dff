use rayon::prelude::*;

use crate::error::{Error, Result};

/// Relative tolerance used when validating distance matrices.
pub const TAU_METRIC: f64 = 1e-9;

/// A finite metric space stored as a dense, validated distance matrix.
///
/// Euclidean spaces keep their coordinates so that triangulation-based
/// constructions can locate points.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    n: usize,
    coords: Option<Vec<Vec<f64>>>,
}

impl MetricSpace {
    /// Validates a distance matrix. `labels` defaults to `0..n` when `None`.
    pub fn from_matrix(
        matrix: Vec<Vec<f64>>,
        labels: Option<Vec<String>>,
        coords: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        validate_metric(matrix, labels, coords)
    }

    /// Builds the Euclidean metric on `coords`. The triangle inequality holds
    /// by construction, so only the shape of the input is checked.
    pub fn euclidean(coords: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = coords.len();
        check_coords(&coords)?;
        let labels = resolve_labels(labels, n)?;
        let mut dist = vec![0.0; n * n];
        dist.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
            for (j, d) in row.iter_mut().enumerate() {
                *d = euclid(&coords[i], &coords[j]);
            }
        });
        Ok(Self {
            labels,
            dist,
            n,
            coords: Some(coords),
        })
    }

    /// Points on the real line with `d(x, y) = |x - y|`.
    pub fn line(points: &[f64]) -> Result<Self> {
        Self::euclidean(points.iter().map(|&x| vec![x]).collect(), None)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// Ambient dimension for Euclidean spaces.
    pub fn dim(&self) -> Option<usize> {
        self.coords.as_ref().map(|c| c.first().map_or(0, Vec::len))
    }

    /// Distance from a point to a set; `+inf` for the empty set.
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> f64 {
        set.iter()
            .map(|&y| self.dist(x, y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Set-to-set distance; `+inf` if either side is empty.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> f64 {
        a.iter()
            .map(|&x| self.dist_to_set(x, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn diameter_of(&self, set: &[usize]) -> f64 {
        let mut diam = 0.0f64;
        for (k, &x) in set.iter().enumerate() {
            for &y in &set[k + 1..] {
                diam = diam.max(self.dist(x, y));
            }
        }
        diam
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest strictly positive pairwise distance, `+inf` if none.
    pub fn min_positive_distance(&self) -> f64 {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Open ball `{y : d(x, y) < r}`.
    pub fn open_ball(&self, x: usize, r: f64) -> Vec<usize> {
        (0..self.n).filter(|&y| self.dist(x, y) < r).collect()
    }

    /// Closed ball `{y : d(x, y) <= r}`.
    pub fn closed_ball(&self, x: usize, r: f64) -> Vec<usize> {
        (0..self.n).filter(|&y| self.dist(x, y) <= r).collect()
    }

    /// Restricts the space to `points`, in the given order.
    pub fn subspace(&self, points: &[usize]) -> Self {
        let m = points.len();
        let mut dist = Vec::with_capacity(m * m);
        for &i in points {
            for &j in points {
                dist.push(self.dist(i, j));
            }
        }
        Self {
            labels: points.iter().map(|&i| self.labels[i].clone()).collect(),
            dist,
            n: m,
            coords: self
                .coords
                .as_ref()
                .map(|c| points.iter().map(|&i| c[i].clone()).collect()),
        }
    }

    /// Rows of the distance matrix, for serialization.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn resolve_labels(labels: Option<Vec<String>>, n: usize) -> Result<Vec<String>> {
    match labels {
        Some(l) if l.len() != n => Err(Error::LabelMismatch {
            labels: l.len(),
            points: n,
        }),
        Some(l) => Ok(l),
        None => Ok((0..n).map(|i| i.to_string()).collect()),
    }
}

fn check_coords(coords: &[Vec<f64>]) -> Result<()> {
    let expected = coords.first().map_or(0, Vec::len);
    for (row, c) in coords.iter().enumerate() {
        if c.len() != expected {
            return Err(Error::RaggedCoords {
                row,
                len: c.len(),
                expected,
            });
        }
        if let Some(j) = c.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { i: row, j });
        }
    }
    Ok(())
}

/// Checks squareness, finiteness, zero diagonal, symmetry, nonnegativity, the
/// triangle inequality (up to [`TAU_METRIC`]) and, if coordinates are given,
/// agreement with their Euclidean distances.
///
/// A triangle violation reports the triple with the largest excess.
pub fn validate_metric(
    matrix: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
    coords: Option<Vec<Vec<f64>>>,
) -> Result<MetricSpace> {
    let n = matrix.len();
    for (row, r) in matrix.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !matrix[i][j].is_finite() {
                return Err(Error::NonFinite { i, j });
            }
        }
    }
    for i in 0..n {
        if matrix[i][i] != 0.0 {
            return Err(Error::NonzeroDiagonal {
                i,
                value: matrix[i][i],
            });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (dij, dji) = (matrix[i][j], matrix[j][i]);
            if (dij - dji).abs() > TAU_METRIC * dij.abs().max(dji.abs()) {
                return Err(Error::AsymmetricMatrix { i, j, dij, dji });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if matrix[i][j] < 0.0 {
                return Err(Error::NegativeEntry {
                    i,
                    j,
                    value: matrix[i][j],
                });
            }
        }
    }
    let labels = resolve_labels(labels, n)?;
    let dist: Vec<f64> = matrix.into_iter().flatten().collect();

    if let Some((i, j, k, excess)) = worst_triangle(&dist, n) {
        if excess > 0.0 {
            return Err(Error::TriangleViolation {
                i,
                j,
                k,
                dik: dist[i * n + k],
                through: dist[i * n + j] + dist[j * n + k],
            });
        }
    }

    if let Some(c) = &coords {
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        check_coords(c)?;
        for i in 0..n {
            for j in i + 1..n {
                let e = euclid(&c[i], &c[j]);
                let m = dist[i * n + j];
                if (e - m).abs() > TAU_METRIC * e.max(m).max(1.0) {
                    return Err(Error::CoordMismatch {
                        i,
                        j,
                        matrix: m,
                        euclidean: e,
                    });
                }
            }
        }
    }

    Ok(MetricSpace {
        labels,
        dist,
        n,
        coords,
    })
}

/// Largest tolerance-adjusted excess `d(i,k) - d(i,j) - d(j,k)` over all
/// triples; positive means a violation.
fn worst_triangle(dist: &[f64], n: usize) -> Option<(usize, usize, usize, f64)> {
    (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let mut best: Option<(usize, usize, usize, f64)> = None;
            for j in 0..n {
                let dij = dist[i * n + j];
                for k in 0..n {
                    let dik = dist[i * n + k];
                    let through = dij + dist[j * n + k];
                    let excess = dik - through - TAU_METRIC * dik.max(through);
                    if best.map_or(true, |b| excess > b.3) {
                        best = Some((i, j, k, excess));
                    }
                }
            }
            best
        })
        .reduce_with(|a, b| {
            // deterministic: larger excess, then smaller triple
            if b.3 > a.3 || (b.3 == a.3 && (b.0, b.1, b.2) < (a.0, a.1, a.2)) {
                b
            } else {
                a
            }
        })
}
