//! Reference spaces and covers on which the partition bounds are attained
//! or nearly attained, plus a few small fixtures shared by tests, the CLI
//! and the benchmarks.

use crate::metric::{Cover, MetricSpace};

/// A space together with a cover and, for grid-based spaces, the real
/// coordinate of each point (`None` for points off the grid).
#[derive(Debug, Clone)]
pub struct Instance {
    pub space: MetricSpace,
    pub cover: Cover,
    pub positions: Vec<Option<f64>>,
}

impl Instance {
    /// Grid point closest to `v`.
    pub fn index_of(&self, v: f64) -> usize {
        self.positions
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, (p - v).abs())))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .expect("instance has grid points")
    }

    /// Index of the first point without a grid coordinate.
    pub fn isolated(&self) -> Option<usize> {
        self.positions.iter().position(Option::is_none)
    }
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect()
}

fn labels(m: usize) -> impl Iterator<Item = String> {
    (1..=m).map(|a| a.to_string())
}

/// `[-L, L]` sampled at `step`, plus one point at distance `L` from every
/// grid point. `U_1` is the grid and `U_2 = ... = U_M = (0, L] + {x_*}`.
/// Optimal Lebesgue number `L`, multiplicity `M`, no approximate midpoints.
pub fn general_example(lebesgue: f64, m: usize, step: f64) -> Instance {
    assert!(m >= 1 && lebesgue > 0.0 && step > 0.0);
    let pts = grid(-lebesgue, lebesgue, step);
    let g = pts.len();
    let n = g + 1;
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..g {
        for j in 0..g {
            matrix[i][j] = (pts[i] - pts[j]).abs();
        }
        matrix[i][g] = lebesgue;
        matrix[g][i] = lebesgue;
    }
    let space = MetricSpace::from_matrix(matrix, None, None).expect("valid metric");
    let positive: Vec<usize> = (0..g).filter(|&i| pts[i] > 0.0).chain([g]).collect();
    let members = labels(m).enumerate().map(|(a, l)| {
        let set = if a == 0 {
            (0..g).collect()
        } else {
            positive.clone()
        };
        (l, set)
    });
    let cover = Cover::new(&space, members.collect::<Vec<_>>()).expect("valid cover");
    let positions = pts.into_iter().map(Some).chain([None]).collect();
    Instance {
        space,
        cover,
        positions,
    }
}

/// `[-L, 3L]` sampled at `step` with `U_1 = {x < 2L}` and
/// `U_2 = ... = U_M = {x > 0}`. Optimal Lebesgue number `L`, multiplicity
/// `M`, and the sample approximates a length space.
pub fn midpoint_example(lebesgue: f64, m: usize, step: f64) -> Instance {
    assert!(m >= 1 && lebesgue > 0.0 && step > 0.0);
    let pts = grid(-lebesgue, 3.0 * lebesgue, step);
    let space = MetricSpace::line(&pts).expect("valid line");
    let tol = 1e-9 * lebesgue;
    let left: Vec<usize> = (0..pts.len())
        .filter(|&i| pts[i] < 2.0 * lebesgue - tol)
        .collect();
    let right: Vec<usize> = (0..pts.len()).filter(|&i| pts[i] > tol).collect();
    let members = labels(m).enumerate().map(|(a, l)| {
        (l, if a == 0 { left.clone() } else { right.clone() })
    });
    let cover = Cover::new(&space, members.collect::<Vec<_>>()).expect("valid cover");
    Instance {
        space,
        cover,
        positions: pts.into_iter().map(Some).collect(),
    }
}

/// `[0, 2]` sampled at `step`, covered by `[0, 1.2)` and `(0.8, 2]`.
pub fn overlapping_intervals(step: f64) -> Instance {
    let pts = grid(0.0, 2.0, step);
    let space = MetricSpace::line(&pts).expect("valid line");
    let tol = 1e-9;
    let left: Vec<usize> = (0..pts.len()).filter(|&i| pts[i] < 1.2 - tol).collect();
    let right: Vec<usize> = (0..pts.len()).filter(|&i| pts[i] > 0.8 + tol).collect();
    let cover = Cover::from_sets(&space, vec![left, right]).expect("valid cover");
    Instance {
        space,
        cover,
        positions: pts.into_iter().map(Some).collect(),
    }
}

/// Integer points `0..n` on the line with consecutive-interval members
/// `[lo, hi]` (inclusive).
pub fn integer_line(n: usize, members: &[(usize, usize)]) -> Instance {
    let pts: Vec<f64> = (0..n).map(|i| i as f64).collect();
    let space = MetricSpace::line(&pts).expect("valid line");
    let sets = members.iter().map(|&(lo, hi)| (lo..=hi).collect()).collect();
    let cover = Cover::from_sets(&space, sets).expect("valid cover");
    Instance {
        space,
        cover,
        positions: pts.into_iter().map(Some).collect(),
    }
}

/// `side x side` lattice on `[0, extent]^2` covered by the strips
/// `x <= split_hi` and `x >= split_lo`.
pub fn strip_cloud(side: usize, extent: f64, split_lo: f64, split_hi: f64) -> Instance {
    let coords: Vec<Vec<f64>> = (0..side)
        .flat_map(|i| {
            (0..side).map(move |j| {
                let t = (side - 1) as f64;
                vec![extent * i as f64 / t, extent * j as f64 / t]
            })
        })
        .collect();
    let tol = 1e-9 * extent;
    let left: Vec<usize> = (0..coords.len())
        .filter(|&i| coords[i][0] <= split_hi + tol)
        .collect();
    let right: Vec<usize> = (0..coords.len())
        .filter(|&i| coords[i][0] >= split_lo - tol)
        .collect();
    let space = MetricSpace::euclidean(coords, None).expect("valid cloud");
    let cover = Cover::from_sets(&space, vec![left, right]).expect("valid cover");
    let positions = vec![None; space.len()];
    Instance {
        space,
        cover,
        positions,
    }
}
