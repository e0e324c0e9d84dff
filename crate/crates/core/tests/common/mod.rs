//! Seeded random instances and brute-force oracles shared by the
//! integration and acceptance tests.
#![allow(dead_code)]

use pou_core::metric::{Cover, MetricSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform points in `[0, side]^dim`.
pub fn euclidean_cloud(rng: &mut impl Rng, n: usize, dim: usize, side: f64) -> MetricSpace {
    let coords = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..side)).collect())
        .collect();
    MetricSpace::euclidean(coords, None).unwrap()
}

/// Shortest-path metric of a random connected weighted graph. Such spaces
/// usually lack midpoints.
pub fn graph_metric(rng: &mut impl Rng, n: usize) -> MetricSpace {
    let inf = f64::INFINITY;
    let mut d = vec![vec![inf; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
    }
    let connect = |d: &mut Vec<Vec<f64>>, i: usize, j: usize, w: f64| {
        if w < d[i][j] {
            d[i][j] = w;
            d[j][i] = w;
        }
    };
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let w = rng.gen_range(0.5..3.0);
        connect(&mut d, i, j, w);
    }
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            let w = rng.gen_range(0.5..3.0);
            connect(&mut d, i, j, w);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let through = d[i][k] + d[k][j];
                if through < d[i][j] {
                    d[i][j] = through;
                }
            }
        }
    }
    MetricSpace::from_matrix(d, None, None).unwrap()
}

/// Either kind of space, chosen by the generator.
pub fn random_space(rng: &mut impl Rng, n: usize) -> MetricSpace {
    if rng.gen_bool(0.5) {
        let dim = rng.gen_range(1..=3);
        euclidean_cloud(rng, n, dim, 10.0)
    } else {
        graph_metric(rng, n)
    }
}

/// `k` members; each point joins each member with probability `density`,
/// then uncovered points join a random member and empty members get a
/// random point.
pub fn random_cover(rng: &mut impl Rng, n: usize, k: usize, density: f64) -> Cover {
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); k];
    for x in 0..n {
        let mut placed = false;
        for set in sets.iter_mut() {
            if rng.gen_bool(density) {
                set.push(x);
                placed = true;
            }
        }
        if !placed {
            sets[rng.gen_range(0..k)].push(x);
        }
    }
    for set in sets.iter_mut() {
        if set.is_empty() {
            set.push(rng.gen_range(0..n));
        }
    }
    Cover::with_points(n, sets.into_iter().enumerate().map(|(i, s)| (i.to_string(), s))).unwrap()
}

/// Cover by open balls around random centers, topped up so that every point
/// is covered; multiplicity is capped at `max_mult` by dropping points from
/// members.
pub fn ball_cover(rng: &mut impl Rng, space: &MetricSpace, k: usize, max_mult: usize) -> Cover {
    let n = space.len();
    let radius = space.diameter() / (k as f64).sqrt();
    let mut sets: Vec<Vec<usize>> = (0..k)
        .map(|_| space.open_ball(rng.gen_range(0..n), radius))
        .collect();
    let mut degree = vec![0usize; n];
    for set in sets.iter_mut() {
        set.retain(|&x| {
            if degree[x] < max_mult {
                degree[x] += 1;
                true
            } else {
                false
            }
        });
    }
    for x in 0..n {
        if degree[x] == 0 {
            let nearest = (0..k)
                .filter(|&a| !sets[a].is_empty())
                .min_by(|&a, &b| {
                    space
                        .dist_to_set(x, &sets[a])
                        .total_cmp(&space.dist_to_set(x, &sets[b]))
                })
                .unwrap_or(0);
            sets[nearest].push(x);
            degree[x] = 1;
        }
    }
    let sets: Vec<Vec<usize>> = sets.into_iter().filter(|s| !s.is_empty()).collect();
    Cover::with_points(n, sets.into_iter().enumerate().map(|(i, s)| (i.to_string(), s))).unwrap()
}

/// Brute-force `delta_alpha(x)` straight from the definition.
pub fn delta_oracle(space: &MetricSpace, cover: &Cover, x: usize, alpha: usize) -> f64 {
    if !cover.contains(alpha, x) {
        return 0.0;
    }
    (0..space.len())
        .filter(|&y| !cover.contains(alpha, y))
        .map(|y| space.dist(x, y))
        .fold(f64::INFINITY, f64::min)
}

/// `max_mu (sum_{mu} a - sum_{mu} b)` over every subset.
pub fn best_subset_gain(a: &[f64], b: &[f64]) -> f64 {
    let k = a.len();
    assert!(k <= 16);
    let mut best = 0.0f64;
    for mask in 0u32..(1 << k) {
        let gain: f64 = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| a[i] - b[i])
            .sum();
        best = best.max(gain);
    }
    best
}

/// Points of `[lo, hi]` at spacing `step`.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

/// Maximum of `eta^(p-1) / (eta^p + (1-eta)^p)` over an equispaced grid on
/// `[1/2, 1]`.
pub fn cp_grid_oracle(p: f64, points: usize) -> f64 {
    (0..=points)
        .map(|i| {
            let eta = 0.5 + 0.5 * i as f64 / points as f64;
            eta.powf(p - 1.0) / (eta.powf(p) + (1.0 - eta).powf(p))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Solves the `(n+1) x (n+1)` system `[v_0 .. v_n; 1 .. 1] w = [x; 1]` by
/// Gaussian elimination with partial pivoting.
pub fn affine_weights(vertices: &[Vec<f64>], x: &[f64]) -> Option<Vec<f64>> {
    let m = vertices.len();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|r| {
            let mut row: Vec<f64> = vertices.iter().map(|v| if r < m - 1 { v[r] } else { 1.0 }).collect();
            row.push(if r < m - 1 { x[r] } else { 1.0 });
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Some((0..m).map(|r| a[r][m] / a[r][r]).collect())
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}
