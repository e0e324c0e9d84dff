use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{Cover, MetricSpace};

/// Largest space for which rho-multiplicity is computed by exhaustive
/// subset enumeration.
pub const EXACT_RHO_LIMIT: usize = 12;

/// Distances to member complements, `delta[x][alpha] = d(x, X \ U_alpha)`.
///
/// A member equal to the whole space has an empty complement; its
/// distance is `f64::INFINITY` at every point.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    values: Vec<f64>,
    n_points: usize,
    n_members: usize,
}

impl DistanceProfile {
    #[inline]
    pub fn get(&self, x: usize, alpha: usize) -> f64 {
        self.values[x * self.n_members + alpha]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        &self.values[x * self.n_members..(x + 1) * self.n_members]
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_members(&self) -> usize {
        self.n_members
    }

    /// `L_U(x) = max_alpha delta_alpha(x)`.
    pub fn lebesgue_at(&self, x: usize) -> f64 {
        self.row(x).iter().copied().fold(0.0, f64::max)
    }

    /// The two largest values at `x` with their member indices, ties going
    /// to the smaller index. The second entry is `None` for one-member covers.
    pub fn top_two(&self, x: usize) -> ((usize, f64), Option<(usize, f64)>) {
        let row = self.row(x);
        let mut first = (0, row[0]);
        let mut second: Option<(usize, f64)> = None;
        for (alpha, &v) in row.iter().enumerate().skip(1) {
            if v > first.1 {
                second = Some(first);
                first = (alpha, v);
            } else if second.map_or(true, |s| v > s.1) {
                second = Some((alpha, v));
            }
        }
        (first, second)
    }
}

/// `delta_alpha(x) = min_{y not in U_alpha} d(x, y)`.
pub fn distance_profile(space: &MetricSpace, cover: &Cover) -> Result<DistanceProfile> {
    if cover.n_points() != space.len() {
        return Err(Error::IndexMismatch {
            alpha: cover.label(0).to_string(),
            point: cover.n_points(),
            points: space.len(),
        });
    }
    let n = space.len();
    let k = cover.len();
    let complements: Vec<Vec<usize>> = (0..k).map(|a| cover.complement(a)).collect();
    let mut values = vec![0.0; n * k];
    values
        .par_chunks_mut(k.max(1))
        .enumerate()
        .for_each(|(x, row)| {
            for (alpha, v) in row.iter_mut().enumerate() {
                *v = if cover.contains(alpha, x) {
                    space.dist_to_set(x, &complements[alpha])
                } else {
                    0.0
                };
            }
        });
    Ok(DistanceProfile {
        values,
        n_points: n,
        n_members: k,
    })
}

/// rho-multiplicity of a family: the largest number of members met by a
/// set of diameter at most `rho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoMultiplicity {
    pub rho: f64,
    pub value: usize,
    /// `false` means `value` is a certified lower bound from the ball family.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LebesgueReport {
    #[serde(serialize_with = "crate::io::ser_ext_vec")]
    pub pointwise: Vec<f64>,
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub optimal: f64,
    /// Smallest point index attaining `optimal`.
    pub argmin: usize,
    pub multiplicity: usize,
    pub rho_multiplicity: Vec<RhoMultiplicity>,
}

pub fn lebesgue_report(space: &MetricSpace, cover: &Cover, rhos: &[f64]) -> Result<LebesgueReport> {
    let profile = distance_profile(space, cover)?;
    Ok(lebesgue_report_from_profile(space, cover, &profile, rhos))
}

pub fn lebesgue_report_from_profile(
    space: &MetricSpace,
    cover: &Cover,
    profile: &DistanceProfile,
    rhos: &[f64],
) -> LebesgueReport {
    let pointwise: Vec<f64> = (0..space.len()).map(|x| profile.lebesgue_at(x)).collect();
    let (argmin, optimal) = pointwise
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (x, v)| if v < acc.1 { (x, v) } else { acc });
    let family: Vec<Vec<usize>> = (0..cover.len()).map(|a| cover.member(a).to_vec()).collect();
    LebesgueReport {
        pointwise,
        optimal,
        argmin,
        multiplicity: cover.multiplicity(),
        rho_multiplicity: rhos
            .iter()
            .map(|&rho| rho_multiplicity(space, &family, rho))
            .collect(),
    }
}

/// Optimal Lebesgue number `L_* = min_x max_alpha delta_alpha(x)`.
pub fn optimal_lebesgue(space: &MetricSpace, cover: &Cover) -> Result<f64> {
    let profile = distance_profile(space, cover)?;
    Ok((0..space.len())
        .map(|x| profile.lebesgue_at(x))
        .fold(f64::INFINITY, f64::min))
}

/// rho-multiplicity of an arbitrary family of point subsets.
///
/// Exact when `space.len() <= EXACT_RHO_LIMIT` or when `rho` is below the
/// smallest positive distance (then only single points qualify). Otherwise
/// the sets are restricted to closed balls of radius `rho / 2`, which gives a
/// lower bound flagged by `exact == false`.
pub fn rho_multiplicity(space: &MetricSpace, family: &[Vec<usize>], rho: f64) -> RhoMultiplicity {
    let n = space.len();
    let mut hits: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (b, member) in family.iter().enumerate() {
        for &x in member {
            hits[x].push(b);
        }
    }
    let point_max = hits.iter().map(Vec::len).max().unwrap_or(0);

    if rho < space.min_positive_distance() {
        // Sets of diameter <= rho consist of coincident points only.
        let mut best = point_max;
        for x in 0..n {
            let group: Vec<usize> = (0..n).filter(|&y| space.dist(x, y) == 0.0).collect();
            best = best.max(count_hits(&hits, &group, family.len()));
        }
        return RhoMultiplicity {
            rho,
            value: best,
            exact: true,
        };
    }

    if n <= EXACT_RHO_LIMIT {
        let mut best = point_max;
        let mut current = Vec::with_capacity(n);
        extend_cliques(space, &hits, family.len(), rho, 0, &mut current, &mut best);
        return RhoMultiplicity {
            rho,
            value: best,
            exact: true,
        };
    }

    let value = (0..n)
        .into_par_iter()
        .map(|x| count_hits(&hits, &space.closed_ball(x, rho / 2.0), family.len()))
        .max()
        .unwrap_or(0)
        .max(point_max);
    RhoMultiplicity {
        rho,
        value,
        exact: false,
    }
}

fn count_hits(hits: &[Vec<usize>], set: &[usize], n_members: usize) -> usize {
    let mut seen = vec![false; n_members];
    let mut count = 0;
    for &x in set {
        for &b in &hits[x] {
            if !seen[b] {
                seen[b] = true;
                count += 1;
            }
        }
    }
    count
}

/// Enumerates every subset of diameter <= rho by growing cliques of the
/// "within rho" graph in increasing index order.
fn extend_cliques(
    space: &MetricSpace,
    hits: &[Vec<usize>],
    n_members: usize,
    rho: f64,
    start: usize,
    current: &mut Vec<usize>,
    best: &mut usize,
) {
    for y in start..space.len() {
        if current.iter().all(|&x| space.dist(x, y) <= rho) {
            current.push(y);
            *best = (*best).max(count_hits(hits, current, n_members));
            extend_cliques(space, hits, n_members, rho, y + 1, current, best);
            current.pop();
        }
    }
}

/// Whether distinct members are pairwise farther apart than `rho` (strictly).
pub fn is_rho_disjoint(space: &MetricSpace, family: &[Vec<usize>], rho: f64) -> Result<bool> {
    if let Some(i) = family.iter().position(Vec::is_empty) {
        return Err(Error::EmptyMember {
            alpha: i.to_string(),
        });
    }
    Ok(min_separation(space, family) > rho)
}

/// Minimum set distance over distinct pairs of members; `+inf` for fewer
/// than two members.
pub fn min_separation(space: &MetricSpace, family: &[Vec<usize>]) -> f64 {
    let mut sep = f64::INFINITY;
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            sep = sep.min(space.set_distance(a, b));
        }
    }
    sep
}
