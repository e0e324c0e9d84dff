use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::ext_value;
use crate::metric::{min_separation, optimal_lebesgue, Cover, MetricSpace};
use crate::partition::{per_function_lipschitz, theoretical_bounds, PartitionOfUnity};

/// Thresholds `epsilon`, `zeta` for a cover of multiplicity `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionParams {
    pub epsilon: f64,
    pub zeta: f64,
    #[serde(rename = "M")]
    pub m: usize,
}

impl DecompositionParams {
    /// Checks `M/(M+1) eps < zeta < eps` and `(M+1)(M+2) eps < 2`.
    pub fn new(epsilon: f64, zeta: f64, m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::BadParameter(format!("M must be >= 1, got {m}")));
        }
        let mf = m as f64;
        if !(mf / (mf + 1.0) * epsilon < zeta && zeta < epsilon) {
            return Err(Error::BadParameter(format!(
                "need M/(M+1) eps < zeta < eps, got eps = {epsilon}, zeta = {zeta}, M = {m}"
            )));
        }
        if !((mf + 1.0) * (mf + 2.0) * epsilon < 2.0) {
            return Err(Error::BadParameter(format!(
                "need (M+1)(M+2) eps < 2, got eps = {epsilon}, M = {m}"
            )));
        }
        Ok(Self { epsilon, zeta, m })
    }

    /// Threshold multiplier `M - k + 1` for subsets of size `k`.
    fn level(&self, k: usize) -> f64 {
        (self.m - k + 1) as f64
    }
}

/// `epsilon = 2 (M+2)^-2`, `zeta = (M + 1/2)/(M+1) epsilon`.
pub fn default_params(m: usize) -> Result<DecompositionParams> {
    if m < 1 {
        return Err(Error::BadParameter(format!("M must be >= 1, got {m}")));
    }
    let mf = m as f64;
    let epsilon = 2.0 / ((mf + 2.0) * (mf + 2.0));
    DecompositionParams::new(epsilon, (mf + 0.5) / (mf + 1.0) * epsilon, m)
}

/// One set `B_{mu, eps, zeta}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BSet {
    /// Member labels of `mu`, in index order.
    pub mu: Vec<String>,
    #[serde(skip)]
    pub mu_index: Vec<usize>,
    pub points: Vec<usize>,
}

/// The family `F_k` of nonempty `B_mu` with `|mu| = k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Family {
    pub k: usize,
    pub sets: Vec<BSet>,
    /// Smallest distance between distinct sets of the family.
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub separation: f64,
    /// Separation guaranteed by the thresholds and the measured
    /// single-function Lipschitz constant.
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub empirical_floor: f64,
    /// Same, with the theoretical single-function bound in place of the
    /// measured constant.
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub theoretical_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisjointDecomposition {
    pub params: DecompositionParams,
    pub families: Vec<Family>,
    /// Minimum over families of the same-family separation.
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub separation: f64,
    /// Per point: the size `k` and the subset `mu` found by the recursion.
    pub assignment: Vec<(usize, Vec<usize>)>,
}

/// Ranks the values of a row in decreasing order, ties by index.
fn ranked(row: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..row.len()).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    order
}

/// Whether `x` (through its row) lies in `B_mu` for `mu` of size `k`.
pub fn in_b_set(row: &[f64], mu: &[usize], params: &DecompositionParams) -> bool {
    let k = mu.len();
    if k == 0 || k > params.m {
        return false;
    }
    let t = params.level(k);
    row.iter().enumerate().all(|(a, &v)| {
        if mu.contains(&a) {
            v > t * params.epsilon
        } else {
            v < t * params.zeta
        }
    })
}

/// The sizes `k` for which the top-`k` members at this row form a `B` set,
/// with those subsets (sorted). Only the top-`k` set can qualify for a given
/// `k`, because members of `mu` must dominate the rest.
fn qualifying(row: &[f64], params: &DecompositionParams) -> Vec<(usize, Vec<usize>)> {
    let order = ranked(row);
    let mut out = Vec::new();
    for k in 1..=params.m.min(row.len()) {
        let mut mu = order[..k].to_vec();
        mu.sort_unstable();
        if in_b_set(row, &mu, params) {
            out.push((k, mu));
        }
    }
    out
}

/// Splits `X` into families `F_1..F_M` of sets `B_{mu,eps,zeta}` with
/// `|mu| = k`; sets in one family are pairwise separated.
///
/// Each point is assigned to the smallest `k` whose top-`k` subset
/// qualifies. Set extents keep every qualifying point, so a point may sit in
/// sets of several families.
pub fn disjoint_decomposition(
    space: &MetricSpace,
    pou: &PartitionOfUnity,
    params: &DecompositionParams,
) -> Result<DisjointDecomposition> {
    let cover = pou.cover();
    let m = cover.multiplicity();
    if m != params.m {
        return Err(Error::BadParameter(format!(
            "parameters are for M = {}, cover has multiplicity {m}",
            params.m
        )));
    }
    DecompositionParams::new(params.epsilon, params.zeta, params.m)?;

    let per_point: Vec<Vec<(usize, Vec<usize>)>> = (0..pou.n_points())
        .into_par_iter()
        .map(|x| qualifying(pou.row(x), params))
        .collect();
    let mut assignment = Vec::with_capacity(per_point.len());
    let mut extents: BTreeMap<(usize, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for (x, hits) in per_point.into_iter().enumerate() {
        let first = hits.first().cloned().ok_or(Error::NotCovered { point: x })?;
        assignment.push(first);
        for key in hits {
            extents.entry(key).or_default().push(x);
        }
    }

    let lip = per_function_lipschitz(pou, space).constant;
    let lebesgue = optimal_lebesgue(space, cover)?;
    let theory_lip = theoretical_bounds(m, lebesgue, pou.p(), 1.0, false)?.per_function_bound;
    let floor = |k: usize, lip: f64| -> f64 {
        let gap = if k == params.m {
            params.epsilon
        } else {
            params.level(k) * (params.epsilon - params.zeta)
        };
        if lip > 0.0 {
            gap / lip
        } else {
            f64::INFINITY
        }
    };

    let mut families = Vec::new();
    for k in 1..=params.m {
        let sets: Vec<BSet> = extents
            .iter()
            .filter(|((size, _), _)| *size == k)
            .map(|((_, mu), points)| BSet {
                mu: mu.iter().map(|&a| cover.label(a).to_string()).collect(),
                mu_index: mu.clone(),
                points: points.clone(),
            })
            .collect();
        if sets.is_empty() {
            continue;
        }
        let raw: Vec<Vec<usize>> = sets.iter().map(|b| b.points.clone()).collect();
        families.push(Family {
            k,
            separation: min_separation(space, &raw),
            empirical_floor: floor(k, lip),
            theoretical_floor: floor(k, theory_lip),
            sets,
        });
    }
    let separation = families
        .iter()
        .map(|f| f.separation)
        .fold(f64::INFINITY, f64::min);
    Ok(DisjointDecomposition {
        params: *params,
        families,
        separation,
        assignment,
    })
}

impl DisjointDecomposition {
    pub fn family(&self, k: usize) -> Option<&Family> {
        self.families.iter().find(|f| f.k == k)
    }

    /// All `B` sets as one cover, labelled by their subsets (`"1+2"`).
    pub fn cover(&self, n_points: usize) -> Result<Cover> {
        Cover::with_points(
            n_points,
            self.families
                .iter()
                .flat_map(|f| &f.sets)
                .map(|b| (b.mu.join("+"), b.points.clone()))
                .collect::<Vec<_>>(),
        )
    }

    pub fn provenance(&self) -> Value {
        json!({
            "construction": "decompose",
            "params": self.params,
            "separation": ext_value(self.separation),
            "families": self.families.iter().map(|f| json!({
                "k": f.k,
                "sets": f.sets.iter().map(|b| b.mu.join("+")).collect::<Vec<_>>(),
                "separation": ext_value(f.separation),
                "empirical_floor": ext_value(f.empirical_floor),
                "theoretical_floor": ext_value(f.theoretical_floor),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self, n_points: usize) -> Result<String> {
        crate::io::cover_to_json(&self.cover(n_points)?, Some(&self.provenance()))
    }
}
