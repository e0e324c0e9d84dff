//! Nerve of a partition of unity: simplices are the supports of its rows.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{is_subset, MetricSpace};
use crate::partition::PartitionOfUnity;

/// Simplicial complex on the member indices of a partition. Only the
/// realized supports and the maximal simplices among them are stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NerveComplex {
    labels: Vec<String>,
    /// Distinct row supports, sorted.
    supports: Vec<Vec<usize>>,
    /// Supports not contained in another support.
    maximal: Vec<Vec<usize>>,
}

pub fn build_nerve(pou: &PartitionOfUnity) -> NerveComplex {
    let supports: BTreeSet<Vec<usize>> = (0..pou.n_points()).map(|x| pou.support(x)).collect();
    let supports: Vec<Vec<usize>> = supports.into_iter().collect();
    let maximal = supports
        .iter()
        .filter(|s| {
            !supports
                .iter()
                .any(|t| t.len() > s.len() && is_subset(s, t))
        })
        .cloned()
        .collect();
    NerveComplex {
        labels: pou.labels().to_vec(),
        supports,
        maximal,
    }
}

impl NerveComplex {
    pub fn maximal(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    pub fn supports(&self) -> &[Vec<usize>] {
        &self.supports
    }

    pub fn labels_of(&self, mu: &[usize]) -> Vec<String> {
        mu.iter().map(|&a| self.labels[a].clone()).collect()
    }

    /// Largest simplex size minus one; `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.maximal.iter().map(Vec::len).max().map_or(-1, |m| m as isize - 1)
    }

    /// Whether `mu` (sorted) is a face of some maximal simplex.
    pub fn contains(&self, mu: &[usize]) -> bool {
        !mu.is_empty() && self.maximal.iter().any(|m| is_subset(mu, m))
    }

    /// Every nonempty face, sorted by size then lexicographically.
    pub fn closure(&self) -> Vec<Vec<usize>> {
        let mut all = BTreeSet::new();
        for m in &self.maximal {
            for mask in 1u64..(1u64 << m.len()) {
                let face: Vec<usize> = m
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &a)| a)
                    .collect();
                all.insert(face);
            }
        }
        let mut all: Vec<Vec<usize>> = all.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }
}

/// Points mapped into the open simplex of `mu` and their diameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preimage {
    pub simplex: Vec<String>,
    #[serde(skip)]
    pub mu: Vec<usize>,
    pub points: Vec<usize>,
    pub diameter: f64,
    /// `min_{alpha in mu} diam U_alpha`, which the diameter cannot exceed.
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub member_bound: f64,
    /// Whether the preimage lies in every `U_alpha`, `alpha in mu`.
    pub inside_members: bool,
}

/// For each realized support `mu`, the set `{x : supp Lambda(x) = mu}` and
/// its diameter.
pub fn preimage_diameters(space: &MetricSpace, pou: &PartitionOfUnity, nerve: &NerveComplex) -> Vec<Preimage> {
    let supports: Vec<Vec<usize>> = (0..pou.n_points()).map(|x| pou.support(x)).collect();
    let cover = pou.cover();
    nerve
        .supports
        .iter()
        .map(|mu| {
            let points: Vec<usize> = (0..pou.n_points()).filter(|&x| supports[x] == *mu).collect();
            let member_bound = mu
                .iter()
                .map(|&a| space.diameter_of(cover.member(a)))
                .fold(f64::INFINITY, f64::min);
            Preimage {
                simplex: nerve.labels_of(mu),
                mu: mu.clone(),
                diameter: space.diameter_of(&points),
                member_bound,
                inside_members: mu.iter().all(|&a| is_subset(&points, cover.member(a))),
                points,
            }
        })
        .collect()
}

/// Height `sqrt((n+1)/n)` of the standard simplex spanned by unit vectors
/// and the Lebesgue lower bound `H/(n+1)` of its star cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarConstants {
    pub height: f64,
    pub lebesgue_lower: f64,
}

pub fn star_constants(n: usize) -> Result<StarConstants> {
    if n < 1 {
        return Err(Error::BadParameter("dimension must be >= 1".into()));
    }
    let nf = n as f64;
    let height = ((nf + 1.0) / nf).sqrt();
    Ok(StarConstants {
        height,
        lebesgue_lower: height / (nf + 1.0),
    })
}

/// `{"dimension", "maximal": [[labels]], "preimages": [...]}`.
pub fn nerve_to_json(nerve: &NerveComplex, preimages: &[Preimage]) -> Result<String> {
    let entries: Vec<serde_json::Value> = preimages
        .iter()
        .map(|p| {
            serde_json::json!({
                "simplex": p.simplex,
                "maximal": nerve.maximal.contains(&p.mu),
                "points": p.points.len(),
                "diameter": p.diameter,
                "member_bound": crate::io::ext_value(p.member_bound),
                "inside_members": p.inside_members,
            })
        })
        .collect();
    let maximal: Vec<Vec<String>> = nerve.maximal.iter().map(|m| nerve.labels_of(m)).collect();
    crate::io::to_json(&serde_json::json!({
        "dimension": nerve.dimension(),
        "maximal": maximal,
        "preimages": entries,
    }))
}
