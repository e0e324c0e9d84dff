use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::io::ext_value;
use crate::metric::{
    distance_profile, is_subset, rho_multiplicity, Cover, MetricSpace, RhoMultiplicity,
};

/// An indexed family refining a cover, with the constants its construction
/// guarantees.
///
/// Members may be empty; they are kept so that indices line up with the
/// source cover. [`Refinement::cover`] drops them.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    labels: Vec<String>,
    members: Vec<Vec<usize>>,
    n_points: usize,
    pub claimed_lebesgue: f64,
    pub claimed_multiplicity: usize,
    /// Scale at which `claimed_multiplicity` is a rho-multiplicity bound
    /// (`None`: plain multiplicity).
    pub claimed_rho: Option<f64>,
    pub construction: &'static str,
    pub params: Value,
}

/// Constants recomputed from the refined family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measured {
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub lebesgue: f64,
    pub multiplicity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_multiplicity: Option<RhoMultiplicity>,
}

impl Refinement {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        labels: Vec<String>,
        members: Vec<Vec<usize>>,
        n_points: usize,
        claimed_lebesgue: f64,
        claimed_multiplicity: usize,
        claimed_rho: Option<f64>,
        construction: &'static str,
        params: Value,
    ) -> Self {
        debug_assert_eq!(labels.len(), members.len());
        Self {
            labels,
            members,
            n_points,
            claimed_lebesgue,
            claimed_multiplicity,
            claimed_rho,
            construction,
            params,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Member `i`, possibly empty.
    pub fn member(&self, i: usize) -> &[usize] {
        &self.members[i]
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Labels of the empty members.
    pub fn empty_labels(&self) -> Vec<&str> {
        self.labels
            .iter()
            .zip(&self.members)
            .filter(|(_, m)| m.is_empty())
            .map(|(l, _)| l.as_str())
            .collect()
    }

    /// The nonempty members as a cover.
    pub fn cover(&self) -> Result<Cover> {
        Cover::with_points(
            self.n_points,
            self.labels
                .iter()
                .zip(&self.members)
                .filter(|(_, m)| !m.is_empty())
                .map(|(l, m)| (l.clone(), m.clone()))
                .collect::<Vec<_>>(),
        )
    }

    pub fn measure(&self, space: &MetricSpace) -> Result<Measured> {
        let cover = self.cover()?;
        let profile = distance_profile(space, &cover)?;
        let lebesgue = (0..space.len())
            .map(|x| profile.lebesgue_at(x))
            .fold(f64::INFINITY, f64::min);
        let rho_multiplicity = self
            .claimed_rho
            .filter(|r| r.is_finite())
            .map(|rho| rho_multiplicity(space, &self.members, rho));
        Ok(Measured {
            lebesgue,
            multiplicity: cover.multiplicity(),
            rho_multiplicity,
        })
    }

    /// Whether the measured constants meet the claimed ones.
    pub fn claims_hold(&self, measured: &Measured) -> bool {
        let lebesgue_ok = measured.lebesgue >= self.claimed_lebesgue
            || (self.claimed_lebesgue.is_finite()
                && measured.lebesgue >= self.claimed_lebesgue * (1.0 - 1e-12));
        let mult = measured
            .rho_multiplicity
            .map_or(measured.multiplicity, |r| r.value);
        lebesgue_ok && mult <= self.claimed_multiplicity
    }

    /// The provenance block written next to the refined sets.
    pub fn provenance(&self, space: &MetricSpace) -> Result<Value> {
        let measured = self.measure(space)?;
        let mut claimed = Map::new();
        claimed.insert("lebesgue".into(), ext_value(self.claimed_lebesgue));
        claimed.insert("multiplicity".into(), json!(self.claimed_multiplicity));
        if let Some(rho) = self.claimed_rho {
            claimed.insert("rho".into(), ext_value(rho));
        }
        Ok(json!({
            "construction": self.construction,
            "params": self.params,
            "claimed": claimed,
            "measured": measured,
            "claims_hold": self.claims_hold(&measured),
            "empty_members": self.empty_labels(),
        }))
    }

    /// Cover JSON with provenance.
    pub fn to_json(&self, space: &MetricSpace) -> Result<String> {
        crate::io::cover_to_json(&self.cover()?, Some(&self.provenance(space)?))
    }
}

/// `V_alpha = {x : delta_alpha(x) > 2L/3}` for the optimal Lebesgue number
/// `L`. The result has Lebesgue number at least `L/3` and
/// `L/3`-multiplicity at most the multiplicity of `cover`.
///
/// With `L = inf` the whole-space members are kept and every other member
/// becomes empty.
pub fn shrink_cover(space: &MetricSpace, cover: &Cover) -> Result<Refinement> {
    let profile = distance_profile(space, cover)?;
    let n = space.len();
    let lebesgue = (0..n)
        .map(|x| profile.lebesgue_at(x))
        .fold(f64::INFINITY, f64::min);
    let members: Vec<Vec<usize>> = (0..cover.len())
        .map(|a| {
            (0..n)
                .filter(|&x| {
                    let d = profile.get(x, a);
                    if lebesgue.is_infinite() {
                        d.is_infinite()
                    } else {
                        d > 2.0 * lebesgue / 3.0
                    }
                })
                .collect()
        })
        .collect();
    let third = lebesgue / 3.0;
    Ok(Refinement::new(
        cover.labels().to_vec(),
        members,
        n,
        third,
        cover.multiplicity(),
        Some(third),
        "shrink",
        json!({ "source_lebesgue": ext_value(lebesgue), "threshold": ext_value(2.0 * lebesgue / 3.0) }),
    ))
}

/// Replaces each member `U` by `U + {x : d(x, U) < r}`.
pub fn expand_cover(space: &MetricSpace, cover: &Cover, r: f64) -> Result<Cover> {
    if !(r >= 0.0) {
        return Err(Error::BadParameter(format!("radius must be >= 0, got {r}")));
    }
    let members: Vec<(String, Vec<usize>)> = cover
        .members()
        .map(|(alpha, set)| {
            let grown = (0..space.len())
                .filter(|&x| set.binary_search(&x).is_ok() || space.dist_to_set(x, set) < r)
                .collect();
            (alpha.to_string(), grown)
        })
        .collect();
    Cover::new(space, members)
}

/// Assigns each member `V` of `fine` to the smallest `alpha` with
/// `V ⊆ coarse[alpha]` and returns `W_alpha = union of the V assigned to alpha`.
///
/// `W` has multiplicity at most that of `fine` and Lebesgue number at least
/// that of `fine`.
pub fn recolor_refinement(space: &MetricSpace, coarse: &Cover, fine: &Cover) -> Result<Refinement> {
    let mut members = vec![Vec::new(); coarse.len()];
    let mut assignment = Map::new();
    for (label, v) in fine.members() {
        let alpha = (0..coarse.len())
            .find(|&a| is_subset(v, coarse.member(a)))
            .ok_or_else(|| Error::NotARefinement {
                fine: label.to_string(),
            })?;
        members[alpha].extend_from_slice(v);
        assignment.insert(label.to_string(), json!(coarse.label(alpha)));
    }
    for m in &mut members {
        m.sort_unstable();
        m.dedup();
    }
    let fine_lebesgue = {
        let profile = distance_profile(space, fine)?;
        (0..space.len())
            .map(|x| profile.lebesgue_at(x))
            .fold(f64::INFINITY, f64::min)
    };
    Ok(Refinement::new(
        coarse.labels().to_vec(),
        members,
        space.len(),
        fine_lebesgue,
        fine.multiplicity(),
        None,
        "recolor",
        json!({ "assignment": assignment }),
    ))
}
