use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{lebesgue_report_from_profile, optimal_lebesgue, MetricSpace};
use crate::partition::bounds::BoundSet;
use crate::partition::build::PartitionOfUnity;
use crate::partition::lipschitz::{
    per_function_lipschitz, rooted_partial_sum_lipschitz, vector_lipschitz,
    worst_partial_sum_lipschitz,
};

/// Relative slack allowed between an empirical constant and its bound.
pub const TAU_CERT: f64 = 1e-9;

/// Where the midpoint assumption behind a bound set came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AmpSource {
    /// General-metric bounds; no midpoint assumption.
    None,
    /// Stated by the caller for the continuum being sampled.
    Asserted,
    /// The sample's midpoint defect was within the tolerance.
    Inferred { defect: f64, tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Empirical {
    pub per_function: f64,
    pub worst_partial_sum: f64,
    pub vector_lq: f64,
    pub roots: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn of(empirical: f64, bound: f64) -> Self {
        if within(empirical, bound) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// `empirical <= bound` up to [`TAU_CERT`] relative to `max(bound, 1)`.
pub fn within(empirical: f64, bound: f64) -> bool {
    empirical <= bound + TAU_CERT * bound.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdicts {
    pub per_function: Verdict,
    pub partial_sum: Verdict,
    pub vector: Verdict,
    pub roots: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub quantity: &'static str,
    pub x: usize,
    pub y: usize,
    /// Member indices of the attaining subset, where one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzCertificate {
    pub empirical: Empirical,
    pub bounds: BoundSet,
    pub amp_source: AmpSource,
    pub verdicts: Verdicts,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
}

impl LipschitzCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Empirical partial-sum constant over its bound.
    pub fn ratio(&self) -> f64 {
        if self.bounds.partial_sum_bound == 0.0 {
            return if self.empirical.worst_partial_sum == 0.0 {
                1.0
            } else {
                f64::INFINITY
            };
        }
        self.empirical.worst_partial_sum / self.bounds.partial_sum_bound
    }
}

/// Measures every empirical constant of `pou` on `space` and compares it with
/// `bounds`. The bounds must use the cover's multiplicity and optimal
/// Lebesgue number.
pub fn certify(
    pou: &PartitionOfUnity,
    space: &MetricSpace,
    bounds: &BoundSet,
) -> Result<LipschitzCertificate> {
    let cover = pou.cover();
    let m = cover.multiplicity();
    if bounds.m != m {
        return Err(Error::InconsistentBounds(format!(
            "bounds use M = {}, cover has multiplicity {m}",
            bounds.m
        )));
    }
    let l_star = match pou.profile() {
        Some(profile) => lebesgue_report_from_profile(space, cover, profile, &[]).optimal,
        None => optimal_lebesgue(space, cover)?,
    };
    let same = if l_star.is_infinite() || bounds.lebesgue.is_infinite() {
        l_star == bounds.lebesgue
    } else {
        (l_star - bounds.lebesgue).abs() <= 1e-12 * l_star.max(bounds.lebesgue)
    };
    if !same {
        return Err(Error::InconsistentBounds(format!(
            "bounds use L = {}, cover has optimal Lebesgue number {l_star}",
            bounds.lebesgue
        )));
    }

    let single = per_function_lipschitz(pou, space);
    let partial = worst_partial_sum_lipschitz(pou, space);
    let vector = vector_lipschitz(pou, space, bounds.q)?;
    let roots = rooted_partial_sum_lipschitz(pou, space);

    let labels = |mu: &[usize]| -> Vec<String> {
        mu.iter().map(|&a| cover.label(a).to_string()).collect()
    };
    let mut witnesses = Vec::new();
    if let (Some((x, y)), Some(a)) = (single.witness, single.member) {
        witnesses.push(Witness {
            quantity: "per_function",
            x,
            y,
            mu: Some(labels(&[a])),
        });
    }
    if let Some((x, y)) = partial.witness {
        witnesses.push(Witness {
            quantity: "worst_partial_sum",
            x,
            y,
            mu: Some(labels(&partial.mu)),
        });
    }
    if let Some((x, y)) = vector.witness {
        witnesses.push(Witness {
            quantity: "vector_lq",
            x,
            y,
            mu: None,
        });
    }
    if let Some((x, y)) = roots.witness {
        witnesses.push(Witness {
            quantity: "roots",
            x,
            y,
            mu: Some(labels(&roots.mu)),
        });
    }

    let empirical = Empirical {
        per_function: single.constant,
        worst_partial_sum: partial.constant,
        vector_lq: vector.constant,
        roots: roots.constant,
    };
    let verdicts = Verdicts {
        per_function: Verdict::of(empirical.per_function, bounds.per_function_bound),
        partial_sum: Verdict::of(empirical.worst_partial_sum, bounds.partial_sum_bound),
        vector: Verdict::of(empirical.vector_lq, bounds.vector_bound_lq),
        roots: Verdict::of(empirical.roots, bounds.roots_bound),
    };
    let all = [
        verdicts.per_function,
        verdicts.partial_sum,
        verdicts.vector,
        verdicts.roots,
    ];
    let verdict = if all.iter().all(|v| *v == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(LipschitzCertificate {
        empirical,
        bounds: *bounds,
        amp_source: if bounds.amp {
            AmpSource::Asserted
        } else {
            AmpSource::None
        },
        verdicts,
        verdict,
        witnesses,
    })
}
