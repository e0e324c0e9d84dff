use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::partition::build::{lq_norm_diff, PartitionOfUnity};

/// Largest pairwise quotient together with a pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LipschitzEstimate {
    pub constant: f64,
    /// `None` when every quotient is zero.
    pub witness: Option<(usize, usize)>,
}

/// Max over pairs `x < y` with `d(x, y) > 0` of `num(x, y) / d(x, y)`,
/// ties going to the lexicographically smallest pair.
pub(crate) fn sweep<F>(space: &MetricSpace, num: F) -> LipschitzEstimate
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    let n = space.len();
    let best = (0..n)
        .into_par_iter()
        .map(|x| {
            let row = space.row(x);
            let mut best: Option<(f64, usize, usize)> = None;
            for y in x + 1..n {
                let d = row[y];
                if d <= 0.0 {
                    continue;
                }
                let q = num(x, y) / d;
                if q > 0.0 && best.map_or(true, |b| q > b.0) {
                    best = Some((q, x, y));
                }
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (Some(a), Some(b)) => Some(if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }),
                (a, None) => a,
                (None, b) => b,
            },
        );
    match best {
        Some((constant, x, y)) => LipschitzEstimate {
            constant,
            witness: Some((x, y)),
        },
        None => LipschitzEstimate {
            constant: 0.0,
            witness: None,
        },
    }
}

/// Empirical Lipschitz constant of a function given by its point values.
pub fn empirical_lipschitz(f: &[f64], space: &MetricSpace) -> Result<LipschitzEstimate> {
    if space.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: space.len(),
        });
    }
    if f.len() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: f.len(),
        });
    }
    Ok(sweep(space, |x, y| (f[x] - f[y]).abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberEstimate {
    pub constant: f64,
    pub witness: Option<(usize, usize)>,
    /// Member attaining the constant.
    pub member: Option<usize>,
}

/// Largest empirical constant over the individual functions `lambda_alpha`.
pub fn per_function_lipschitz(pou: &PartitionOfUnity, space: &MetricSpace) -> MemberEstimate {
    let est = sweep(space, |x, y| lq_norm_diff(pou.row(x), pou.row(y), f64::INFINITY));
    let member = est.witness.map(|(x, y)| {
        let (a, b) = (pou.row(x), pou.row(y));
        let mut best = 0;
        for i in 1..a.len() {
            if (a[i] - b[i]).abs() > (a[best] - b[best]).abs() {
                best = i;
            }
        }
        best
    });
    MemberEstimate {
        constant: est.constant,
        witness: est.witness,
        member,
    }
}

/// Worst partial-sum constant with the subset attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumEstimate {
    pub constant: f64,
    pub witness: Option<(usize, usize)>,
    /// `mu* = {alpha : lambda_alpha(x) > lambda_alpha(y)}` at the witness.
    pub mu: Vec<usize>,
}

/// `sup_mu sup_{x,y} |lambda_mu(x) - lambda_mu(y)| / d(x, y)`.
///
/// For a fixed pair the supremum over subsets is attained by
/// `mu* = {alpha : lambda_alpha(x) > lambda_alpha(y)}` and equals half the
/// `l^1` distance of the rows, so each pair costs `O(|kappa|)`.
pub fn worst_partial_sum_lipschitz(pou: &PartitionOfUnity, space: &MetricSpace) -> PartialSumEstimate {
    let est = sweep(space, |x, y| positive_part_sum(pou.row(x), pou.row(y)));
    let mu = est
        .witness
        .map(|(x, y)| optimal_subset(pou.row(x), pou.row(y)))
        .unwrap_or_default();
    PartialSumEstimate {
        constant: est.constant,
        witness: est.witness,
        mu,
    }
}

fn positive_part_sum(a: &[f64], b: &[f64]) -> f64 {
    let mut up = 0.0;
    let mut down = 0.0;
    for (u, v) in a.iter().zip(b) {
        let d = u - v;
        if d > 0.0 {
            up += d;
        } else {
            down -= d;
        }
    }
    // Rows both sum to one, so the two parts agree up to rounding.
    up.max(down)
}

/// Orients the pair so that `lambda_mu(x) >= lambda_mu(y)` and returns
/// `mu*`.
pub fn optimal_subset(a: &[f64], b: &[f64]) -> Vec<usize> {
    let up: Vec<usize> = (0..a.len()).filter(|&i| a[i] > b[i]).collect();
    let down: Vec<usize> = (0..a.len()).filter(|&i| b[i] > a[i]).collect();
    let gain = |s: &[usize], u: &[f64], v: &[f64]| s.iter().map(|&i| u[i] - v[i]).sum::<f64>();
    if gain(&up, a, b) >= gain(&down, b, a) {
        up
    } else {
        down
    }
}

/// Empirical Lipschitz constant of the vectorization into `l^q`.
pub fn vector_lipschitz(pou: &PartitionOfUnity, space: &MetricSpace, q: f64) -> Result<LipschitzEstimate> {
    if !(q >= 1.0) {
        return Err(Error::BadExponent(q));
    }
    Ok(sweep(space, |x, y| lq_norm_diff(pou.row(x), pou.row(y), q)))
}

/// Worst constant over subsets `mu` of `|lambda_mu^(1/p)(x) - lambda_mu^(1/p)(y)|`.
///
/// Members outside both supports contribute nothing, so each pair
/// enumerates the subsets of the union of the two supports (at most `2M`
/// members). For `p = 1` this reduces to the partial-sum sweep.
pub fn rooted_partial_sum_lipschitz(pou: &PartitionOfUnity, space: &MetricSpace) -> PartialSumEstimate {
    let p = pou.p();
    if p == 1.0 {
        return worst_partial_sum_lipschitz(pou, space);
    }
    let est = sweep(space, |x, y| best_rooted_subset(pou.row(x), pou.row(y), p).0);
    let mu = est
        .witness
        .map(|(x, y)| best_rooted_subset(pou.row(x), pou.row(y), p).1)
        .unwrap_or_default();
    PartialSumEstimate {
        constant: est.constant,
        witness: est.witness,
        mu,
    }
}

fn best_rooted_subset(a: &[f64], b: &[f64], p: f64) -> (f64, Vec<usize>) {
    let joint: Vec<usize> = (0..a.len()).filter(|&i| a[i] > 0.0 || b[i] > 0.0).collect();
    assert!(joint.len() < 32, "joint support too large to enumerate");
    let inv = 1.0 / p;
    let mut best = (0.0, 0u32);
    for mask in 1u32..(1 << joint.len()) {
        let (mut sa, mut sb) = (0.0, 0.0);
        for (bit, &i) in joint.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                sa += a[i];
                sb += b[i];
            }
        }
        let gap = (sa.min(1.0).powf(inv) - sb.min(1.0).powf(inv)).abs();
        if gap > best.0 {
            best = (gap, mask);
        }
    }
    let mu = joint
        .iter()
        .enumerate()
        .filter(|(bit, _)| best.1 & (1 << bit) != 0)
        .map(|(_, &i)| i)
        .collect();
    (best.0, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::metric::{distance_profile, Cover};
    use crate::partition::build_partition;

    #[test]
    fn constant_function_is_zero() {
        let s = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        let est = empirical_lipschitz(&[2.0, 2.0, 2.0], &s).unwrap();
        assert_eq!(est.constant, 0.0);
        assert_eq!(est.witness, None);
        let one = MetricSpace::line(&[0.0]).unwrap();
        assert!(matches!(
            empirical_lipschitz(&[1.0], &one),
            Err(Error::TooFewPoints { .. })
        ));
    }

    #[test]
    fn witness_is_attaining_pair() {
        let s = MetricSpace::line(&[0.0, 1.0, 3.0]).unwrap();
        let est = empirical_lipschitz(&[0.0, 0.5, 3.0], &s).unwrap();
        assert_eq!(est.constant, 1.25);
        assert_eq!(est.witness, Some((1, 2)));
    }

    #[test]
    fn distance_functions_are_one_lipschitz() {
        let inst = instances::general_example(1.0, 3, 0.1);
        let prof = distance_profile(&inst.space, &inst.cover).unwrap();
        for a in 0..inst.cover.len() {
            let f: Vec<f64> = (0..inst.space.len()).map(|x| prof.get(x, a)).collect();
            assert!(empirical_lipschitz(&f, &inst.space).unwrap().constant <= 1.0);
        }
    }

    #[test]
    fn single_set_cover_is_flat() {
        let s = MetricSpace::line(&[0.0, 1.0, 2.0]).unwrap();
        let pou = build_partition(&s, &Cover::whole(&s), 1.0).unwrap();
        assert_eq!(worst_partial_sum_lipschitz(&pou, &s).constant, 0.0);
        assert_eq!(vector_lipschitz(&pou, &s, 2.0).unwrap().constant, 0.0);
    }

    #[test]
    fn two_set_cover_matches_single_function() {
        let inst = instances::integer_line(11, &[(0, 6), (4, 10)]);
        let pou = build_partition(&inst.space, &inst.cover, 1.0).unwrap();
        let worst = worst_partial_sum_lipschitz(&pou, &inst.space);
        let single = per_function_lipschitz(&pou, &inst.space);
        assert!((worst.constant - single.constant).abs() < 1e-15);
        assert_eq!(worst.mu.len(), 1);
    }

    #[test]
    fn general_example_grid_is_nearly_sharp() {
        let inst = instances::general_example(1.0, 3, 0.01);
        let pou = build_partition(&inst.space, &inst.cover, 1.0).unwrap();
        let worst = worst_partial_sum_lipschitz(&pou, &inst.space);
        assert!(worst.constant >= 0.98 * 2.0 && worst.constant <= 2.0);
        let v1 = vector_lipschitz(&pou, &inst.space, 1.0).unwrap();
        assert!((v1.constant - 2.0 * worst.constant).abs() < 1e-12);
    }

    #[test]
    fn midpoint_example_single_function() {
        let inst = instances::midpoint_example(1.0, 2, 0.01);
        let pou = build_partition(&inst.space, &inst.cover, 1.0).unwrap();
        let est = empirical_lipschitz(&pou.column(0), &inst.space).unwrap();
        assert!(est.constant >= 0.98 * 0.5 && est.constant <= 0.5 + 1e-12);
    }
}
