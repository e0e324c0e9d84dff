use crate::error::{Error, Result};
use crate::metric::{distance_profile, Cover, DistanceProfile, MetricSpace};

/// Row sums of a partition must be 1 within `TAU_SUM_PER_MEMBER * |kappa|`.
pub const TAU_SUM_PER_MEMBER: f64 = 1e-12;

/// A partition of unity on a finite space: `values[x][alpha]` for each
/// point and cover member, together with the exponent used to build it.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOfUnity {
    values: Vec<f64>,
    n_points: usize,
    p: f64,
    cover: Cover,
    profile: Option<DistanceProfile>,
}

impl PartitionOfUnity {
    /// Wraps an externally computed value matrix (rows are points). Checks
    /// shape, range, row sums and strong subordination to `cover`.
    pub fn from_rows(cover: Cover, rows: Vec<Vec<f64>>, p: f64) -> Result<Self> {
        let k = cover.len();
        let n = cover.n_points();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let mut values = Vec::with_capacity(n * k);
        for row in rows {
            if row.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: row.len(),
                });
            }
            values.extend(row);
        }
        let pou = Self {
            values,
            n_points: n,
            p,
            cover,
            profile: None,
        };
        pou.check()?;
        Ok(pou)
    }

    /// Verifies range, row sums and `values[x][alpha] > 0 <=> x in U_alpha`.
    pub fn check(&self) -> Result<()> {
        let k = self.n_members();
        let tol = TAU_SUM_PER_MEMBER * k.max(1) as f64;
        for x in 0..self.n_points {
            let row = self.row(x);
            if let Some(a) = row.iter().position(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::BadParameter(format!(
                    "partition value at point {x}, member {a} outside [0, 1]: {}",
                    row[a]
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::BadParameter(format!(
                    "row {x} sums to {sum}, not 1"
                )));
            }
            for (a, &v) in row.iter().enumerate() {
                if (v > 0.0) != self.cover.contains(a, x) {
                    return Err(Error::BadParameter(format!(
                        "value {v} at point {x}, member {a} violates subordination"
                    )));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn get(&self, x: usize, alpha: usize) -> f64 {
        self.values[x * self.cover.len() + alpha]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let k = self.cover.len();
        &self.values[x * k..(x + 1) * k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.cover.len().max(1))
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_members(&self) -> usize {
        self.cover.len()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn labels(&self) -> &[String] {
        self.cover.labels()
    }

    pub fn profile(&self) -> Option<&DistanceProfile> {
        self.profile.as_ref()
    }

    /// Column of member `alpha` as a function on points.
    pub fn column(&self, alpha: usize) -> Vec<f64> {
        (0..self.n_points).map(|x| self.get(x, alpha)).collect()
    }

    /// Members with positive value at `x`, in index order.
    pub fn support(&self, x: usize) -> Vec<usize> {
        self.row(x)
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(a, _)| a)
            .collect()
    }

    pub fn vectorized(&self) -> VectorizedPartition<'_> {
        VectorizedPartition { pou: self }
    }
}

/// `lambda_alpha = delta_alpha^p / sum_beta delta_beta^p`.
///
/// Where some member is the whole space its distance is infinite; the unit
/// mass is then split equally among those members and all others get 0.
pub fn build_partition(space: &MetricSpace, cover: &Cover, p: f64) -> Result<PartitionOfUnity> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::BadExponent(p));
    }
    let profile = distance_profile(space, cover)?;
    let k = cover.len();
    let n = space.len();
    let mut values = vec![0.0; n * k];
    for (x, row) in values.chunks_mut(k).enumerate() {
        let deltas = profile.row(x);
        let infinite = deltas.iter().filter(|d| d.is_infinite()).count();
        if infinite > 0 {
            let share = 1.0 / infinite as f64;
            for (v, d) in row.iter_mut().zip(deltas) {
                *v = if d.is_infinite() { share } else { 0.0 };
            }
            continue;
        }
        // Normalizing by the largest distance keeps powers in range.
        let top = deltas.iter().copied().fold(0.0, f64::max);
        if top <= 0.0 {
            return Err(Error::NotCovered { point: x });
        }
        for (v, &d) in row.iter_mut().zip(deltas) {
            let r = d / top;
            *v = if p == 1.0 { r } else { r.powf(p) };
        }
        let total: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    Ok(PartitionOfUnity {
        values,
        n_points: n,
        p,
        cover: cover.clone(),
        profile: Some(profile),
    })
}

/// `lambda_mu(x) = sum_{alpha in mu} lambda_alpha(x)` at every point.
pub fn partial_sum(pou: &PartitionOfUnity, mu: &[&str]) -> Result<Vec<f64>> {
    let idx = mu
        .iter()
        .map(|l| {
            pou.cover().position(l).ok_or_else(|| Error::UnknownIndex {
                alpha: l.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(partial_sum_by_index(pou, &idx))
}

pub fn partial_sum_by_index(pou: &PartitionOfUnity, mu: &[usize]) -> Vec<f64> {
    (0..pou.n_points())
        .map(|x| mu.iter().map(|&a| pou.get(x, a)).sum())
        .collect()
}

/// Entrywise `p`-th roots; each row lies on the unit `l^p` sphere.
pub fn root_values(pou: &PartitionOfUnity) -> Vec<Vec<f64>> {
    let p = pou.p();
    pou.rows()
        .map(|row| {
            row.iter()
                .map(|&v| if p == 1.0 { v } else { v.powf(1.0 / p) })
                .collect()
        })
        .collect()
}

/// The partition viewed as a map into `R^kappa`.
#[derive(Debug, Clone, Copy)]
pub struct VectorizedPartition<'a> {
    pou: &'a PartitionOfUnity,
}

impl VectorizedPartition<'_> {
    pub fn lq_distance(&self, x: usize, y: usize, q: f64) -> Result<f64> {
        lq_distance(self.pou, x, y, q)
    }
}

/// `|| Lambda(x) - Lambda(y) ||_q`, with `q = f64::INFINITY` for the max norm.
pub fn lq_distance(pou: &PartitionOfUnity, x: usize, y: usize, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::BadExponent(q));
    }
    Ok(lq_norm_diff(pou.row(x), pou.row(y), q))
}

pub(crate) fn lq_norm_diff(a: &[f64], b: &[f64], q: f64) -> f64 {
    let diffs = a.iter().zip(b).map(|(u, v)| (u - v).abs());
    if q == 1.0 {
        diffs.sum()
    } else if q.is_infinite() {
        diffs.fold(0.0, f64::max)
    } else {
        let top = diffs.clone().fold(0.0, f64::max);
        if top == 0.0 {
            return 0.0;
        }
        top * diffs.map(|d| (d / top).powf(q)).sum::<f64>().powf(1.0 / q)
    }
}
