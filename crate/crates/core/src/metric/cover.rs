use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;

/// An indexed cover of a finite space. Every subset of a finite metric
/// space is open, so any family whose union is the whole point set counts.
///
/// Members are kept in canonical index order (numeric labels numerically,
/// others lexicographically); "smallest index" always means earliest in
/// this order. Member point lists are sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    labels: Vec<String>,
    sets: Vec<Vec<usize>>,
    n_points: usize,
}

/// Canonical ordering of cover labels.
pub fn label_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<i64>(), b.parse::<i64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

impl Cover {
    /// Builds a cover of `space`, rejecting empty members, unknown points,
    /// duplicate labels and families that miss a point.
    pub fn new<L, I>(space: &MetricSpace, members: I) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Vec<usize>)>,
    {
        Self::with_points(space.len(), members)
    }

    /// Same as [`Cover::new`] but only needs the number of points.
    pub fn with_points<L, I>(n_points: usize, members: I) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Vec<usize>)>,
    {
        let mut members: Vec<(String, Vec<usize>)> =
            members.into_iter().map(|(l, s)| (l.into(), s)).collect();
        members.sort_by(|a, b| label_order(&a.0, &b.0));
        for w in members.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateIndex {
                    alpha: w[0].0.clone(),
                });
            }
        }
        let mut covered = vec![false; n_points];
        let mut labels = Vec::with_capacity(members.len());
        let mut sets = Vec::with_capacity(members.len());
        for (alpha, mut set) in members {
            if set.is_empty() {
                return Err(Error::EmptyMember { alpha });
            }
            set.sort_unstable();
            set.dedup();
            if let Some(&point) = set.iter().find(|&&p| p >= n_points) {
                return Err(Error::IndexMismatch {
                    alpha,
                    point,
                    points: n_points,
                });
            }
            for &p in &set {
                covered[p] = true;
            }
            labels.push(alpha);
            sets.push(set);
        }
        if let Some(point) = covered.iter().position(|c| !c) {
            return Err(Error::NotCovered { point });
        }
        Ok(Self {
            labels,
            sets,
            n_points,
        })
    }

    /// Labels members `0, 1, 2, ...` in order.
    pub fn from_sets(space: &MetricSpace, sets: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(
            space,
            sets.into_iter().enumerate().map(|(i, s)| (i.to_string(), s)),
        )
    }

    /// The single-member cover `{X}`.
    pub fn whole(space: &MetricSpace) -> Self {
        Self {
            labels: vec!["0".to_string()],
            sets: vec![(0..space.len()).collect()],
            n_points: space.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, alpha: usize) -> &str {
        &self.labels[alpha]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn member(&self, alpha: usize) -> &[usize] {
        &self.sets[alpha]
    }

    pub fn members(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.sets.iter().map(Vec::as_slice))
    }

    pub fn contains(&self, alpha: usize, x: usize) -> bool {
        self.sets[alpha].binary_search(&x).is_ok()
    }

    /// Index mask `mask[alpha][x]`.
    pub fn indicator(&self) -> Vec<Vec<bool>> {
        self.sets
            .iter()
            .map(|s| {
                let mut m = vec![false; self.n_points];
                for &x in s {
                    m[x] = true;
                }
                m
            })
            .collect()
    }

    /// Complement of member `alpha` within the point set.
    pub fn complement(&self, alpha: usize) -> Vec<usize> {
        let set = &self.sets[alpha];
        (0..self.n_points)
            .filter(|x| set.binary_search(x).is_err())
            .collect()
    }

    /// Number of members containing each point.
    pub fn point_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_points];
        for s in &self.sets {
            for &x in s {
                deg[x] += 1;
            }
        }
        deg
    }

    /// Largest number of members sharing a point.
    pub fn multiplicity(&self) -> usize {
        self.point_degrees().into_iter().max().unwrap_or(0)
    }

    /// Whether some member is the whole point set.
    pub fn contains_whole_space(&self) -> bool {
        self.sets.iter().any(|s| s.len() == self.n_points)
    }

    /// Whether every member of `self` lies in some member of `other`.
    pub fn refines(&self, other: &Cover) -> bool {
        self.sets
            .iter()
            .all(|s| (0..other.len()).any(|b| is_subset(s, other.member(b))))
    }
}

/// Sorted-slice subset test.
pub fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}
