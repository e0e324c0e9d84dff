use serde::Serialize;

use crate::error::{Error, Result};

/// Freudenthal-Kuhn triangulation of `R^n` on the lattice `s Z^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KuhnGrid {
    n: usize,
    s: f64,
}

/// A Kuhn simplex: lattice corner `cell` and the order in which coordinate
/// directions are added. `perm` is 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimplexId {
    pub cell: Vec<i64>,
    pub perm: Vec<usize>,
}

impl SimplexId {
    /// `cell, cell + e_perm[0], cell + e_perm[0] + e_perm[1], ...`
    pub fn vertices(&self) -> Vec<Vec<i64>> {
        let mut v = self.cell.clone();
        let mut out = Vec::with_capacity(self.perm.len() + 1);
        out.push(v.clone());
        for &i in &self.perm {
            v[i] += 1;
            out.push(v.clone());
        }
        out
    }
}

/// Barycentric weights of a point on the vertices (lattice indices) of its
/// simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarycentricCoords {
    pub weights: Vec<f64>,
    pub vertices: Vec<Vec<i64>>,
}

impl BarycentricCoords {
    /// Weight of lattice vertex `z`, zero when `z` is not a vertex.
    pub fn weight_of(&self, z: &[i64]) -> f64 {
        self.vertices
            .iter()
            .position(|v| v == z)
            .map_or(0.0, |i| self.weights[i])
    }

    /// Vertices with positive weight.
    pub fn support(&self) -> impl Iterator<Item = (&[i64], f64)> {
        self.vertices
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(v, &w)| (v.as_slice(), w))
    }
}

/// Maximal simplex diameter and minimal vertex-to-facet height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexGeometry {
    pub diameter: f64,
    pub min_height: f64,
}

impl KuhnGrid {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::BadParameter("dimension must be >= 1".into()));
        }
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::BadParameter(format!("spacing must be positive, got {s}")));
        }
        Ok(Self { n, s })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.s
    }

    /// Position of lattice vertex `z`.
    pub fn position(&self, z: &[i64]) -> Vec<f64> {
        z.iter().map(|&c| c as f64 * self.s).collect()
    }

    /// Lattice index of a point that lies on the lattice (within `1e-9 s`).
    pub fn lattice_index(&self, z: &[f64]) -> Result<Vec<i64>> {
        self.check(z)?;
        let idx: Vec<i64> = z.iter().map(|&c| (c / self.s).round() as i64).collect();
        let off = z
            .iter()
            .zip(&idx)
            .any(|(&c, &i)| (c - i as f64 * self.s).abs() > 1e-9 * self.s);
        if off {
            return Err(Error::OffLattice(z.to_vec()));
        }
        Ok(idx)
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::BadParameter(format!("non-finite coordinates {x:?}")));
        }
        Ok(())
    }

    /// Simplex containing `x` and its barycentric weights.
    ///
    /// Fractional parts `f` of `x / s` sorted in decreasing order (ties by
    /// coordinate index) give the permutation; the weights are `1 - f_(1)`,
    /// `f_(k) - f_(k+1)` and `f_(n)`.
    pub fn locate(&self, x: &[f64]) -> Result<(SimplexId, BarycentricCoords)> {
        self.check(x)?;
        let mut cell = Vec::with_capacity(self.n);
        let mut frac = Vec::with_capacity(self.n);
        for &c in x {
            let t = c / self.s;
            let fl = t.floor();
            cell.push(fl as i64);
            frac.push(t - fl);
        }
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.sort_by(|&a, &b| frac[b].total_cmp(&frac[a]).then(a.cmp(&b)));
        let mut weights = Vec::with_capacity(self.n + 1);
        weights.push(1.0 - frac[perm[0]]);
        for k in 1..self.n {
            weights.push(frac[perm[k - 1]] - frac[perm[k]]);
        }
        weights.push(frac[perm[self.n - 1]]);
        let id = SimplexId { cell, perm };
        let vertices = id.vertices();
        Ok((id, BarycentricCoords { weights, vertices }))
    }

    /// Hat function of lattice vertex `z` (given by position) at `x`.
    pub fn hat_value(&self, z: &[f64], x: &[f64]) -> Result<f64> {
        let idx = self.lattice_index(z)?;
        self.hat_value_at(&idx, x)
    }

    /// Hat function of lattice vertex `z` (given by lattice index) at `x`.
    pub fn hat_value_at(&self, z: &[i64], x: &[f64]) -> Result<f64> {
        let (_, bary) = self.locate(x)?;
        Ok(bary.weight_of(z))
    }

    /// Lattice vertices whose open star contains `x`.
    pub fn star_membership(&self, x: &[f64]) -> Result<Vec<Vec<i64>>> {
        let (_, bary) = self.locate(x)?;
        let mut out: Vec<Vec<i64>> = bary.support().map(|(v, _)| v.to_vec()).collect();
        out.sort();
        Ok(out)
    }

    /// Diameter and minimal height of the simplex with identity permutation
    /// at the origin; every Kuhn simplex is congruent to it.
    pub fn simplex_geometry(&self) -> SimplexGeometry {
        let id = SimplexId {
            cell: vec![0; self.n],
            perm: (0..self.n).collect(),
        };
        let verts: Vec<Vec<f64>> = id.vertices().iter().map(|v| self.position(v)).collect();
        let mut diameter = 0.0f64;
        for (i, a) in verts.iter().enumerate() {
            for b in &verts[i + 1..] {
                diameter = diameter.max(dist(a, b));
            }
        }
        let min_height = (0..verts.len())
            .map(|i| {
                let others: Vec<&Vec<f64>> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, v)| v)
                    .collect();
                distance_to_affine_hull(&verts[i], &others)
            })
            .fold(f64::INFINITY, f64::min);
        SimplexGeometry {
            diameter,
            min_height,
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Distance from `p` to the affine hull of `pts`, by projecting onto an
/// orthonormal basis of the hull's directions.
pub fn distance_to_affine_hull(p: &[f64], pts: &[&Vec<f64>]) -> f64 {
    let base = pts[0];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for q in &pts[1..] {
        let mut v: Vec<f64> = q.iter().zip(base).map(|(a, b)| a - b).collect();
        for e in &basis {
            let c: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= c * ei;
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-12 {
            basis.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    let mut r: Vec<f64> = p.iter().zip(base).map(|(a, b)| a - b).collect();
    for e in &basis {
        let c: f64 = r.iter().zip(e).map(|(a, b)| a * b).sum();
        for (ri, ei) in r.iter_mut().zip(e) {
            *ri -= c * ei;
        }
    }
    r.iter().map(|a| a * a).sum::<f64>().sqrt()
}
