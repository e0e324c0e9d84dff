use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::kuhn::grid::{KuhnGrid, SimplexGeometry};
use crate::metric::{is_subset, Cover, MetricSpace};
use crate::partition::PartitionOfUnity;
use crate::refine::Refinement;

/// Star-cover refinement of a Euclidean cover together with its
/// hat-function partition of unity.
#[derive(Debug, Clone)]
pub struct KuhnRefinement {
    pub grid: KuhnGrid,
    pub geometry: SimplexGeometry,
    /// Refined family indexed like the source cover; members can be empty.
    pub refinement: Refinement,
    /// Sums of hat functions, over the nonempty members only.
    pub pou: PartitionOfUnity,
    /// Every populated star with the member it was assigned to.
    pub stars: Vec<(Vec<i64>, usize)>,
}

/// Refines `cover` by the open stars of the Kuhn triangulation with spacing
/// `lebesgue / 2`.
///
/// Each star meeting the point set goes to the smallest member containing
/// its points; `W_alpha` is the union of its stars and
/// `lambda_alpha = sum of their hat functions`. The family has multiplicity
/// at most `n + 1` and Lebesgue number at least
/// `lebesgue / ((n + 1) sqrt(8n))`.
pub fn euclidean_refine(space: &MetricSpace, cover: &Cover, lebesgue: f64) -> Result<KuhnRefinement> {
    let coords = space.coords().ok_or(Error::MissingCoords)?;
    let n = space.dim().ok_or(Error::MissingCoords)?;
    if !(lebesgue > 0.0) || !lebesgue.is_finite() {
        return Err(Error::BadParameter(format!(
            "Lebesgue number must be positive and finite, got {lebesgue}"
        )));
    }
    if cover.n_points() != space.len() {
        return Err(Error::DimensionMismatch {
            expected: space.len(),
            got: cover.n_points(),
        });
    }
    let grid = KuhnGrid::new(n, lebesgue / 2.0)?;

    let located = coords
        .par_iter()
        .map(|x| grid.locate(x).map(|(_, b)| b))
        .collect::<Result<Vec<_>>>()?;
    let mut star_points: BTreeMap<Vec<i64>, Vec<(usize, f64)>> = BTreeMap::new();
    for (x, bary) in located.iter().enumerate() {
        for (z, w) in bary.support() {
            star_points.entry(z.to_vec()).or_default().push((x, w));
        }
    }
    let stars: Vec<(&Vec<i64>, &Vec<(usize, f64)>)> = star_points.iter().collect();
    let assigned = stars
        .par_iter()
        .map(|(z, pts)| {
            let members: Vec<usize> = pts.iter().map(|&(x, _)| x).collect();
            (0..cover.len())
                .find(|&a| is_subset(&members, cover.member(a)))
                .ok_or_else(|| Error::CoverTooTight {
                    vertex: z.to_vec(),
                })
        })
        .collect::<Result<Vec<usize>>>()?;

    let k = cover.len();
    let mut members = vec![Vec::new(); k];
    let mut values = vec![vec![0.0; k]; space.len()];
    for ((_, pts), &alpha) in stars.iter().zip(&assigned) {
        for &(x, w) in pts.iter() {
            members[alpha].push(x);
            values[x][alpha] += w;
        }
    }
    for m in &mut members {
        m.sort_unstable();
        m.dedup();
    }

    let keep: Vec<usize> = (0..k).filter(|&a| !members[a].is_empty()).collect();
    let kept_cover = Cover::with_points(
        space.len(),
        keep.iter()
            .map(|&a| (cover.label(a).to_string(), members[a].clone()))
            .collect::<Vec<_>>(),
    )?;
    let rows: Vec<Vec<f64>> = values
        .iter()
        .map(|row| keep.iter().map(|&a| row[a]).collect())
        .collect();
    let pou = PartitionOfUnity::from_rows(kept_cover, rows, 1.0)?;

    let geometry = grid.simplex_geometry();
    let nf = n as f64;
    let claimed = lebesgue / ((nf + 1.0) * (8.0 * nf).sqrt());
    let refinement = Refinement::new(
        cover.labels().to_vec(),
        members,
        space.len(),
        claimed,
        n + 1,
        None,
        "kuhn",
        json!({
            "n": n,
            "lebesgue": lebesgue,
            "spacing": grid.spacing(),
            "simplex_diameter": geometry.diameter,
            "simplex_height": geometry.min_height,
            "height_floor": lebesgue / (8.0 * nf).sqrt(),
            "lipschitz_claim": (8.0 * nf).sqrt() / lebesgue,
            "populated_stars": stars.len(),
        }),
    );
    Ok(KuhnRefinement {
        grid,
        geometry,
        refinement,
        pou,
        stars: stars
            .iter()
            .zip(&assigned)
            .map(|((z, _), &a)| ((*z).clone(), a))
            .collect(),
    })
}
