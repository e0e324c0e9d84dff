use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::cp::compute_cp;

/// Theoretical Lipschitz bounds for the standard partition of unity of a
/// cover with multiplicity `m` and Lebesgue number `lebesgue`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "L", serialize_with = "crate::io::ser_ext")]
    pub lebesgue: f64,
    pub p: f64,
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub q: f64,
    pub amp: bool,
    /// Bound on every partial sum `lambda_mu`.
    pub partial_sum_bound: f64,
    /// Bound on each single `lambda_alpha`.
    pub per_function_bound: f64,
    /// Bound on the vectorization into `l^q`.
    pub vector_bound_lq: f64,
    /// Bound on `lambda_mu^(1/p)`.
    pub roots_bound: f64,
    #[serde(rename = "Cp")]
    pub cp: f64,
}

/// `1/q`, with `1/inf = 0`.
pub fn inv_q(q: f64) -> f64 {
    if q.is_infinite() {
        0.0
    } else {
        1.0 / q
    }
}

/// `2^(1/q) S^(1/q) S_inf^(1-1/q)`: the `l^q` constant implied by a
/// partial-sum constant `S` and a single-function constant `S_inf`.
pub fn interpolated_vector_bound(partial_sum: f64, single: f64, q: f64) -> f64 {
    let t = inv_q(q);
    if t == 0.0 {
        return single;
    }
    if t == 1.0 {
        return 2.0 * partial_sum;
    }
    2f64.powf(t) * partial_sum.powf(t) * single.powf(1.0 - t)
}

/// Fills a [`BoundSet`].
///
/// Without the midpoint property the partial-sum bound is
/// `p max(1, M-1)^(1/p) / L`; with it, the smaller of
/// `p 2^(1-1/p) (M-1)^(1/p) / (2L)` and `p C_p (M-1) / (2L)`.
/// The roots bound is `2^((p-1)/p) (2M-1)^(1/p) / L`, divided by `2^(1/p)`
/// under the midpoint property. `L = inf` (a member equal to the whole
/// space) makes every bound zero.
pub fn theoretical_bounds(m: usize, lebesgue: f64, p: f64, q: f64, amp: bool) -> Result<BoundSet> {
    if m < 1 {
        return Err(Error::BadParameter(format!("multiplicity must be >= 1, got {m}")));
    }
    if !(lebesgue > 0.0) {
        return Err(Error::BadParameter(format!(
            "Lebesgue number must be positive, got {lebesgue}"
        )));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::BadParameter(format!("p must be in [1, inf), got {p}")));
    }
    if !(q >= 1.0) {
        return Err(Error::BadParameter(format!("q must be in [1, inf], got {q}")));
    }
    let cp = compute_cp(p)?.value;
    let mf = m as f64;
    let inv_p = 1.0 / p;
    let partial_sum_bound = if amp {
        let power = p * 2f64.powf(1.0 - inv_p) * (mf - 1.0).powf(inv_p) / (2.0 * lebesgue);
        let via_cp = p * cp * (mf - 1.0) / (2.0 * lebesgue);
        power.min(via_cp)
    } else {
        p * (mf - 1.0).max(1.0).powf(inv_p) / lebesgue
    };
    let per_function_bound = partial_sum_bound;
    let mut roots_bound = 2f64.powf((p - 1.0) / p) * (2.0 * mf - 1.0).powf(inv_p) / lebesgue;
    if amp {
        roots_bound /= 2f64.powf(inv_p);
    }
    Ok(BoundSet {
        m,
        lebesgue,
        p,
        q,
        amp,
        partial_sum_bound,
        per_function_bound,
        vector_bound_lq: interpolated_vector_bound(partial_sum_bound, per_function_bound, q),
        roots_bound,
        cp,
    })
}
