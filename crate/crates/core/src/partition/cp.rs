use serde::Serialize;

use crate::error::{Error, Result};

/// The constant `C_p = max_{eta in [1/2, 1]} eta^(p-1) / (eta^p + (1-eta)^p)`
/// with its maximizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CpConstant {
    pub p: f64,
    pub value: f64,
    pub maximizer: f64,
    /// `eta^p - (1-eta)^(p-1) (eta + p - 1)` at the maximizer.
    pub residual: f64,
}

/// The quotient maximized by [`compute_cp`].
pub fn cp_quotient(p: f64, eta: f64) -> f64 {
    eta.powf(p - 1.0) / (eta.powf(p) + (1.0 - eta).powf(p))
}

/// Critical-point characterization `eta^p = (1-eta)^(p-1) (eta + p - 1)`,
/// written as a difference.
pub fn critical_residual(p: f64, eta: f64) -> f64 {
    eta.powf(p) - (1.0 - eta).powf(p - 1.0) * (eta + p - 1.0)
}

const GOLDEN_BRACKET: f64 = 1e-12;

/// Computes `C_p` for `p >= 1`.
///
/// For `p > 1` the quotient has a unique interior maximizer on `(1/2, 1)`;
/// a golden-section search brackets it, and bisection on the critical
/// residual (negative at 1/2, positive at 1) polishes the location. The
/// endpoints are compared as well. `p = 1` gives the constant quotient 1,
/// reported with maximizer 1/2.
pub fn compute_cp(p: f64) -> Result<CpConstant> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::BadExponent(p));
    }
    if p == 1.0 {
        return Ok(CpConstant {
            p,
            value: 1.0,
            maximizer: 0.5,
            residual: 0.0,
        });
    }
    let f = |eta: f64| cp_quotient(p, eta);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.5, 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_BRACKET {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let golden = 0.5 * (a + b);

    let (mut lo, mut hi) = (0.5, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if critical_residual(p, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let root = 0.5 * (lo + hi);

    let (maximizer, value) = [(golden, f(golden)), (root, f(root)), (0.5, f(0.5)), (1.0, f(1.0))]
        .into_iter()
        .fold((0.5, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
    Ok(CpConstant {
        p,
        value,
        maximizer,
        residual: critical_residual(p, maximizer),
    })
}

/// Closed-form upper bound on `C_p` from the two lower bounds on the maximizer.
pub fn cp_upper_bound(p: f64) -> f64 {
    if p == 1.0 {
        return 1.0;
    }
    let t1 = (2.0 * p - 1.0).powf(1.0 / p);
    let t2 = p.powf(1.0 / (p - 1.0));
    (1.0 - 1.0 / p) * ((1.0 + t1) / t1).min((1.0 + t2) / t2) + 1.0 / p
}
