//! The Poisson rate function `H(x) = x ln x - x + 1` and the indicator limit
//! `c(w, t)`.

use crate::error::{Error, Result};

use super::Intensity;

/// Below this distance from the expansion point the power series are used,
/// since the closed forms cancel catastrophically there.
const SERIES_RADIUS: f64 = 0.1;

/// `H(x) = x ln x - x + 1` for `x > 0`.
pub fn rate_function(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("H(x) needs a finite x > 0, got {x}")));
    }
    Ok(rate_shifted(x - 1.0))
}

/// `H(1 + u)`, accurate for small `|u|`.
pub(crate) fn rate_shifted(u: f64) -> f64 {
    if u.abs() < SERIES_RADIUS {
        // H(1+u) = sum_{k>=2} (-1)^k u^k / (k (k-1))
        let mut term = u * u;
        let mut sum = 0.0;
        for k in 2..40 {
            let kf = k as f64;
            let contrib = term / (kf * (kf - 1.0));
            sum += if k % 2 == 0 { contrib } else { -contrib };
            if contrib.abs() < 1e-18 * sum.abs() {
                break;
            }
            term *= u;
        }
        sum
    } else {
        let x = 1.0 + u;
        x * x.ln() - u
    }
}

/// `H(e^z) = 1 + e^z (z - 1)`, accurate for small `|z|`.
pub(crate) fn rate_of_exp(z: f64) -> f64 {
    if z.abs() < 0.5 {
        // sum_{k>=2} (k-1) z^k / k!
        let mut term = z; // z^k / k! at k = 1
        let mut sum = 0.0;
        for k in 2..60 {
            term *= z / k as f64;
            let contrib = (k as f64 - 1.0) * term;
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        1.0 + z.exp() * (z - 1.0)
    }
}

/// Root of an increasing function on `[lo, inf)`.
///
/// Bisection until the bracket is narrower than `1e-13` relative to its upper
/// end, then three safeguarded Newton steps.
pub(crate) fn solve_increasing(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    what: &str,
) -> Result<f64> {
    let mut lo = lo;
    let mut hi = lo + 1.0;
    let mut doublings = 0;
    while f(hi) < target {
        lo = hi;
        hi = 2.0 * hi + 1.0;
        doublings += 1;
        if doublings > 2000 || !hi.is_finite() {
            return Err(Error::NonConvergence(format!("{what}: could not bracket target {target}")));
        }
    }
    let mut iterations = 0;
    while hi - lo > 1e-13 * hi.abs().max(f64::MIN_POSITIVE) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations > 4000 {
            return Err(Error::NonConvergence(format!("{what}: bisection cap reached")));
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let slope = df(x);
        if !(slope > 0.0) {
            break;
        }
        let next = x - (f(x) - target) / slope;
        if next >= lo && next <= hi {
            x = next;
        }
    }
    Ok(x)
}

/// `c(w, t)`: the unique `x >= w` with `H(x/w) = 1/(w t)`, and `c(w, inf) = w`.
pub fn solve_c(w: f64, t: Intensity) -> Result<f64> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidArgument(format!("c(w,t) needs w > 0, got {w}")));
    }
    let t = match t {
        Intensity::Infinite => return Ok(w),
        Intensity::Finite(t) => t,
    };
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("c(w,t) needs t > 0, got {t}")));
    }
    let target = 1.0 / (w * t);
    // solve in u = x/w - 1 so that tiny excesses keep full precision
    let u = solve_increasing(rate_shifted, |u| u.ln_1p(), target, 0.0, "c(w,t)")?;
    Ok(w * (1.0 + u))
}
