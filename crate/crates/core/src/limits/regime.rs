//! Regime classification, the sparse and very sparse level formulas, and
//! Poisson tail bounds.

use std::fmt;

use crate::error::{Error, Result};

use super::rate::rate_function;

/// Lower edge of the intermediate band for `t`.
pub const INTERMEDIATE_MIN: f64 = 0.01;
/// Upper edge of the intermediate band for `t`.
pub const INTERMEDIATE_MAX: f64 = 100.0;
/// `n r^d <= n^{-VERY_SPARSE_EXPONENT}` counts as very sparse.
pub const VERY_SPARSE_EXPONENT: f64 = 0.1;
const BAND_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeLabel {
    VerySparse,
    Sparse,
    Intermediate(f64),
    Dense,
}

impl RegimeLabel {
    pub fn name(&self) -> &'static str {
        match self {
            Self::VerySparse => "very_sparse",
            Self::Sparse => "sparse",
            Self::Intermediate(_) => "intermediate",
            Self::Dense => "dense",
        }
    }
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Places `(n, r)` in one of the four regimes. `t = sigma n r^d / ln n`; the
/// intermediate band is `[0.01, 100]` with a relative slack of `1e-9` at both
/// ends.
pub fn classify_regime(n: f64, r: f64, d: usize, sigma: f64) -> RegimeLabel {
    let nrd = n * r.powi(d as i32);
    if nrd <= n.powf(-VERY_SPARSE_EXPONENT) {
        return RegimeLabel::VerySparse;
    }
    let t = sigma * nrd / n.ln();
    if t > INTERMEDIATE_MAX * (1.0 + BAND_SLACK) {
        RegimeLabel::Dense
    } else if t >= INTERMEDIATE_MIN * (1.0 - BAND_SLACK) {
        RegimeLabel::Intermediate(t)
    } else {
        RegimeLabel::Sparse
    }
}

/// `ln n / ln(ln n / (n r^d))`, the growth rate of `chi` and `omega` in the
/// sparse regime.
pub fn sparse_level(n: f64, nrd: f64) -> Result<f64> {
    let ln_n = n.ln();
    if !(nrd > 0.0) || !(nrd < ln_n) {
        return Err(Error::InvalidArgument(format!("sparse level needs 0 < n r^d < ln n = {ln_n}, got {nrd}")));
    }
    Ok(ln_n / (ln_n / nrd).ln())
}

/// The `k >= 0` with `n^{-1/(k-1/2)} <= n r^d < n^{-1/(k+1/2)}`; clique and
/// chromatic numbers then concentrate on `{k, k+1}`.
pub fn very_sparse_level(n: f64, r: f64, d: usize) -> Result<u32> {
    if !(n > 1.0) || !(r > 0.0) {
        return Err(Error::InvalidArgument("very sparse level needs n > 1 and r > 0".into()));
    }
    let nrd = n * r.powi(d as i32);
    if nrd >= 1.0 {
        return Err(Error::InvalidArgument(format!("very sparse level needs n r^d < 1, got {nrd}")));
    }
    let exponent = -nrd.ln() / n.ln();
    Ok((1.0 / exponent + 0.5 + 1e-12).floor() as u32)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBounds {
    /// `exp(-mu H(k/mu))`.
    pub chernoff_upper: f64,
    /// `(mu/(e k))^k`.
    pub elementary_lower: f64,
    /// `(e mu/k)^k`.
    pub elementary_upper: f64,
}

/// Bounds on `P(Z >= k)` for `Z ~ Poisson(mu)`, `k >= mu`. Each is returned as
/// computed; none is clamped against the others.
pub fn poisson_tail_bounds(mu: f64, k: f64) -> Result<TailBounds> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("Poisson mean must be positive, got {mu}")));
    }
    if !(k >= mu) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("upper tail bounds need k >= mu, got k={k} mu={mu}")));
    }
    let e = std::f64::consts::E;
    Ok(TailBounds {
        chernoff_upper: (-mu * rate_function(k / mu)?).exp(),
        elementary_lower: (mu / (e * k)).powf(k),
        elementary_upper: (e * mu / k).powf(k),
    })
}
