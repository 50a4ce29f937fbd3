//! Analytic limit functions: the rate function, weighted integrals, the clique
//! and chromatic limits, regime formulas and Poisson tail bounds.

mod catalog;
mod profile;
mod rate;
mod regime;

pub use catalog::{
    bracket_t0, f_chromatic_bounds, f_clique, f_ratio_bounds, mu_beta, two_level_beta_limit, CatalogEntry,
    CatalogFunction, Certificate, FeasibleCatalog, LimitBounds, T0Bracket,
};
pub use profile::{weighting_value, xi, FunctionProfile, Level, RadialLevels, Ring};
pub use rate::{rate_function, solve_c};
pub use regime::{
    classify_regime, poisson_tail_bounds, sparse_level, very_sparse_level, RegimeLabel, TailBounds,
};

use std::fmt;

use crate::error::{Error, Result};

/// The parameter `t = sigma n r^d / ln n`, with `t = inf` kept as its own case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intensity {
    Finite(f64),
    Infinite,
}

impl Intensity {
    /// Rejects nonpositive and NaN values; `f64::INFINITY` maps to `Infinite`.
    pub fn new(t: f64) -> Result<Self> {
        if t == f64::INFINITY {
            Ok(Self::Infinite)
        } else if t > 0.0 && t.is_finite() {
            Ok(Self::Finite(t))
        } else {
            Err(Error::InvalidArgument(format!("t must be positive, got {t}")))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(t) => t,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl From<f64> for Intensity {
    /// Unchecked conversion; invalid values are reported by the consumer.
    fn from(t: f64) -> Self {
        if t == f64::INFINITY {
            Self::Infinite
        } else {
            Self::Finite(t)
        }
    }
}

impl fmt::Display for Intensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(t) => write!(f, "{t}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}
