//! Feasible functions and the limits built from them: `f_omega`, bounds on
//! `f_chi`, their ratio, the two-level family and threshold bracketing.

use crate::error::{Error, Result};
use crate::geometry::{packing_density, separated_count_upper, NormSpec, PackingInfo};

use super::profile::{xi, FunctionProfile, RadialLevels};
use super::rate::solve_c;
use super::Intensity;

/// Cube sides used for the uniform cube functions of the standard catalog.
const CUBE_SIDES: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
/// Number of points in the two-level grid (including the endpoint).
const TWO_LEVEL_GRID: usize = 64;

/// Why a catalog entry is feasible (sums to at most one over every set of
/// points with pairwise distances greater than one).
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// A closed ball of diameter one holds at most one such point.
    HalfBall,
    /// At most one point fits in the inner ball, and then nothing else fits
    /// in the outer ball; without an inner point the outer ball holds at most
    /// two.
    TwoLevel { beta: f64 },
    /// Value `1/count` on a cube holding at most `count` points.
    CubePacking { side: f64, count: u64 },
    /// `vol(B)/(2^d delta)`, the supremum of `int phi` over feasible `phi`,
    /// approached by cube functions on ever larger cubes. It is a lower bound
    /// for `sup xi(phi, t)` at every `t`.
    PackingLimit { delta: f64 },
    /// Added by the caller without a proof.
    UserAsserted,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogFunction {
    Radial(RadialLevels),
    Cube { side: f64, value: f64 },
    PackingLimit { value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: String,
    pub function: CatalogFunction,
    pub certificate: Certificate,
}

impl CatalogEntry {
    /// Lower bound this entry gives for `f_chi(t)`, i.e. `xi(phi, t)`.
    pub fn value(&self, norm: &NormSpec, t: Intensity) -> Result<f64> {
        match &self.function {
            CatalogFunction::Radial(phi) => profile_value(&phi.to_profile(), t),
            CatalogFunction::Cube { side, value } => Ok(value * solve_c(side.powi(norm.dim() as i32), t)?),
            CatalogFunction::PackingLimit { value } => Ok(*value),
        }
    }
}

/// `xi` with single-level profiles routed through `c(w,t)`, so that the
/// half-ball entry reproduces `f_omega` to the last bit.
fn profile_value(profile: &FunctionProfile, t: Intensity) -> Result<f64> {
    match profile.levels() {
        [level] => Ok(level.value * solve_c(level.volume, t)?),
        _ => xi(profile, t),
    }
}

/// Largest `beta` for which the two-level function is certified feasible:
/// the outer radius `(1+beta)/2` may not exceed `1/sqrt(3)` in the Euclidean
/// plane and above (three points with pairwise distances above one need a
/// ball of radius above `1/sqrt(3)`). On the line every `beta` works. Returns
/// 0 for other norms.
pub fn two_level_beta_limit(norm: &NormSpec) -> f64 {
    if norm.dim() == 1 {
        1.0
    } else if norm.is_euclidean() {
        2.0 / 3f64.sqrt() - 1.0
    } else {
        0.0
    }
}

/// Immutable list of feasible functions for one norm.
#[derive(Debug, Clone)]
pub struct FeasibleCatalog {
    norm: NormSpec,
    packing: Option<PackingInfo>,
    entries: Vec<CatalogEntry>,
}

impl FeasibleCatalog {
    /// Half-ball, two-level grid over the certified range, cube functions
    /// and the packing limit (when a packing density is known).
    pub fn standard(norm: NormSpec) -> Self {
        Self::standard_with_packing(norm, packing_density(&norm).ok())
    }

    pub fn standard_with_packing(norm: NormSpec, packing: Option<PackingInfo>) -> Self {
        let mut cat = Self::half_ball_only(norm, packing);
        let beta_max = two_level_beta_limit(&norm);
        if beta_max > 0.0 {
            for k in 1..TWO_LEVEL_GRID {
                let beta = beta_max * k as f64 / (TWO_LEVEL_GRID - 1) as f64;
                let function = if beta >= 1.0 {
                    RadialLevels::ball(norm, 1.0, 0.5).expect("valid ring")
                } else {
                    RadialLevels::two_level(norm, beta).expect("beta in (0,1)")
                };
                cat.entries.push(CatalogEntry {
                    name: format!("two_level({beta:.6})"),
                    function: CatalogFunction::Radial(function),
                    certificate: Certificate::TwoLevel { beta },
                });
            }
        }
        for side in CUBE_SIDES {
            let count = separated_count_upper(&norm, side);
            cat.entries.push(CatalogEntry {
                name: format!("cube({side})"),
                function: CatalogFunction::Cube { side, value: 1.0 / count as f64 },
                certificate: Certificate::CubePacking { side, count },
            });
        }
        if let Some(info) = packing {
            cat.entries.push(CatalogEntry {
                name: "packing_limit".into(),
                function: CatalogFunction::PackingLimit { value: norm.half_ball_volume() / info.delta },
                certificate: Certificate::PackingLimit { delta: info.delta },
            });
        }
        cat
    }

    /// Only the half-ball indicator, whose weighted integral is `f_omega`.
    pub fn half_ball_only(norm: NormSpec, packing: Option<PackingInfo>) -> Self {
        Self {
            norm,
            packing,
            entries: vec![CatalogEntry {
                name: "half_ball".into(),
                function: CatalogFunction::Radial(RadialLevels::half_ball(norm)),
                certificate: Certificate::HalfBall,
            }],
        }
    }

    /// Adds a radial function without a feasibility proof.
    pub fn with_user_entry(mut self, name: impl Into<String>, function: RadialLevels) -> Result<Self> {
        if function.norm() != &self.norm {
            return Err(Error::InvalidArgument("catalog entry uses a different norm".into()));
        }
        self.entries.push(CatalogEntry {
            name: name.into(),
            function: CatalogFunction::Radial(function),
            certificate: Certificate::UserAsserted,
        });
        Ok(self)
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn packing(&self) -> Option<PackingInfo> {
        self.packing
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    fn require_packing(&self) -> Result<PackingInfo> {
        self.packing.ok_or(Error::PackingDensityUnavailable(self.norm))
    }

    /// Largest entry value at `t`, never below `f_omega(t)`.
    pub fn lower_value(&self, t: Intensity) -> Result<f64> {
        let mut best = f_clique(t, &self.norm)?;
        for entry in &self.entries {
            best = best.max(entry.value(&self.norm, t)?);
        }
        Ok(best)
    }
}

/// `f_omega(t) = c(vol(B)/2^d, t)`.
pub fn f_clique(t: Intensity, norm: &NormSpec) -> Result<f64> {
    solve_c(norm.half_ball_volume(), t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Bounds on `f_chi(t)`: the best catalog entry below, `c(vol(B)/(2^d delta), t)`
/// above.
pub fn f_chromatic_bounds(t: Intensity, catalog: &FeasibleCatalog) -> Result<LimitBounds> {
    let info = catalog.require_packing()?;
    let lower = catalog.lower_value(t)?;
    let upper = solve_c(catalog.norm.half_ball_volume() / info.delta, t)?;
    Ok(LimitBounds { lower, upper })
}

/// Bounds on `f_chi(t) / f_omega(t)`.
pub fn f_ratio_bounds(t: Intensity, catalog: &FeasibleCatalog) -> Result<LimitBounds> {
    let b = f_chromatic_bounds(t, catalog)?;
    let clique = f_clique(t, &catalog.norm)?;
    Ok(LimitBounds { lower: b.lower / clique, upper: b.upper / clique })
}

/// `xi` of the two-level function: 1 on `B(0;(1-beta)/2)`, 1/2 out to
/// radius `(1+beta)/2`. Endpoints collapse to single levels.
pub fn mu_beta(beta: f64, t: Intensity, norm: &NormSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!("beta must lie in [0,1], got {beta}")));
    }
    let inner = norm.ball_volume(0.5 * (1.0 - beta));
    let outer = norm.ball_volume(0.5 * (1.0 + beta));
    let mut levels = Vec::with_capacity(2);
    if inner > 0.0 {
        levels.push((1.0, inner));
    }
    if outer > inner {
        levels.push((0.5, outer - inner));
    }
    profile_value(&FunctionProfile::new(levels)?, t)
}

/// Grid points around `t0 = inf{t : f_rat(t) != 1}` as seen by a catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T0Bracket {
    /// Largest grid point below `t_hi` where the catalog does not separate.
    pub t_lo: Option<f64>,
    /// Smallest grid point where the catalog beats `f_omega` by more than 1e-6.
    /// `None` means no separation was found on the grid.
    pub t_hi: Option<f64>,
}

impl T0Bracket {
    pub fn separated(&self) -> bool {
        self.t_hi.is_some()
    }
}

pub fn bracket_t0(catalog: &FeasibleCatalog, grid: &[f64]) -> Result<T0Bracket> {
    let info = catalog.require_packing()?;
    if info.delta >= 1.0 {
        return Err(Error::ThresholdUndefined);
    }
    let mut ts: Vec<f64> = grid.to_vec();
    if ts.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidArgument("search grid must be positive".into()));
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut t_lo = None;
    for &t in &ts {
        let it = Intensity::from(t);
        let clique = f_clique(it, &catalog.norm)?;
        let lower = catalog.lower_value(it)?;
        if lower - clique > 1e-6 {
            return Ok(T0Bracket { t_lo, t_hi: Some(t) });
        }
        if lower - clique <= 1e-9 * clique {
            t_lo = Some(t);
        }
    }
    Ok(T0Bracket { t_lo, t_hi: None })
}
