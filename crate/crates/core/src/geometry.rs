//! Norms on `R^d`, unit-ball volumes, packing densities and counting bounds
//! for separated point sets.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// A p-norm on `R^d`, `1 <= p <= inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    p: f64,
    dim: usize,
}

impl NormSpec {
    pub fn new(p: f64, dim: usize) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidArgument(format!("norm parameter p must be >= 1, got {p}")));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        Ok(Self { p, dim })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(2.0, dim).expect("valid dimension")
    }

    pub fn max_norm(dim: usize) -> Self {
        Self::new(f64::INFINITY, dim).expect("valid dimension")
    }

    pub fn taxicab(dim: usize) -> Self {
        Self::new(1.0, dim).expect("valid dimension")
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_euclidean(&self) -> bool {
        self.p == 2.0
    }

    pub fn is_max_norm(&self) -> bool {
        self.p.is_infinite()
    }

    /// `||v||_p`, checking the length of `v`.
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok(self.eval_iter(v.iter().copied()))
    }

    /// Distance between two points of the same dimension. Lengths are not checked.
    #[inline]
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        self.eval_iter(a.iter().zip(b).map(|(x, y)| x - y))
    }

    #[inline]
    fn eval_iter(&self, it: impl Iterator<Item = f64>) -> f64 {
        if self.p == 2.0 {
            it.map(|x| x * x).sum::<f64>().sqrt()
        } else if self.p == 1.0 {
            it.map(f64::abs).sum()
        } else if self.p.is_infinite() {
            it.fold(0.0, |m, x| m.max(x.abs()))
        } else {
            // scale by the largest coordinate so |x|^p cannot overflow
            let coords: Vec<f64> = it.map(f64::abs).collect();
            let m = coords.iter().fold(0.0_f64, |m, &x| m.max(x));
            if m == 0.0 {
                return 0.0;
            }
            m * coords.iter().map(|&x| (x / m).powf(self.p)).sum::<f64>().powf(1.0 / self.p)
        }
    }

    /// Norm of the all-ones vector, i.e. the diameter of the unit cube `[0,1]^d`.
    pub fn cube_diameter(&self) -> f64 {
        if self.p.is_infinite() {
            1.0
        } else {
            (self.dim as f64).powf(1.0 / self.p)
        }
    }

    /// Volume of the unit ball, `(2 Γ(1/p + 1))^d / Γ(d/p + 1)`.
    pub fn unit_ball_volume(&self) -> f64 {
        let d = self.dim as f64;
        if self.p.is_infinite() {
            return 2f64.powi(self.dim as i32);
        }
        if self.p == 1.0 {
            // 2^d / d!
            return (1..=self.dim).fold(1.0, |acc, k| acc * 2.0 / k as f64);
        }
        if self.p == 2.0 && self.dim <= 3 {
            return [2.0, PI, 4.0 * PI / 3.0][self.dim - 1];
        }
        let log_vol = d * (2.0 * libm::tgamma(1.0 / self.p + 1.0)).ln() - libm::lgamma(d / self.p + 1.0);
        log_vol.exp()
    }

    /// Volume of the ball of radius `rho`.
    pub fn ball_volume(&self, rho: f64) -> f64 {
        self.unit_ball_volume() * rho.powi(self.dim as i32)
    }

    /// `vol(B(0; 1/2)) = vol(B) / 2^d`.
    pub fn half_ball_volume(&self) -> f64 {
        self.ball_volume(0.5)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_infinite() {
            write!(f, "l_inf(d={})", self.dim)
        } else {
            write!(f, "l_{}(d={})", self.p, self.dim)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingSource {
    ExactKnown,
    UserSupplied,
    /// The trivial bound `delta <= 1`; never returned by the registry.
    VolumeUpperBound,
}

/// Translational packing density of the unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingInfo {
    pub delta: f64,
    pub source: PackingSource,
}

impl PackingInfo {
    pub fn user(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidArgument(format!("packing density must lie in (0,1], got {delta}")));
        }
        Ok(Self { delta, source: PackingSource::UserSupplied })
    }
}

/// Registry of rigorously known packing densities.
///
/// Only values that are proven are shipped: intervals tile the line, cubes
/// (and the planar taxicab ball, a square turned on its corner) tile space,
/// the hexagonal disk packing, and the Kepler bound in three dimensions. Everything else needs [`packing_density_or`].
pub fn packing_density(norm: &NormSpec) -> Result<PackingInfo> {
    let exact = |delta| Ok(PackingInfo { delta, source: PackingSource::ExactKnown });
    if norm.dim() == 1 || norm.is_max_norm() || (norm.dim() == 2 && norm.p() == 1.0) {
        return exact(1.0);
    }
    if norm.is_euclidean() {
        match norm.dim() {
            2 => return exact(PI / (2.0 * 3f64.sqrt())),
            3 => return exact(PI / 18f64.sqrt()),
            _ => {}
        }
    }
    Err(Error::PackingDensityUnavailable(*norm))
}

/// Registry lookup with a user override taking precedence.
pub fn packing_density_or(norm: &NormSpec, user: Option<f64>) -> Result<PackingInfo> {
    match user {
        Some(delta) => PackingInfo::user(delta),
        None => packing_density(norm),
    }
}

/// Upper bound on the largest set of points in `(0,K)^d` with pairwise
/// distances greater than one.
///
/// Minimum of the volume bound (disjoint balls of radius 1/2 inside
/// `(-1/2, K+1/2)^d`) and a covering bound (the cube split into cells of
/// diameter strictly below one, each holding at most one point). Both are
/// over-estimates, so `1/N` on the cube is always a feasible weight.
pub fn separated_count_upper(norm: &NormSpec, side: f64) -> u64 {
    assert!(side > 0.0, "cube side must be positive");
    let d = norm.dim() as i32;
    let volume_bound = ((side + 1.0).powi(d) * 2f64.powi(d) / norm.unit_ball_volume()) * (1.0 + 1e-12);
    let volume_bound = volume_bound.floor();
    let per_axis = (side * norm.cube_diameter()).floor() + 1.0;
    let covering_bound = per_axis.powi(d);
    let bound = volume_bound.min(covering_bound).max(1.0);
    if bound >= u64::MAX as f64 {
        u64::MAX
    } else {
        bound as u64
    }
}

/// Number `k` of sets of diameter `< 1` covering the closed unit ball, so
/// that every geometric graph satisfies `Delta + 1 <= k * omega`.
///
/// Uses a grid of `m^d` cubes over `[-1,1]^d` with `m = floor(2 ||1||) + 1`.
pub fn clique_cover_factor(norm: &NormSpec) -> u64 {
    let m = (2.0 * norm.cube_diameter()).floor() as u64 + 1;
    m.pow(norm.dim() as u32)
}
