//! Simple functions described by their level sets, radial realizations, and
//! the weighted integral `xi`.

use crate::error::{Error, Result};
use crate::geometry::NormSpec;

use super::rate::{rate_of_exp, solve_increasing};
use super::Intensity;

/// One level of a simple function: value `value` on a set of volume `volume`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub value: f64,
    pub volume: f64,
}

/// A nonnegative simple function `sum_i a_i 1_{A_i}` with disjoint `A_i`,
/// known only through the pairs `(a_i, vol(A_i))`.
///
/// Levels are kept sorted by decreasing value; equal values are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionProfile {
    levels: Vec<Level>,
}

impl FunctionProfile {
    pub fn new(levels: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut out: Vec<Level> = Vec::new();
        for (value, volume) in levels {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidProfile(format!("level value must be positive and finite, got {value}")));
            }
            if !(volume > 0.0 && volume.is_finite()) {
                return Err(Error::InvalidProfile(format!("level volume must be positive and finite, got {volume}")));
            }
            out.push(Level { value, volume });
        }
        if out.is_empty() {
            return Err(Error::InvalidProfile("profile has no levels".into()));
        }
        out.sort_by(|a, b| b.value.total_cmp(&a.value));
        out.dedup_by(|next, kept| {
            if next.value == kept.value {
                kept.volume += next.volume;
                true
            } else {
                false
            }
        });
        Ok(Self { levels: out })
    }

    /// `value * 1_W` with `vol(W) = volume`.
    pub fn indicator(volume: f64, value: f64) -> Result<Self> {
        Self::new([(value, volume)])
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// `int phi`.
    pub fn integral(&self) -> f64 {
        self.levels.iter().map(|l| l.value * l.volume).sum()
    }

    pub fn max_value(&self) -> f64 {
        self.levels[0].value
    }

    /// `lambda * phi`.
    pub fn scale_values(&self, lambda: f64) -> Result<Self> {
        Self::new(self.levels.iter().map(|l| (lambda * l.value, l.volume)))
    }

    /// Multiplies every level volume by `factor`; `phi(lambda x)` corresponds
    /// to `factor = lambda^{-d}`.
    pub fn scale_volumes(&self, factor: f64) -> Result<Self> {
        Self::new(self.levels.iter().map(|l| (l.value, factor * l.volume)))
    }

    /// `phi + psi` for functions with disjoint supports.
    pub fn disjoint_sum(&self, other: &Self) -> Self {
        Self::new(self.levels.iter().chain(&other.levels).map(|l| (l.value, l.volume)))
            .expect("levels of valid profiles are valid")
    }

    /// `int phi 1_{phi >= a}`.
    pub fn mass_above(&self, a: f64) -> f64 {
        self.levels.iter().filter(|l| l.value >= a).map(|l| l.value * l.volume).sum()
    }

    /// `f(s) = int H(e^{s phi})`.
    pub fn rate_integral(&self, s: f64) -> f64 {
        self.levels.iter().map(|l| l.volume * rate_of_exp(s * l.value)).sum()
    }

    fn rate_integral_slope(&self, s: f64) -> f64 {
        self.levels
            .iter()
            .map(|l| l.volume * l.value * l.value * s * (s * l.value).exp())
            .sum()
    }
}

/// Weighting value `s(phi, t)`: the nonnegative root of `int H(e^{s phi}) = 1/t`.
/// Zero at `t = inf`.
pub fn weighting_value(phi: &FunctionProfile, t: Intensity) -> Result<f64> {
    let t = match t {
        Intensity::Infinite => return Ok(0.0),
        Intensity::Finite(t) => t,
    };
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("weighting value needs t > 0, got {t}")));
    }
    solve_increasing(
        |s| phi.rate_integral(s),
        |s| phi.rate_integral_slope(s),
        1.0 / t,
        0.0,
        "weighting value",
    )
}

/// Weighted integral `xi(phi, t) = int phi e^{s phi}` at the weighting value;
/// `xi(phi, inf) = int phi`.
pub fn xi(phi: &FunctionProfile, t: Intensity) -> Result<f64> {
    let s = weighting_value(phi, t)?;
    Ok(phi.levels.iter().map(|l| l.value * l.volume * (s * l.value).exp()).sum())
}

/// One annulus of a radial simple function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ring {
    /// Outer radius (closed).
    pub radius: f64,
    pub value: f64,
}

/// A radial simple function realized as nested closed balls: value
/// `rings[i].value` on `rings[i-1].radius < ||x|| <= rings[i].radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialLevels {
    norm: NormSpec,
    rings: Vec<Ring>,
}

impl RadialLevels {
    pub fn new(norm: NormSpec, rings: Vec<Ring>) -> Result<Self> {
        if rings.is_empty() {
            return Err(Error::InvalidProfile("radial function needs at least one ring".into()));
        }
        let mut prev_radius = 0.0;
        let mut prev_value = f64::INFINITY;
        for ring in &rings {
            if !(ring.radius > prev_radius) || !ring.radius.is_finite() {
                return Err(Error::InvalidProfile("ring radii must be positive and strictly increasing".into()));
            }
            if !(ring.value > 0.0 && ring.value < prev_value) {
                return Err(Error::InvalidProfile("ring values must be positive and strictly decreasing".into()));
            }
            prev_radius = ring.radius;
            prev_value = ring.value;
        }
        Ok(Self { norm, rings })
    }

    /// `value * 1_{B(0; radius)}`.
    pub fn ball(norm: NormSpec, radius: f64, value: f64) -> Result<Self> {
        Self::new(norm, vec![Ring { radius, value }])
    }

    /// The half-ball indicator `1_{B(0;1/2)}`.
    pub fn half_ball(norm: NormSpec) -> Self {
        Self::ball(norm, 0.5, 1.0).expect("valid ring")
    }

    /// Value 1 on `B(0;(1-beta)/2)` and 1/2 out to radius `(1+beta)/2`, for
    /// `0 < beta < 1`.
    pub fn two_level(norm: NormSpec, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidArgument(format!("two-level radial function needs 0 < beta < 1, got {beta}")));
        }
        Self::new(
            norm,
            vec![
                Ring { radius: 0.5 * (1.0 - beta), value: 1.0 },
                Ring { radius: 0.5 * (1.0 + beta), value: 0.5 },
            ],
        )
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn rings(&self) -> &[Ring] {
        &self.rings
    }

    pub fn outer_radius(&self) -> f64 {
        self.rings.last().expect("nonempty").radius
    }

    /// Weights `a_i - a_{i+1}` (with `a_{m+1} = 0`) of the nested closed balls.
    pub fn ball_weights(&self) -> Vec<f64> {
        self.rings
            .iter()
            .enumerate()
            .map(|(i, r)| r.value - self.rings.get(i + 1).map_or(0.0, |n| n.value))
            .collect()
    }

    pub fn value_at_distance(&self, dist: f64) -> f64 {
        self.rings.iter().find(|r| dist <= r.radius).map_or(0.0, |r| r.value)
    }

    pub fn to_profile(&self) -> FunctionProfile {
        let mut inner = 0.0;
        let levels: Vec<(f64, f64)> = self
            .rings
            .iter()
            .map(|r| {
                let outer = self.norm.ball_volume(r.radius);
                let vol = outer - inner;
                inner = outer;
                (r.value, vol)
            })
            .collect();
        FunctionProfile::new(levels).expect("rings give positive volumes")
    }
}
