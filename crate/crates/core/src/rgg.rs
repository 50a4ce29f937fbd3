//! Point sampling on the unit cube and geometric graph construction.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::NormSpec;
use crate::graphkit::Graph;

/// Weyl increment of SplitMix64 (the odd integer closest to `2^64 / phi`).
pub const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based SplitMix64: the `counter`-th output of the stream started at
/// `seed`. Any draw can be computed independently of the others.
pub fn splitmix_at(seed: u64, counter: u64) -> u64 {
    splitmix_mix(seed.wrapping_add(counter.wrapping_add(1).wrapping_mul(SPLITMIX_GAMMA)))
}

/// Uniform double in `[0, 1)` from the top 53 bits.
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Distribution of the sample points on `[0,1]^d`.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityModel {
    UniformCube { dim: usize },
    /// Piecewise-constant density on a grid of `cells^d` equal subcubes.
    /// `values[c]` is the density on cell `c`, where axis 0 varies fastest.
    Block { dim: usize, cells: usize, values: Vec<f64> },
}

impl DensityModel {
    pub fn uniform(dim: usize) -> Self {
        Self::UniformCube { dim }
    }

    pub fn block(dim: usize, cells: usize, values: Vec<f64>) -> Result<Self> {
        let model = Self::Block { dim, cells, values };
        model.validate()?;
        Ok(model)
    }

    /// Density 2 on `{x_0 < 1/2}`, zero elsewhere.
    pub fn half_cube(dim: usize) -> Self {
        let count = 2usize.pow(dim as u32);
        let values = (0..count).map(|c| if c % 2 == 0 { 2.0 } else { 0.0 }).collect();
        Self::Block { dim, cells: 2, values }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::UniformCube { dim } | Self::Block { dim, .. } => *dim,
        }
    }

    /// Essential supremum of the density.
    pub fn sigma(&self) -> f64 {
        match self {
            Self::UniformCube { .. } => 1.0,
            Self::Block { values, .. } => values.iter().copied().fold(0.0, f64::max),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::UniformCube { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidModel("dimension must be at least 1".into()));
                }
            }
            Self::Block { dim, cells, values } => {
                if *dim == 0 || *cells == 0 {
                    return Err(Error::InvalidModel("dimension and cell count must be positive".into()));
                }
                let expected = cells
                    .checked_pow(*dim as u32)
                    .ok_or_else(|| Error::InvalidModel("too many cells".into()))?;
                if values.len() != expected {
                    return Err(Error::InvalidModel(format!("expected {expected} cell values, got {}", values.len())));
                }
                if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                    return Err(Error::InvalidModel("densities must be finite and nonnegative".into()));
                }
                let mass: f64 = values.iter().sum::<f64>() / expected as f64;
                if (mass - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidModel(format!("total mass is {mass}, not 1")));
                }
            }
        }
        Ok(())
    }
}

/// `n` points in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    seed: u64,
    sigma: f64,
    model: Option<DensityModel>,
}

impl PointCloud {
    /// Cloud from explicit coordinates (no generating model).
    pub fn from_points(dim: usize, points: &[Vec<f64>], sigma: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { dim, coords, seed: 0, sigma, model: None })
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>, seed: u64, sigma: f64) -> Result<Self> {
        if dim == 0 || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument("coordinate count is not a multiple of the dimension".into()));
        }
        Ok(Self { dim, coords, seed, sigma, model: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn model(&self) -> Option<&DensityModel> {
        self.model.as_ref()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Header `d n seed sigma`, then one row per point. Floats use the
    /// shortest representation that reads back exactly.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{} {} {} {}", self.dim, self.len(), self.seed, self.sigma)?;
        let mut line = String::new();
        for p in self.points() {
            line.clear();
            for (k, x) in p.iter().enumerate() {
                if k > 0 {
                    line.push(' ');
                }
                write!(line, "{x}").expect("writing to a string");
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
            Ok(s) if s.trim().is_empty() => None,
            other => Some((i + 1, other)),
        });
        let (ln, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
        let header = header?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::Parse { line: ln, message: "header must be `d n seed sigma`".into() });
        }
        let bad = |what: &str| Error::Parse { line: ln, message: format!("bad {what} in header") };
        let dim: usize = fields[0].parse().map_err(|_| bad("dimension"))?;
        let n: usize = fields[1].parse().map_err(|_| bad("point count"))?;
        let seed: u64 = fields[2].parse().map_err(|_| bad("seed"))?;
        let sigma: f64 = fields[3].parse().map_err(|_| bad("sigma"))?;
        if dim == 0 {
            return Err(bad("dimension"));
        }
        let mut coords = Vec::with_capacity(n * dim);
        for _ in 0..n {
            let (ln, row) = lines.next().ok_or(Error::Parse { line: ln + 1, message: "too few rows".into() })?;
            let row = row?;
            let before = coords.len();
            for tok in row.split_whitespace() {
                let x: f64 = tok.parse().map_err(|_| Error::Parse { line: ln, message: format!("bad number `{tok}`") })?;
                coords.push(x);
            }
            if coords.len() - before != dim {
                return Err(Error::Parse { line: ln, message: format!("expected {dim} coordinates") });
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, message: "more rows than the header announces".into() });
        }
        Ok(Self { dim, coords, seed, sigma, model: None })
    }
}

/// `n` independent points from `model`; a deterministic function of
/// `(model, n, seed)`. Point `i` uses counters `i(d+1) .. i(d+1)+d`: the first
/// picks the cell of a block model, the rest are coordinates.
pub fn sample_points(model: &DensityModel, n: usize, seed: u64) -> Result<PointCloud> {
    model.validate()?;
    let dim = model.dim();
    let stride = dim as u64 + 1;
    let mut coords = vec![0.0; n * dim];
    match model {
        DensityModel::UniformCube { .. } => {
            coords.par_chunks_mut(dim).enumerate().for_each(|(i, p)| {
                let base = i as u64 * stride;
                for (k, x) in p.iter_mut().enumerate() {
                    *x = unit_f64(splitmix_at(seed, base + 1 + k as u64));
                }
            });
        }
        DensityModel::Block { cells, values, .. } => {
            let total = values.len() as f64;
            let mut cumulative = Vec::with_capacity(values.len());
            let mut acc = 0.0;
            for v in values {
                acc += v / total;
                cumulative.push(acc);
            }
            let last_positive = values.iter().rposition(|v| *v > 0.0).expect("mass is 1");
            let m = *cells;
            let side = 1.0 / m as f64;
            coords.par_chunks_mut(dim).enumerate().for_each(|(i, p)| {
                let base = i as u64 * stride;
                let u = unit_f64(splitmix_at(seed, base));
                let mut cell = cumulative.partition_point(|c| *c <= u).min(last_positive);
                while values[cell] <= 0.0 {
                    cell -= 1;
                }
                for (k, x) in p.iter_mut().enumerate() {
                    let index = cell % m;
                    cell /= m;
                    let v = unit_f64(splitmix_at(seed, base + 1 + k as u64));
                    *x = (index as f64 + v) * side;
                }
            });
        }
    }
    Ok(PointCloud { dim, coords, seed, sigma: model.sigma(), model: Some(model.clone()) })
}

/// `(t ln n / (sigma n))^{1/d}`, the radius at which `sigma n r^d / ln n = t`.
pub fn radius_for_t(n: f64, t: f64, sigma: f64, d: usize) -> f64 {
    (t * n.ln() / (sigma * n)).powf(1.0 / d as f64)
}

/// A point cloud together with its threshold graph.
#[derive(Debug, Clone)]
pub struct GeometricGraph {
    cloud: PointCloud,
    r: f64,
    norm: NormSpec,
    graph: Graph,
}

impl GeometricGraph {
    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Vertices sorted by the side-`r` grid cell that holds them
    /// (lexicographic in the cell coordinates), then by index.
    pub fn grid_order(&self) -> Vec<usize> {
        let mut keyed: Vec<(Vec<i64>, usize)> =
            (0..self.cloud.len()).map(|i| (cell_of(self.cloud.point(i), self.r), i)).collect();
        keyed.sort();
        keyed.into_iter().map(|(_, i)| i).collect()
    }
}

fn cell_of(p: &[f64], side: f64) -> Vec<i64> {
    p.iter().map(|x| (x / side).floor() as i64).collect()
}

/// Threshold graph: `i ~ j` iff `||x_i - x_j|| <= r`, `i != j`.
///
/// Points are bucketed into cubes of side `r`; only the `3^d` surrounding
/// cubes are searched, since every p-norm dominates the max norm.
pub fn build_graph(cloud: &PointCloud, r: f64, norm: &NormSpec) -> Result<GeometricGraph> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("threshold must be positive and finite, got {r}")));
    }
    if cloud.dim() != norm.dim() {
        return Err(Error::DimensionMismatch { expected: norm.dim(), found: cloud.dim() });
    }
    let d = cloud.dim();
    let n = cloud.len();
    let mut buckets: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
    for i in 0..n {
        buckets.entry(cell_of(cloud.point(i), r)).or_default().push(i as u32);
    }
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let o = (code % 3) as i64 - 1;
                    code /= 3;
                    o
                })
                .collect()
        })
        .collect();
    let adjacency: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let p = cloud.point(i);
            let home = cell_of(p, r);
            let mut key = home.clone();
            let mut out = Vec::new();
            for off in &offsets {
                for k in 0..d {
                    key[k] = home[k] + off[k];
                }
                if let Some(members) = buckets.get(&key) {
                    for &j in members {
                        if j as usize != i && norm.dist(p, cloud.point(j as usize)) <= r {
                            out.push(j);
                        }
                    }
                }
            }
            out.sort_unstable();
            out
        })
        .collect();
    Ok(GeometricGraph { cloud: cloud.clone(), r, norm: *norm, graph: Graph::from_sorted_adjacency(adjacency) })
}
