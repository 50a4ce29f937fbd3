//! Regime sweeps: sample graphs over a grid of `(n, t)`, compute clique and
//! colouring quantities, and set them beside the limit predictions.
//!
//! # Config format
//!
//! Line-oriented `key = value`; `#` starts a comment; lists are
//! comma-separated.
//!
//! | key | meaning | default |
//! |---|---|---|
//! | `dim` | dimension | 2 |
//! | `norm` | p of the norm (`inf` for the max norm) | 2 |
//! | `model` | `uniform`, `half_cube` or `block` | `uniform` |
//! | `block_cells` | cells per axis of a block model | |
//! | `block_values` | densities of the block cells, axis 0 fastest | |
//! | `n` | list of point counts | required |
//! | `t` | list of intensities `sigma n r^d / ln n` | one of `t`, `r` |
//! | `r` | list of radii | one of `t`, `r` |
//! | `trials` | trials per cell | 1 |
//! | `seed` | master seed | 0 |
//! | `exact_chi_max_component` | largest component for exact chi | 60 |
//! | `chi_f_max_component` | largest component for fractional chi | 150 |
//! | `node_budget` | search nodes per component for exact chi | 2000000 |
//! | `delta` | packing density for norms without a known one | |
//! | `output` | CSV path | |
//!
//! Trial `k` of cell `(i, j)` (indices into `n` and `t`/`r`) uses seed
//! `mix(mix(mix(seed, i), j), k)` with `mix = splitmix_at`.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{packing_density_or, NormSpec};
use crate::graphkit::{
    chromatic_bounds, chromatic_number_exact, clique_number_with_hint, fractional_chromatic, Graph,
};
use crate::limits::{classify_regime, f_chromatic_bounds, f_clique, FeasibleCatalog, Intensity, RegimeLabel};
use crate::rgg::{build_graph, radius_for_t, sample_points, splitmix_at, DensityModel};
use crate::scan::scan_ball;

/// Fixed CSV header.
pub const CSV_HEADER: [&str; 15] = [
    "n",
    "r",
    "t",
    "regime",
    "seed",
    "omega",
    "chi_lb",
    "chi_ub",
    "chi_exact",
    "chi_f",
    "scan_phi0",
    "pred_fcli",
    "pred_fcol_lo",
    "pred_fcol_hi",
    "ratio_chi_omega",
];

/// Tolerance of the column generation inside sweeps.
pub const CHI_F_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum SweepScale {
    Intensity(Vec<f64>),
    Radius(Vec<f64>),
}

impl SweepScale {
    fn len(&self) -> usize {
        match self {
            Self::Intensity(v) | Self::Radius(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub dim: usize,
    pub norm_p: f64,
    pub model: DensityModel,
    pub n_values: Vec<usize>,
    pub scale: SweepScale,
    pub trials: usize,
    pub seed: u64,
    pub exact_chi_max_component: usize,
    pub chi_f_max_component: usize,
    pub node_budget: u64,
    pub delta: Option<f64>,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    /// A config with defaults for everything but the grid.
    pub fn new(dim: usize, n_values: Vec<usize>, scale: SweepScale) -> Self {
        Self {
            dim,
            norm_p: 2.0,
            model: DensityModel::uniform(dim),
            n_values,
            scale,
            trials: 1,
            seed: 0,
            exact_chi_max_component: 60,
            chi_f_max_component: 150,
            node_budget: crate::graphkit::DEFAULT_NODE_BUDGET,
            delta: None,
            output: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = 2usize;
        let mut norm_p = 2.0;
        let mut model_kind = "uniform".to_string();
        let mut block_cells: Option<usize> = None;
        let mut block_values: Option<Vec<f64>> = None;
        let mut n_values: Option<Vec<usize>> = None;
        let mut t_values: Option<Vec<f64>> = None;
        let mut r_values: Option<Vec<f64>> = None;
        let mut trials = 1usize;
        let mut seed = 0u64;
        let mut exact_cap = 60usize;
        let mut chi_f_cap = 150usize;
        let mut node_budget = crate::graphkit::DEFAULT_NODE_BUDGET;
        let mut delta = None;
        let mut output = None;
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: line_no, message: "expected `key = value`".into() })?;
            let (key, value) = (key.trim(), value.trim());
            let err = |what: &str| Error::Parse { line: line_no, message: format!("bad {what} `{value}`") };
            match key {
                "dim" => dim = value.parse().map_err(|_| err("dimension"))?,
                "norm" => norm_p = parse_p(value).ok_or_else(|| err("norm"))?,
                "model" => model_kind = value.to_string(),
                "block_cells" => block_cells = Some(value.parse().map_err(|_| err("cell count"))?),
                "block_values" => block_values = Some(parse_list(value).ok_or_else(|| err("density list"))?),
                "n" => n_values = Some(parse_list(value).ok_or_else(|| err("n list"))?),
                "t" => t_values = Some(parse_list(value).ok_or_else(|| err("t list"))?),
                "r" => r_values = Some(parse_list(value).ok_or_else(|| err("r list"))?),
                "trials" => trials = value.parse().map_err(|_| err("trial count"))?,
                "seed" => seed = value.parse().map_err(|_| err("seed"))?,
                "exact_chi_max_component" => exact_cap = value.parse().map_err(|_| err("cap"))?,
                "chi_f_max_component" => chi_f_cap = value.parse().map_err(|_| err("cap"))?,
                "node_budget" => node_budget = value.parse().map_err(|_| err("budget"))?,
                "delta" => delta = Some(value.parse().map_err(|_| err("packing density"))?),
                "output" => output = Some(PathBuf::from(value)),
                _ => return Err(Error::Parse { line: line_no, message: format!("unknown key `{key}`") }),
            }
        }
        let at_end = |message: &str| Error::Parse { line: last_line, message: message.into() };
        let model = match model_kind.as_str() {
            "uniform" => DensityModel::uniform(dim),
            "half_cube" => DensityModel::half_cube(dim),
            "block" => DensityModel::block(
                dim,
                block_cells.ok_or_else(|| at_end("block model needs block_cells"))?,
                block_values.ok_or_else(|| at_end("block model needs block_values"))?,
            )?,
            other => return Err(at_end(&format!("unknown model `{other}`"))),
        };
        let scale = match (t_values, r_values) {
            (Some(t), None) => SweepScale::Intensity(t),
            (None, Some(r)) => SweepScale::Radius(r),
            _ => return Err(at_end("give exactly one of `t` and `r`")),
        };
        let config = Self {
            dim,
            norm_p,
            model,
            n_values: n_values.ok_or_else(|| at_end("missing `n`"))?,
            scale,
            trials,
            seed,
            exact_chi_max_component: exact_cap,
            chi_f_max_component: chi_f_cap,
            node_budget,
            delta,
            output,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.model.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: self.model.dim() });
        }
        NormSpec::new(self.norm_p, self.dim)?;
        if self.n_values.is_empty() || self.scale.len() == 0 {
            return Err(Error::InvalidArgument("the n and t/r lists must be nonempty".into()));
        }
        if self.n_values.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument("every n must be at least 2".into()));
        }
        let scale_ok = match &self.scale {
            SweepScale::Intensity(v) | SweepScale::Radius(v) => v.iter().all(|x| *x > 0.0 && x.is_finite()),
        };
        if !scale_ok {
            return Err(Error::InvalidArgument("t and r values must be positive and finite".into()));
        }
        Ok(())
    }

    pub fn norm(&self) -> NormSpec {
        NormSpec::new(self.norm_p, self.dim).expect("validated")
    }

    /// Seed of trial `trial` in cell `(n_index, scale_index)`.
    pub fn trial_seed(&self, n_index: usize, scale_index: usize, trial: usize) -> u64 {
        splitmix_at(splitmix_at(splitmix_at(self.seed, n_index as u64), scale_index as u64), trial as u64)
    }
}

fn parse_p(s: &str) -> Option<f64> {
    match s {
        "inf" | "infinity" => Some(f64::INFINITY),
        _ => s.parse().ok(),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    s.split(',').map(|x| x.trim().parse().ok()).collect()
}

/// One sampled graph with its measured and predicted quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    pub r: f64,
    pub t: f64,
    pub regime: RegimeLabel,
    pub seed: u64,
    pub trial: usize,
    pub omega: usize,
    pub chi_lb: usize,
    pub chi_ub: usize,
    pub chi_exact: Option<usize>,
    pub chi_f: Option<f64>,
    pub scan_phi0: f64,
    pub max_degree: usize,
    pub pred_fcli: f64,
    pub pred_fcol_lo: f64,
    pub pred_fcol_hi: Option<f64>,
    pub ratio_chi_omega: f64,
    /// `omega / (sigma n r^d)`.
    pub omega_scaled: f64,
}

impl SweepRecord {
    /// `omega <= ceil(chi_f - 1e-6) <= chi_exact <= chi_ub <= Delta + 1`,
    /// skipping absent entries, plus `chi_lb <= chi_ub`.
    pub fn check_sandwich(&self) -> Result<()> {
        let mut chain: Vec<(&str, f64)> = vec![("omega", self.omega as f64)];
        if let Some(f) = self.chi_f {
            chain.push(("chi_f", (f - 1e-6).ceil()));
        }
        if let Some(x) = self.chi_exact {
            chain.push(("chi_exact", x as f64));
        }
        chain.push(("chi_ub", self.chi_ub as f64));
        chain.push(("max_degree+1", (self.max_degree + 1) as f64));
        for w in chain.windows(2) {
            if w[0].1 > w[1].1 {
                return Err(Error::InvariantViolated(format!(
                    "sandwich broken for n={} seed={}: {}={} > {}={}",
                    self.n, self.seed, w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        if self.chi_lb > self.chi_ub || self.omega > self.chi_lb {
            return Err(Error::InvariantViolated(format!(
                "bounds out of order for n={} seed={}: omega={} lb={} ub={}",
                self.n, self.seed, self.omega, self.chi_lb, self.chi_ub
            )));
        }
        if let Some(x) = self.chi_exact {
            if x < self.chi_lb {
                return Err(Error::InvariantViolated(format!("chi_exact {x} below lower bound {}", self.chi_lb)));
            }
        }
        Ok(())
    }

    fn csv_row(&self) -> Vec<String> {
        let opt_usize = |v: Option<usize>| v.map_or(String::new(), |x| x.to_string());
        let opt_f64 = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        vec![
            self.n.to_string(),
            self.r.to_string(),
            self.t.to_string(),
            self.regime.name().to_string(),
            self.seed.to_string(),
            self.omega.to_string(),
            self.chi_lb.to_string(),
            self.chi_ub.to_string(),
            opt_usize(self.chi_exact),
            opt_f64(self.chi_f),
            self.scan_phi0.to_string(),
            self.pred_fcli.to_string(),
            self.pred_fcol_lo.to_string(),
            opt_f64(self.pred_fcol_hi),
            self.ratio_chi_omega.to_string(),
        ]
    }
}

/// Predicted columns `(f_omega, f_chi lower, f_chi upper)` at `t`.
pub fn predictions(t: f64, catalog: &FeasibleCatalog) -> Result<(f64, f64, Option<f64>)> {
    let t = Intensity::new(t)?;
    let fcli = f_clique(t, catalog.norm())?;
    match f_chromatic_bounds(t, catalog) {
        Ok(b) => Ok((fcli, b.lower, Some(b.upper))),
        Err(Error::PackingDensityUnavailable(_)) => Ok((fcli, catalog.lower_value(t)?, None)),
        Err(e) => Err(e),
    }
}

/// Measures one sampled graph.
pub fn measure_trial(config: &SweepConfig, catalog: &FeasibleCatalog, n: usize, scale: f64, seed: u64, trial: usize) -> Result<SweepRecord> {
    let d = config.dim;
    let sigma = config.model.sigma();
    let norm = config.norm();
    let (r, t) = match config.scale {
        SweepScale::Intensity(_) => (radius_for_t(n as f64, scale, sigma, d), scale),
        SweepScale::Radius(_) => (scale, sigma * n as f64 * scale.powi(d as i32) / (n as f64).ln()),
    };
    let cloud = sample_points(&config.model, n, seed)?;
    let gg = build_graph(&cloud, r, &norm)?;
    let g = gg.graph();

    let scan = scan_ball(&cloud, 0.5 * r, &norm)?;
    // points in the closed half-radius ball about the witness are a clique
    let hint: Vec<usize> =
        (0..n).filter(|&i| norm.dist(cloud.point(i), &scan.centre) <= 0.5 * r).collect();
    let omega = clique_number_with_hint(g, &hint).size;
    let dual = if scan.exact { Some(scan.value) } else { None };
    let bounds = chromatic_bounds(g, &[gg.grid_order()], dual);
    let chi_lb = bounds.lower.max(omega);
    let chi_ub = bounds.upper;

    let largest_component = g.components().iter().map(Vec::len).max().unwrap_or(0);
    let chi_exact = if chi_lb == chi_ub {
        Some(chi_ub)
    } else if largest_component <= config.exact_chi_max_component {
        match chromatic_number_exact(g, config.node_budget) {
            Ok(c) => Some(c.palette),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let chi_f = if largest_component <= config.chi_f_max_component {
        match fractional_chromatic(g, CHI_F_TOL) {
            Ok(sol) => Some(sol.value),
            Err(Error::IterationCap(_)) | Err(Error::NonConvergence(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let (pred_fcli, pred_fcol_lo, pred_fcol_hi) = predictions(t, catalog)?;
    let mean_count = sigma * n as f64 * r.powi(d as i32);
    Ok(SweepRecord {
        n,
        r,
        t,
        regime: classify_regime(n as f64, r, d, sigma),
        seed,
        trial,
        omega,
        chi_lb,
        chi_ub,
        chi_exact,
        chi_f,
        scan_phi0: scan.value,
        max_degree: g.max_degree(),
        pred_fcli,
        pred_fcol_lo,
        pred_fcol_hi,
        ratio_chi_omega: if omega == 0 { 0.0 } else { chi_ub as f64 / omega as f64 },
        omega_scaled: omega as f64 / mean_count,
    })
}

/// Runs every `(n, t, trial)` cell, checks the sandwich on each record and
/// writes the CSV when an output path is configured. Records come back
/// sorted by `(n index, t index, trial)`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let norm = config.norm();
    let packing = packing_density_or(&norm, config.delta).ok();
    let catalog = FeasibleCatalog::standard_with_packing(norm, packing);
    let scales = match &config.scale {
        SweepScale::Intensity(v) | SweepScale::Radius(v) => v.clone(),
    };
    let mut jobs = Vec::new();
    for (i, &n) in config.n_values.iter().enumerate() {
        for (j, &s) in scales.iter().enumerate() {
            for k in 0..config.trials {
                jobs.push((i, j, k, n, s));
            }
        }
    }
    let mut results: Vec<((usize, usize, usize), SweepRecord)> = jobs
        .par_iter()
        .map(|&(i, j, k, n, s)| {
            let seed = config.trial_seed(i, j, k);
            measure_trial(config, &catalog, n, s, seed, k).map(|rec| ((i, j, k), rec))
        })
        .collect::<Result<_>>()?;
    results.sort_by_key(|(key, _)| *key);
    let records: Vec<SweepRecord> = results.into_iter().map(|(_, r)| r).collect();
    for rec in &records {
        rec.check_sandwich()?;
    }
    if let Some(path) = &config.output {
        let file = std::fs::File::create(path)?;
        write_csv(&records, std::io::BufWriter::new(file))?;
    }
    Ok(records)
}

pub fn write_csv(records: &[SweepRecord], w: impl Write) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(CSV_HEADER)?;
    for rec in records {
        writer.write_record(rec.csv_row())?;
    }
    writer.flush()?;
    Ok(())
}

/// The graph's chromatic number is at most this multiple of its clique
/// number, from covering a ball by half-radius balls.
pub fn covering_multiple(norm: &NormSpec) -> u64 {
    crate::geometry::clique_cover_factor(norm)
}

/// Convenience for callers holding only a graph: the sandwich chain from
/// scratch, with exact values where affordable.
pub fn graph_summary(g: &Graph, exact_cap: usize, chi_f_cap: usize) -> Result<GraphSummary> {
    let omega = crate::graphkit::clique_number(g).size;
    let bounds = chromatic_bounds(g, &[], None);
    let largest = g.components().iter().map(Vec::len).max().unwrap_or(0);
    let chi_exact = if largest <= exact_cap {
        match chromatic_number_exact(g, crate::graphkit::DEFAULT_NODE_BUDGET) {
            Ok(c) => Some(c.palette),
            Err(Error::BudgetExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let chi_f = if largest <= chi_f_cap { Some(fractional_chromatic(g, CHI_F_TOL)?.value) } else { None };
    Ok(GraphSummary {
        n: g.n(),
        edges: g.edge_count(),
        max_degree: g.max_degree(),
        omega,
        chi_lb: bounds.lower.max(omega),
        chi_ub: bounds.upper,
        chi_exact,
        chi_f,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphSummary {
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub omega: usize,
    pub chi_lb: usize,
    pub chi_ub: usize,
    pub chi_exact: Option<usize>,
    pub chi_f: Option<f64>,
}
