//! `rgglab`: limit tables, sampling, scans, graph invariants and sweeps.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rgglab::geometry::{packing_density_or, NormSpec};
use rgglab::lab::{graph_summary, run_sweep, write_csv, SweepConfig};
use rgglab::limits::{
    f_clique, f_chromatic_bounds, f_ratio_bounds, mu_beta, rate_function, solve_c, FeasibleCatalog, Intensity,
    RadialLevels, Ring,
};
use rgglab::rgg::{build_graph, radius_for_t, sample_points, DensityModel};
use rgglab::scan::{scan_ball, scan_radial};
use rgglab::{Graph, PointCloud};

#[derive(Parser)]
#[command(name = "rgglab", version, about = "Random geometric graph laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the limit functions over a grid of t (and beta)
    Limits(LimitsArgs),
    /// Sample a point cloud and optionally its graph
    Sample(SampleArgs),
    /// Scan statistics of a point cloud
    Scan(ScanArgs),
    /// Clique, chromatic and fractional chromatic numbers
    Graph(GraphArgs),
    /// Run a sweep described by a config file
    Sweep(SweepArgs),
}

#[derive(Args)]
struct NormArgs {
    /// Dimension
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// p of the norm; `inf` for the max norm
    #[arg(long, default_value = "2", value_parser = parse_p)]
    norm: f64,
}

impl NormArgs {
    fn spec(&self) -> Result<NormSpec> {
        Ok(NormSpec::new(self.norm, self.dim)?)
    }
}

#[derive(Args)]
struct LimitsArgs {
    #[command(flatten)]
    norm: NormArgs,
    /// Values of t = sigma n r^d / ln n (`inf` allowed)
    #[arg(long, value_delimiter = ',', value_parser = parse_p, required = true)]
    t: Vec<f64>,
    /// Also tabulate mu(beta) at these beta
    #[arg(long, value_delimiter = ',')]
    beta: Vec<f64>,
    /// Also tabulate c(w, t) for this volume w
    #[arg(long)]
    w: Option<f64>,
    /// Also tabulate the rate function H at these points
    #[arg(long, value_delimiter = ',')]
    h: Vec<f64>,
    /// Packing density for norms without a known one
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    norm: NormArgs,
    /// Number of points
    #[arg(long)]
    n: usize,
    /// Density: `uniform` or `half_cube`
    #[arg(long, default_value = "uniform")]
    model: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Threshold radius for the graph
    #[arg(long, conflicts_with = "t")]
    r: Option<f64>,
    /// Intensity fixing the radius
    #[arg(long)]
    t: Option<f64>,
    /// Cloud output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Edge-list output file; needs --r or --t
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    /// Cloud file
    #[arg(long)]
    cloud: PathBuf,
    /// p of the norm
    #[arg(long, default_value = "2", value_parser = parse_p)]
    norm: f64,
    /// Ball radius
    #[arg(long, required_unless_present = "rings")]
    rho: Option<f64>,
    /// Radial function as `radius:value` pairs, radii in units of --r
    #[arg(long, value_delimiter = ',', requires = "r")]
    rings: Vec<String>,
    /// Scale of the radial function
    #[arg(long)]
    r: Option<f64>,
}

#[derive(Args)]
struct GraphArgs {
    /// Cloud file; the graph joins points within --r
    #[arg(long, required_unless_present = "edges", requires = "r")]
    cloud: Option<PathBuf>,
    /// Edge-list file
    #[arg(long, conflicts_with = "cloud")]
    edges: Option<PathBuf>,
    #[arg(long)]
    r: Option<f64>,
    /// p of the norm
    #[arg(long, default_value = "2", value_parser = parse_p)]
    norm: f64,
    /// Largest component for the exact chromatic number
    #[arg(long, default_value_t = 60)]
    exact_max: usize,
    /// Largest component for the fractional chromatic number
    #[arg(long, default_value_t = 150)]
    fractional_max: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Config file of `key = value` lines
    #[arg(long)]
    config: PathBuf,
    /// CSV path, overriding the config's `output`
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_p(s: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse().map_err(|_| format!("not a number: `{other}`")),
    }
}

fn open(path: &PathBuf) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("cannot open {}", path.display()))?))
}

fn read_cloud(path: &PathBuf) -> Result<PointCloud> {
    PointCloud::read_from(open(path)?).with_context(|| format!("reading {}", path.display()))
}

fn fmt_opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or("-".into(), |x| x.to_string())
}

fn limits(args: LimitsArgs) -> Result<()> {
    let norm = args.norm.spec()?;
    let ts = args.t.iter().map(|&t| Intensity::new(t)).collect::<rgglab::Result<Vec<_>>>()?;
    let packing = packing_density_or(&norm, args.delta).ok();
    let catalog = FeasibleCatalog::standard_with_packing(norm, packing);
    if packing.is_none() {
        eprintln!("note: no packing density known for {norm}; upper bounds omitted (use --delta)");
    }
    let w_col = args.w.map(|w| format!("{:>12}", format!("c({w},t)"))).unwrap_or_default();
    println!(
        "{:>10} {w_col}{:>12} {:>12} {:>12} {:>12} {:>12}",
        "t", "f_omega", "f_chi_lo", "f_chi_hi", "f_rat_lo", "f_rat_hi"
    );
    for (&t, &it) in args.t.iter().zip(&ts) {
        let w_val = match args.w {
            Some(w) => format!("{:>12.6}", solve_c(w, it)?),
            None => String::new(),
        };
        let fw = f_clique(it, &norm)?;
        let (lo, hi, rlo, rhi) = match (f_chromatic_bounds(it, &catalog), f_ratio_bounds(it, &catalog)) {
            (Ok(c), Ok(q)) => (c.lower, Some(c.upper), q.lower, Some(q.upper)),
            _ => {
                let lo = catalog.lower_value(it)?;
                (lo, None, lo / fw, None)
            }
        };
        let col = |v: Option<f64>| v.map_or(format!("{:>12}", "-"), |x| format!("{x:>12.6}"));
        println!("{t:>10} {w_val}{fw:>12.6} {lo:>12.6} {} {rlo:>12.6} {}", col(hi), col(rhi));
    }
    if !args.beta.is_empty() {
        println!();
        println!("{:>10} {:>10} {:>12}", "t", "beta", "mu");
        for (&t, &it) in args.t.iter().zip(&ts) {
            for &b in &args.beta {
                println!("{t:>10} {b:>10} {:>12.6}", mu_beta(b, it, &norm)?);
            }
        }
    }
    if !args.h.is_empty() {
        println!();
        println!("{:>10} {:>12}", "x", "H(x)");
        for &x in &args.h {
            println!("{x:>10} {:>12.6}", rate_function(x)?);
        }
    }
    Ok(())
}

fn sample(args: SampleArgs) -> Result<()> {
    let dim = args.norm.dim;
    let model = match args.model.as_str() {
        "uniform" => DensityModel::uniform(dim),
        "half_cube" => DensityModel::half_cube(dim),
        other => bail!("unknown model `{other}` (expected uniform or half_cube)"),
    };
    let cloud = sample_points(&model, args.n, args.seed)?;
    match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
            cloud.write_to(&mut w)?;
            w.flush()?;
        }
        None => cloud.write_to(std::io::stdout().lock())?,
    }
    let r = match (args.r, args.t) {
        (Some(r), _) => Some(r),
        (None, Some(t)) => Some(radius_for_t(args.n as f64, t, model.sigma(), dim)),
        (None, None) => None,
    };
    if let Some(path) = &args.graph {
        let Some(r) = r else { bail!("--graph needs --r or --t") };
        let gg = build_graph(&cloud, r, &args.norm.spec()?)?;
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?);
        gg.graph().write_edge_list(&mut w)?;
        w.flush()?;
        eprintln!("r = {r}, {} edges", gg.graph().edge_count());
    }
    Ok(())
}

fn parse_rings(specs: &[String]) -> Result<Vec<Ring>> {
    specs
        .iter()
        .map(|s| {
            let (radius, value) = s.split_once(':').with_context(|| format!("ring `{s}` is not radius:value"))?;
            Ok(Ring {
                radius: radius.trim().parse().with_context(|| format!("bad radius in `{s}`"))?,
                value: value.trim().parse().with_context(|| format!("bad value in `{s}`"))?,
            })
        })
        .collect()
}

fn scan(args: ScanArgs) -> Result<()> {
    let cloud = read_cloud(&args.cloud)?;
    let norm = NormSpec::new(args.norm, cloud.dim())?;
    let result = if args.rings.is_empty() {
        scan_ball(&cloud, args.rho.expect("required by clap"), &norm)?
    } else {
        let phi = RadialLevels::new(norm, parse_rings(&args.rings)?)?;
        scan_radial(&cloud, &phi, args.r.expect("required by clap"))?
    };
    let centre: Vec<String> = result.centre.iter().map(|x| x.to_string()).collect();
    println!("value  {}", result.value);
    println!("centre {}", centre.join(" "));
    println!("exact  {}", result.exact);
    println!("gap    {}", result.gap);
    Ok(())
}

fn graph(args: GraphArgs) -> Result<()> {
    let g: Graph = match (&args.cloud, &args.edges) {
        (Some(path), _) => {
            let cloud = read_cloud(path)?;
            let norm = NormSpec::new(args.norm, cloud.dim())?;
            build_graph(&cloud, args.r.expect("required by clap"), &norm)?.graph().clone()
        }
        (None, Some(path)) => Graph::read_edge_list(open(path)?).with_context(|| format!("reading {}", path.display()))?,
        (None, None) => unreachable!("clap requires one input"),
    };
    let s = graph_summary(&g, args.exact_max, args.fractional_max)?;
    println!("n          {}", s.n);
    println!("edges      {}", s.edges);
    println!("max_degree {}", s.max_degree);
    println!("omega      {}", s.omega);
    println!("chi_f      {}", fmt_opt(s.chi_f));
    println!("chi        {}", fmt_opt(s.chi_exact));
    println!("chi_lb     {}", s.chi_lb);
    println!("chi_ub     {}", s.chi_ub);
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut config = SweepConfig::from_file(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    if args.output.is_some() {
        config.output = args.output;
    }
    let records = run_sweep(&config)?;
    if config.output.is_none() {
        write_csv(&records, std::io::stdout().lock())?;
    } else {
        eprintln!("{} records written", records.len());
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("RGGLAB_THREADS") {
        let threads: usize = v.parse().with_context(|| format!("RGGLAB_THREADS must be a positive integer, got `{v}`"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let run = configure_threads().and_then(|()| match cli.command {
        Command::Limits(a) => limits(a),
        Command::Sample(a) => sample(a),
        Command::Scan(a) => scan(a),
        Command::Graph(a) => graph(a),
        Command::Sweep(a) => sweep(a),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
