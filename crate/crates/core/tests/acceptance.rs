//! Acceptance suite. Runs every criterion in order, prints one line per
//! criterion and exits nonzero if any fails or exceeds its time limit.

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rgglab::geometry::NormSpec;
use rgglab::graphkit::{
    chromatic_number_exact, clique_number, fractional_chromatic, fractional_chromatic_exact, grid_lp_colouring, Graph,
};
use rgglab::lab::{run_sweep, SweepConfig, SweepRecord, SweepScale};
use rgglab::limits::{
    f_chromatic_bounds, f_clique, mu_beta, rate_function, solve_c, very_sparse_level, xi, FeasibleCatalog,
    FunctionProfile, Intensity, RadialLevels, Ring,
};
use rgglab::rgg::{build_graph, radius_for_t, sample_points, splitmix_at, unit_f64, DensityModel};
use rgglab::scan::{scan_ball, scan_radial};
use rgglab::PointCloud;

type Outcome = Result<String, String>;

struct Rng {
    seed: u64,
    counter: u64,
}

impl Rng {
    fn new(seed: u64) -> Self {
        Self { seed, counter: 0 }
    }
    fn unit(&mut self) -> f64 {
        self.counter += 1;
        unit_f64(splitmix_at(self.seed, self.counter))
    }
    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
    fn below(&mut self, n: usize) -> usize {
        ((self.unit() * n as f64) as usize).min(n - 1)
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn fin(t: f64) -> Intensity {
    Intensity::new(t).expect("positive t")
}

fn random_profile(rng: &mut Rng) -> FunctionProfile {
    let levels = 1 + rng.below(4);
    FunctionProfile::new((0..levels).map(|_| (rng.range(0.05, 5.0), rng.range(0.01, 3.0)))).expect("valid profile")
}

fn random_cloud(rng: &mut Rng, n: usize, side: f64) -> PointCloud {
    let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![side * rng.unit(), side * rng.unit()]).collect();
    PointCloud::from_points(2, &pts, 1.0).expect("valid cloud")
}

fn analytic_identities() -> Outcome {
    ensure(rate_function(1.0).map_err(|e| e.to_string())? == 0.0, || "H(1) is not exactly 0".into())?;
    let c = solve_c(1.0, fin(1.0)).map_err(|e| e.to_string())?;
    ensure((c - std::f64::consts::E).abs() <= 1e-10, || format!("c(1,1) = {c}"))?;
    let mut rng = Rng::new(1);
    for _ in 0..50 {
        let w = rng.range(1e-3, 50.0);
        let c = solve_c(w, Intensity::Infinite).map_err(|e| e.to_string())?;
        ensure(c == w, || format!("c({w}, inf) = {c}"))?;
    }
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let w = rng.range(1e-3, 10.0);
        let t = 10f64.powf(rng.range(-2.0, 4.0));
        let a = xi(&FunctionProfile::indicator(w, 1.0).map_err(|e| e.to_string())?, fin(t)).map_err(|e| e.to_string())?;
        let b = solve_c(w, fin(t)).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs() / b.max(1.0));
        ensure(close(a, b, 1e-10), || format!("xi(1_W) = {a} but c = {b} at w={w} t={t}"))?;
    }
    Ok(format!("worst indicator mismatch {worst:.1e}"))
}

fn weighted_integral_properties() -> Outcome {
    const TOL: f64 = 1e-9;
    let le = |a: f64, b: f64| a <= b + TOL * a.abs().max(b.abs()).max(1.0);
    let mut rng = Rng::new(2);
    let mut checks = 0usize;
    for case in 0..1000 {
        let phi = random_profile(&mut rng);
        let other = random_profile(&mut rng);
        let bumped = FunctionProfile::new(phi.levels().iter().map(|l| (l.value * (1.0 + rng.unit()), l.volume)))
            .map_err(|e| e.to_string())?;
        let lambda = rng.range(1e-3, 10.0);
        let shrink = rng.range(0.05, 0.999);
        let h = 10f64.powf(rng.range(-3.0, 3.0));
        for &t in &[0.1, 1.0, 10.0, 1e3] {
            let x = |p: &FunctionProfile, t: f64| xi(p, fin(t)).map_err(|e| e.to_string());
            let base = x(&phi, t)?;
            let ctx = |item: &str| format!("{item} fails on profile {case} at t={t}: {phi:?}");
            ensure(le(base, x(&bumped, t)?), || ctx("monotonicity"))?;
            let scaled = x(&phi.scale_values(lambda).map_err(|e| e.to_string())?, t)?;
            ensure(close(scaled, lambda * base, TOL), || ctx("homogeneity"))?;
            ensure(le(x(&phi.disjoint_sum(&other), t)?, base + x(&other, t)?), || ctx("subadditivity"))?;
            let spread = x(&phi.scale_volumes(shrink.powi(-2)).map_err(|e| e.to_string())?, t)?;
            ensure(le(base, spread) && le(spread, shrink.powi(-2) * base), || ctx("spreading"))?;
            let later = x(&phi, t + h)?;
            ensure(le(t / (t + h) * base, later) && le(later, base), || ctx("intensity monotonicity"))?;
            checks += 5;
        }
        let mut prev = f64::INFINITY;
        for k in 0..=6 {
            let v = xi(&phi, fin(10f64.powi(k))).map_err(|e| e.to_string())?;
            ensure(le(v, prev) && le(phi.integral(), v), || format!("large-t limit fails on profile {case} at k={k}"))?;
            prev = v;
        }
        let at_inf = xi(&phi, Intensity::Infinite).map_err(|e| e.to_string())?;
        ensure(close(at_inf, phi.integral(), TOL), || format!("xi(phi, inf) != integral on profile {case}"))?;
        checks += 1;
    }
    Ok(format!("{checks} property checks"))
}

fn two_level_endpoints() -> Outcome {
    let norm = NormSpec::euclidean(2);
    let mut report = Vec::new();
    for &t in &[0.1, 1.0, 10.0] {
        let mu = |b: f64| mu_beta(b, fin(t), &norm).map_err(|e| e.to_string());
        let ends = mu(0.0)?.max(mu(1.0)?);
        let mut grid_max = f64::NEG_INFINITY;
        for i in 0..=100 {
            grid_max = grid_max.max(mu(i as f64 / 100.0)?);
        }
        ensure(close(grid_max, ends, 1e-9), || format!("t={t}: grid max {grid_max} vs endpoints {ends}"))?;
        report.push(format!("t={t}: {ends:.6}"));
    }
    Ok(report.join(", "))
}

fn max_norm_collapse() -> Outcome {
    let mut worst = 0.0f64;
    for d in 1..=3 {
        let norm = NormSpec::max_norm(d);
        let catalog = FeasibleCatalog::standard(norm);
        for i in 0..20 {
            let t = 10f64.powf(-2.0 + 6.0 * i as f64 / 19.0);
            let b = f_chromatic_bounds(fin(t), &catalog).map_err(|e| e.to_string())?;
            let f = f_clique(fin(t), &norm).map_err(|e| e.to_string())?;
            let err = (b.lower - f).abs().max((b.upper - f).abs());
            worst = worst.max(err);
            ensure(err <= 1e-10, || format!("d={d} t={t}: bounds [{}, {}] vs f_omega {f}", b.lower, b.upper))?;
        }
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn small_geometric_graph(rng: &mut Rng, n: usize) -> Graph {
    let cloud = random_cloud(rng, n, 1.0);
    let r = rng.range(0.2, 0.7);
    build_graph(&cloud, r, &NormSpec::euclidean(2)).expect("valid graph").graph().clone()
}

fn fractional_oracle() -> Outcome {
    let mut rng = Rng::new(5);
    let mut worst_value = 0.0f64;
    let mut worst_gap = 0.0f64;
    for case in 0..200 {
        let n = 1 + case % 8;
        let g = small_geometric_graph(&mut rng, n);
        let sol = fractional_chromatic(&g, 1e-9).map_err(|e| format!("instance {case}: {e}"))?;
        sol.verify(&g, 1e-9).map_err(|e| format!("instance {case}: {e}"))?;
        let exact = fractional_chromatic_exact(&g).map_err(|e| e.to_string())?.to_f64().expect("finite");
        worst_value = worst_value.max((sol.value - exact).abs());
        worst_gap = worst_gap.max((sol.value - sol.dual_value).abs());
        ensure((sol.value - exact).abs() <= 1e-6, || format!("instance {case}: {} vs exact {exact}", sol.value))?;
        ensure((sol.value - sol.dual_value).abs() <= 2e-6, || format!("instance {case}: dual gap {}", sol.gap))?;
    }
    Ok(format!("max |value - exact| {worst_value:.1e}, max dual gap {worst_gap:.1e}"))
}

fn brute_clique(g: &Graph) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&m| {
            let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            g.is_clique(&vs)
        })
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Minimum number of stable sets covering the vertex set, by dynamic
/// programming over subsets.
fn brute_chromatic(g: &Graph) -> usize {
    let n = g.n();
    let full = (1usize << n) - 1;
    let stable: Vec<bool> = (0..=full)
        .map(|m| {
            let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            g.is_stable(&vs)
        })
        .collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for m in 1..=full {
        let low = m & m.wrapping_neg();
        let rest = m ^ low;
        // enumerate stable subsets of m containing its lowest vertex
        let mut sub = rest;
        loop {
            let s = sub | low;
            if stable[s] && best[m ^ s] != usize::MAX {
                best[m] = best[m].min(best[m ^ s] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full]
}

fn exact_graph_oracle() -> Outcome {
    let mut rng = Rng::new(6);
    for case in 0..100 {
        let n = 1 + case % 12;
        let g = if case % 2 == 0 {
            small_geometric_graph(&mut rng, n)
        } else {
            let p = rng.range(0.2, 0.8);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.unit() < p {
                        edges.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, &edges).expect("valid edges")
        };
        let omega = clique_number(&g);
        ensure(g.is_clique(&omega.vertices), || format!("instance {case}: witness is not a clique"))?;
        ensure(omega.size == brute_clique(&g), || format!("instance {case}: clique number {}", omega.size))?;
        let chi = chromatic_number_exact(&g, u64::MAX).map_err(|e| format!("instance {case}: {e}"))?;
        chi.verify(&g).map_err(|e| format!("instance {case}: {e}"))?;
        let expected = brute_chromatic(&g);
        ensure(chi.palette == expected, || format!("instance {case}: chi {} vs {expected}", chi.palette))?;
    }
    let c5 = Graph::cycle(5);
    let omega = clique_number(&c5).size;
    let chi_f = fractional_chromatic(&c5, 1e-9).map_err(|e| e.to_string())?.value;
    let chi_f_exact = fractional_chromatic_exact(&c5).map_err(|e| e.to_string())?;
    let chi = chromatic_number_exact(&c5, u64::MAX).map_err(|e| e.to_string())?.palette;
    ensure(
        omega == 2 && (chi_f - 2.5).abs() < 1e-9 && chi_f_exact.to_f64() == Some(2.5) && chi == 3,
        || format!("C5 gives ({omega}, {chi_f}, {chi})"),
    )?;
    Ok("100 instances match enumeration; C5 = (2, 2.5, 3)".into())
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Smallest enclosing circle by the incremental algorithm: centre and
/// squared radius.
fn enclosing_circle(pts: &[&[f64]]) -> ([f64; 2], f64) {
    let inside = |c: &[f64; 2], r2: f64, p: &[f64]| dist2(c, p) <= r2 * (1.0 + 1e-12) + 1e-300;
    let mut c = [pts[0][0], pts[0][1]];
    let mut r2 = 0.0;
    for i in 1..pts.len() {
        if inside(&c, r2, pts[i]) {
            continue;
        }
        c = [pts[i][0], pts[i][1]];
        r2 = 0.0;
        for j in 0..i {
            if inside(&c, r2, pts[j]) {
                continue;
            }
            c = [0.5 * (pts[i][0] + pts[j][0]), 0.5 * (pts[i][1] + pts[j][1])];
            r2 = dist2(&c, pts[i]);
            for k in 0..j {
                if inside(&c, r2, pts[k]) {
                    continue;
                }
                let (a, b, p) = (pts[i], pts[j], pts[k]);
                let (bx, by, px, py) = (b[0] - a[0], b[1] - a[1], p[0] - a[0], p[1] - a[1]);
                let det = 2.0 * (bx * py - by * px);
                let (b2, p2) = (bx * bx + by * by, px * px + py * py);
                c = [a[0] + (py * b2 - by * p2) / det, a[1] + (bx * p2 - px * b2) / det];
                r2 = dist2(&c, a);
            }
        }
    }
    (c, r2)
}

/// Largest subset whose smallest enclosing circle has radius at most `rho`.
#[allow(clippy::needless_range_loop)]
fn enclosing_subset_oracle(cloud: &PointCloud, rho: f64) -> usize {
    let n = cloud.len();
    let limit = rho * rho * (1.0 + 1e-9);
    let mut far = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if dist2(cloud.point(i), cloud.point(j)) > 4.0 * limit {
                far[i] |= 1 << j;
            }
        }
    }
    let mut by_size: Vec<u32> = (1u32..1 << n).collect();
    by_size.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    for m in by_size {
        if (0..n).any(|i| m >> i & 1 == 1 && far[i] & m != 0) {
            continue;
        }
        let pts: Vec<&[f64]> = (0..n).filter(|&i| m >> i & 1 == 1).map(|i| cloud.point(i)).collect();
        if enclosing_circle(&pts).1 <= limit {
            return pts.len();
        }
    }
    0
}

/// Maximum of the radial sum over a square grid of spacing `h` covering every
/// centre with a nonzero sum.
fn grid_oracle(cloud: &PointCloud, rings: &[Ring], r: f64, h: f64) -> f64 {
    let reach = r * rings.last().expect("rings").radius;
    let radii2: Vec<f64> = rings.iter().map(|g| (r * g.radius).powi(2)).collect();
    let lo: Vec<f64> = (0..2).map(|a| cloud.points().map(|p| p[a]).fold(f64::INFINITY, f64::min) - reach).collect();
    let hi: Vec<f64> = (0..2).map(|a| cloud.points().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max) + reach).collect();
    let steps: Vec<usize> = (0..2).map(|a| ((hi[a] - lo[a]) / h).ceil() as usize).collect();
    let mut best = 0.0f64;
    for ix in 0..=steps[0] {
        for iy in 0..=steps[1] {
            let x = [lo[0] + ix as f64 * h, lo[1] + iy as f64 * h];
            let mut s = 0.0;
            for p in cloud.points() {
                let d2 = dist2(&x, p);
                if let Some(k) = radii2.iter().position(|&q| d2 <= q) {
                    s += rings[k].value;
                }
            }
            best = best.max(s);
        }
    }
    best
}

fn scan_exactness() -> Outcome {
    let norm = NormSpec::euclidean(2);
    let mut rng = Rng::new(7);
    for case in 0..100 {
        let n = 1 + case % 15;
        let cloud = random_cloud(&mut rng, n, 1.0);
        let rho = rng.range(0.05, 0.45);
        let scan = scan_ball(&cloud, rho, &norm).map_err(|e| e.to_string())?;
        let oracle = enclosing_subset_oracle(&cloud, rho);
        ensure(scan.exact && scan.value == oracle as f64, || {
            format!("cloud {case}: scan {} vs enclosing-circle oracle {oracle}", scan.value)
        })?;
    }
    let mut worst = 0.0f64;
    for case in 0..50 {
        let n = 1 + case % 12;
        let cloud = random_cloud(&mut rng, n, 0.5);
        let r = 0.25;
        let phi = if case % 2 == 0 {
            RadialLevels::two_level(norm, rng.range(0.05, 0.95))
        } else {
            let inner = rng.range(0.1, 0.9);
            let high = rng.range(0.3, 2.0);
            RadialLevels::new(
                norm,
                vec![Ring { radius: inner, value: high }, Ring { radius: 1.0, value: high * rng.range(0.05, 0.95) }],
            )
        }
        .map_err(|e| e.to_string())?;
        let exact = scan_radial(&cloud, &phi, r).map_err(|e| e.to_string())?;
        let grid = grid_oracle(&cloud, phi.rings(), r, r / 500.0);
        let weight = phi.rings()[0].value;
        worst = worst.max(exact.value - grid);
        ensure(exact.exact && exact.value >= grid - 1e-9 && exact.value - grid <= weight + 1e-9, || {
            format!("cloud {case}: radial scan {} vs grid {grid} (point weight {weight})", exact.value)
        })?;
    }
    Ok(format!("100 ball scans exact; radial scans exceed grid by at most {worst:.3}"))
}

fn very_sparse(records: &mut Vec<SweepRecord>) -> Outcome {
    let n = 100_000usize;
    let r = (n as f64).powf(-0.75);
    let level = very_sparse_level(n as f64, r, 2).map_err(|e| e.to_string())?;
    ensure(level == 2, || format!("very sparse level {level}"))?;
    let mut config = SweepConfig::new(2, vec![n], SweepScale::Radius(vec![r]));
    config.trials = 50;
    config.seed = 1;
    let recs = run_sweep(&config).map_err(|e| e.to_string())?;
    for rec in &recs {
        let chi = rec.chi_exact.ok_or_else(|| format!("seed {}: exact chi not computed", rec.seed))?;
        ensure(chi == rec.omega && (2..=3).contains(&chi), || {
            format!("seed {}: omega {} chi {chi}", rec.seed, rec.omega)
        })?;
    }
    let threes = recs.iter().filter(|r| r.omega == 3).count();
    records.extend(recs);
    Ok(format!("level 2; chi = omega in 50/50 trials ({threes} with omega 3)"))
}

fn sandwich(records: &mut Vec<SweepRecord>) -> Outcome {
    let grids: Vec<(usize, f64, Vec<usize>, Vec<f64>)> = vec![
        (2, 2.0, vec![300, 2000], vec![0.005, 0.2, 1.0, 10.0, 150.0]),
        (2, f64::INFINITY, vec![400], vec![0.05, 1.0, 20.0]),
        (1, 2.0, vec![500], vec![0.1, 5.0]),
        (3, 2.0, vec![300], vec![0.1, 2.0]),
    ];
    for (dim, p, ns, ts) in grids {
        let mut config = SweepConfig::new(dim, ns, SweepScale::Intensity(ts));
        config.norm_p = p;
        config.trials = 3;
        config.seed = 9;
        records.extend(run_sweep(&config).map_err(|e| e.to_string())?);
    }
    let mut with_exact = 0;
    let mut with_f = 0;
    for rec in records.iter() {
        let mut chain = vec![rec.omega as f64];
        if let Some(f) = rec.chi_f {
            chain.push((f - 1e-6).ceil());
            with_f += 1;
        }
        if let Some(x) = rec.chi_exact {
            chain.push(x as f64);
            with_exact += 1;
        }
        chain.push(rec.chi_ub as f64);
        chain.push(rec.max_degree as f64 + 1.0);
        ensure(chain.windows(2).all(|w| w[0] <= w[1]), || format!("record n={} seed={}: {chain:?}", rec.n, rec.seed))?;
    }
    Ok(format!("{} records ({with_exact} with exact chi, {with_f} with fractional chi)", records.len()))
}

fn intermediate_trend(records: &mut Vec<SweepRecord>) -> Outcome {
    let mut config = SweepConfig::new(2, vec![30_000], SweepScale::Intensity(vec![1.0, 40.0]));
    config.trials = 10;
    config.seed = 10;
    let recs = run_sweep(&config).map_err(|e| e.to_string())?;
    let mean = |t: f64, f: &dyn Fn(&SweepRecord) -> f64| {
        let sel: Vec<f64> = recs.iter().filter(|r| r.t == t).map(f).collect();
        sel.iter().sum::<f64>() / sel.len() as f64
    };
    let mut parts = Vec::new();
    for t in [1.0, 40.0] {
        let scaled = mean(t, &|r| r.omega_scaled);
        let predicted = f_clique(fin(t), &NormSpec::euclidean(2)).map_err(|e| e.to_string())?;
        let rel = (scaled - predicted).abs() / predicted;
        parts.push(format!("t={t}: omega/(n r^2) {scaled:.3} vs {predicted:.3}"));
        ensure(rel <= 0.2, || format!("t={t}: mean omega/(n r^2) {scaled} is {:.1}% from {predicted}", 100.0 * rel))?;
    }
    let low = mean(1.0, &|r| r.ratio_chi_omega);
    let high = mean(40.0, &|r| r.ratio_chi_omega);
    parts.push(format!("chi_ub/omega {low:.4} -> {high:.4}"));
    records.extend(recs);
    ensure(high > low, || parts.join("; "))?;
    Ok(parts.join("; "))
}

fn grid_lp_guarantee() -> Outcome {
    let norm = NormSpec::euclidean(2);
    let (n, eps, k) = (500usize, 0.5, 2usize);
    let cloud = sample_points(&DensityModel::uniform(2), n, 11).map_err(|e| e.to_string())?;
    let r = radius_for_t(n as f64, 10.0, 1.0, 2);
    let report = grid_lp_colouring(&cloud, r, &norm, eps, k).map_err(|e| e.to_string())?;
    let gg = build_graph(&cloud, r, &norm).map_err(|e| e.to_string())?;
    report.colouring.verify(gg.graph()).map_err(|e| format!("colouring not proper: {e}"))?;
    let span = ((1.0 + eps * norm.cube_diameter()) / eps).ceil();
    let stretch = (1.0 + span / (2.0 * k as f64)).powi(2);
    let scan = report.scan_values.iter().copied().fold(0.0, f64::max);
    let bound = stretch * scan + ((2 * k) as f64).powi(4) * stretch;
    ensure((bound - report.guarantee).abs() <= 1e-9 * bound, || {
        format!("reported guarantee {} but the scan values give {bound}", report.guarantee)
    })?;
    ensure(report.colouring.palette as f64 <= bound, || format!("palette {} exceeds {bound}", report.colouring.palette))?;
    Ok(format!("palette {} <= {bound:.1} (max window scan {scan:.2})", report.colouring.palette))
}

fn main() {
    let mut records = Vec::new();
    #[allow(clippy::type_complexity)]
    let criteria: Vec<(&str, u64, Box<dyn FnOnce(&mut Vec<SweepRecord>) -> Outcome>)> = vec![
        ("analytic identities", 1, Box::new(|_| analytic_identities())),
        ("weighted integral properties", 10, Box::new(|_| weighted_integral_properties())),
        ("two-level endpoint maximum", 5, Box::new(|_| two_level_endpoints())),
        ("max-norm collapse", 1, Box::new(|_| max_norm_collapse())),
        ("fractional chromatic oracle", 120, Box::new(|_| fractional_oracle())),
        ("clique and chromatic oracle", 120, Box::new(|_| exact_graph_oracle())),
        ("scan exactness", 120, Box::new(|_| scan_exactness())),
        ("very sparse regime", 300, Box::new(very_sparse)),
        ("intermediate trend", 1800, Box::new(intermediate_trend)),
        ("grid LP guarantee", 600, Box::new(|_| grid_lp_guarantee())),
        ("sandwich on every record", 600, Box::new(sandwich)),
    ];
    let total = criteria.len();
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run(&mut records);
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{detail}; took {:.1} s, limit {limit} s", elapsed.as_secs_f64()))
            }
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{:>2}/{total}] {status} {name} ({:.2} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", total - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
