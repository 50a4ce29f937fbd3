//! Scan statistics: the largest weighted count of points that a translate of
//! a ball, or of a radial step function, can cover.
//!
//! Euclidean planar and one-dimensional inputs are solved exactly. Other
//! norms and dimensions use a branch and bound over boxes of candidate
//! centres, which reports the remaining gap.
//!
//! Balls are closed. Distances are compared with a relative slack of
//! `1e-9` so that points lying on a candidate circle by construction are not
//! lost to rounding; the witness re-evaluation uses the same rule.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::f64::consts::TAU;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::NormSpec;
use crate::limits::{xi, FunctionProfile, Intensity, RadialLevels, Ring};
use crate::rgg::PointCloud;

/// Relative slack on every distance comparison.
pub const TIE_SLACK: f64 = 1e-9;
/// Coarse box side of the branch and bound, as a fraction of the outer radius.
pub const GRID_RESOLUTION: f64 = 1.0 / 64.0;
/// Boxes are refined down to this fraction of the coarse side.
pub const GRID_REFINEMENT: f64 = 1.0 / 8.0;
/// Cap on centre evaluations in the branch and bound.
pub const GRID_EVALUATION_BUDGET: u64 = 4_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub value: f64,
    /// A centre attaining `value`.
    pub centre: Vec<f64>,
    pub exact: bool,
    /// Upper bound on `true maximum - value`; zero when exact.
    pub gap: f64,
}

/// Nested closed balls with positive weights, radii increasing.
#[derive(Debug, Clone)]
struct Balls {
    radii: Vec<f64>,
    weights: Vec<f64>,
    norm: NormSpec,
}

impl Balls {
    fn outer(&self) -> f64 {
        *self.radii.last().expect("nonempty")
    }

    /// Weighted count at `centre` with every radius grown by `extra`.
    fn value_at(&self, index: &Index, centre: &[f64], extra: f64) -> f64 {
        let mut counts = vec![0u64; self.radii.len()];
        let reach = (self.outer() + extra) * (1.0 + TIE_SLACK);
        index.visit(centre, reach, |q| {
            let dist = self.norm.dist(centre, index.points.point(q));
            if let Some(j) = self.radii.iter().position(|&r| dist <= (r + extra) * (1.0 + TIE_SLACK)) {
                counts[j] += 1;
            }
        });
        // a point inside ball j is inside every larger ball
        let mut total = 0.0;
        let mut inside = 0u64;
        for (j, c) in counts.iter().enumerate() {
            inside += c;
            total += self.weights[j] * inside as f64;
        }
        total
    }
}

/// Points bucketed into cubes of a fixed side.
struct Index<'a> {
    points: &'a PointCloud,
    side: f64,
    cells: HashMap<Vec<i64>, Vec<u32>>,
}

impl<'a> Index<'a> {
    fn new(points: &'a PointCloud, side: f64) -> Self {
        let mut cells: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
        for (i, p) in points.points().enumerate() {
            cells.entry(Self::key(p, side)).or_default().push(i as u32);
        }
        Self { points, side, cells }
    }

    fn key(p: &[f64], side: f64) -> Vec<i64> {
        p.iter().map(|x| (x / side).floor() as i64).collect()
    }

    /// Calls `f` on every point of every cell meeting the box of half-width
    /// `radius` about `centre` (a superset of the ball in any p-norm).
    fn visit(&self, centre: &[f64], radius: f64, mut f: impl FnMut(usize)) {
        let lo: Vec<i64> = centre.iter().map(|x| ((x - radius) / self.side).floor() as i64).collect();
        let hi: Vec<i64> = centre.iter().map(|x| ((x + radius) / self.side).floor() as i64).collect();
        let mut key = lo.clone();
        loop {
            if let Some(members) = self.cells.get(&key) {
                for &q in members {
                    f(q as usize);
                }
            }
            let mut axis = 0;
            loop {
                if axis == key.len() {
                    return;
                }
                if key[axis] < hi[axis] {
                    key[axis] += 1;
                    break;
                }
                key[axis] = lo[axis];
                axis += 1;
            }
        }
    }
}

/// Strictly better candidate: larger value, then lexicographically smaller
/// centre.
fn better(value: f64, centre: &[f64], best_value: f64, best_centre: &[f64]) -> bool {
    match value.partial_cmp(&best_value).expect("finite values") {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => lex_less(centre, best_centre),
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("finite coordinates") {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    false
}

/// Largest number of points in a closed `norm`-ball of radius `rho`.
pub fn scan_ball(points: &PointCloud, rho: f64, norm: &NormSpec) -> Result<ScanResult> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!("scan radius must be positive, got {rho}")));
    }
    scan(points, &Balls { radii: vec![rho], weights: vec![1.0], norm: *norm })
}

/// Largest value of `sum_p phi((p - x) / r)` over centres `x`.
pub fn scan_radial(points: &PointCloud, phi: &RadialLevels, r: f64) -> Result<ScanResult> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("scale must be positive, got {r}")));
    }
    let radii = phi.rings().iter().map(|ring: &Ring| ring.radius * r).collect();
    scan(points, &Balls { radii, weights: phi.ball_weights(), norm: *phi.norm() })
}

/// `sum_p phi((p - centre) / r)` under the same closed-ball rule as the scans.
pub fn radial_sum(points: &PointCloud, phi: &RadialLevels, r: f64, centre: &[f64]) -> Result<f64> {
    if centre.len() != points.dim() {
        return Err(Error::DimensionMismatch { expected: points.dim(), found: centre.len() });
    }
    let radii: Vec<f64> = phi.rings().iter().map(|ring| ring.radius * r).collect();
    let balls = Balls { radii, weights: phi.ball_weights(), norm: *phi.norm() };
    let index = Index::new(points, 2.0 * balls.outer());
    Ok(balls.value_at(&index, centre, 0.0))
}

/// Points within `rho` of `centre` under the scans' closed-ball rule.
pub fn ball_count(points: &PointCloud, rho: f64, norm: &NormSpec, centre: &[f64]) -> Result<usize> {
    let phi = RadialLevels::ball(*norm, 1.0, 1.0)?;
    Ok(radial_sum(points, &phi, rho, centre)?.round() as usize)
}

/// Predicted scan value `sigma n r^d xi(phi, t)`.
pub fn expected_scan(phi: &FunctionProfile, n: f64, r: f64, sigma: f64, dim: usize, t: Intensity) -> Result<f64> {
    if !(n > 0.0 && r > 0.0 && sigma > 0.0) {
        return Err(Error::InvalidArgument("n, r and sigma must be positive".into()));
    }
    Ok(sigma * n * r.powi(dim as i32) * xi(phi, t)?)
}

fn scan(points: &PointCloud, balls: &Balls) -> Result<ScanResult> {
    let d = points.dim();
    if balls.norm.dim() != d {
        return Err(Error::DimensionMismatch { expected: balls.norm.dim(), found: d });
    }
    if points.is_empty() {
        return Ok(ScanResult { value: 0.0, centre: vec![0.0; d], exact: true, gap: 0.0 });
    }
    if d == 1 {
        Ok(scan_line(points, balls))
    } else if d == 2 && balls.norm.is_euclidean() {
        Ok(scan_plane(points, balls))
    } else {
        Ok(scan_boxes(points, balls))
    }
}

/// On the line the count only rises at left ends of the intervals
/// `[q - R_j, q + R_j]`, so those and the points are the candidates.
fn scan_line(points: &PointCloud, balls: &Balls) -> ScanResult {
    let index = Index::new(points, 2.0 * balls.outer());
    let mut candidates: Vec<f64> = points.coords().to_vec();
    for &x in points.coords() {
        for &r in &balls.radii {
            candidates.push(x - r);
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let values: Vec<f64> = candidates.par_iter().map(|&x| balls.value_at(&index, &[x], 0.0)).collect();
    let mut best = 0;
    for k in 1..values.len() {
        if values[k] > values[best] {
            best = k;
        }
    }
    ScanResult { value: values[best], centre: vec![candidates[best]], exact: true, gap: 0.0 }
}

/// Exact planar scan. For each point `p` and radius `R_i`, the centre
/// sweeps the circle of radius `R_i` about `p`; every other ball contributes
/// an arc of that circle. The maximum over the arrangement is attained at an
/// arc endpoint, and these together with the points are evaluated.
fn scan_plane(points: &PointCloud, balls: &Balls) -> ScanResult {
    let outer = balls.outer();
    let index = Index::new(points, 2.0 * outer);
    let n = points.len();
    // best value seen so far, as f64 bits (monotone for nonnegative values)
    let shared = AtomicU64::new(0f64.to_bits());

    let at_points = (0..n)
        .into_par_iter()
        .map(|i| {
            let c = points.point(i).to_vec();
            let v = balls.value_at(&index, &c, 0.0);
            shared.fetch_max(v.to_bits(), AtomicOrdering::Relaxed);
            (v, c)
        })
        .reduce_with(|a, b| if better(b.0, &b.1, a.0, &a.1) { b } else { a })
        .expect("nonempty cloud");

    let swept = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (0..balls.radii.len()).map(move |ring| (i, ring)))
        .filter_map(|(i, ring)| sweep_circle(points, balls, &index, i, ring, &shared))
        .reduce_with(|a, b| if better(b.0, &b.1, a.0, &a.1) { b } else { a });

    let (value, centre) = match swept {
        Some(s) if better(s.0, &s.1, at_points.0, &at_points.1) => s,
        _ => at_points,
    };
    ScanResult { value, centre, exact: true, gap: 0.0 }
}

/// Best candidate on the circle of radius `R_ring` about point `i`, if it
/// can reach the current best.
fn sweep_circle(
    points: &PointCloud,
    balls: &Balls,
    index: &Index,
    i: usize,
    ring: usize,
    shared: &AtomicU64,
) -> Option<(f64, Vec<f64>)> {
    let p = points.point(i);
    let radius = balls.radii[ring];
    let outer = balls.outer();
    let mut base = 0.0;
    let mut bound = 0.0;
    let mut events: Vec<(f64, bool, f64)> = Vec::new();
    index.visit(p, radius + outer, |q| {
        let x = points.point(q);
        let (dx, dy) = (x[0] - p[0], x[1] - p[1]);
        let dist = dx.hypot(dy);
        for (j, &rj) in balls.radii.iter().enumerate() {
            let w = balls.weights[j];
            if dist > (radius + rj) * (1.0 + TIE_SLACK) {
                continue;
            }
            bound += w;
            if dist <= (rj - radius).max(0.0) * (1.0 + TIE_SLACK) && rj >= radius * (1.0 - TIE_SLACK) {
                // ball j of q contains the whole circle
                base += w;
                continue;
            }
            if dist == 0.0 {
                continue;
            }
            let cos_half = ((radius * radius + dist * dist - rj * rj) / (2.0 * radius * dist)).clamp(-1.0, 1.0);
            let half = cos_half.acos();
            let mid = dy.atan2(dx);
            let start = (mid - half).rem_euclid(TAU);
            let end = start + 2.0 * half;
            if end >= TAU {
                // arc covers angle zero: active from the start of the sweep
                base += w;
                events.push((end - TAU, false, w));
                events.push((start, true, w));
            } else {
                events.push((start, true, w));
                events.push((end, false, w));
            }
        }
    });
    let best_known = f64::from_bits(shared.load(AtomicOrdering::Relaxed));
    if bound < best_known {
        return None;
    }
    // entries before exits at equal angles: the balls are closed
    events.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |angle: f64, running: f64, best: &mut Option<(f64, Vec<f64>)>| {
        let floor = best.as_ref().map_or(f64::from_bits(shared.load(AtomicOrdering::Relaxed)), |b| b.0);
        if running < floor - 1e-9 * floor.max(1.0) {
            return;
        }
        let centre = vec![p[0] + radius * angle.cos(), p[1] + radius * angle.sin()];
        let value = balls.value_at(index, &centre, 0.0);
        let replace = match best {
            None => true,
            Some((v, c)) => better(value, &centre, *v, c),
        };
        if replace {
            shared.fetch_max(value.to_bits(), AtomicOrdering::Relaxed);
            *best = Some((value, centre));
        }
    };
    let mut running = base;
    consider(0.0, running, &mut best);
    for k in 0..events.len() {
        let (angle, entering, w) = events[k];
        if entering {
            running += w;
            let last_entry_here = events.get(k + 1).is_none_or(|e| !(e.1 && e.0 == angle));
            if last_entry_here {
                consider(angle, running, &mut best);
            }
        } else {
            running -= w;
        }
    }
    best
}

/// A box of candidate centres with an upper bound on its best value.
struct Cell {
    upper: f64,
    centre: Vec<f64>,
    side: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper).then_with(|| {
            // among equal bounds prefer lexicographically small centres
            other.centre.iter().zip(&self.centre).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        })
    }
}

/// Branch and bound over boxes: a box of side `h` and centre `c` cannot beat
/// the count at `c` with every radius grown by the norm of `(h/2, .., h/2)`.
fn scan_boxes(points: &PointCloud, balls: &Balls) -> ScanResult {
    let d = points.dim();
    let outer = balls.outer();
    let index = Index::new(points, outer);
    let half_diag = |side: f64| 0.5 * side * balls.norm.cube_diameter();
    let coarse = outer * GRID_RESOLUTION * 8.0;
    let finest = outer * GRID_RESOLUTION * GRID_REFINEMENT;

    let mut evaluations = 0u64;
    let mut best_value = -1.0;
    let mut best_centre = vec![0.0; d];
    let evaluate = |centre: &[f64], evaluations: &mut u64| -> f64 {
        *evaluations += 1;
        balls.value_at(&index, centre, 0.0)
    };
    // the points themselves
    for p in points.points() {
        let v = evaluate(p, &mut evaluations);
        if better(v, p, best_value, &best_centre) {
            best_value = v;
            best_centre = p.to_vec();
        }
    }
    // coarse boxes meeting the box of half-width `outer` about some point
    let mut seeds: HashSet<Vec<i64>> = HashSet::new();
    for p in points.points() {
        let lo: Vec<i64> = p.iter().map(|x| ((x - outer) / coarse).floor() as i64).collect();
        let hi: Vec<i64> = p.iter().map(|x| ((x + outer) / coarse).floor() as i64).collect();
        let mut key = lo.clone();
        'walk: loop {
            seeds.insert(key.clone());
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'walk;
                }
                if key[axis] < hi[axis] {
                    key[axis] += 1;
                    break;
                }
                key[axis] = lo[axis];
                axis += 1;
            }
        }
    }
    let mut seeds: Vec<Vec<i64>> = seeds.into_iter().collect();
    seeds.sort();
    let mut heap = BinaryHeap::new();
    for key in seeds {
        let centre: Vec<f64> = key.iter().map(|&k| (k as f64 + 0.5) * coarse).collect();
        let upper = balls.value_at(&index, &centre, half_diag(coarse));
        heap.push(Cell { upper, centre, side: coarse });
    }
    let mut unresolved: f64 = 0.0;
    while let Some(cell) = heap.pop() {
        if cell.upper <= best_value {
            break;
        }
        let v = evaluate(&cell.centre, &mut evaluations);
        if better(v, &cell.centre, best_value, &best_centre) {
            best_value = v;
            best_centre = cell.centre.clone();
        }
        if cell.side <= finest * (1.0 + 1e-12) || evaluations >= GRID_EVALUATION_BUDGET {
            unresolved = unresolved.max(cell.upper);
            continue;
        }
        let side = 0.5 * cell.side;
        for code in 0..1usize << d {
            let centre: Vec<f64> = (0..d)
                .map(|k| cell.centre[k] + if code >> k & 1 == 1 { 0.5 * side } else { -0.5 * side })
                .collect();
            let upper = balls.value_at(&index, &centre, half_diag(side));
            if upper > best_value {
                heap.push(Cell { upper, centre, side });
            }
        }
    }
    let gap = (unresolved - best_value).max(0.0);
    ScanResult { value: best_value, centre: best_centre, exact: false, gap }
}
