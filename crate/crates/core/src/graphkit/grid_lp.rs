//! Constructive colouring of a geometric graph through cell-count LPs over
//! shifted windows of hypercubes, with the matching guarantee value.
//!
//! Coordinates are scaled by `1/r` so that adjacency means distance at most
//! one. Space is cut into cells of side `eps`; a window of `(2K)^d` cells is
//! coloured by rounding up an optimal basic solution of the covering LP over
//! stable sets of the cell graph. Every cell lies in exactly `(2K)^d` of the
//! `(2K+L)^d` shifted window families, and each family receives one chunk of
//! the cell's points and its own palette.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::NormSpec;
use crate::rgg::PointCloud;

use super::lp::Simplex;
use super::{ColouringMethod, ColouringResult};

/// Cap on the number of stable sets of the window cell graph.
pub const STABLE_SET_BUDGET: u64 = 200_000;

#[derive(Debug, Clone)]
pub struct GridLpReport {
    pub colouring: ColouringResult,
    /// Upper bound the palette must respect.
    pub guarantee: f64,
    /// Largest window-sum of each distinct dual solution over all grid
    /// translations.
    pub scan_values: Vec<f64>,
    /// Number of stable sets in the window cell graph.
    pub stable_sets: usize,
    /// Separation in cells between blocks of one window family.
    pub gap_cells: usize,
    /// Distinct right-hand sides solved.
    pub lp_solves: usize,
}

/// Colours the geometric graph of radius `r` on `points` with cells of side
/// `eps * r` and windows of `2 * k` cells per axis.
pub fn grid_lp_colouring(points: &PointCloud, r: f64, norm: &NormSpec, eps: f64, k: usize) -> Result<GridLpReport> {
    let d = norm.dim();
    if points.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: points.dim() });
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("cell fraction must lie in (0,1], got {eps}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("window half-width must be at least one cell".into()));
    }
    let side = 2 * k;
    let cells_per_window = side.pow(d as u32);
    let rho = norm.cube_diameter();
    let gap = ((1.0 + eps * rho) / eps).ceil() as usize;
    let period = side + gap;

    // local cells of the window, axis 0 fastest, offsets in [-k, k)
    let local: Vec<Vec<i64>> = (0..cells_per_window)
        .map(|idx| {
            let mut rem = idx;
            (0..d)
                .map(|_| {
                    let c = (rem % side) as i64 - k as i64;
                    rem /= side;
                    c
                })
                .collect()
        })
        .collect();
    let conflict = |a: &[i64], b: &[i64]| -> bool {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| eps * (x - y) as f64).collect();
        norm.eval(&diff).expect("dimension matches") <= 1.0 + eps * rho
    };
    let stable = stable_sets(&local, &conflict)?;

    let mut cells: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.points().enumerate() {
        let key: Vec<i64> = p.iter().map(|&x| (x / r / eps).floor() as i64).collect();
        cells.entry(key).or_default().push(i);
    }

    let scale = BigRational::from_integer(BigInt::from(cells_per_window as u64));
    let mut cache: HashMap<Vec<u64>, BlockPlan> = HashMap::new();
    let mut chunk_rank: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut colours = vec![usize::MAX; points.len()];
    let mut offset = 0usize;

    let window_count = period.pow(d as u32);
    for w in 0..window_count {
        let mut rem = w;
        let shift: Vec<i64> = (0..d)
            .map(|_| {
                let c = (rem % period) as i64 - k as i64;
                rem /= period;
                c
            })
            .collect();
        // blocks of this family keyed by block index, holding (local slot, cell)
        let mut blocks: BTreeMap<Vec<i64>, Vec<(usize, &Vec<i64>)>> = BTreeMap::new();
        for cell in cells.keys() {
            let mut block = Vec::with_capacity(d);
            let mut slot = 0usize;
            let mut stride = 1usize;
            let mut inside = true;
            for axis in 0..d {
                let rel = cell[axis] - shift[axis] + k as i64;
                let m = rel.div_euclid(period as i64);
                let within = rel.rem_euclid(period as i64);
                if within >= side as i64 {
                    inside = false;
                    break;
                }
                block.push(m);
                slot += within as usize * stride;
                stride *= side;
            }
            if inside {
                blocks.entry(block).or_default().push((slot, cell));
            }
        }
        let mut family_palette = 0usize;
        for members in blocks.values() {
            let mut b = vec![0u64; cells_per_window];
            for &(slot, cell) in members {
                b[slot] = cells[cell].len() as u64;
            }
            if !cache.contains_key(&b) {
                let plan = solve_block(&stable, &b, &scale)?;
                cache.insert(b.clone(), plan);
            }
            let plan = &cache[&b];
            // colours available to each local cell
            let mut palette_of: Vec<Vec<usize>> = vec![Vec::new(); cells_per_window];
            let mut next = 0usize;
            for &(s, copies) in &plan.rounded {
                for _ in 0..copies {
                    for &q in &stable[s] {
                        palette_of[q].push(next);
                    }
                    next += 1;
                }
            }
            family_palette = family_palette.max(next);
            for &(slot, cell) in members {
                let pts = &cells[cell];
                let rank = chunk_rank.entry(cell.clone()).or_insert(0);
                let chunk = pts.len().div_ceil(cells_per_window);
                let lo = (*rank * chunk).min(pts.len());
                let hi = ((*rank + 1) * chunk).min(pts.len());
                *rank += 1;
                let available = &palette_of[slot];
                if available.len() < hi - lo {
                    return Err(Error::InvariantViolated("rounded LP solution does not cover a cell chunk".into()));
                }
                for (j, &v) in pts[lo..hi].iter().enumerate() {
                    colours[v] = offset + available[j];
                }
            }
        }
        offset += family_palette;
    }
    debug_assert!(colours.iter().all(|&c| c != usize::MAX));

    // largest window-sum of each dual over every translation meeting a point
    let mut duals: Vec<&Vec<BigRational>> = Vec::new();
    let mut seen: HashSet<&Vec<BigRational>> = HashSet::new();
    let mut keys: Vec<&Vec<u64>> = cache.keys().collect();
    keys.sort();
    for key in keys {
        let y = &cache[key].dual;
        if seen.insert(y) {
            duals.push(y);
        }
    }
    let mut origins: Vec<Vec<i64>> = Vec::new();
    for cell in cells.keys() {
        for q in &local {
            origins.push(cell.iter().zip(q).map(|(c, o)| c - o).collect());
        }
    }
    origins.sort();
    origins.dedup();
    let scan_values: Vec<f64> = duals
        .iter()
        .map(|y| {
            origins
                .iter()
                .map(|o| {
                    let mut total = BigRational::zero();
                    for (slot, q) in local.iter().enumerate() {
                        if y[slot].is_zero() {
                            continue;
                        }
                        let cell: Vec<i64> = o.iter().zip(q).map(|(a, b)| a + b).collect();
                        if let Some(pts) = cells.get(&cell) {
                            total += &y[slot] * BigRational::from_integer(BigInt::from(pts.len()));
                        }
                    }
                    total.to_f64().unwrap_or(f64::INFINITY)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let max_scan = scan_values.iter().copied().fold(0.0, f64::max);
    let growth = (1.0 + gap as f64 / side as f64).powi(d as i32);
    let guarantee = growth * max_scan + (cells_per_window * cells_per_window) as f64 * growth;

    let colouring = if points.is_empty() {
        ColouringResult { colours: Vec::new(), palette: 0, method: ColouringMethod::GridLp }
    } else {
        ColouringResult::compact(colours, ColouringMethod::GridLp)
    };
    Ok(GridLpReport {
        colouring,
        guarantee,
        scan_values,
        stable_sets: stable.len(),
        gap_cells: gap,
        lp_solves: cache.len(),
    })
}

/// Rounded primal (stable-set index, copies) and the dual of one block LP.
struct BlockPlan {
    rounded: Vec<(usize, usize)>,
    dual: Vec<BigRational>,
}

fn solve_block(stable: &[Vec<usize>], counts: &[u64], scale: &BigRational) -> Result<BlockPlan> {
    let m = counts.len();
    let rhs: Vec<BigRational> =
        counts.iter().map(|&c| BigRational::from_integer(BigInt::from(c)) / scale).collect();
    let one = BigRational::one();
    let mut lp = Simplex::<BigRational>::new(rhs);
    for q in 0..m {
        lp.add_column(vec![(q, -one.clone())], BigRational::zero());
    }
    let mut start = vec![usize::MAX; m];
    for s in stable {
        let j = lp.add_column(s.iter().map(|&q| (q, one.clone())).collect(), one.clone());
        if s.len() == 1 {
            start[s[0]] = j;
        }
    }
    lp.set_basis(start)?;
    lp.solve(1_000_000)?;
    let x = lp.primal();
    let rounded = (0..stable.len())
        .filter_map(|s| {
            let v = &x[m + s];
            if v.is_zero() {
                return None;
            }
            let up = v.ceil().to_integer();
            Some((s, up.to_usize().expect("small count")))
        })
        .collect();
    let dual = lp.duals().into_iter().map(|v| if v < BigRational::zero() { BigRational::zero() } else { v }).collect();
    Ok(BlockPlan { rounded, dual })
}

/// All nonempty stable sets of the window cell graph, singletons included.
fn stable_sets(local: &[Vec<i64>], conflict: &dyn Fn(&[i64], &[i64]) -> bool) -> Result<Vec<Vec<usize>>> {
    let m = local.len();
    let adjacent: Vec<Vec<bool>> = (0..m).map(|a| (0..m).map(|b| a != b && conflict(&local[a], &local[b])).collect()).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(
        adjacent: &[Vec<bool>],
        next: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        for v in next..adjacent.len() {
            if current.iter().all(|&u| !adjacent[u][v]) {
                current.push(v);
                out.push(current.clone());
                if out.len() as u64 > STABLE_SET_BUDGET {
                    return Err(Error::BudgetExceeded { budget: STABLE_SET_BUDGET });
                }
                walk(adjacent, v + 1, current, out)?;
                current.pop();
            }
        }
        Ok(())
    }
    walk(&adjacent, 0, &mut current, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rgg::{build_graph, radius_for_t, sample_points, DensityModel};

    #[test]
    fn empty_cloud() {
        let cloud = PointCloud::from_points(2, &[], 1.0).unwrap();
        let rep = grid_lp_colouring(&cloud, 0.1, &NormSpec::euclidean(2), 0.5, 2).unwrap();
        assert_eq!(rep.colouring.palette, 0);
    }

    #[test]
    fn cluster_in_one_cell() {
        let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![0.501 + 0.001 * i as f64, 0.502]).collect();
        let cloud = PointCloud::from_points(2, &pts, 1.0).unwrap();
        let norm = NormSpec::euclidean(2);
        let rep = grid_lp_colouring(&cloud, 0.1, &norm, 0.5, 2).unwrap();
        assert_eq!(rep.colouring.palette, 7);
        let gg = build_graph(&cloud, 0.1, &norm).unwrap();
        rep.colouring.verify(gg.graph()).unwrap();
    }

    #[test]
    fn proper_and_within_guarantee() {
        let norm = NormSpec::euclidean(2);
        let cloud = sample_points(&DensityModel::uniform(2), 200, 5).unwrap();
        let r = radius_for_t(200.0, 5.0, 1.0, 2);
        let gg = build_graph(&cloud, r, &norm).unwrap();
        let rep = grid_lp_colouring(&cloud, r, &norm, 0.5, 1).unwrap();
        rep.colouring.verify(gg.graph()).unwrap();
        assert!((rep.colouring.palette as f64) <= rep.guarantee);
        assert_eq!(rep.gap_cells, 4);
    }

    #[test]
    fn rejects_bad_arguments() {
        let cloud = PointCloud::from_points(2, &[vec![0.1, 0.1]], 1.0).unwrap();
        let norm = NormSpec::euclidean(2);
        assert!(grid_lp_colouring(&cloud, 0.1, &norm, 0.0, 2).is_err());
        assert!(grid_lp_colouring(&cloud, 0.1, &norm, 0.5, 0).is_err());
        assert!(grid_lp_colouring(&cloud, 0.1, &NormSpec::euclidean(3), 0.5, 1).is_err());
    }
}
