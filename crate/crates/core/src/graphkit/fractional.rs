//! Fractional chromatic number by column generation over stable sets, with
//! an exhaustive rational oracle for small graphs.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::NormSpec;
use crate::limits::RadialLevels;
use crate::rgg::PointCloud;
use crate::scan::scan_radial;

use super::bitset::BitSet;
use super::colouring::degeneracy_order;
use super::lp::Simplex;
use super::Graph;

const MAX_ROUNDS: usize = 20_000;
const MAX_PIVOTS: usize = 1_000_000;

/// Optimal fractional colouring with a dual certificate.
#[derive(Debug, Clone)]
pub struct FractionalSolution {
    /// Stable sets with positive weights.
    pub sets: Vec<(Vec<usize>, f64)>,
    /// Sum of the weights.
    pub value: f64,
    /// Vertex weights; every stable set has total at most one.
    pub dual: Vec<f64>,
    pub dual_value: f64,
    /// `value - dual_value`.
    pub gap: f64,
    /// Pricing rounds over all components.
    pub rounds: usize,
}

impl FractionalSolution {
    /// Checks stability, covering and the duality gap against `tol`.
    pub fn verify(&self, g: &Graph, tol: f64) -> Result<()> {
        let mut cover = vec![0.0; g.n()];
        for (s, w) in &self.sets {
            if !g.is_stable(s) || *w < 0.0 {
                return Err(Error::InvariantViolated(format!("bad column {s:?} with weight {w}")));
            }
            for &v in s {
                cover[v] += w;
            }
        }
        if let Some(v) = cover.iter().position(|&c| c < 1.0 - tol) {
            return Err(Error::InvariantViolated(format!("vertex {v} covered only {}", cover[v])));
        }
        if self.dual.iter().any(|&y| y < 0.0) {
            return Err(Error::InvariantViolated("negative dual weight".into()));
        }
        if self.gap > tol || self.gap < -tol {
            return Err(Error::InvariantViolated(format!("duality gap {}", self.gap)));
        }
        Ok(())
    }
}

fn neighbour_sets(g: &Graph) -> Vec<BitSet> {
    (0..g.n())
        .map(|v| {
            let mut s = BitSet::new(g.n());
            for &u in g.neighbors(v) {
                s.insert(u as usize);
            }
            s
        })
        .collect()
}

/// Maximum-weight stable set (ties resolved towards low vertex indices),
/// extended greedily to a maximal stable set. Returns the set and the weight
/// of the optimum before extension.
pub fn max_weight_stable_set(g: &Graph, weights: &[f64]) -> (Vec<usize>, f64) {
    let nb = neighbour_sets(g);
    let mut search = WeightedSearch::new(&nb, weights);
    let mut p = BitSet::new(g.n());
    for v in 0..g.n() {
        if weights[v] > 0.0 {
            p.insert(v);
        }
    }
    search.expand(p, 0.0);
    let mut set = search.best_set;
    set.sort_unstable();
    let weight = search.best;
    (extend_to_maximal(g, set), weight)
}

fn extend_to_maximal(g: &Graph, mut set: Vec<usize>) -> Vec<usize> {
    let mut blocked = vec![false; g.n()];
    for &v in &set {
        blocked[v] = true;
        for &u in g.neighbors(v) {
            blocked[u as usize] = true;
        }
    }
    for v in 0..g.n() {
        if !blocked[v] {
            set.push(v);
            blocked[v] = true;
            for &u in g.neighbors(v) {
                blocked[u as usize] = true;
            }
        }
    }
    set.sort_unstable();
    set
}

/// Branch and bound; the bound partitions the candidates into cliques and
/// adds the heaviest weight of each.
struct WeightedSearch<'a> {
    nb: &'a [BitSet],
    w: &'a [f64],
    best: f64,
    best_set: Vec<usize>,
    current: Vec<usize>,
}

impl<'a> WeightedSearch<'a> {
    fn new(nb: &'a [BitSet], w: &'a [f64]) -> Self {
        Self { nb, w, best: 0.0, best_set: Vec::new(), current: Vec::new() }
    }

    fn expand(&mut self, mut p: BitSet, weight: f64) {
        let (order, bounds) = self.clique_sort(&p);
        for i in (0..order.len()).rev() {
            if weight + bounds[i] <= self.best * (1.0 + 1e-12) {
                return;
            }
            let v = order[i];
            p.remove(v);
            let mut next = p.clone();
            next.and_not_assign(&self.nb[v]);
            let w = weight + self.w[v];
            self.current.push(v);
            if w > self.best * (1.0 + 1e-12) {
                self.best = w;
                self.best_set = self.current.clone();
            }
            if !next.is_empty() {
                self.expand(next, w);
            }
            self.current.pop();
        }
    }

    /// Greedy clique partition of `p`; `bounds[i]` bounds the weight of any
    /// stable set inside `order[..=i]`.
    fn clique_sort(&self, p: &BitSet) -> (Vec<usize>, Vec<f64>) {
        let mut verts: Vec<usize> = p.iter().collect();
        verts.sort_by(|&a, &b| self.w[b].partial_cmp(&self.w[a]).expect("finite weights").then(a.cmp(&b)));
        // common neighbourhood of each clique so far
        let mut cliques: Vec<(BitSet, Vec<usize>)> = Vec::new();
        for &v in &verts {
            match cliques.iter_mut().find(|(common, _)| common.contains(v)) {
                Some((common, members)) => {
                    common.and_assign(&self.nb[v]);
                    members.push(v);
                }
                None => cliques.push((self.nb[v].clone(), vec![v])),
            }
        }
        // lightest cliques first so that the heavy ones are branched on first
        cliques.reverse();
        let mut order = Vec::with_capacity(verts.len());
        let mut bounds = Vec::with_capacity(verts.len());
        let mut total = 0.0;
        for (_, members) in cliques {
            total += self.w[members[0]];
            for &v in members.iter().rev() {
                order.push(v);
                bounds.push(total);
            }
        }
        (order, bounds)
    }
}

/// Fast pricing: greedy stable sets by decreasing weight from several
/// starting points.
fn greedy_pricing(g: &Graph, weights: &[f64]) -> (Vec<usize>, f64) {
    let n = g.n();
    let mut by_weight: Vec<usize> = (0..n).collect();
    by_weight.sort_by(|&a, &b| weights[b].partial_cmp(&weights[a]).expect("finite").then(a.cmp(&b)));
    let mut best = (Vec::new(), 0.0);
    for &start in by_weight.iter().take(8) {
        let mut blocked = vec![false; n];
        let mut set = Vec::new();
        let mut total = 0.0;
        for &v in std::iter::once(&start).chain(by_weight.iter()) {
            if blocked[v] {
                continue;
            }
            set.push(v);
            total += weights[v];
            blocked[v] = true;
            for &u in g.neighbors(v) {
                blocked[u as usize] = true;
            }
        }
        if total > best.1 {
            set.sort_unstable();
            best = (set, total);
        }
    }
    best
}

/// Greedy covers of the vertex set by maximal stable sets along five fixed
/// orders.
fn seed_pool(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let index: Vec<usize> = (0..n).collect();
    let reverse: Vec<usize> = (0..n).rev().collect();
    let mut deg_up = index.clone();
    deg_up.sort_by_key(|&v| (g.degree(v), v));
    let mut deg_down = index.clone();
    deg_down.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut smallest_last = degeneracy_order(g);
    smallest_last.reverse();
    let mut pool = Vec::new();
    for order in [index, reverse, deg_up, deg_down, smallest_last] {
        let mut covered = vec![false; n];
        for &s in &order {
            if covered[s] {
                continue;
            }
            let mut blocked = vec![false; n];
            let mut set = Vec::new();
            for &v in std::iter::once(&s).chain(order.iter()) {
                if blocked[v] {
                    continue;
                }
                set.push(v);
                covered[v] = true;
                blocked[v] = true;
                for &u in g.neighbors(v) {
                    blocked[u as usize] = true;
                }
            }
            set.sort_unstable();
            pool.push(set);
        }
    }
    pool
}

struct ComponentSolution {
    sets: Vec<(Vec<usize>, f64)>,
    value: f64,
    dual: Vec<f64>,
    dual_value: f64,
    rounds: usize,
}

fn solve_connected(g: &Graph, tol: f64) -> Result<ComponentSolution> {
    let n = g.n();
    if n == 1 {
        return Ok(ComponentSolution { sets: vec![(vec![0], 1.0)], value: 1.0, dual: vec![1.0], dual_value: 1.0, rounds: 0 });
    }
    let mut lp = Simplex::<f64>::new(vec![1.0; n]);
    for v in 0..n {
        lp.add_column(vec![(v, -1.0)], 0.0);
    }
    let mut columns: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut start = Vec::with_capacity(n);
    let mut add = |lp: &mut Simplex<f64>, set: Vec<usize>, columns: &mut Vec<Vec<usize>>| -> Option<usize> {
        if !seen.insert(set.clone()) {
            return None;
        }
        let j = lp.add_column(set.iter().map(|&v| (v, 1.0)).collect(), 1.0);
        columns.push(set);
        Some(j)
    };
    for v in 0..n {
        start.push(add(&mut lp, vec![v], &mut columns).expect("fresh singleton"));
    }
    for set in seed_pool(g) {
        add(&mut lp, set, &mut columns);
    }
    lp.set_basis(start)?;
    let mut rounds = 0;
    let (y, scale) = loop {
        lp.solve(MAX_PIVOTS)?;
        let y: Vec<f64> = lp.duals().into_iter().map(|v| v.max(0.0)).collect();
        let (mut set, mut weight) = greedy_pricing(g, &y);
        if weight <= 1.0 + tol {
            (set, weight) = max_weight_stable_set(g, &y);
        } else {
            set = extend_to_maximal(g, set);
        }
        if weight <= 1.0 + tol {
            break (y, weight.max(1.0));
        }
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(Error::IterationCap(MAX_ROUNDS));
        }
        if add(&mut lp, set, &mut columns).is_none() {
            // a repeated column means the LP has stalled numerically
            return Err(Error::NonConvergence("column generation repeated a column".into()));
        }
    };
    let x = lp.primal();
    let sets: Vec<(Vec<usize>, f64)> = columns
        .iter()
        .enumerate()
        .filter_map(|(k, s)| {
            let w = x[n + k];
            (w > 1e-12).then(|| (s.clone(), w))
        })
        .collect();
    let value = sets.iter().map(|(_, w)| w).sum();
    let dual: Vec<f64> = y.iter().map(|v| v / scale).collect();
    let dual_value = dual.iter().sum();
    Ok(ComponentSolution { sets, value, dual, dual_value, rounds })
}

/// Fractional chromatic number by column generation, solved per connected
/// component and merged (the value is the maximum over components).
pub fn fractional_chromatic(g: &Graph, tol: f64) -> Result<FractionalSolution> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!("tolerance must lie in (0,1), got {tol}")));
    }
    let n = g.n();
    if n == 0 {
        return Ok(FractionalSolution { sets: Vec::new(), value: 0.0, dual: Vec::new(), dual_value: 0.0, gap: 0.0, rounds: 0 });
    }
    let comps = g.components();
    let mut solved = Vec::with_capacity(comps.len());
    for comp in &comps {
        let local = if comp.len() == n { g.clone() } else { g.induced(comp) };
        solved.push(solve_connected(&local, tol)?);
    }
    let (best, _) = solved
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value.partial_cmp(&b.1.value).expect("finite").then(b.0.cmp(&a.0)))
        .expect("at least one component");
    let mut dual = vec![0.0; n];
    for (k, &v) in comps[best].iter().enumerate() {
        dual[v] = solved[best].dual[k];
    }
    // overlay the weight intervals of all components
    let mut cuts: Vec<f64> = Vec::new();
    for s in &solved {
        let mut acc = 0.0;
        for (_, w) in &s.sets {
            acc += w;
            cuts.push(acc);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    cuts.dedup();
    let mut sets: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut lo = 0.0;
    for &hi in &cuts {
        if hi - lo <= 1e-15 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let mut union = Vec::new();
        for (c, s) in solved.iter().enumerate() {
            let mut acc = 0.0;
            for (set, w) in &s.sets {
                if mid < acc + w {
                    union.extend(set.iter().map(|&v| comps[c][v]));
                    break;
                }
                acc += w;
            }
        }
        union.sort_unstable();
        match sets.last_mut() {
            Some((last, w)) if *last == union => *w += hi - lo,
            _ => sets.push((union, hi - lo)),
        }
        lo = hi;
    }
    let value = solved[best].value;
    let dual_value = solved[best].dual_value;
    let gap = solved.iter().map(|s| s.value - s.dual_value).fold(0.0, f64::max);
    let rounds = solved.iter().map(|s| s.rounds).sum();
    Ok(FractionalSolution { sets, value, dual, dual_value, gap, rounds })
}

/// Every nonempty stable set, in lexicographic order of sorted vertex lists.
pub fn all_stable_sets(g: &Graph) -> Result<Vec<Vec<usize>>> {
    if g.n() > 24 {
        return Err(Error::InvalidArgument(format!("exhaustive stable-set listing needs n <= 24, got {}", g.n())));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(g: &Graph, next: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for v in next..g.n() {
            if current.iter().all(|&u| !g.has_edge(u, v)) {
                current.push(v);
                out.push(current.clone());
                walk(g, v + 1, current, out);
                current.pop();
            }
        }
    }
    walk(g, 0, &mut current, &mut out);
    Ok(out)
}

/// Exact fractional chromatic number from the LP over all stable sets in
/// rational arithmetic.
pub fn fractional_chromatic_exact(g: &Graph) -> Result<BigRational> {
    let n = g.n();
    if n == 0 {
        return Ok(BigRational::zero());
    }
    let sets = all_stable_sets(g)?;
    let one = BigRational::one();
    let mut lp = Simplex::<BigRational>::new(vec![one.clone(); n]);
    for v in 0..n {
        lp.add_column(vec![(v, -one.clone())], BigRational::zero());
    }
    let mut start = vec![0; n];
    for s in &sets {
        let j = lp.add_column(s.iter().map(|&v| (v, one.clone())).collect(), one.clone());
        if s.len() == 1 {
            start[s[0]] = j;
        }
    }
    lp.set_basis(start)?;
    lp.solve(MAX_PIVOTS)?;
    Ok(lp.objective())
}

/// Lower bound on the fractional chromatic number of the geometric graph
/// with radius `r`: the scan value of `phi` over the points scaled by `1/r`.
pub fn dual_bound(points: &PointCloud, r: f64, norm: &NormSpec, phi: &RadialLevels) -> Result<f64> {
    if phi.norm() != norm {
        return Err(Error::InvalidArgument(format!("function is defined for {} but the graph uses {norm}", phi.norm())));
    }
    if points.is_empty() {
        return Ok(0.0);
    }
    Ok(scan_radial(points, phi, r)?.value)
}
