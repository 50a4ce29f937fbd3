//! Greedy colourings, exact chromatic number by DSATUR branch and bound, and
//! cheap two-sided bounds.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::limits::RadialLevels;
use crate::rgg::GeometricGraph;

use super::clique::{clique_number, greedy_clique};
use super::fractional::dual_bound;
use super::{ColouringMethod, ColouringResult, Graph};

/// Default node budget for [`chromatic_number_exact`].
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

/// Vertices in the order a minimum-degree peeling removes them (ties by
/// index). Reversed, this is the smallest-last order.
pub fn degeneracy_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    // bucket sort by degree, then the usual in-place peeling
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin[d + 1] += 1;
    }
    for d in 1..bin.len() {
        bin[d] += bin[d - 1];
    }
    let mut vert = vec![0usize; n];
    let mut pos = vec![0usize; n];
    {
        let mut next = bin.clone();
        for v in 0..n {
            pos[v] = next[deg[v]];
            vert[pos[v]] = v;
            next[deg[v]] += 1;
        }
    }
    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbors(v) {
            let u = u as usize;
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du].max(i + 1);
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] = pw + 1;
                deg[u] -= 1;
            }
        }
    }
    vert
}

/// First-fit colouring along `order`.
pub fn greedy_colouring(g: &Graph, order: &[usize]) -> ColouringResult {
    let n = g.n();
    let mut colour = vec![usize::MAX; n];
    let mut stamp = vec![usize::MAX; n + 1];
    for (step, &v) in order.iter().enumerate() {
        for &u in g.neighbors(v) {
            let c = colour[u as usize];
            if c != usize::MAX {
                stamp[c] = step;
            }
        }
        colour[v] = (0..).find(|&c| stamp[c] != step).expect("a free colour exists");
    }
    ColouringResult::compact(colour, ColouringMethod::Greedy)
}

/// Greedy DSATUR: repeatedly colour the vertex seeing the most distinct
/// colours (ties: more uncoloured neighbours, then lower index).
pub fn dsatur_colouring(g: &Graph) -> ColouringResult {
    let n = g.n();
    let mut colour = vec![usize::MAX; n];
    let mut seen: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut sat = vec![0usize; n];
    let mut free_deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize, std::cmp::Reverse<usize>)> =
        (0..n).map(|v| (0, free_deg[v], std::cmp::Reverse(v))).collect();
    while let Some((_, _, std::cmp::Reverse(v))) = queue.pop_last() {
        let c = (0..).find(|&c| !bit(&seen[v], c)).expect("a free colour exists");
        colour[v] = c;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if colour[u] != usize::MAX {
                continue;
            }
            queue.remove(&(sat[u], free_deg[u], std::cmp::Reverse(u)));
            if !bit(&seen[u], c) {
                set_bit(&mut seen[u], c);
                sat[u] += 1;
            }
            free_deg[u] -= 1;
            queue.insert((sat[u], free_deg[u], std::cmp::Reverse(u)));
        }
    }
    ColouringResult::compact(colour, ColouringMethod::Greedy)
}

fn bit(words: &[u64], i: usize) -> bool {
    words.get(i >> 6).is_some_and(|w| w >> (i & 63) & 1 == 1)
}

fn set_bit(words: &mut Vec<u64>, i: usize) {
    if words.len() <= i >> 6 {
        words.resize((i >> 6) + 1, 0);
    }
    words[i >> 6] |= 1 << (i & 63);
}

/// Two-colouring of a bipartite graph, or `None`.
fn two_colouring(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut side = vec![usize::MAX; n];
    for s in 0..n {
        if side[s] != usize::MAX {
            continue;
        }
        side[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let v = v as usize;
                if side[v] == usize::MAX {
                    side[v] = 1 - side[u];
                    queue.push_back(v);
                } else if side[v] == side[u] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

/// Exact chromatic number with an optimal colouring.
///
/// Works component by component. Each component is settled by the first
/// applicable shortcut: a greedy colouring matching the clique number
/// (always the case when `Delta = omega - 1`), a bipartition when
/// `omega = 2`, and otherwise DSATUR branch and bound with the maximum clique
/// precoloured. When `Delta = omega >= 3` Brooks' theorem already gives
/// `chi = omega`, and the search stops at the first such colouring. Each
/// component may use at most `node_budget` search nodes.
pub fn chromatic_number_exact(g: &Graph, node_budget: u64) -> Result<ColouringResult> {
    let n = g.n();
    let mut colours = vec![0usize; n];
    for comp in g.components() {
        let local = if comp.len() == n { g.clone() } else { g.induced(&comp) };
        let c = exact_connected(&local, node_budget)?;
        for (k, &v) in comp.iter().enumerate() {
            colours[v] = c[k];
        }
    }
    let palette = colours.iter().map(|&c| c + 1).max().unwrap_or(0);
    Ok(ColouringResult { colours, palette, method: ColouringMethod::Exact })
}

fn exact_connected(g: &Graph, node_budget: u64) -> Result<Vec<usize>> {
    let n = g.n();
    if g.edge_count() == 0 {
        return Ok(vec![0; n]);
    }
    let clique = clique_number(g);
    let omega = clique.size;
    let mut best = dsatur_colouring(g);
    let mut smallest_last = degeneracy_order(g);
    smallest_last.reverse();
    let sl = greedy_colouring(g, &smallest_last);
    if sl.palette < best.palette {
        best = sl;
    }
    if best.palette == omega {
        return Ok(best.colours);
    }
    if omega == 2 {
        if let Some(side) = two_colouring(g) {
            return Ok(side);
        }
    }
    let mut search = Dsatur::new(g, best.palette, best.colours, omega, node_budget);
    for (c, &v) in clique.vertices.iter().enumerate() {
        search.assign(v, c);
    }
    search.run(omega)?;
    Ok(search.best_colours)
}

/// DSATUR branch and bound for colourings with fewer than `ub` colours.
struct Dsatur<'a> {
    g: &'a Graph,
    colour: Vec<usize>,
    /// `count[v][c]`: neighbours of `v` with colour `c`.
    count: Vec<Vec<u32>>,
    sat: Vec<usize>,
    coloured: usize,
    ub: usize,
    lb: usize,
    best_colours: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, ub: usize, colours: Vec<usize>, lb: usize, budget: u64) -> Self {
        let n = g.n();
        Self {
            g,
            colour: vec![usize::MAX; n],
            count: vec![vec![0; ub]; n],
            sat: vec![0; n],
            coloured: 0,
            ub,
            lb,
            best_colours: colours,
            nodes: 0,
            budget,
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colour[v] = c;
        self.coloured += 1;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.count[u as usize][c];
            if *slot == 0 {
                self.sat[u as usize] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colour[v];
        self.colour[v] = usize::MAX;
        self.coloured -= 1;
        for &u in self.g.neighbors(v) {
            let slot = &mut self.count[u as usize][c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u as usize] -= 1;
            }
        }
    }

    fn pick(&self) -> usize {
        let mut best = usize::MAX;
        let mut key = (0, 0);
        for v in 0..self.g.n() {
            if self.colour[v] != usize::MAX {
                continue;
            }
            let free = self.g.neighbors(v).iter().filter(|&&u| self.colour[u as usize] == usize::MAX).count();
            let k = (self.sat[v], free);
            if best == usize::MAX || k > key {
                best = v;
                key = k;
            }
        }
        best
    }

    fn run(&mut self, used: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        if self.coloured == self.g.n() {
            self.ub = used;
            self.best_colours = self.colour.clone();
            return Ok(());
        }
        let v = self.pick();
        // a vertex already seeing ub - 1 colours cannot be finished below ub
        if self.sat[v] >= self.ub - 1 {
            return Ok(());
        }
        for c in 0..=used {
            // colours must stay below ub - 1, and ub shrinks as we go
            if c + 1 >= self.ub || self.ub <= self.lb {
                break;
            }
            if self.count[v][c] != 0 {
                continue;
            }
            self.assign(v, c);
            let r = self.run(used.max(c + 1));
            self.unassign(v);
            r?;
        }
        Ok(())
    }
}

/// Lower and upper bounds on the chromatic number.
#[derive(Debug, Clone)]
pub struct ChromaticBounds {
    pub lower: usize,
    pub upper: usize,
    /// Colouring achieving `upper`.
    pub colouring: ColouringResult,
    /// Clique found greedily.
    pub clique: Vec<usize>,
}

/// `lower = max(greedy clique, ceil(dual))`, `upper` = best of first-fit
/// along smallest-last order, DSATUR and any `extra_orders`. `dual` is any
/// lower bound on the fractional chromatic number.
pub fn chromatic_bounds(g: &Graph, extra_orders: &[Vec<usize>], dual: Option<f64>) -> ChromaticBounds {
    let clique = greedy_clique(g);
    let mut lower = clique.len();
    if let Some(d) = dual {
        lower = lower.max((d - 1e-9).ceil().max(0.0) as usize);
    }
    let mut order = degeneracy_order(g);
    order.reverse();
    let mut best = greedy_colouring(g, &order);
    let mut consider = |c: ColouringResult| {
        if c.palette < best.palette {
            best = c;
        }
    };
    consider(dsatur_colouring(g));
    for o in extra_orders {
        consider(greedy_colouring(g, o));
    }
    ChromaticBounds { lower, upper: best.palette, colouring: best, clique }
}

/// [`chromatic_bounds`] with the grid-cell order and the half-ball scan as
/// the dual bound.
pub fn geometric_chromatic_bounds(gg: &GeometricGraph) -> Result<ChromaticBounds> {
    let dual = if gg.cloud().is_empty() {
        0.0
    } else {
        dual_bound(gg.cloud(), gg.r(), gg.norm(), &RadialLevels::half_ball(*gg.norm()))?
    };
    Ok(chromatic_bounds(gg.graph(), &[gg.grid_order()], Some(dual)))
}
