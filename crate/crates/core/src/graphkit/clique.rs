//! Exact maximum clique by bitset branch and bound with a greedy colouring
//! bound, run on the forward neighbourhoods of a degeneracy ordering.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::bitset::BitSet;
use super::colouring::degeneracy_order;
use super::Graph;

/// A maximum clique, vertices sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    pub size: usize,
    pub vertices: Vec<usize>,
}

/// A maximal clique found greedily from a handful of high-core seeds.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let order = degeneracy_order(g);
    let mut best: Vec<usize> = vec![order[n - 1]];
    for &seed in order.iter().rev().take(64) {
        let mut clique = vec![seed];
        let mut cand: Vec<u32> = g.neighbors(seed).to_vec();
        while !cand.is_empty() {
            let &u = cand.iter().max_by_key(|&&u| (g.degree(u as usize), std::cmp::Reverse(u))).expect("nonempty");
            clique.push(u as usize);
            cand = intersect_sorted(&cand, g.neighbors(u as usize));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Exact clique number with a witness.
pub fn clique_number(g: &Graph) -> Clique {
    clique_number_with_hint(g, &[])
}

/// Exact clique number, starting from a known clique (ignored if it is not
/// one). The witness does not depend on the number of worker threads.
pub fn clique_number_with_hint(g: &Graph, hint: &[usize]) -> Clique {
    clique_search(g, hint, BANDED_WORD_BUDGET)
}

fn clique_search(g: &Graph, hint: &[usize], word_budget: usize) -> Clique {
    let n = g.n();
    if n == 0 {
        return Clique { size: 0, vertices: Vec::new() };
    }
    let mut start = greedy_clique(g);
    if hint.len() > start.len() && hint.iter().all(|&v| v < n) && g.is_clique(hint) {
        start = hint.to_vec();
        start.sort_unstable();
    }
    let order = degeneracy_order(g);
    let mut pos = vec![0u32; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k as u32;
    }
    let forward: Vec<Vec<u32>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().filter(|&w| pos[w as usize] > pos[v]).collect())
        .collect();
    let banded = Banded::build(g, word_budget);
    let ctx = Context { g, forward: &forward, banded: banded.as_ref() };
    let fresh = || vec![0u32; n];

    let best = AtomicUsize::new(start.len());
    let sequential = rayon::current_num_threads() == 1;
    let mut witness = start.clone();
    if sequential {
        let mut scratch = fresh();
        for &v in order.iter().rev() {
            if let Some(c) = ctx.search(v, best.load(Ordering::Relaxed), &mut scratch) {
                best.store(c.len(), Ordering::Relaxed);
                witness = c;
            }
        }
    } else {
        order.par_iter().rev().for_each_init(fresh, |scratch, &v| {
            if let Some(c) = ctx.search(v, best.load(Ordering::Relaxed), scratch) {
                best.fetch_max(c.len(), Ordering::Relaxed);
            }
        });
        let omega = best.load(Ordering::Relaxed);
        if omega > start.len() {
            let mut scratch = fresh();
            witness = order
                .iter()
                .rev()
                .find_map(|&v| ctx.search(v, omega - 1, &mut scratch))
                .expect("a vertex attains the clique number");
        }
    }
    witness.sort_unstable();
    Clique { size: witness.len(), vertices: witness }
}

/// Largest total size, in 64-bit words, of the banded adjacency rows.
const BANDED_WORD_BUDGET: usize = 1 << 26;

/// Adjacency rows as bitsets over a bandwidth-reducing relabelling (breadth
/// first from a pseudo-peripheral vertex). Row `v` only stores the words
/// spanning the labels of its neighbours.
struct Banded {
    label: Vec<u32>,
    first_word: Vec<usize>,
    rows: Vec<Vec<u64>>,
}

impl Banded {
    fn build(g: &Graph, budget: usize) -> Option<Self> {
        let n = g.n();
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            // the last vertex reached from s starts the real traversal
            let far = *bfs(g, s, &mut seen).last().expect("nonempty");
            for v in bfs(g, far, &mut vec![false; 0]) {
                label[v] = next;
                next += 1;
            }
        }
        let mut first_word = vec![0usize; n];
        let mut total = 0usize;
        for v in 0..n {
            let (lo, hi) = g
                .neighbors(v)
                .iter()
                .map(|&u| label[u as usize])
                .fold((label[v], label[v]), |(lo, hi), l| (lo.min(l), hi.max(l)));
            first_word[v] = lo as usize / 64;
            total += hi as usize / 64 + 1 - first_word[v];
            if total > budget {
                return None;
            }
        }
        let rows = (0..n)
            .map(|v| {
                let hi = g.neighbors(v).iter().map(|&u| label[u as usize]).max().unwrap_or(label[v]).max(label[v]);
                let mut row = vec![0u64; hi as usize / 64 + 1 - first_word[v]];
                for &u in g.neighbors(v) {
                    let l = label[u as usize] as usize - first_word[v] * 64;
                    row[l / 64] |= 1 << (l % 64);
                }
                row
            })
            .collect();
        Some(Self { label, first_word, rows })
    }

    /// `|N(u) & set|` for a set stored from word `set_first` on.
    fn count_in(&self, u: usize, set: &[u64], set_first: usize) -> usize {
        let row = &self.rows[u];
        let lo = self.first_word[u].max(set_first);
        let hi = (self.first_word[u] + row.len()).min(set_first + set.len());
        (lo..hi).map(|w| (row[w - self.first_word[u]] & set[w - set_first]).count_ones() as usize).sum()
    }
}

/// Breadth-first order of the component of `s`. With an empty `seen` slice a
/// private one is used.
fn bfs(g: &Graph, s: usize, seen: &mut Vec<bool>) -> Vec<usize> {
    if seen.is_empty() {
        seen.resize(g.n(), false);
    }
    seen[s] = true;
    let mut out = vec![s];
    let mut head = 0;
    while head < out.len() {
        let u = out[head];
        head += 1;
        for &w in g.neighbors(u) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                out.push(w as usize);
            }
        }
    }
    out
}

struct Context<'a> {
    g: &'a Graph,
    forward: &'a [Vec<u32>],
    banded: Option<&'a Banded>,
}

impl Context<'_> {
    /// A clique of size `> bound` made of `v` and later vertices, if any.
    /// `mark` must be all zero on entry and is left all zero.
    fn search(&self, v: usize, bound: usize, mark: &mut [u32]) -> Option<Vec<usize>> {
        let cand = &self.forward[v];
        if cand.len() < bound {
            return None;
        }
        // a clique of `bound` candidates needs local degree >= bound - 1
        let need = bound.saturating_sub(1);
        let (survivors, degree) = match self.banded {
            Some(b) => self.peel_banded(b, v, need, bound)?,
            None => self.peel_lists(v, need, bound, mark)?,
        };
        let mut survivors: Vec<usize> = survivors;
        survivors.sort_by_key(|&a| (std::cmp::Reverse(degree[a]), cand[a]));
        for (idx, &a) in survivors.iter().enumerate() {
            mark[cand[a] as usize] = idx as u32 + 1;
        }
        let m = survivors.len();
        let mut adj = vec![BitSet::new(m); m];
        for (i, &a) in survivors.iter().enumerate() {
            for &w in &self.forward[cand[a] as usize] {
                let j = mark[w as usize];
                if j != 0 {
                    adj[i].insert(j as usize - 1);
                    adj[j as usize - 1].insert(i);
                }
            }
        }
        for &a in &survivors {
            mark[cand[a] as usize] = 0;
        }
        let mut bb = BranchAndBound { adj: &adj, best: bound.saturating_sub(1), best_clique: None, current: Vec::new() };
        bb.expand(BitSet::full(m));
        bb.best_clique.map(|local| {
            let mut c: Vec<usize> = local.into_iter().map(|i| cand[survivors[i]] as usize).collect();
            c.push(v);
            c
        })
    }

    /// Candidates (as positions in `forward[v]`) left after repeatedly
    /// dropping those with fewer than `need` neighbours among the rest, with
    /// their final local degrees; `None` once fewer than `bound` remain.
    fn peel_lists(&self, v: usize, need: usize, bound: usize, mark: &mut [u32]) -> Option<(Vec<usize>, Vec<usize>)> {
        let cand = &self.forward[v];
        // local indices are stored shifted by one so that zero means "absent"
        for (k, &u) in cand.iter().enumerate() {
            mark[u as usize] = k as u32 + 1;
        }
        let k = cand.len();
        let mut degree = vec![0usize; k];
        for (a, &u) in cand.iter().enumerate() {
            for &w in &self.forward[u as usize] {
                let b = mark[w as usize];
                if b != 0 {
                    degree[a] += 1;
                    degree[b as usize - 1] += 1;
                }
            }
        }
        let mut alive = vec![true; k];
        let mut stack: Vec<usize> = (0..k).filter(|&a| degree[a] < need).collect();
        for &a in &stack {
            alive[a] = false;
        }
        let mut remaining = k - stack.len();
        while let Some(a) = stack.pop() {
            if remaining < bound {
                break;
            }
            for &w in self.g.neighbors(cand[a] as usize) {
                let b = mark[w as usize];
                if b != 0 {
                    let b = b as usize - 1;
                    if alive[b] {
                        degree[b] -= 1;
                        if degree[b] < need {
                            alive[b] = false;
                            remaining -= 1;
                            stack.push(b);
                        }
                    }
                }
            }
        }
        for &u in cand {
            mark[u as usize] = 0;
        }
        if remaining < bound {
            return None;
        }
        Some(((0..k).filter(|&a| alive[a]).collect(), degree))
    }

    /// Same result as [`Self::peel_lists`], computed with word-parallel
    /// intersections in sweeps until nothing changes.
    fn peel_banded(&self, b: &Banded, v: usize, need: usize, bound: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let cand = &self.forward[v];
        let k = cand.len();
        let first = b.first_word[v];
        let mut set = vec![0u64; b.rows[v].len()];
        for &u in cand {
            let l = b.label[u as usize] as usize - first * 64;
            set[l / 64] |= 1 << (l % 64);
        }
        let mut alive = vec![true; k];
        let mut degree = vec![0usize; k];
        let mut remaining = k;
        loop {
            let mut changed = false;
            for a in 0..k {
                if !alive[a] {
                    continue;
                }
                let u = cand[a] as usize;
                let d = b.count_in(u, &set, first);
                if d < need {
                    alive[a] = false;
                    remaining -= 1;
                    changed = true;
                    let l = b.label[u] as usize - first * 64;
                    set[l / 64] &= !(1 << (l % 64));
                    if remaining < bound {
                        return None;
                    }
                } else {
                    degree[a] = d;
                }
            }
            if !changed {
                break;
            }
        }
        Some(((0..k).filter(|&a| alive[a]).collect(), degree))
    }
}

/// Maximum clique in a small dense graph given by bitset rows; only cliques
/// larger than `best` are reported.
struct BranchAndBound<'a> {
    adj: &'a [BitSet],
    best: usize,
    best_clique: Option<Vec<usize>>,
    current: Vec<usize>,
}

impl<'a> BranchAndBound<'a> {
    fn expand(&mut self, mut p: BitSet) {
        let (order, bounds) = self.colour_sort(&p);
        for i in (0..order.len()).rev() {
            if self.current.len() + bounds[i] <= self.best {
                return;
            }
            let v = order[i];
            self.current.push(v);
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best {
                    self.best = self.current.len();
                    self.best_clique = Some(self.current.clone());
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.remove(v);
        }
    }

    /// Greedy colour classes of `p`; vertices listed class by class with the
    /// running class count as an upper bound on any clique among the prefix.
    fn colour_sort(&self, p: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncoloured = p.clone();
        let mut order = Vec::new();
        let mut bounds = Vec::new();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                uncoloured.remove(v);
                q.remove(v);
                q.and_not_assign(&self.adj[v]);
                order.push(v);
                bounds.push(colour);
            }
        }
        (order, bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_omega(g: &Graph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|mask| {
                let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                g.is_clique(&vs)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_examples() {
        assert_eq!(clique_number(&Graph::complete(3)).size, 3);
        assert_eq!(clique_number(&Graph::empty(5)).size, 1);
        assert_eq!(clique_number(&Graph::empty(0)).size, 0);
        assert_eq!(clique_number(&Graph::cycle(5)).size, 2);
        assert_eq!(clique_number(&Graph::complete(9)).vertices, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn matches_brute_force_on_pseudo_random_graphs() {
        for seed in 0..60u64 {
            let n = 6 + (seed % 9) as usize;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if crate::rgg::splitmix_at(seed, (i * n + j) as u64) % 100 < 55 {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let c = clique_number(&g);
            assert_eq!(c.size, brute_force_omega(&g), "seed {seed}");
            assert!(g.is_clique(&c.vertices));
        }
    }

    #[test]
    fn hint_is_validated() {
        let g = Graph::cycle(6);
        let c = clique_number_with_hint(&g, &[0, 2, 4]);
        assert_eq!(c.size, 2);
    }

    #[test]
    fn banded_and_list_peeling_agree() {
        let cloud = crate::rgg::sample_points(&crate::rgg::DensityModel::uniform(2), 1500, 7).unwrap();
        let gg = crate::rgg::build_graph(&cloud, 0.06, &crate::geometry::NormSpec::euclidean(2)).unwrap();
        let g = gg.graph();
        let banded = clique_search(g, &[], BANDED_WORD_BUDGET);
        let lists = clique_search(g, &[], 0);
        assert_eq!(banded, lists);
        assert!(g.is_clique(&banded.vertices));
    }
}
