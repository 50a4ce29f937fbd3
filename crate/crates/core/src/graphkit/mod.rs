//! Clique number, chromatic number and fractional chromatic number of
//! graphs, with the grid-LP colouring of geometric graphs.

mod bitset;
mod clique;
mod colouring;
mod fractional;
mod grid_lp;
pub mod lp;

pub use bitset::BitSet;
pub use clique::{clique_number, clique_number_with_hint, greedy_clique, Clique};
pub use colouring::{
    chromatic_bounds, chromatic_number_exact, degeneracy_order, dsatur_colouring, geometric_chromatic_bounds,
    greedy_colouring, ChromaticBounds, DEFAULT_NODE_BUDGET,
};
pub use fractional::{
    all_stable_sets, dual_bound, fractional_chromatic, fractional_chromatic_exact, max_weight_stable_set,
    FractionalSolution,
};
pub use grid_lp::{grid_lp_colouring, GridLpReport};

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Simple undirected graph on `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    pub fn complete(n: usize) -> Self {
        Self { adj: (0..n).map(|i| (0..n as u32).filter(|&j| j as usize != i).collect()).collect() }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("valid cycle")
    }

    /// Builds a graph from an edge list; duplicate edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self loop at {u}")));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adj })
    }

    /// Adjacency lists that are already sorted, symmetric and loop-free.
    pub fn from_sorted_adjacency(adj: Vec<Vec<u32>>) -> Self {
        debug_assert!(adj.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        Self { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, l)| l.iter().filter(move |&&j| j as usize > i).map(move |&j| (i, j as usize)))
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(a, &u)| vs[a + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    pub fn is_stable(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(a, &u)| vs[a + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &self.adj[u] {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        comp.push(v as usize);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Subgraph induced on `vs`; vertex `k` of the result is `vs[k]`.
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut local = std::collections::HashMap::with_capacity(vs.len());
        for (k, &v) in vs.iter().enumerate() {
            local.insert(v as u32, k as u32);
        }
        let adj = vs
            .iter()
            .map(|&v| {
                let mut l: Vec<u32> = self.adj[v].iter().filter_map(|u| local.get(u).copied()).collect();
                l.sort_unstable();
                l
            })
            .collect();
        Graph { adj }
    }

    /// Edge list: header `n m`, then one `i j` row per edge, 0-based.
    pub fn write_edge_list(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.n(), self.edge_count())?;
        for (i, j) in self.edges() {
            writeln!(w, "{i} {j}")?;
        }
        Ok(())
    }

    pub fn read_edge_list(r: impl BufRead) -> Result<Self> {
        let mut rows = r.lines().enumerate().filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let parse_pair = |line: usize, text: &str| -> Result<(usize, usize)> {
            let mut it = text.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => Err(Error::Parse { line, message: "expected two integers".into() }),
            }
        };
        let (i, header) = rows.next().ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
        let (n, m) = parse_pair(i + 1, &header?)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (i, row) = rows.next().ok_or(Error::Parse { line: i + 2, message: "too few edges".into() })?;
            edges.push(parse_pair(i + 1, &row?)?);
        }
        if let Some((i, _)) = rows.next() {
            return Err(Error::Parse { line: i + 1, message: "more edges than the header announces".into() });
        }
        Self::from_edges(n, &edges).map_err(|e| Error::Parse { line: 0, message: e.to_string() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColouringMethod {
    Exact,
    Greedy,
    GridLp,
}

/// A proper vertex colouring with colours `0..palette`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringResult {
    pub colours: Vec<usize>,
    pub palette: usize,
    pub method: ColouringMethod,
}

impl ColouringResult {
    /// Renumbers colours to `0..k` in order of first appearance.
    pub fn compact(colours: Vec<usize>, method: ColouringMethod) -> Self {
        let mut map = std::collections::HashMap::new();
        let colours: Vec<usize> = colours
            .into_iter()
            .map(|c| {
                let next = map.len();
                *map.entry(c).or_insert(next)
            })
            .collect();
        Self { palette: map.len(), colours, method }
    }

    /// Proper, and `palette` equals the number of distinct colours.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        if self.colours.len() != g.n() {
            return Err(Error::InvariantViolated(format!(
                "colouring has {} entries for {} vertices",
                self.colours.len(),
                g.n()
            )));
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| self.colours[u] == self.colours[v]) {
            return Err(Error::InvariantViolated(format!("edge ({u},{v}) is monochromatic")));
        }
        let mut distinct = self.colours.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != self.palette {
            return Err(Error::InvariantViolated(format!(
                "palette {} but {} colours used",
                self.palette,
                distinct.len()
            )));
        }
        Ok(())
    }
}
