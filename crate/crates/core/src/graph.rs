//! Simple labeled graphs, directed or undirected.

use crate::error::{Error, Result};
use crate::motif::SmallGraph;

/// A simple graph on vertices `0..n`. Undirected edges are stored with `u < v`.
///
/// Every edge carries a dense id (its position in the sorted edge list), which
/// the inference code uses to track coverage with plain bit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<(u32, u32)>,
    out_adj: Vec<Vec<(u32, u32)>>,
    in_adj: Vec<Vec<(u32, u32)>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, out-of-range endpoints and parallel edges.
    pub fn new(n: usize, directed: bool, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut list: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            list.push(if directed || u < v { (u, v) } else { (v, u) });
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("parallel edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted(n, directed, list))
    }

    fn from_sorted(n: usize, directed: bool, edges: Vec<(u32, u32)>) -> Self {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); if directed { n } else { 0 }];
        for (id, &(u, v)) in edges.iter().enumerate() {
            out_adj[u as usize].push((v, id as u32));
            if directed {
                in_adj[v as usize].push((u, id as u32));
            } else {
                out_adj[v as usize].push((u, id as u32));
            }
        }
        for list in out_adj.iter_mut().chain(in_adj.iter_mut()) {
            list.sort_unstable();
        }
        Graph { n, directed, edges, out_adj, in_adj }
    }

    pub fn empty(n: usize, directed: bool) -> Self {
        Self::from_sorted(n, directed, Vec::new())
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Edges in id order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Out-neighbours (all neighbours when undirected) with edge ids, sorted by neighbour.
    pub fn out_neighbors(&self, v: u32) -> &[(u32, u32)] {
        &self.out_adj[v as usize]
    }

    /// In-neighbours with edge ids; identical to `out_neighbors` when undirected.
    pub fn in_neighbors(&self, v: u32) -> &[(u32, u32)] {
        if self.directed {
            &self.in_adj[v as usize]
        } else {
            &self.out_adj[v as usize]
        }
    }

    pub fn out_degree(&self, v: u32) -> usize {
        self.out_adj[v as usize].len()
    }

    pub fn in_degree(&self, v: u32) -> usize {
        self.in_neighbors(v).len()
    }

    /// Number of incident edges (in plus out for directed graphs).
    pub fn degree(&self, v: u32) -> usize {
        if self.directed {
            self.out_adj[v as usize].len() + self.in_adj[v as usize].len()
        } else {
            self.out_adj[v as usize].len()
        }
    }

    /// Id of the edge `u -> v` (or `{u, v}` when undirected).
    pub fn edge_id(&self, u: u32, v: u32) -> Option<u32> {
        let list = self.out_adj.get(u as usize)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Weak connectivity; the empty graph on zero vertices counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in self.out_neighbors(v).iter().chain(self.in_neighbors(v)) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Subgraph induced by `vertices`, relabeled to `0..vertices.len()`.
    pub fn induced_small(&self, vertices: &[u32]) -> SmallGraph {
        let mut s = SmallGraph::new(vertices.len(), self.directed);
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if i != j && (self.directed || i < j) && self.has_edge(u, v) {
                    s.add_edge(i, j);
                }
            }
        }
        s
    }

    /// Converts a whole (small) graph; fails above the small-graph vertex limit.
    pub fn to_small(&self) -> Result<SmallGraph> {
        if self.n > SmallGraph::MAX_VERTICES {
            return Err(Error::TooLarge { size: self.n, max: SmallGraph::MAX_VERTICES });
        }
        let mut s = SmallGraph::new(self.n, self.directed);
        for &(u, v) in &self.edges {
            s.add_edge(u as usize, v as usize);
        }
        Ok(s)
    }
}
