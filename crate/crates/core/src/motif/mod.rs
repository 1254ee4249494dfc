//! Motifs: isomorphism classes of small connected graphs with their automorphism
//! groups and orbit partitions.

mod canon;
mod small;
pub mod universe;

pub use canon::{canonical_code, canonical_form, hard_max, CanonCode, Canonical, HARD_MAX_DIRECTED, HARD_MAX_UNDIRECTED};
pub use small::SmallGraph;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math::{ln_falling, ln_factorial};

/// Default motif size caps: 8 vertices undirected, 5 directed.
pub fn default_max_size(directed: bool) -> usize {
    if directed {
        5
    } else {
        8
    }
}

/// Canonical form of a whole [`Graph`].
pub fn canonical_form_graph(g: &Graph, max_size: usize) -> Result<Canonical> {
    canonical_form(&g.to_small()?, max_size)
}

/// A class of structurally equivalent motif vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Canonical positions in this orbit, ascending.
    pub vertices: Vec<u8>,
    /// Out-degree inside the motif (the plain degree when undirected).
    pub out_degree: u32,
    /// In-degree inside the motif (equal to `out_degree` when undirected).
    pub in_degree: u32,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Number of motif edges incident to one vertex of the orbit.
    pub fn degree(&self, directed: bool) -> u32 {
        if directed {
            self.out_degree + self.in_degree
        } else {
            self.out_degree
        }
    }
}

/// A connected motif in canonical labeling.
#[derive(Debug, Clone)]
pub struct Motif {
    pub code: CanonCode,
    pub directed: bool,
    pub graph: SmallGraph,
    /// Edges between canonical positions (`u < v` when undirected).
    pub edges: Vec<(u8, u8)>,
    pub aut_order: u64,
    /// Automorphisms as maps on canonical positions; the identity comes first.
    pub automorphisms: Vec<Vec<u8>>,
    pub orbits: Vec<Orbit>,
    /// Orbit index of every canonical position.
    pub orbit_of: Vec<usize>,
}

impl PartialEq for Motif {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed && self.code == other.code
    }
}

impl Eq for Motif {}

impl Motif {
    /// Canonicalizes `g` and builds the motif with its group and orbits.
    pub fn from_graph(g: &SmallGraph, max_size: usize) -> Result<Motif> {
        let c = canonical_form(g, max_size)?;
        Ok(Self::from_canonical(g, &c))
    }

    pub fn from_code(code: CanonCode, directed: bool) -> Result<Motif> {
        Self::from_graph(&code.graph(directed), hard_max(directed))
    }

    fn from_canonical(g: &SmallGraph, c: &Canonical) -> Motif {
        let n = g.n();
        let directed = g.is_directed();
        let graph = g.permuted(&c.perm);
        let edges = graph.edges().into_iter().map(|(u, v)| (u as u8, v as u8)).collect();
        // Orbit representatives are given on input vertices; translate to positions.
        let mut rep_pos = vec![0u8; n];
        for v in 0..n {
            rep_pos[c.perm[v] as usize] = c.perm[c.orbit_rep[v] as usize];
        }
        let mut groups: Vec<Vec<u8>> = Vec::new();
        let mut orbit_of = vec![usize::MAX; n];
        for p in 0..n {
            if orbit_of[p] != usize::MAX {
                continue;
            }
            let id = groups.len();
            let members: Vec<u8> = (0..n as u8).filter(|&q| rep_pos[q as usize] == rep_pos[p]).collect();
            for &q in &members {
                orbit_of[q as usize] = id;
            }
            groups.push(members);
        }
        let orbits = groups
            .into_iter()
            .map(|vertices| {
                let v = vertices[0] as usize;
                Orbit { vertices, out_degree: graph.out_degree(v), in_degree: graph.in_degree(v) }
            })
            .collect();
        Motif {
            code: c.code,
            directed,
            graph,
            edges,
            aut_order: c.aut_order,
            automorphisms: c.automorphisms.clone(),
            orbits,
            orbit_of,
        }
    }

    /// The single edge (a directed arc when `directed`).
    pub fn edge(directed: bool) -> Motif {
        Self::from_graph(&SmallGraph::from_edges(2, directed, &[(0, 1)]), 2).expect("edge is connected")
    }

    pub fn size(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_single_edge(&self) -> bool {
        self.size() == 2 && self.edges.len() == 1
    }

    /// `mu = prod_i |O_i|! / |Aut|`, the number of distinct subgraphs for fixed orbit roles.
    pub fn mu(&self) -> u64 {
        let prod: u64 = self.orbits.iter().map(|o| (1..=o.size() as u64).product::<u64>()).product();
        prod / self.aut_order
    }

    /// Number of placements of this motif in `K_n`, exactly when it fits in a `u128`.
    pub fn count_placements(&self, n: usize) -> Result<Option<u128>> {
        self.check_fits(n)?;
        let mut acc: u128 = 1;
        for j in 0..self.size() {
            match acc.checked_mul((n - j) as u128) {
                Some(x) => acc = x,
                None => return Ok(None),
            }
        }
        Ok(Some(acc / self.aut_order as u128))
    }

    /// `ln |H_{N,m}| = ln N! - ln (N - |m|)! - ln |Aut(m)|`.
    pub fn count_placements_log(&self, n: usize) -> Result<f64> {
        self.check_fits(n)?;
        let nf = n as f64;
        Ok(ln_falling(nf, nf.ln(), self.size() as u64) - (self.aut_order as f64).ln())
    }

    fn check_fits(&self, n: usize) -> Result<()> {
        if n < self.size() {
            return Err(Error::TooFewVertices { needed: self.size(), available: n });
        }
        Ok(())
    }

    /// Automorphism-minimal form of a vertex tuple: the lexicographically least
    /// `t[a(0)], t[a(1)], ...` over all automorphisms `a`.
    pub fn normalize_tuple(&self, tuple: &[u32]) -> Vec<u32> {
        let mut best: Vec<u32> = tuple.to_vec();
        let mut cand = vec![0u32; tuple.len()];
        for a in &self.automorphisms {
            for (i, slot) in cand.iter_mut().enumerate() {
                *slot = tuple[a[i] as usize];
            }
            if cand < best {
                best.copy_from_slice(&cand);
            }
        }
        best
    }

    /// `ln |m|!`, handy for tests that compare against brute force.
    pub fn ln_size_factorial(&self) -> f64 {
        ln_factorial(self.size() as u64)
    }
}
