//! Greedy packing of edge-disjoint motif embeddings into the uncovered part of a graph.

use crate::graph::Graph;
use crate::motif::Motif;

/// Search steps allowed per (anchor, root) attempt before giving up on it.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000;

/// An embedding: the graph vertex at each canonical motif position.
pub type Embedding = Vec<u32>;

/// Matching plan for one choice of root position.
struct Plan {
    order: Vec<usize>,
    /// For order[i], i >= 1: the earlier order index it is grown from, and whether
    /// the motif edge runs parent -> child (`true`) or child -> parent.
    parent: Vec<(usize, bool)>,
    /// For order[i]: pattern edges to earlier positions as (earlier order index, forward),
    /// where forward means earlier -> current.
    checks: Vec<Vec<(usize, bool)>>,
}

fn plan(m: &Motif, root: usize) -> Plan {
    let g = &m.graph;
    let n = m.size();
    let mut order = vec![root];
    let mut placed = vec![usize::MAX; n];
    placed[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let nbrs = g.out_mask(u) | g.in_mask(u);
        for w in 0..n {
            if nbrs >> w & 1 == 1 && placed[w] == usize::MAX {
                placed[w] = order.len();
                order.push(w);
            }
        }
    }
    let mut parent = vec![(0, true); n];
    let mut checks = vec![Vec::new(); n];
    for (i, &w) in order.iter().enumerate() {
        for (j, &u) in order.iter().enumerate().take(i) {
            if g.has_edge(u, w) {
                checks[i].push((j, true));
            }
            if g.is_directed() && g.has_edge(w, u) {
                checks[i].push((j, false));
            }
        }
        if i > 0 {
            parent[i] = checks[i][0];
        }
    }
    Plan { order, parent, checks }
}

struct Matcher<'a> {
    g: &'a Graph,
    m: &'a Motif,
    avail: Vec<bool>,
    out_deg: Vec<u32>,
    in_deg: Vec<u32>,
    budget: u64,
}

impl Matcher<'_> {
    fn edge(&self, u: u32, v: u32) -> Option<u32> {
        self.g.edge_id(u, v).filter(|&e| self.avail[e as usize])
    }

    fn fits(&self, v: u32, pos: usize) -> bool {
        let g = &self.m.graph;
        if self.m.directed {
            self.out_deg[v as usize] >= g.out_degree(pos) && self.in_deg[v as usize] >= g.in_degree(pos)
        } else {
            self.out_deg[v as usize] >= g.out_degree(pos)
        }
    }

    fn extend(&self, p: &Plan, assign: &mut Vec<u32>, steps: &mut u64) -> bool {
        let i = assign.len();
        if i == p.order.len() {
            return true;
        }
        let pos = p.order[i];
        let (pj, forward) = p.parent[i];
        let from = assign[pj];
        let list = if forward { self.g.out_neighbors(from) } else { self.g.in_neighbors(from) };
        let mut cands: Vec<(u32, u32)> = list
            .iter()
            .filter(|&&(w, e)| self.avail[e as usize] && !assign.contains(&w) && self.fits(w, pos))
            .map(|&(w, _)| (self.out_deg[w as usize] + self.in_deg[w as usize], w))
            .collect();
        cands.sort_unstable();
        for (_, w) in cands {
            *steps += 1;
            if *steps > self.budget {
                return false;
            }
            let ok = p.checks[i].iter().all(|&(j, fwd)| {
                let u = assign[j];
                if fwd {
                    self.edge(u, w).is_some()
                } else {
                    self.edge(w, u).is_some()
                }
            });
            if !ok {
                continue;
            }
            assign.push(w);
            if self.extend(p, assign, steps) {
                return true;
            }
            assign.pop();
        }
        false
    }

    fn consume(&mut self, emb: &[u32]) {
        for &(a, b) in &self.m.edges {
            let (u, v) = (emb[a as usize], emb[b as usize]);
            let e = self.g.edge_id(u, v).expect("embedded edge exists");
            self.avail[e as usize] = false;
            if self.m.directed {
                self.out_deg[u as usize] -= 1;
                self.in_deg[v as usize] -= 1;
            } else {
                self.out_deg[u as usize] -= 1;
                self.out_deg[v as usize] -= 1;
            }
        }
    }
}

/// Edge-disjoint embeddings of `m` that avoid `covered` edges (indexed by edge id).
///
/// Anchors are visited by ascending uncovered degree (ties by id); at each anchor
/// the search is repeated until no further embedding through it exists. The result
/// is maximal, not necessarily maximum.
pub fn find_disjoint_embeddings(g: &Graph, m: &Motif, covered: &[bool]) -> Vec<Embedding> {
    find_disjoint_embeddings_with(g, m, covered, DEFAULT_NODE_BUDGET)
}

pub fn find_disjoint_embeddings_with(g: &Graph, m: &Motif, covered: &[bool], budget: u64) -> Vec<Embedding> {
    assert_eq!(covered.len(), g.n_edges());
    assert_eq!(m.directed, g.is_directed());
    let n = g.n_vertices();
    let avail: Vec<bool> = covered.iter().map(|&c| !c).collect();
    let mut out_deg = vec![0u32; n];
    let mut in_deg = vec![0u32; n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if avail[e] {
            out_deg[u as usize] += 1;
            if g.is_directed() {
                in_deg[v as usize] += 1;
            } else {
                out_deg[v as usize] += 1;
            }
        }
    }
    let mut anchors: Vec<(u32, u32)> =
        (0..n as u32).map(|v| (out_deg[v as usize] + in_deg[v as usize], v)).filter(|&(d, _)| d > 0).collect();
    anchors.sort_unstable();
    let plans: Vec<Plan> = m.orbits.iter().map(|o| plan(m, o.vertices[0] as usize)).collect();
    let mut mt = Matcher { g, m, avail, out_deg, in_deg, budget };
    let mut found = Vec::new();
    for &(_, a) in &anchors {
        'again: loop {
            for p in &plans {
                if !mt.fits(a, p.order[0]) {
                    continue;
                }
                let mut assign = vec![a];
                let mut steps = 0;
                if mt.extend(p, &mut assign, &mut steps) {
                    let mut emb = vec![0u32; m.size()];
                    for (i, &pos) in p.order.iter().enumerate() {
                        emb[pos] = assign[i];
                    }
                    mt.consume(&emb);
                    found.push(emb);
                    continue 'again;
                }
            }
            break;
        }
    }
    found
}

/// Edge ids used by an embedding.
pub fn embedding_edges(g: &Graph, m: &Motif, emb: &[u32]) -> Vec<u32> {
    m.edges
        .iter()
        .map(|&(a, b)| g.edge_id(emb[a as usize], emb[b as usize]).expect("embedded edge exists"))
        .collect()
}
