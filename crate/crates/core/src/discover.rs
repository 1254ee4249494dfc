//! Candidate atoms: classes of connected subgraphs that actually occur in a graph.
//!
//! Connected vertex sets are enumerated exhaustively (ESU) until the budget is
//! spent, then sampled by random expansion. Each induced subgraph contributes its
//! own class and the classes of its connected spanning subgraphs, so motifs that
//! occur only non-induced are found as well.

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::{canonical_code, hard_max, CanonCode, SmallGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscoverOptions {
    pub max_size: usize,
    /// Connected vertex sets visited exhaustively before switching to sampling;
    /// also the number of samples drawn afterwards.
    pub budget: usize,
    pub seed: u64,
    /// Induced classes with at most this many edges have all spanning subgraphs enumerated.
    pub exhaustive_edges: usize,
    /// Random spanning subgraphs drawn for larger induced classes.
    pub spanning_samples: usize,
}

impl DiscoverOptions {
    pub fn new(max_size: usize, budget: usize, seed: u64) -> Self {
        DiscoverOptions { max_size, budget, seed, exhaustive_edges: 12, spanning_samples: 64 }
    }
}

#[derive(Debug, Clone)]
pub struct Discovery {
    /// Edge first, then the other classes in (size, edge count, code) order.
    pub catalog: Catalog,
    pub vertex_sets: usize,
    /// Whether the enumeration finished within the budget.
    pub exhaustive: bool,
    pub induced_classes: usize,
}

pub fn discover_candidates(g: &Graph, opts: &DiscoverOptions) -> Result<Discovery> {
    let cap = hard_max(g.is_directed());
    if opts.max_size < 2 || opts.max_size > cap {
        return Err(Error::TooLarge { size: opts.max_size, max: cap });
    }
    let nbrs: Vec<Vec<u32>> = (0..g.n_vertices() as u32)
        .map(|v| {
            let mut l: Vec<u32> = g.out_neighbors(v).iter().chain(g.in_neighbors(v)).map(|&(w, _)| w).collect();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    let mut census = Census { g, memo: HashMap::new(), classes: BTreeSet::new(), visited: 0 };
    let exhaustive = esu(&nbrs, opts.max_size, opts.budget, &mut census);
    if !exhaustive {
        sample_sets(&nbrs, opts, &mut census);
    }
    let induced: Vec<CanonCode> = census.classes.iter().copied().collect();
    let directed = g.is_directed();
    let spanning: Vec<Vec<CanonCode>> = induced
        .par_iter()
        .enumerate()
        .map(|(i, code)| spanning_classes(code.graph(directed), opts, i as u64))
        .collect();
    let mut all: BTreeSet<(usize, usize, CanonCode)> = BTreeSet::new();
    for code in spanning.into_iter().flatten().chain(induced.iter().copied()) {
        all.insert((code.size as usize, code.graph(directed).edge_count(), code));
    }
    let mut catalog = Catalog::new(directed);
    for (_, _, code) in all {
        catalog.insert_code(code)?;
    }
    Ok(Discovery { catalog, vertex_sets: census.visited, exhaustive, induced_classes: induced.len() })
}

struct Census<'a> {
    g: &'a Graph,
    memo: HashMap<(u8, u64), CanonCode>,
    classes: BTreeSet<CanonCode>,
    visited: usize,
}

impl Census<'_> {
    fn record(&mut self, set: &[u32]) {
        self.visited += 1;
        let small = self.g.induced_small(set);
        let key = (set.len() as u8, small.adjacency_bits());
        let code = *self
            .memo
            .entry(key)
            .or_insert_with(|| canonical_code(&small, small.n()).expect("connected vertex set"));
        self.classes.insert(code);
    }
}

/// ESU over all sizes 2..=k. Returns false if the budget ran out.
fn esu(nbrs: &[Vec<u32>], k: usize, budget: usize, census: &mut Census) -> bool {
    for v in 0..nbrs.len() as u32 {
        let ext: Vec<u32> = nbrs[v as usize].iter().copied().filter(|&w| w > v).collect();
        if !esu_extend(nbrs, k, budget, &mut vec![v], ext, v, census) {
            return false;
        }
    }
    true
}

fn esu_extend(
    nbrs: &[Vec<u32>],
    k: usize,
    budget: usize,
    sub: &mut Vec<u32>,
    mut ext: Vec<u32>,
    root: u32,
    census: &mut Census,
) -> bool {
    if sub.len() >= 2 {
        if census.visited >= budget {
            return false;
        }
        census.record(sub);
    }
    if sub.len() == k {
        return true;
    }
    while let Some(w) = ext.pop() {
        // Exclusive neighbours of w: not in sub and not adjacent to sub.
        let mut next = ext.clone();
        for &u in &nbrs[w as usize] {
            if u > root
                && !sub.contains(&u)
                && !next.contains(&u)
                && !sub.iter().any(|&s| nbrs[s as usize].binary_search(&u).is_ok())
            {
                next.push(u);
            }
        }
        sub.push(w);
        let ok = esu_extend(nbrs, k, budget, sub, next, root, census);
        sub.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Random connected sets grown from random vertices.
fn sample_sets(nbrs: &[Vec<u32>], opts: &DiscoverOptions, census: &mut Census) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<u32> = (0..nbrs.len() as u32).filter(|&v| !nbrs[v as usize].is_empty()).collect();
    if starts.is_empty() {
        return;
    }
    for _ in 0..opts.budget {
        let target = rng.gen_range(2..=opts.max_size);
        let mut set = vec![*starts.choose(&mut rng).unwrap()];
        while set.len() < target {
            let frontier: BTreeSet<u32> =
                set.iter().flat_map(|&s| nbrs[s as usize].iter().copied()).filter(|u| !set.contains(u)).collect();
            if frontier.is_empty() {
                break;
            }
            let f: Vec<u32> = frontier.into_iter().collect();
            set.push(*f.choose(&mut rng).unwrap());
        }
        if set.len() >= 2 {
            census.record(&set);
        }
    }
}

/// Classes of connected spanning subgraphs of `h`.
fn spanning_classes(h: SmallGraph, opts: &DiscoverOptions, stream: u64) -> Vec<CanonCode> {
    let n = h.n();
    let edges = h.edges();
    let mut seen_bits: HashSet<u64> = HashSet::new();
    let mut out: HashSet<CanonCode> = HashSet::new();
    let mut consider = |mask: u64, out: &mut HashSet<CanonCode>| {
        let sub_edges: Vec<(usize, usize)> =
            edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let s = SmallGraph::from_edges(n, h.is_directed(), &sub_edges);
        if seen_bits.insert(s.adjacency_bits()) && s.is_connected() {
            out.insert(canonical_code(&s, n).expect("connected"));
        }
    };
    if edges.len() <= opts.exhaustive_edges {
        for mask in 1..(1u64 << edges.len()) {
            if (mask.count_ones() as usize) + 1 >= n {
                consider(mask, &mut out);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(stream);
        let full = (1u64 << edges.len()) - 1;
        consider(full, &mut out);
        for _ in 0..opts.spanning_samples {
            // Random spanning tree by shuffled Kruskal, then each other edge with probability 1/2.
            let mut order: Vec<usize> = (0..edges.len()).collect();
            order.shuffle(&mut rng);
            let mut comp: Vec<usize> = (0..n).collect();
            fn root(c: &mut [usize], mut x: usize) -> usize {
                while c[x] != x {
                    c[x] = c[c[x]];
                    x = c[x];
                }
                x
            }
            let mut mask = 0u64;
            for &i in &order {
                let (a, b) = edges[i];
                let (ra, rb) = (root(&mut comp, a), root(&mut comp, b));
                if ra != rb {
                    comp[ra] = rb;
                    mask |= 1 << i;
                } else if rng.gen_bool(0.5) {
                    mask |= 1 << i;
                }
            }
            consider(mask, &mut out);
        }
    }
    out.into_iter().collect()
}
