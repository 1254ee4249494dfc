//! Every connected motif up to a size cap, in prior order.
//!
//! Motifs are ordered by (vertex count, edge count, canonical code); the position
//! in that order plus one is the motif index used by the motif prior, so the
//! single edge has index 1.

use super::canon::{canonicalize, hard_max, CanonCode};
use super::small::SmallGraph;
use rayon::prelude::*;
use std::collections::HashSet;
use std::sync::{Arc, Mutex, OnceLock};

/// Connected motifs of one size, sorted by (edge count, code).
type Level = Arc<Vec<(u8, CanonCode)>>;

fn cache(directed: bool) -> &'static Mutex<Vec<Level>> {
    static UNDIRECTED: OnceLock<Mutex<Vec<Level>>> = OnceLock::new();
    static DIRECTED: OnceLock<Mutex<Vec<Level>>> = OnceLock::new();
    let cell = if directed { &DIRECTED } else { &UNDIRECTED };
    cell.get_or_init(|| Mutex::new(Vec::new()))
}

/// Connected motifs of exactly `size` vertices (size >= 1).
fn level(directed: bool, size: usize) -> Level {
    assert!(size >= 1 && size <= hard_max(directed), "universe size {size} beyond code capacity");
    let mut levels = cache(directed).lock().expect("universe cache poisoned");
    if levels.is_empty() {
        let single = SmallGraph::new(1, directed);
        levels.push(Arc::new(vec![(0, canonicalize(&single, false).code)]));
    }
    while levels.len() < size {
        let prev = levels.last().unwrap().clone();
        levels.push(Arc::new(extend(&prev, directed)));
    }
    levels[size - 1].clone()
}

/// Every connected graph has a vertex whose removal leaves it connected, so adding
/// one vertex with a non-empty neighbourhood to each connected graph of the previous
/// size reaches every connected graph of the next size.
fn extend(prev: &[(u8, CanonCode)], directed: bool) -> Vec<(u8, CanonCode)> {
    let found: Vec<Vec<CanonCode>> = prev
        .par_iter()
        .map(|&(_, code)| {
            let g = code.graph(directed);
            let k = g.n();
            let mut local = HashSet::new();
            let masks: u32 = if directed { 1 << (2 * k) } else { 1 << k };
            for mask in 1..masks {
                let (out_to, in_from) = if directed {
                    ((mask & ((1 << k) - 1)) as u16, (mask >> k) as u16)
                } else {
                    (mask as u16, 0)
                };
                local.insert(canonicalize(&g.with_vertex(out_to, in_from), false).code);
            }
            local.into_iter().collect()
        })
        .collect();
    let all: HashSet<CanonCode> = found.into_iter().flatten().collect();
    let mut out: Vec<(u8, CanonCode)> = all
        .into_iter()
        .map(|c| (c.graph(directed).edge_count() as u8, c))
        .collect();
    out.sort_unstable();
    out
}

/// The connected motifs on 2 to `max_size` vertices.
#[derive(Debug, Clone)]
pub struct Universe {
    directed: bool,
    levels: Vec<Level>,
    offsets: Vec<usize>,
}

impl Universe {
    pub fn new(directed: bool, max_size: usize) -> Universe {
        let mut levels = Vec::new();
        let mut offsets = Vec::new();
        let mut total = 0;
        for size in 2..=max_size {
            let l = level(directed, size);
            offsets.push(total);
            total += l.len();
            levels.push(l);
        }
        offsets.push(total);
        Universe { directed, levels, offsets }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn max_size(&self) -> usize {
        self.levels.len() + 1
    }

    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of motifs with exactly `size` vertices.
    pub fn count_of_size(&self, size: usize) -> usize {
        if size < 2 || size > self.max_size() {
            0
        } else {
            self.levels[size - 2].len()
        }
    }

    /// One-based prior index of the motif with this code.
    pub fn index_of(&self, code: &CanonCode) -> Option<usize> {
        let size = code.size as usize;
        if size < 2 || size > self.max_size() {
            return None;
        }
        let level = &self.levels[size - 2];
        let edges = code.graph(self.directed).edge_count() as u8;
        level.binary_search(&(edges, *code)).ok().map(|i| self.offsets[size - 2] + i + 1)
    }

    /// Code of the motif at a one-based index.
    pub fn code_at(&self, index: usize) -> Option<CanonCode> {
        if index == 0 || index > self.len() {
            return None;
        }
        let pos = index - 1;
        let li = self.offsets.partition_point(|&o| o <= pos) - 1;
        Some(self.levels[li][pos - self.offsets[li]].1)
    }

    /// Edge counts of all motifs in index order.
    pub fn edge_counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.iter().flat_map(|l| l.iter().map(|&(e, _)| e as usize))
    }
}

/// Shared universe with the default caps, built once per direction.
pub fn default_universe(directed: bool) -> Arc<Universe> {
    static UNDIRECTED: OnceLock<Arc<Universe>> = OnceLock::new();
    static DIRECTED: OnceLock<Arc<Universe>> = OnceLock::new();
    let cell = if directed { &DIRECTED } else { &UNDIRECTED };
    cell.get_or_init(|| Arc::new(Universe::new(directed, super::default_max_size(directed))))
        .clone()
}
