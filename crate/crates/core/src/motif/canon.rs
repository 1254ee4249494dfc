//! Canonical labeling by individualization and refinement.
//!
//! The search tree is explored completely. Every leaf is a discrete ordered
//! partition, i.e. a relabeling; the canonical code is the smallest adjacency
//! code among the leaves. Leaves that reproduce the smallest code differ from the
//! best leaf by an automorphism, and distinct leaves give distinct relabelings, so
//! counting them yields |Aut| and composing them yields the group itself.

use super::small::{bit_length, SmallGraph};
use crate::error::{Error, Result};
use std::fmt;

/// Largest undirected graph whose code fits in 64 bits.
pub const HARD_MAX_UNDIRECTED: usize = 11;
/// Largest directed graph whose code fits in 64 bits.
pub const HARD_MAX_DIRECTED: usize = 8;

/// Isomorphism-class code: vertex count plus the canonical adjacency bits.
///
/// The derived order compares the size first and then the bits, which agrees with
/// comparing the byte encoding lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonCode {
    pub size: u8,
    pub bits: u64,
}

impl CanonCode {
    /// Size byte followed by the adjacency bits, most significant first, zero padded.
    pub fn to_bytes(&self, directed: bool) -> Vec<u8> {
        let len = bit_length(self.size as usize, directed);
        let nbytes = len.div_ceil(8);
        let mut out = Vec::with_capacity(1 + nbytes);
        out.push(self.size);
        let aligned = if len == 0 { 0 } else { self.bits << (64 - len) };
        for i in 0..nbytes {
            out.push((aligned >> (56 - 8 * i)) as u8);
        }
        out
    }

    pub fn from_bytes(bytes: &[u8], directed: bool) -> Option<CanonCode> {
        let (&size, rest) = bytes.split_first()?;
        let len = bit_length(size as usize, directed);
        if len > 64 || rest.len() != len.div_ceil(8) {
            return None;
        }
        let mut aligned = 0u64;
        for (i, &b) in rest.iter().enumerate() {
            aligned |= (b as u64) << (56 - 8 * i);
        }
        let bits = if len == 0 { 0 } else { aligned >> (64 - len) };
        if len > 0 && len < 64 && aligned << len != 0 {
            return None;
        }
        Some(CanonCode { size, bits })
    }

    pub fn to_hex(&self, directed: bool) -> String {
        self.to_bytes(directed).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn graph(&self, directed: bool) -> SmallGraph {
        SmallGraph::from_adjacency_bits(self.size as usize, directed, self.bits)
    }
}

impl fmt::Display for CanonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:x}", self.size, self.bits)
    }
}

/// Outcome of a canonical labeling search.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub code: CanonCode,
    /// `perm[v]` is the canonical position of input vertex `v`.
    pub perm: Vec<u8>,
    pub aut_order: u64,
    /// Orbit representative (smallest member) for every input vertex.
    pub orbit_rep: Vec<u8>,
    /// Automorphisms of the canonical graph, as position maps, when requested.
    pub automorphisms: Vec<Vec<u8>>,
}

pub fn hard_max(directed: bool) -> usize {
    if directed {
        HARD_MAX_DIRECTED
    } else {
        HARD_MAX_UNDIRECTED
    }
}

/// Canonical form of a connected small graph with at most `max_size` vertices.
pub fn canonical_form(g: &SmallGraph, max_size: usize) -> Result<Canonical> {
    check(g, max_size)?;
    Ok(canonicalize(g, true))
}

/// Canonical code only; skips automorphism collection.
pub fn canonical_code(g: &SmallGraph, max_size: usize) -> Result<CanonCode> {
    check(g, max_size)?;
    Ok(canonicalize(g, false).code)
}

fn check(g: &SmallGraph, max_size: usize) -> Result<()> {
    let max = max_size.min(hard_max(g.is_directed()));
    if g.n() > max {
        return Err(Error::TooLarge { size: g.n(), max });
    }
    if g.n() == 0 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Runs the search on any graph within the hard size limit, connected or not.
pub(crate) fn canonicalize(g: &SmallGraph, collect: bool) -> Canonical {
    let n = g.n();
    assert!(n <= hard_max(g.is_directed()));
    let mut st = Search {
        g,
        collect,
        best: None,
        best_perm: [0; 16],
        best_inv: [0; 16],
        count: 0,
        uf: [0; 16],
        autos: Vec::new(),
    };
    let mut colors = [0u8; 16];
    let cells = refine(g, &mut colors, 1);
    st.descend(colors, cells);

    let mut orbit_rep = vec![0u8; n];
    for (v, rep) in orbit_rep.iter_mut().enumerate() {
        *rep = st.find(v as u8);
    }
    // Representatives from union-find are arbitrary members; use the minimum.
    let mut min_of = [u8::MAX; 16];
    for v in 0..n {
        let r = orbit_rep[v] as usize;
        min_of[r] = min_of[r].min(v as u8);
    }
    for rep in orbit_rep.iter_mut() {
        *rep = min_of[*rep as usize];
    }
    Canonical {
        code: CanonCode { size: n as u8, bits: st.best.unwrap_or(0) },
        perm: st.best_perm[..n].to_vec(),
        aut_order: st.count,
        orbit_rep,
        automorphisms: st.autos,
    }
}

struct Search<'a> {
    g: &'a SmallGraph,
    collect: bool,
    best: Option<u64>,
    best_perm: [u8; 16],
    best_inv: [u8; 16],
    count: u64,
    uf: [u8; 16],
    autos: Vec<Vec<u8>>,
}

impl Search<'_> {
    fn descend(&mut self, colors: [u8; 16], cells: usize) {
        let n = self.g.n();
        if cells == n {
            self.leaf(&colors);
            return;
        }
        // Target cell: the first cell with more than one vertex.
        let mut sizes = [0u8; 16];
        for &c in &colors[..n] {
            sizes[c as usize] += 1;
        }
        let target = (0..cells).find(|&c| sizes[c] > 1).expect("non-discrete partition") as u8;
        for v in 0..n {
            if colors[v] != target {
                continue;
            }
            let mut child = [0u8; 16];
            for u in 0..n {
                child[u] = 2 * colors[u] + u8::from(colors[u] == target && u != v);
            }
            let child_cells = renumber(&mut child, n);
            let child_cells = refine(self.g, &mut child, child_cells);
            self.descend(child, child_cells);
        }
    }

    fn leaf(&mut self, perm: &[u8; 16]) {
        let n = self.g.n();
        let code = self.g.permuted(&perm[..n]).adjacency_bits();
        match self.best {
            Some(b) if code > b => {}
            Some(b) if code == b => {
                self.count += 1;
                // sigma(v): the vertex occupying v's leaf position in the best leaf.
                for v in 0..n {
                    let w = self.best_inv[perm[v] as usize];
                    self.union(v as u8, w);
                }
                if self.collect {
                    // As a map on canonical positions: p -> best_perm[sigma(best_inv[p])].
                    let auto: Vec<u8> = (0..n)
                        .map(|p| {
                            let u = self.best_inv[p] as usize;
                            let s = self.best_inv[perm[u] as usize];
                            self.best_perm[s as usize]
                        })
                        .collect();
                    self.autos.push(auto);
                }
            }
            _ => {
                self.best = Some(code);
                self.best_perm = *perm;
                for v in 0..n {
                    self.best_inv[perm[v] as usize] = v as u8;
                }
                self.count = 1;
                for (i, slot) in self.uf.iter_mut().enumerate() {
                    *slot = i as u8;
                }
                self.autos.clear();
                if self.collect {
                    self.autos.push((0..n as u8).collect());
                }
            }
        }
    }

    fn find(&mut self, mut x: u8) -> u8 {
        while self.uf[x as usize] != x {
            let p = self.uf[x as usize];
            self.uf[x as usize] = self.uf[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.uf[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Maps arbitrary color keys to dense ranks `0..k`, preserving order.
fn renumber(colors: &mut [u8; 16], n: usize) -> usize {
    let mut present = [false; 256];
    for &c in &colors[..n] {
        present[c as usize] = true;
    }
    let mut rank = [0u8; 256];
    let mut k = 0u8;
    for c in 0..256 {
        if present[c] {
            rank[c] = k;
            k += 1;
        }
    }
    for c in colors[..n].iter_mut() {
        *c = rank[*c as usize];
    }
    k as usize
}

/// Equitable refinement. Each vertex is split by its neighbour counts into every
/// cell (out and in counts when directed); new cells keep the order of their parent.
fn refine(g: &SmallGraph, colors: &mut [u8; 16], mut cells: usize) -> usize {
    let n = g.n();
    loop {
        if cells == n {
            return cells;
        }
        let mut masks = [0u16; 16];
        for v in 0..n {
            masks[colors[v] as usize] |= 1 << v;
        }
        let mut sig = [0u128; 16];
        for v in 0..n {
            let mut s = colors[v] as u128;
            let (om, im) = (g.out_mask(v), g.in_mask(v));
            for &mask in &masks[..cells] {
                s = s << 4 | (om & mask).count_ones() as u128;
                if g.is_directed() {
                    s = s << 4 | (im & mask).count_ones() as u128;
                }
            }
            sig[v] = s;
        }
        let mut sorted: Vec<u128> = sig[..n].to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() == cells {
            return cells;
        }
        for v in 0..n {
            colors[v] = sorted.binary_search(&sig[v]).unwrap() as u8;
        }
        cells = sorted.len();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(n: usize, directed: bool, edges: &[(usize, usize)]) -> CanonCode {
        canonical_code(&SmallGraph::from_edges(n, directed, edges), 8).unwrap()
    }

    #[test]
    fn relabeled_triangle_same_code() {
        assert_eq!(code(3, false, &[(0, 1), (0, 2), (1, 2)]), code(3, false, &[(0, 2), (2, 1), (1, 0)]));
    }

    #[test]
    fn path_differs_from_triangle() {
        assert_ne!(code(3, false, &[(0, 1), (1, 2)]), code(3, false, &[(0, 1), (1, 2), (0, 2)]));
    }

    #[test]
    fn cycle_differs_from_feed_forward_loop() {
        assert_ne!(code(3, true, &[(0, 1), (1, 2), (2, 0)]), code(3, true, &[(0, 1), (1, 2), (0, 2)]));
    }

    #[test]
    fn automorphism_orders() {
        let aut = |n, d, e: &[(usize, usize)]| canonical_form(&SmallGraph::from_edges(n, d, e), 8).unwrap().aut_order;
        assert_eq!(aut(3, false, &[(0, 1), (1, 2), (0, 2)]), 6);
        assert_eq!(aut(3, false, &[(0, 1), (1, 2)]), 2);
        assert_eq!(aut(3, true, &[(0, 1), (1, 2), (2, 0)]), 3);
        assert_eq!(aut(3, true, &[(0, 1), (1, 2), (0, 2)]), 1);
        assert_eq!(aut(4, false, &[(0, 1), (1, 2), (2, 3), (3, 0)]), 8);
    }

    #[test]
    fn rejects_bad_input() {
        let disconnected = SmallGraph::from_edges(4, false, &[(0, 1), (2, 3)]);
        assert_eq!(canonical_code(&disconnected, 8), Err(Error::Disconnected));
        let big = SmallGraph::from_edges(6, false, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        assert!(matches!(canonical_code(&big, 5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn perm_maps_to_canonical_graph() {
        let g = SmallGraph::from_edges(5, true, &[(0, 1), (1, 2), (2, 0), (3, 2), (4, 3)]);
        let c = canonical_form(&g, 8).unwrap();
        assert_eq!(g.permuted(&c.perm).adjacency_bits(), c.code.bits);
        for auto in &c.automorphisms {
            let canon = c.code.graph(true);
            assert_eq!(canon.permuted(auto), canon);
        }
    }

    #[test]
    fn bytes_round_trip() {
        let c = code(4, false, &[(0, 1), (1, 2), (2, 3)]);
        let bytes = c.to_bytes(false);
        assert_eq!(bytes.len(), 2);
        assert_eq!(CanonCode::from_bytes(&bytes, false), Some(c));
        let d = code(3, true, &[(0, 1), (1, 2)]);
        assert_eq!(CanonCode::from_bytes(&d.to_bytes(true), true), Some(d));
    }
}
