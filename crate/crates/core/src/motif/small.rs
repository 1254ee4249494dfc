/// A graph on at most 16 vertices stored as adjacency bitmasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: u8,
    directed: bool,
    out: [u16; 16],
    inn: [u16; 16],
}

impl SmallGraph {
    pub const MAX_VERTICES: usize = 16;

    pub fn new(n: usize, directed: bool) -> Self {
        assert!(n <= Self::MAX_VERTICES, "small graphs hold at most 16 vertices");
        SmallGraph { n: n as u8, directed, out: [0; 16], inn: [0; 16] }
    }

    pub fn from_edges(n: usize, directed: bool, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n, directed);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n() && v < self.n());
        self.out[u] |= 1 << v;
        self.inn[v] |= 1 << u;
        if !self.directed {
            self.out[v] |= 1 << u;
            self.inn[u] |= 1 << v;
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u] >> v & 1 == 1
    }

    /// Out-neighbourhood bitmask (all neighbours when undirected).
    pub fn out_mask(&self, v: usize) -> u16 {
        self.out[v]
    }

    pub fn in_mask(&self, v: usize) -> u16 {
        self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.out[v].count_ones()
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.inn[v].count_ones()
    }

    pub fn edge_count(&self) -> usize {
        let arcs: u32 = self.out[..self.n()].iter().map(|m| m.count_ones()).sum();
        if self.directed {
            arcs as usize
        } else {
            arcs as usize / 2
        }
    }

    /// Edge list with `u < v` for undirected graphs, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut list = Vec::new();
        for u in 0..self.n() {
            for v in 0..self.n() {
                if self.has_edge(u, v) && (self.directed || u < v) {
                    list.push((u, v));
                }
            }
        }
        list
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let all: u16 = if n == 16 { u16::MAX } else { (1 << n) - 1 };
        let mut seen: u16 = 1;
        let mut frontier: u16 = 1;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = (self.out[v] | self.inn[v]) & !seen;
            seen |= next;
            frontier |= next;
        }
        seen == all
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[u8]) -> SmallGraph {
        let mut g = SmallGraph::new(self.n(), self.directed);
        for u in 0..self.n() {
            let mut m = self.out[u];
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                g.add_edge(perm[u] as usize, perm[v] as usize);
            }
        }
        g
    }

    /// Copy with one extra vertex joined to the vertices in `out_to` (edges new -> v)
    /// and `in_from` (edges v -> new). For undirected graphs `in_from` is ignored.
    pub fn with_vertex(&self, out_to: u16, in_from: u16) -> SmallGraph {
        let mut g = *self;
        let x = self.n();
        g.n += 1;
        for v in 0..x {
            if out_to >> v & 1 == 1 {
                g.add_edge(x, v);
            }
            if self.directed && in_from >> v & 1 == 1 {
                g.add_edge(v, x);
            }
        }
        g
    }

    /// Row-major adjacency bits: the upper triangle for undirected graphs, every
    /// off-diagonal entry for directed ones. The first entry is the most significant bit.
    pub fn adjacency_bits(&self) -> u64 {
        let n = self.n();
        let mut bits = 0u64;
        for i in 0..n {
            let row = self.out[i];
            let start = if self.directed { 0 } else { i + 1 };
            for j in start..n {
                if j != i {
                    bits = bits << 1 | (row >> j & 1) as u64;
                }
            }
        }
        bits
    }

    /// Inverse of [`adjacency_bits`](Self::adjacency_bits).
    pub fn from_adjacency_bits(n: usize, directed: bool, bits: u64) -> SmallGraph {
        let mut g = SmallGraph::new(n, directed);
        let total = bit_length(n, directed);
        let mut k = 0;
        for i in 0..n {
            let start = if directed { 0 } else { i + 1 };
            for j in start..n {
                if j != i {
                    if bits >> (total - 1 - k) & 1 == 1 {
                        g.add_edge(i, j);
                    }
                    k += 1;
                }
            }
        }
        g
    }
}

/// Number of adjacency bits in a code for `n` vertices.
pub fn bit_length(n: usize, directed: bool) -> usize {
    if directed {
        n * n.saturating_sub(1)
    } else {
        n * n.saturating_sub(1) / 2
    }
}
