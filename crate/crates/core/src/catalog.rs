//! An indexed, append-only collection of motifs shared by configurations.

use crate::error::{Error, Result};
use crate::motif::{CanonCode, Motif, SmallGraph};
use std::collections::HashMap;
use std::sync::Arc;

/// Motifs addressed by dense ids. Id 0 is always the single edge.
#[derive(Debug, Clone)]
pub struct Catalog {
    directed: bool,
    motifs: Vec<Arc<Motif>>,
    by_code: HashMap<CanonCode, usize>,
}

impl Catalog {
    pub fn new(directed: bool) -> Catalog {
        let mut c = Catalog { directed, motifs: Vec::new(), by_code: HashMap::new() };
        c.insert(Motif::edge(directed)).expect("edge motif matches direction");
        c
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub const EDGE: usize = 0;

    /// Adds a motif (or finds it) and returns its id.
    pub fn insert(&mut self, m: Motif) -> Result<usize> {
        if m.directed != self.directed {
            return Err(Error::InvalidGraph("motif direction differs from catalog".into()));
        }
        if let Some(&id) = self.by_code.get(&m.code) {
            return Ok(id);
        }
        let id = self.motifs.len();
        self.by_code.insert(m.code, id);
        self.motifs.push(Arc::new(m));
        Ok(id)
    }

    pub fn insert_code(&mut self, code: CanonCode) -> Result<usize> {
        if let Some(&id) = self.by_code.get(&code) {
            return Ok(id);
        }
        self.insert(Motif::from_code(code, self.directed)?)
    }

    pub fn insert_graph(&mut self, g: &SmallGraph) -> Result<usize> {
        self.insert(Motif::from_graph(g, crate::motif::hard_max(self.directed))?)
    }

    pub fn get(&self, id: usize) -> &Motif {
        &self.motifs[id]
    }

    pub fn id_of(&self, code: &CanonCode) -> Option<usize> {
        self.by_code.get(code).copied()
    }

    pub fn len(&self) -> usize {
        self.motifs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motifs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Motif)> {
        self.motifs.iter().enumerate().map(|(i, m)| (i, m.as_ref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_first_and_dedup() {
        let mut c = Catalog::new(false);
        assert!(c.get(Catalog::EDGE).is_single_edge());
        let a = c.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        let b = c.insert_graph(&SmallGraph::from_edges(3, false, &[(2, 1), (1, 0), (2, 0)])).unwrap();
        assert_eq!(a, b);
        assert_eq!(c.len(), 2);
        assert!(c.insert(Motif::edge(true)).is_err());
    }
}
