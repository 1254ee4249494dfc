//! Subgraph configurations: sets of placed atoms over the vertices of a graph.

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::Motif;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// One placed subgraph: a motif id and the graph vertex at each canonical position.
///
/// The tuple is kept in automorphism-minimal form, so two placements compare equal
/// exactly when they describe the same subgraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    pub motif: usize,
    pub vertices: Vec<u32>,
}

impl Placement {
    pub fn new(catalog: &Catalog, motif: usize, vertices: &[u32]) -> Result<Placement> {
        let m = catalog.get(motif);
        if vertices.len() != m.size() {
            return Err(Error::InvalidPlacement(format!(
                "motif has {} vertices, tuple has {}",
                m.size(),
                vertices.len()
            )));
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPlacement(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Placement { motif, vertices: m.normalize_tuple(vertices) })
    }

    /// Single-edge placement for the edge `u -> v` (or `{u, v}`).
    pub fn edge(catalog: &Catalog, u: u32, v: u32) -> Placement {
        let m = catalog.get(Catalog::EDGE);
        let vertices = if m.directed {
            if m.edges[0] == (0, 1) {
                vec![u, v]
            } else {
                vec![v, u]
            }
        } else {
            vec![u.min(v), u.max(v)]
        };
        Placement { motif: Catalog::EDGE, vertices }
    }

    /// Graph edges of this placement (`u < v` when undirected).
    pub fn edges<'a>(&'a self, m: &'a Motif) -> impl Iterator<Item = (u32, u32)> + 'a {
        m.edges.iter().map(move |&(a, b)| {
            let (u, v) = (self.vertices[a as usize], self.vertices[b as usize]);
            if m.directed || u < v {
                (u, v)
            } else {
                (v, u)
            }
        })
    }
}

/// A set of placements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgraphConfiguration {
    placements: BTreeSet<Placement>,
}

impl SubgraphConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a placement; returns false if it was already present.
    pub fn insert(&mut self, p: Placement) -> bool {
        self.placements.insert(p)
    }

    pub fn contains(&self, p: &Placement) -> bool {
        self.placements.contains(p)
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Placement> {
        self.placements.iter()
    }

    /// Configuration made of every edge of `g` as a single-edge atom.
    pub fn all_edges(catalog: &Catalog, g: &Graph) -> Self {
        let placements = g.edges().iter().map(|&(u, v)| Placement::edge(catalog, u, v)).collect();
        SubgraphConfiguration { placements }
    }

    /// Atom counts `n_m`, keyed by catalog id; motifs with no placement are absent.
    pub fn atom_counts(&self) -> BTreeMap<usize, u64> {
        let mut counts = BTreeMap::new();
        for p in &self.placements {
            *counts.entry(p.motif).or_insert(0) += 1;
        }
        counts
    }
}

impl FromIterator<Placement> for SubgraphConfiguration {
    fn from_iter<I: IntoIterator<Item = Placement>>(iter: I) -> Self {
        SubgraphConfiguration { placements: iter.into_iter().collect() }
    }
}

/// The projected graph plus how often each edge was produced.
#[derive(Debug, Clone)]
pub struct Projection {
    pub graph: Graph,
    pub multiplicity: BTreeMap<(u32, u32), u32>,
}

impl Projection {
    /// Number of edges produced more than once.
    pub fn parallel_edges(&self) -> usize {
        self.multiplicity.values().filter(|&&k| k > 1).count()
    }
}

/// Union of the placed edge sets.
pub fn project(c: &SubgraphConfiguration, catalog: &Catalog, n_vertices: usize) -> Result<Projection> {
    let mut multiplicity: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for p in c.iter() {
        if let Some(&v) = p.vertices.iter().find(|&&v| v as usize >= n_vertices) {
            return Err(Error::InvalidPlacement(format!("vertex {v} outside 0..{n_vertices}")));
        }
        for e in p.edges(catalog.get(p.motif)) {
            *multiplicity.entry(e).or_insert(0) += 1;
        }
    }
    let graph = Graph::new(n_vertices, catalog.is_directed(), multiplicity.keys().copied())?;
    Ok(Projection { graph, multiplicity })
}

/// Whether the configuration's edges are exactly the edges of `g`.
pub fn is_cover(c: &SubgraphConfiguration, catalog: &Catalog, g: &Graph) -> bool {
    match project(c, catalog, g.n_vertices()) {
        Ok(p) => p.graph.edges() == g.edges(),
        Err(_) => false,
    }
}

/// Aggregation level of atomic degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Granularity {
    Orbit,
    Motif,
    Total,
    Directed,
}

/// One component of an atomic degree sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKey {
    Orbit { motif: usize, orbit: usize },
    Motif(usize),
    Total,
    InOnly,
    OutOnly,
    Mixed,
}

impl Granularity {
    /// Component that orbit `orbit` of motif `id` contributes to.
    pub fn key(self, id: usize, m: &Motif, orbit: usize) -> ComponentKey {
        match self {
            Granularity::Orbit => ComponentKey::Orbit { motif: id, orbit },
            Granularity::Motif => ComponentKey::Motif(id),
            Granularity::Total => ComponentKey::Total,
            Granularity::Directed => {
                let o = &m.orbits[orbit];
                if o.out_degree == 0 {
                    ComponentKey::InOnly
                } else if o.in_degree == 0 {
                    ComponentKey::OutOnly
                } else {
                    ComponentKey::Mixed
                }
            }
        }
    }

    /// Components present for the motif set `motifs` (catalog ids), sorted.
    pub fn components(self, catalog: &Catalog, motifs: impl IntoIterator<Item = usize>) -> Vec<ComponentKey> {
        let mut keys: BTreeSet<ComponentKey> = BTreeSet::new();
        match self {
            Granularity::Total => {
                keys.insert(ComponentKey::Total);
            }
            Granularity::Directed => {
                keys.extend([ComponentKey::InOnly, ComponentKey::OutOnly, ComponentKey::Mixed]);
            }
            _ => {
                for id in motifs {
                    let m = catalog.get(id);
                    for i in 0..m.orbits.len() {
                        keys.insert(self.key(id, m, i));
                    }
                }
            }
        }
        keys.into_iter().collect()
    }
}

/// Per-vertex atomic degrees at one granularity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDegreeTable {
    pub granularity: Granularity,
    pub n_vertices: usize,
    pub components: Vec<ComponentKey>,
    /// `degrees[k][v]` is the degree of vertex `v` in component `components[k]`.
    pub degrees: Vec<Vec<u32>>,
}

impl OrbitDegreeTable {
    pub fn empty(granularity: Granularity, n_vertices: usize, components: Vec<ComponentKey>) -> Self {
        let degrees = vec![vec![0; n_vertices]; components.len()];
        OrbitDegreeTable { granularity, n_vertices, components, degrees }
    }

    pub fn index_of(&self, key: ComponentKey) -> Option<usize> {
        self.components.binary_search(&key).ok()
    }

    pub fn get(&self, key: ComponentKey) -> Option<&[u32]> {
        self.index_of(key).map(|k| self.degrees[k].as_slice())
    }

    /// Re-aggregates an orbit-level table at a coarser granularity.
    pub fn aggregate(&self, catalog: &Catalog, granularity: Granularity) -> Result<OrbitDegreeTable> {
        if self.granularity != Granularity::Orbit {
            return Err(Error::Infeasible("only orbit-level tables can be aggregated".into()));
        }
        let motifs: BTreeSet<usize> = self
            .components
            .iter()
            .filter_map(|k| match k {
                ComponentKey::Orbit { motif, .. } => Some(*motif),
                _ => None,
            })
            .collect();
        let mut out = Self::empty(granularity, self.n_vertices, granularity.components(catalog, motifs));
        for (k, key) in self.components.iter().enumerate() {
            if let ComponentKey::Orbit { motif, orbit } = *key {
                let target = out.index_of(granularity.key(motif, catalog.get(motif), orbit)).unwrap();
                for (dst, &src) in out.degrees[target].iter_mut().zip(&self.degrees[k]) {
                    *dst += src;
                }
            }
        }
        Ok(out)
    }

    /// Degree of every vertex in the projected multigraph (orbit-level tables only).
    pub fn implied_degrees(&self, catalog: &Catalog) -> Vec<u64> {
        let mut d = vec![0u64; self.n_vertices];
        for (k, key) in self.components.iter().enumerate() {
            if let ComponentKey::Orbit { motif, orbit } = *key {
                let m = catalog.get(motif);
                let od = m.orbits[orbit].degree(m.directed) as u64;
                for (dv, &x) in d.iter_mut().zip(&self.degrees[k]) {
                    *dv += x as u64 * od;
                }
            }
        }
        d
    }
}

/// Atomic degree table of a configuration at the requested granularity.
pub fn orbit_degree_table(
    c: &SubgraphConfiguration,
    catalog: &Catalog,
    n_vertices: usize,
    granularity: Granularity,
) -> OrbitDegreeTable {
    let counts = c.atom_counts();
    let mut t = OrbitDegreeTable::empty(granularity, n_vertices, granularity.components(catalog, counts.keys().copied()));
    for p in c.iter() {
        let m = catalog.get(p.motif);
        for (pos, &v) in p.vertices.iter().enumerate() {
            let k = t.index_of(granularity.key(p.motif, m, m.orbit_of[pos])).unwrap();
            t.degrees[k][v as usize] += 1;
        }
    }
    t
}
