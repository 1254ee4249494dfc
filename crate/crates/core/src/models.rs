//! Microcanonical log-likelihoods of subgraph configurations.
//!
//! Degree-corrected variants share one stub-matching count. Every (motif, orbit)
//! pair feeds a degree component `k`; with `S_k` the stub total of component `k`
//! and `c_{m,k}` the number of vertices of `m` assigned to it,
//!
//! ```text
//! ln Omega = sum_k ln S_k! - sum_m (ln n_m! + n_m ln|Aut(m)|) - sum_{k,v} ln d_k(v)!
//! ```
//!
//! counts the stub matchings, and two asymptotic corrections remove matchings that
//! contract vertices or repeat a subgraph:
//!
//! ```text
//! contraction = sum_m n_m [ sum_k C(c_{m,k}, 2) A_k + sum_{k<l} c_{m,k} c_{m,l} X_{kl} / (S_k S_l) ]
//! duplicate   = sum_m n_m^2 / 2 |Aut(m)| prod_k A_k^{c_{m,k}}
//! A_k = sum_v d_k(v) (d_k(v) - 1) / S_k^2,   X_{kl} = sum_v d_k(v) d_l(v)
//! ```
//!
//! At orbit granularity these are the published orbit-degree formulas.

use crate::catalog::Catalog;
use crate::configuration::{ComponentKey, Granularity, OrbitDegreeTable};
use crate::error::{Error, Result};
use crate::math::{ln_factorial, ln_falling};
use crate::motif::Motif;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelVariant {
    Homogeneous,
    DcOrbit,
    DcMotif,
    DcTotal,
    DcDirected,
}

impl ModelVariant {
    pub const ALL: [ModelVariant; 5] = [
        ModelVariant::Homogeneous,
        ModelVariant::DcOrbit,
        ModelVariant::DcMotif,
        ModelVariant::DcTotal,
        ModelVariant::DcDirected,
    ];

    /// Variants that apply to a graph of the given direction.
    pub fn applicable(directed: bool) -> Vec<ModelVariant> {
        Self::ALL.into_iter().filter(|v| directed || *v != ModelVariant::DcDirected).collect()
    }

    pub fn granularity(self) -> Option<Granularity> {
        match self {
            ModelVariant::Homogeneous => None,
            ModelVariant::DcOrbit => Some(Granularity::Orbit),
            ModelVariant::DcMotif => Some(Granularity::Motif),
            ModelVariant::DcTotal => Some(Granularity::Total),
            ModelVariant::DcDirected => Some(Granularity::Directed),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelVariant::Homogeneous => "homogeneous",
            ModelVariant::DcOrbit => "dc_orbit",
            ModelVariant::DcMotif => "dc_motif",
            ModelVariant::DcTotal => "dc_total",
            ModelVariant::DcDirected => "dc_directed",
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown model variant '{s}'"))
    }
}

/// Log of the number of configurations with fixed counts, negated:
/// `-sum_m ln C(|H_{N,m}|, n_m)`.
pub fn loglik_homogeneous(counts: &BTreeMap<usize, u64>, catalog: &Catalog, n_vertices: usize) -> Result<f64> {
    let mut total = 0.0;
    for (&id, &n) in counts {
        total -= ln_placement_choices(catalog.get(id), n_vertices, n)?;
    }
    Ok(total)
}

/// `ln C(|H_{N,m}|, n)`.
pub fn ln_placement_choices(m: &Motif, n_vertices: usize, n: u64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let ln_h = m.count_placements_log(n_vertices)?;
    let h = match m.count_placements(n_vertices)? {
        Some(exact) => exact as f64,
        None => ln_h.exp(),
    };
    if n as f64 > h {
        return Err(Error::CountExceedsPlacements { count: n, available: h });
    }
    Ok(ln_falling(h, ln_h, n) - ln_factorial(n))
}

/// Pieces of a degree-corrected log-likelihood.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodTerms {
    /// `ln Omega`, the stub-matching count.
    pub ln_omega: f64,
    /// Per-motif `ln Omega_m` (orbit granularity only; empty otherwise).
    pub per_motif: Vec<(usize, f64)>,
    /// Expected number of vertex contractions.
    pub contraction: f64,
    /// Expected number of repeated subgraphs.
    pub duplicate: f64,
    /// `-ln Omega + contraction + duplicate`.
    pub loglik: f64,
}

/// Sufficient statistics of one degree component.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComponentStats {
    pub sum: u64,
    /// `sum_v d(v) (d(v) - 1)`.
    pub falling2: u64,
    /// `sum_v ln d(v)!`.
    pub ln_fact: f64,
}

impl ComponentStats {
    pub fn of(degrees: &[u32]) -> ComponentStats {
        let mut s = ComponentStats::default();
        for &d in degrees {
            let d = d as u64;
            s.sum += d;
            s.falling2 += d * d.saturating_sub(1);
            s.ln_fact += ln_factorial(d);
        }
        s
    }

    /// `A_k`, zero for an empty component.
    pub fn a(&self) -> f64 {
        if self.sum == 0 {
            0.0
        } else {
            self.falling2 as f64 / (self.sum as f64 * self.sum as f64)
        }
    }
}

/// A motif's contribution in grouped form: count, group order and component sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifTerm {
    pub motif: usize,
    pub n: u64,
    pub aut: u64,
    /// `(component index, c_{m,k})`, sorted by component, no zero entries.
    pub comps: Vec<(usize, u32)>,
}

impl MotifTerm {
    pub fn new(id: usize, m: &Motif, n: u64, mut component_of: impl FnMut(usize) -> usize) -> MotifTerm {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for pos in 0..m.size() {
            *counts.entry(component_of(m.orbit_of[pos])).or_insert(0) += 1;
        }
        MotifTerm { motif: id, n, aut: m.aut_order, comps: counts.into_iter().collect() }
    }
}

/// Evaluates the grouped count and both corrections from sufficient statistics.
/// `cross(k, l)` must return `X_{kl}` for `k < l`.
pub fn dc_terms(stats: &[ComponentStats], motifs: &[MotifTerm], cross: impl Fn(usize, usize) -> f64) -> Result<LikelihoodTerms> {
    let mut expected = vec![0u64; stats.len()];
    for t in motifs {
        for &(k, c) in &t.comps {
            expected[k] += t.n * c as u64;
        }
    }
    for (k, (e, s)) in expected.iter().zip(stats).enumerate() {
        if *e != s.sum {
            return Err(Error::StubSumMismatch(format!(
                "component {k}: atoms need {e} stubs, degrees provide {}",
                s.sum
            )));
        }
    }
    let mut ln_omega: f64 = stats.iter().map(|s| ln_factorial(s.sum) - s.ln_fact).sum();
    let mut contraction = 0.0;
    let mut duplicate = 0.0;
    for t in motifs.iter().filter(|t| t.n > 0) {
        let n = t.n as f64;
        ln_omega -= ln_factorial(t.n) + n * (t.aut as f64).ln();
        let mut inner = 0.0;
        let mut prod = 1.0;
        for (i, &(k, c)) in t.comps.iter().enumerate() {
            let a = stats[k].a();
            let c = c as f64;
            inner += c * (c - 1.0) / 2.0 * a;
            prod *= a.powf(c);
            for &(l, cl) in &t.comps[i + 1..] {
                let denom = stats[k].sum as f64 * stats[l].sum as f64;
                inner += c * cl as f64 * cross(k, l) / denom;
            }
        }
        contraction += n * inner;
        duplicate += n * n / 2.0 * t.aut as f64 * prod;
    }
    Ok(LikelihoodTerms {
        ln_omega,
        per_motif: Vec::new(),
        contraction,
        duplicate,
        loglik: -ln_omega + contraction + duplicate,
    })
}

/// `ln Omega_m` for one motif from its orbit degree vectors (one per orbit).
pub fn log_matchings(m: &Motif, orbit_degrees: &[Vec<u32>], n: u64) -> Result<f64> {
    if orbit_degrees.len() != m.orbits.len() {
        return Err(Error::StubSumMismatch(format!(
            "motif has {} orbits, got {} degree vectors",
            m.orbits.len(),
            orbit_degrees.len()
        )));
    }
    let stats: Vec<ComponentStats> = orbit_degrees.iter().map(|d| ComponentStats::of(d)).collect();
    let term = MotifTerm::new(0, m, n, |i| i);
    Ok(dc_terms(&stats, &[term], |_, _| 0.0)?.ln_omega)
}

/// Degree-corrected log-likelihood at the table's granularity.
pub fn loglik_dc(table: &OrbitDegreeTable, catalog: &Catalog, counts: &BTreeMap<usize, u64>) -> Result<LikelihoodTerms> {
    let stats: Vec<ComponentStats> = table.degrees.iter().map(|d| ComponentStats::of(d)).collect();
    let mut motifs = Vec::new();
    for (&id, &n) in counts.iter().filter(|(_, &n)| n > 0) {
        let m = catalog.get(id);
        let mut missing = None;
        let term = MotifTerm::new(id, m, n, |orbit| {
            let key = table.granularity.key(id, m, orbit);
            table.index_of(key).unwrap_or_else(|| {
                missing = Some(key);
                0
            })
        });
        if let Some(key) = missing {
            return Err(Error::StubSumMismatch(format!("no degree component {key:?}")));
        }
        motifs.push(term);
    }
    let cross = |k: usize, l: usize| -> f64 {
        table.degrees[k].iter().zip(&table.degrees[l]).map(|(&a, &b)| a as f64 * b as f64).sum()
    };
    let mut terms = dc_terms(&stats, &motifs, cross)?;
    if table.granularity == Granularity::Orbit {
        for (&id, &n) in counts.iter().filter(|(_, &n)| n > 0) {
            let m = catalog.get(id);
            let vectors: Vec<Vec<u32>> = (0..m.orbits.len())
                .map(|i| table.get(ComponentKey::Orbit { motif: id, orbit: i }).unwrap().to_vec())
                .collect();
            terms.per_motif.push((id, log_matchings(m, &vectors, n)?));
        }
    }
    Ok(terms)
}

/// Orbit-granularity likelihood.
pub fn loglik_dc_orbit(table: &OrbitDegreeTable, catalog: &Catalog, counts: &BTreeMap<usize, u64>) -> Result<LikelihoodTerms> {
    if table.granularity != Granularity::Orbit {
        return Err(Error::VariantNotApplicable(format!("{:?} table for the orbit model", table.granularity)));
    }
    loglik_dc(table, catalog, counts)
}

/// Motif, total or directed granularity likelihood.
pub fn loglik_dc_coarse(table: &OrbitDegreeTable, catalog: &Catalog, counts: &BTreeMap<usize, u64>) -> Result<LikelihoodTerms> {
    if table.granularity == Granularity::Orbit {
        return Err(Error::VariantNotApplicable("orbit table for a coarse model".into()));
    }
    if table.granularity == Granularity::Directed && !catalog.is_directed() {
        return Err(Error::VariantNotApplicable("directed granularity on an undirected catalog".into()));
    }
    loglik_dc(table, catalog, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::{orbit_degree_table, Placement, SubgraphConfiguration};
    use crate::motif::SmallGraph;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-10 * b.abs().max(1.0)
    }

    fn with_triangle() -> (Catalog, usize) {
        let mut c = Catalog::new(false);
        let t = c.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        (c, t)
    }

    #[test]
    fn homogeneous_examples() {
        let (cat, tri) = with_triangle();
        let counts = BTreeMap::from([(Catalog::EDGE, 2)]);
        assert!(close(loglik_homogeneous(&counts, &cat, 4).unwrap(), -(15f64.ln())));
        let counts = BTreeMap::from([(tri, 1)]);
        assert!(close(loglik_homogeneous(&counts, &cat, 5).unwrap(), -(10f64.ln())));
        let counts = BTreeMap::from([(Catalog::EDGE, 1), (tri, 1)]);
        assert!(close(loglik_homogeneous(&counts, &cat, 5).unwrap(), -(100f64.ln())));
        assert_eq!(loglik_homogeneous(&BTreeMap::new(), &cat, 5).unwrap(), 0.0);
        let too_many = BTreeMap::from([(tri, 2)]);
        assert!(loglik_homogeneous(&too_many, &cat, 3).is_err());
    }

    #[test]
    fn matching_counts() {
        let edge = Motif::edge(false);
        assert!(close(log_matchings(&edge, &[vec![1, 1]], 1).unwrap(), 0.0));
        assert!(close(log_matchings(&edge, &[vec![1, 1, 1, 1]], 2).unwrap(), 3f64.ln()));
        let (cat, tri) = with_triangle();
        assert!(close(log_matchings(cat.get(tri), &[vec![1, 1, 1]], 1).unwrap(), 0.0));
        assert!(log_matchings(&edge, &[vec![1, 1, 1]], 2).is_err());
    }

    #[test]
    fn single_edge_corrections() {
        // One atom on two vertices: A = 0, so no correction and log P = 0.
        let cat = Catalog::new(false);
        let c: SubgraphConfiguration = [Placement::edge(&cat, 0, 1)].into_iter().collect();
        let t = orbit_degree_table(&c, &cat, 2, Granularity::Orbit);
        let terms = loglik_dc_orbit(&t, &cat, &c.atom_counts()).unwrap();
        assert!(close(terms.loglik, 0.0));
    }

    #[test]
    fn edge_corrections_reduce_to_nu() {
        // For M = {edge}: contraction = nu / 2 and duplicate = nu^2 / 4.
        let d = vec![3u32, 2, 2, 1, 1, 1];
        let s: u64 = d.iter().map(|&x| x as u64).sum();
        let stats = [ComponentStats::of(&d)];
        let term = MotifTerm::new(0, &Motif::edge(false), s / 2, |_| 0);
        let t = dc_terms(&stats, &[term], |_, _| 0.0).unwrap();
        let nu = d.iter().map(|&x| (x * x.saturating_sub(1)) as f64).sum::<f64>() / s as f64;
        assert!(close(t.contraction, nu / 2.0));
        assert!(close(t.duplicate, nu * nu / 4.0));
    }

    #[test]
    fn orbit_corrections_match_published_form() {
        // Path on three vertices: ends orbit (size 2) and centre orbit (size 1).
        let mut cat = Catalog::new(false);
        let p = cat.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2)])).unwrap();
        let m = cat.get(p);
        let ends = m.orbits.iter().position(|o| o.size() == 2).unwrap();
        let (de, dc) = (vec![2u32, 1, 0, 1, 2], vec![0u32, 1, 2, 0, 0]);
        let n = 3u64;
        let mut vectors = vec![Vec::new(), Vec::new()];
        vectors[ends] = de.clone();
        vectors[1 - ends] = dc.clone();
        let stats: Vec<ComponentStats> = vectors.iter().map(|v| ComponentStats::of(v)).collect();
        let term = MotifTerm::new(p, m, n, |i| i);
        let cross = |_: usize, _: usize| de.iter().zip(&dc).map(|(&a, &b)| (a * b) as f64).sum::<f64>();
        let t = dc_terms(&stats, &[term], cross).unwrap();

        let nv = de.len() as f64;
        let mean = |v: &[u32]| v.iter().map(|&x| x as f64).sum::<f64>() / nv;
        let mean_sq = |v: &[u32]| v.iter().map(|&x| (x * x) as f64).sum::<f64>() / nv;
        let nu = |v: &[u32]| mean_sq(v) / mean(v) - 1.0;
        let tot: Vec<u32> = de.iter().zip(&dc).map(|(a, b)| a + b).collect();
        let published = 0.5 * (3.0 * nu(&tot) - nu(&de) - nu(&dc));
        assert!(close(t.contraction, published));
        let nf = n as f64;
        let dup = 2.0 * nf * nf / 2.0 * (nu(&de) / (2.0 * nf)).powi(2) * (nu(&dc) / nf);
        assert!(close(t.duplicate, dup));
    }

    #[test]
    fn edge_total_equals_orbit() {
        let cat = Catalog::new(false);
        let g = crate::graph::Graph::new(5, false, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)]).unwrap();
        let c = SubgraphConfiguration::all_edges(&cat, &g);
        let counts = c.atom_counts();
        let o = loglik_dc_orbit(&orbit_degree_table(&c, &cat, 5, Granularity::Orbit), &cat, &counts).unwrap();
        let t = loglik_dc_coarse(&orbit_degree_table(&c, &cat, 5, Granularity::Total), &cat, &counts).unwrap();
        assert!(close(o.loglik, t.loglik));
        assert_eq!(o.per_motif.len(), 1);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in ModelVariant::ALL {
            assert_eq!(v.name().parse::<ModelVariant>().unwrap(), v);
        }
        assert_eq!(ModelVariant::applicable(false).len(), 4);
    }
}
