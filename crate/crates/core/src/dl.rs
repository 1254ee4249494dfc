//! Description lengths: `Sigma = S + epsilon`, where `S = -ln P(C | params)` and
//! `epsilon` collects the nested priors on degrees, counts and the atom set.
//!
//! [`DlState`] keeps sufficient statistics of a configuration so that the effect of
//! adding or removing placements can be evaluated without touching every vertex.

use crate::catalog::Catalog;
use crate::configuration::{is_cover, ComponentKey, Granularity, Placement, SubgraphConfiguration};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math::ln_factorial;
use crate::models::{dc_terms, loglik_homogeneous, ComponentStats, LikelihoodTerms, ModelVariant, MotifTerm};
use crate::motif::universe::default_universe;
use crate::priors::{self, counts_log_prior, solve_lambda_with, CountSupport, MotifPrior};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Settings shared by every description-length evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DlOptions {
    pub count_support: CountSupport,
    pub partition_threshold: u64,
}

impl Default for DlOptions {
    fn default() -> Self {
        DlOptions { count_support: CountSupport::Positive, partition_threshold: crate::partitions::DEFAULT_THRESHOLD }
    }
}

/// The motif prior plus options; cheap to clone.
#[derive(Debug, Clone)]
pub struct DlContext {
    pub prior: Arc<MotifPrior>,
    pub options: DlOptions,
}

impl DlContext {
    /// Context with the motif universe at the default size caps.
    pub fn new(directed: bool, options: DlOptions) -> DlContext {
        DlContext { prior: Arc::new(MotifPrior::new(default_universe(directed))), options }
    }
}

/// One variant's description length and its parts (all in nats).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DlBreakdown {
    pub variant: ModelVariant,
    /// Total description length.
    pub sigma: f64,
    /// `S = -ln P(C | params)`.
    pub entropy: f64,
    /// `epsilon = degree_prior + counts_prior + motif_prior`.
    pub epsilon: f64,
    /// `-ln P(d | n)`; zero for the homogeneous model.
    pub degree_prior: f64,
    /// `-ln P(n | E, M)`.
    pub counts_prior: f64,
    /// `-ln P(M)`.
    pub motif_prior: f64,
    pub lambda: f64,
    /// Stub-matching terms (degree-corrected variants only).
    pub terms: Option<LikelihoodTerms>,
}

/// Signed changes to a configuration: atom counts and component degrees.
#[derive(Debug, Clone, Default)]
pub struct Delta {
    pub counts: BTreeMap<usize, i64>,
    pub degrees: Vec<(ComponentKey, u32, i32)>,
}

impl Delta {
    /// Records adding (`sign = 1`) or removing (`sign = -1`) one placement.
    pub fn add_placement(&mut self, catalog: &Catalog, granularity: Option<Granularity>, p: &Placement, sign: i32) {
        *self.counts.entry(p.motif).or_insert(0) += sign as i64;
        if let Some(g) = granularity {
            let m = catalog.get(p.motif);
            for (pos, &v) in p.vertices.iter().enumerate() {
                self.degrees.push((g.key(p.motif, m, m.orbit_of[pos]), v, sign));
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Component {
    deg: Vec<u32>,
    stats: ComponentStats,
    /// Vertices per degree value, zero degree included.
    hist: BTreeMap<u32, u64>,
    /// `sum_k ln eta_k!`.
    ln_eta: f64,
}

impl Component {
    fn zero(n: usize) -> Component {
        Component {
            deg: vec![0; n],
            stats: ComponentStats::default(),
            hist: BTreeMap::from([(0, n as u64)]),
            ln_eta: ln_factorial(n as u64),
        }
    }

    fn from_degrees(deg: Vec<u32>) -> Component {
        let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
        for &d in &deg {
            *hist.entry(d).or_insert(0) += 1;
        }
        let ln_eta = hist.values().map(|&c| ln_factorial(c)).sum();
        Component { stats: ComponentStats::of(&deg), deg, hist, ln_eta }
    }
}

/// Aggregates of one component after a hypothetical change.
#[derive(Debug, Clone, Copy)]
struct Summary {
    stats: ComponentStats,
    ln_eta: f64,
}

/// Sufficient statistics of a configuration under one model variant.
#[derive(Debug, Clone)]
pub struct DlState {
    variant: ModelVariant,
    granularity: Option<Granularity>,
    n: usize,
    n_edges: usize,
    catalog: Arc<Catalog>,
    ctx: DlContext,
    counts: BTreeMap<usize, u64>,
    comps: BTreeMap<ComponentKey, Component>,
    cross: BTreeMap<(ComponentKey, ComponentKey), u64>,
}

impl DlState {
    /// State for `c` on a graph with `n` vertices and `n_edges` edges.
    pub fn new(
        ctx: &DlContext,
        catalog: Arc<Catalog>,
        variant: ModelVariant,
        n: usize,
        n_edges: usize,
        c: &SubgraphConfiguration,
    ) -> Result<DlState> {
        if variant == ModelVariant::DcDirected && !catalog.is_directed() {
            return Err(Error::VariantNotApplicable("dc_directed on an undirected graph".into()));
        }
        let granularity = variant.granularity();
        let mut comps = BTreeMap::new();
        if let Some(g) = granularity {
            let table = crate::configuration::orbit_degree_table(c, &catalog, n, g);
            for (key, deg) in table.components.into_iter().zip(table.degrees) {
                comps.insert(key, Component::from_degrees(deg));
            }
        }
        let mut state = DlState {
            variant,
            granularity,
            n,
            n_edges,
            catalog,
            ctx: ctx.clone(),
            counts: c.atom_counts(),
            comps,
            cross: BTreeMap::new(),
        };
        for pair in state.needed_pairs(state.counts.keys().copied()) {
            let x = state.base_cross(pair);
            state.cross.insert(pair, x);
        }
        Ok(state)
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn granularity(&self) -> Option<Granularity> {
        self.granularity
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    /// Component pairs that appear together in some motif of `motifs`.
    fn needed_pairs(&self, motifs: impl IntoIterator<Item = usize>) -> BTreeSet<(ComponentKey, ComponentKey)> {
        let mut pairs = BTreeSet::new();
        let Some(g) = self.granularity else { return pairs };
        for id in motifs {
            let m = self.catalog.get(id);
            let keys: BTreeSet<ComponentKey> = (0..m.orbits.len()).map(|i| g.key(id, m, i)).collect();
            let keys: Vec<ComponentKey> = keys.into_iter().collect();
            for (i, &a) in keys.iter().enumerate() {
                for &b in &keys[i + 1..] {
                    pairs.insert((a, b));
                }
            }
        }
        pairs
    }

    fn base_cross(&self, (a, b): (ComponentKey, ComponentKey)) -> u64 {
        if let Some(&x) = self.cross.get(&(a, b)) {
            return x;
        }
        match (self.comps.get(&a), self.comps.get(&b)) {
            (Some(ca), Some(cb)) => ca.deg.iter().zip(&cb.deg).map(|(&x, &y)| x as u64 * y as u64).sum(),
            _ => 0,
        }
    }

    fn degree(&self, key: ComponentKey, v: u32) -> u32 {
        self.comps.get(&key).map_or(0, |c| c.deg[v as usize])
    }

    fn new_counts(&self, delta: &Delta) -> Result<BTreeMap<usize, u64>> {
        let mut counts = self.counts.clone();
        for (&id, &d) in &delta.counts {
            let old = counts.get(&id).copied().unwrap_or(0) as i64;
            let new = old + d;
            if new < 0 {
                return Err(Error::InvalidPlacement(format!("count of motif {id} would become {new}")));
            }
            if new == 0 {
                counts.remove(&id);
            } else {
                counts.insert(id, new as u64);
            }
        }
        Ok(counts)
    }

    /// Net degree change per (component, vertex).
    fn grouped(delta: &Delta) -> BTreeMap<ComponentKey, BTreeMap<u32, i64>> {
        let mut g: BTreeMap<ComponentKey, BTreeMap<u32, i64>> = BTreeMap::new();
        for &(k, v, s) in &delta.degrees {
            *g.entry(k).or_default().entry(v).or_insert(0) += s as i64;
        }
        g
    }

    fn summarize(&self, key: ComponentKey, changes: Option<&BTreeMap<u32, i64>>) -> Result<Summary> {
        let zero;
        let base = match self.comps.get(&key) {
            Some(c) => c,
            None => {
                zero = Component::zero(self.n);
                &zero
            }
        };
        let mut stats = base.stats;
        let mut ln_eta = base.ln_eta;
        if let Some(changes) = changes {
            let mut bins: BTreeMap<u32, i64> = BTreeMap::new();
            for (&v, &d) in changes {
                if d == 0 {
                    continue;
                }
                let old = base.deg[v as usize] as i64;
                let new = old + d;
                if new < 0 {
                    return Err(Error::InvalidPlacement(format!("negative degree at vertex {v}")));
                }
                let (o, nw) = (old as u64, new as u64);
                stats.sum = (stats.sum as i64 + d) as u64;
                stats.falling2 = stats.falling2 + nw * nw.saturating_sub(1) - o * o.saturating_sub(1);
                stats.ln_fact += ln_factorial(nw) - ln_factorial(o);
                *bins.entry(o as u32).or_insert(0) -= 1;
                *bins.entry(nw as u32).or_insert(0) += 1;
            }
            for (bin, d) in bins {
                if d != 0 {
                    let h = base.hist.get(&bin).copied().unwrap_or(0);
                    ln_eta += ln_factorial((h as i64 + d) as u64) - ln_factorial(h);
                }
            }
        }
        Ok(Summary { stats, ln_eta })
    }

    fn cross_after(
        &self,
        pair: (ComponentKey, ComponentKey),
        grouped: &BTreeMap<ComponentKey, BTreeMap<u32, i64>>,
    ) -> u64 {
        let mut x = self.base_cross(pair) as i64;
        let empty = BTreeMap::new();
        let ca = grouped.get(&pair.0).unwrap_or(&empty);
        let cb = grouped.get(&pair.1).unwrap_or(&empty);
        let touched: BTreeSet<u32> = ca.keys().chain(cb.keys()).copied().collect();
        for v in touched {
            let (a, b) = (self.degree(pair.0, v) as i64, self.degree(pair.1, v) as i64);
            let (da, db) = (ca.get(&v).copied().unwrap_or(0), cb.get(&v).copied().unwrap_or(0));
            x += (a + da) * (b + db) - a * b;
        }
        x as u64
    }

    /// Description length of the current configuration.
    pub fn evaluate(&self) -> Result<DlBreakdown> {
        self.evaluate_delta(&Delta::default())
    }

    /// Description length after applying `delta`, leaving the state untouched.
    pub fn evaluate_delta(&self, delta: &Delta) -> Result<DlBreakdown> {
        let counts = self.new_counts(delta)?;
        if counts.is_empty() {
            return Err(Error::NotACover);
        }
        let mut degree_prior = 0.0;
        let (entropy, terms) = match self.granularity {
            None => (-loglik_homogeneous(&counts, &self.catalog, self.n)?, None),
            Some(g) => {
                let grouped = Self::grouped(delta);
                let keys = g.components(&self.catalog, counts.keys().copied());
                let mut stats = Vec::with_capacity(keys.len());
                for &key in &keys {
                    let s = self.summarize(key, grouped.get(&key))?;
                    let nv = self.n as u64;
                    let p1 = priors::uniform_log_prior(nv, s.stats.sum);
                    let p2 = priors::hyper_log_prior(nv, s.stats.sum, s.ln_eta, self.ctx.options.partition_threshold);
                    degree_prior -= p1.max(p2);
                    stats.push(s.stats);
                }
                let index = |key: ComponentKey| keys.binary_search(&key).expect("component present");
                let motifs: Vec<MotifTerm> = counts
                    .iter()
                    .map(|(&id, &n)| {
                        let m = self.catalog.get(id);
                        MotifTerm::new(id, m, n, |orbit| index(g.key(id, m, orbit)))
                    })
                    .collect();
                let mut cross: BTreeMap<(usize, usize), f64> = BTreeMap::new();
                for pair in self.needed_pairs(counts.keys().copied()) {
                    cross.insert((index(pair.0), index(pair.1)), self.cross_after(pair, &grouped) as f64);
                }
                let terms = dc_terms(&stats, &motifs, |k, l| cross[&(k, l)])?;
                (-terms.loglik, Some(terms))
            }
        };
        let (lambda, counts_prior) = self.counts_prior(&counts)?;
        let motif_prior = -self.motif_log_prior(&counts)?;
        let epsilon = degree_prior + counts_prior + motif_prior;
        Ok(DlBreakdown {
            variant: self.variant,
            sigma: entropy + epsilon,
            entropy,
            epsilon,
            degree_prior,
            counts_prior,
            motif_prior,
            lambda,
            terms,
        })
    }

    fn counts_prior(&self, counts: &BTreeMap<usize, u64>) -> Result<(f64, f64)> {
        let pairs: Vec<(u64, usize)> = counts.iter().map(|(&id, &n)| (n, self.catalog.get(id).edge_count())).collect();
        let es: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let support = self.ctx.options.count_support;
        let lambda = solve_lambda_with(self.n_edges as f64, &es, support)?;
        Ok((lambda, -counts_log_prior(&pairs, lambda, support)))
    }

    fn motif_log_prior(&self, counts: &BTreeMap<usize, u64>) -> Result<f64> {
        let mut idx = Vec::with_capacity(counts.len());
        for &id in counts.keys() {
            idx.push(self.ctx.prior.motif_index(self.catalog.get(id))?);
        }
        Ok(self.ctx.prior.log_prior_indices(idx))
    }

    /// Commits `delta`.
    pub fn apply(&mut self, delta: &Delta) -> Result<()> {
        let counts = self.new_counts(delta)?;
        let grouped = Self::grouped(delta);
        let mut pairs: BTreeSet<(ComponentKey, ComponentKey)> = self.cross.keys().copied().collect();
        pairs.extend(self.needed_pairs(counts.keys().copied()));
        let mut updated = BTreeMap::new();
        for pair in pairs {
            if self.cross.contains_key(&pair) && !grouped.contains_key(&pair.0) && !grouped.contains_key(&pair.1) {
                continue;
            }
            updated.insert(pair, self.cross_after(pair, &grouped));
        }
        for (key, changes) in &grouped {
            let s = self.summarize(*key, Some(changes))?;
            let n = self.n;
            let comp = self.comps.entry(*key).or_insert_with(|| Component::zero(n));
            for (&v, &d) in changes {
                if d == 0 {
                    continue;
                }
                let old = comp.deg[v as usize];
                let new = (old as i64 + d) as u32;
                comp.deg[v as usize] = new;
                let h = comp.hist.get_mut(&old).unwrap();
                *h -= 1;
                if *h == 0 {
                    comp.hist.remove(&old);
                }
                *comp.hist.entry(new).or_insert(0) += 1;
            }
            comp.stats = s.stats;
            comp.ln_eta = s.ln_eta;
        }
        self.cross.extend(updated);
        self.counts = counts;
        Ok(())
    }
}

/// Description length of a cover of `g` under `variant`.
pub fn description_length(
    ctx: &DlContext,
    catalog: &Arc<Catalog>,
    c: &SubgraphConfiguration,
    g: &Graph,
    variant: ModelVariant,
) -> Result<DlBreakdown> {
    if !is_cover(c, catalog, g) {
        return Err(Error::NotACover);
    }
    DlState::new(ctx, catalog.clone(), variant, g.n_vertices(), g.n_edges(), c)?.evaluate()
}

/// Edge-only baseline `Sigma_e`: every edge as its own atom, total-degree model.
pub fn edge_baseline(ctx: &DlContext, catalog: &Arc<Catalog>, g: &Graph) -> Result<DlBreakdown> {
    description_length(ctx, catalog, &SubgraphConfiguration::all_edges(catalog, g), g, ModelVariant::DcTotal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::orbit_degree_table;
    use crate::models::loglik_dc;
    use crate::motif::SmallGraph;

    fn ctx() -> DlContext {
        DlContext::new(false, DlOptions::default())
    }

    fn triangles(k: u32) -> (Arc<Catalog>, usize, Graph, SubgraphConfiguration) {
        let mut cat = Catalog::new(false);
        let tri = cat.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        let mut edges = Vec::new();
        let mut c = SubgraphConfiguration::new();
        for i in 0..k {
            let (a, b, d) = (3 * i, 3 * i + 1, 3 * i + 2);
            edges.extend([(a, b), (b, d), (a, d)]);
            c.insert(Placement::new(&cat, tri, &[a, b, d]).unwrap());
        }
        let g = Graph::new(3 * k as usize, false, edges).unwrap();
        (Arc::new(cat), tri, g, c)
    }

    #[test]
    fn triangle_cover_beats_edges() {
        let (cat, _, g, c) = triangles(30);
        let ctx = ctx();
        let edges = SubgraphConfiguration::all_edges(&cat, &g);
        for v in ModelVariant::applicable(false) {
            let t = description_length(&ctx, &cat, &c, &g, v).unwrap();
            let e = description_length(&ctx, &cat, &edges, &g, v).unwrap();
            assert!(t.sigma < e.sigma, "{v}: {} vs {}", t.sigma, e.sigma);
            assert!((t.sigma - t.entropy - t.epsilon).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_cover() {
        let (cat, _, g, mut c) = triangles(2);
        c.insert(Placement::edge(&cat, 0, 5));
        assert_eq!(description_length(&ctx(), &cat, &c, &g, ModelVariant::DcTotal), Err(Error::NotACover));
    }

    #[test]
    fn baseline_is_edge_only_total_model() {
        let (cat, _, g, _) = triangles(4);
        let b = edge_baseline(&ctx(), &cat, &g).unwrap();
        let direct = description_length(&ctx(), &cat, &SubgraphConfiguration::all_edges(&cat, &g), &g, ModelVariant::DcTotal)
            .unwrap();
        assert_eq!(b, direct);
    }

    #[test]
    fn entropy_matches_model_module() {
        let (cat, _, g, c) = triangles(5);
        let s = description_length(&ctx(), &cat, &c, &g, ModelVariant::DcOrbit).unwrap();
        let t = orbit_degree_table(&c, &cat, g.n_vertices(), Granularity::Orbit);
        let l = loglik_dc(&t, &cat, &c.atom_counts()).unwrap();
        assert!((s.entropy + l.loglik).abs() < 1e-9);
    }

    #[test]
    fn incremental_matches_fresh() {
        // Replace two triangles by their edges, step by step, under every variant.
        let (cat, _, g, c) = triangles(6);
        let ctx = ctx();
        for v in ModelVariant::applicable(false) {
            let mut state = DlState::new(&ctx, cat.clone(), v, g.n_vertices(), g.n_edges(), &c).unwrap();
            let mut current = c.clone();
            for p in c.iter().take(2).cloned().collect::<Vec<_>>() {
                let mut delta = Delta::default();
                delta.add_placement(&cat, v.granularity(), &p, -1);
                let mut next: SubgraphConfiguration = current.iter().filter(|q| **q != p).cloned().collect();
                for (a, b) in p.edges(cat.get(p.motif)) {
                    let e = Placement::edge(&cat, a, b);
                    delta.add_placement(&cat, v.granularity(), &e, 1);
                    next.insert(e);
                }
                let predicted = state.evaluate_delta(&delta).unwrap();
                state.apply(&delta).unwrap();
                let fresh = description_length(&ctx, &cat, &next, &g, v).unwrap();
                assert!((predicted.sigma - fresh.sigma).abs() < 1e-8, "{v}");
                assert!((state.evaluate().unwrap().sigma - fresh.sigma).abs() < 1e-8, "{v}");
                current = next;
            }
        }
    }
}
