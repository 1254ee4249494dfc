//! Greedy minimum-description-length cover search and model selection.
//!
//! The running state `C_t` holds the atoms chosen so far; every still-uncovered edge
//! is counted as a single-edge atom, so each intermediate state is a cover and
//! `Sigma_t` is an ordinary description length. A candidate motif contributes a
//! maximal set `C_m` of edge-disjoint embeddings in the uncovered edges, and its
//! score is the change in description length per newly covered edge. Adding single
//! edges changes nothing, so the search stops once no candidate has a negative score.

use crate::catalog::Catalog;
use crate::configuration::{is_cover, Placement, SubgraphConfiguration};
use crate::dl::{description_length, edge_baseline, Delta, DlBreakdown, DlContext, DlState};
use crate::embed::{embedding_edges, find_disjoint_embeddings_with, Embedding, DEFAULT_NODE_BUDGET};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::models::ModelVariant;
use crate::motif::CanonCode;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InferOptions {
    /// Rebuild the incremental state from scratch every this many accepted atoms.
    pub recompute_every: usize,
    /// Search-step limit per embedding attempt.
    pub embed_budget: u64,
    /// After the greedy pass, try replacing each chosen atom by single edges.
    pub prune_pass: bool,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { recompute_every: 25, embed_budget: DEFAULT_NODE_BUDGET, prune_pass: false }
    }
}

/// One accepted greedy step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub motif: usize,
    pub placements: usize,
    pub covered_edges: usize,
    /// Description length change per covered edge.
    pub score: f64,
    pub sigma_after: f64,
}

#[derive(Debug, Clone)]
pub struct GreedyResult {
    pub variant: ModelVariant,
    pub configuration: SubgraphConfiguration,
    pub dl: DlBreakdown,
    pub steps: Vec<Step>,
}

/// A scored candidate: its embeddings, the delta they induce and `sigma_{m,t}`.
#[derive(Debug, Clone)]
pub struct ScoredAtom {
    pub motif: usize,
    pub embeddings: Vec<Embedding>,
    pub delta: Delta,
    pub new_edges: usize,
    pub score: f64,
    pub sigma_after: f64,
}

/// Scores adding `embeddings` of motif `id` (all on uncovered edges) to the state.
/// Returns `None` when they cover no edge.
pub fn score_atom(state: &DlState, sigma_now: f64, id: usize, embeddings: &[Embedding]) -> Result<Option<ScoredAtom>> {
    let catalog = state.catalog();
    let m = catalog.get(id);
    let new_edges = embeddings.len() * m.edge_count();
    if new_edges == 0 {
        return Ok(None);
    }
    let gran = state.granularity();
    let mut delta = Delta::default();
    for emb in embeddings {
        let p = Placement::new(catalog, id, emb)?;
        delta.add_placement(catalog, gran, &p, 1);
        for (u, v) in p.edges(m) {
            delta.add_placement(catalog, gran, &Placement::edge(catalog, u, v), -1);
        }
    }
    let after = state.evaluate_delta(&delta)?;
    Ok(Some(ScoredAtom {
        motif: id,
        embeddings: embeddings.to_vec(),
        delta,
        new_edges,
        score: (after.sigma - sigma_now) / new_edges as f64,
        sigma_after: after.sigma,
    }))
}

struct Candidate {
    id: usize,
    index: usize,
    code: CanonCode,
    cached: Option<(Vec<Embedding>, Vec<u32>)>,
}

/// Greedy cover search under one model variant.
pub fn greedy_infer(
    g: &Graph,
    catalog: &Arc<Catalog>,
    variant: ModelVariant,
    ctx: &DlContext,
    opts: &InferOptions,
) -> Result<GreedyResult> {
    if catalog.is_directed() != g.is_directed() {
        return Err(Error::InvalidGraph("catalog and graph differ in direction".into()));
    }
    let n_edges = g.n_edges();
    if n_edges == 0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    let mut covered = vec![false; n_edges];
    let mut chosen = SubgraphConfiguration::new();
    let complete = |chosen: &SubgraphConfiguration, covered: &[bool]| -> SubgraphConfiguration {
        let mut c = chosen.clone();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if !covered[e] {
                c.insert(Placement::edge(catalog, u, v));
            }
        }
        c
    };
    let mut state = DlState::new(ctx, catalog.clone(), variant, g.n_vertices(), n_edges, &complete(&chosen, &covered))?;
    let mut sigma = state.evaluate()?.sigma;
    let mut candidates: Vec<Candidate> = catalog
        .iter()
        .filter(|(id, m)| *id != Catalog::EDGE && m.size() <= g.n_vertices())
        .filter_map(|(id, m)| {
            ctx.prior.motif_index(m).ok().map(|index| Candidate { id, index, code: m.code, cached: None })
        })
        .collect();
    let mut steps = Vec::new();
    loop {
        let covered_ref = &covered;
        candidates.par_iter_mut().for_each(|c| {
            if c.cached.is_none() {
                let m = catalog.get(c.id);
                let embs = find_disjoint_embeddings_with(g, m, covered_ref, opts.embed_budget);
                let edges = embs.iter().flat_map(|e| embedding_edges(g, m, e)).collect();
                c.cached = Some((embs, edges));
            }
        });
        candidates.retain(|c| !c.cached.as_ref().unwrap().0.is_empty());
        let scored: Vec<Result<Option<ScoredAtom>>> = candidates
            .par_iter()
            .map(|c| score_atom(&state, sigma, c.id, &c.cached.as_ref().unwrap().0))
            .collect();
        let mut best: Option<(usize, ScoredAtom)> = None;
        for (i, s) in scored.into_iter().enumerate() {
            let Some(s) = s? else { continue };
            let better = match &best {
                None => true,
                Some((j, b)) => {
                    (s.score, candidates[i].index, candidates[i].code) < (b.score, candidates[*j].index, candidates[*j].code)
                }
            };
            if better {
                best = Some((i, s));
            }
        }
        let Some((i, atom)) = best.filter(|(_, a)| a.score < 0.0) else { break };
        let newly: Vec<u32> = candidates[i].cached.take().unwrap().1;
        for &e in &newly {
            debug_assert!(!covered[e as usize]);
            covered[e as usize] = true;
        }
        for emb in &atom.embeddings {
            chosen.insert(Placement::new(catalog, atom.motif, emb)?);
        }
        state.apply(&atom.delta)?;
        sigma = atom.sigma_after;
        candidates.remove(i);
        for c in candidates.iter_mut() {
            if let Some((_, edges)) = &c.cached {
                if edges.iter().any(|&e| covered[e as usize]) {
                    c.cached = None;
                }
            }
        }
        steps.push(Step {
            motif: atom.motif,
            placements: atom.embeddings.len(),
            covered_edges: atom.new_edges,
            score: atom.score,
            sigma_after: sigma,
        });
        if opts.recompute_every > 0 && steps.len() % opts.recompute_every == 0 {
            state = DlState::new(ctx, catalog.clone(), variant, g.n_vertices(), n_edges, &complete(&chosen, &covered))?;
            sigma = state.evaluate()?.sigma;
        }
    }
    let mut configuration = complete(&chosen, &covered);
    if opts.prune_pass {
        configuration = prune(g, catalog, variant, ctx, configuration)?;
    }
    if !is_cover(&configuration, catalog, g) {
        return Err(Error::NotACover);
    }
    let dl = description_length(ctx, catalog, &configuration, g, variant)?;
    Ok(GreedyResult { variant, configuration, dl, steps })
}

/// Replaces all placements of one atom by single edges whenever that shortens the
/// description; atoms are tried in catalog order.
fn prune(
    g: &Graph,
    catalog: &Arc<Catalog>,
    variant: ModelVariant,
    ctx: &DlContext,
    mut c: SubgraphConfiguration,
) -> Result<SubgraphConfiguration> {
    let mut current = description_length(ctx, catalog, &c, g, variant)?.sigma;
    let atoms: Vec<usize> = c.atom_counts().keys().copied().filter(|&id| id != Catalog::EDGE).collect();
    for id in atoms {
        let m = catalog.get(id);
        let mut trial = SubgraphConfiguration::new();
        for p in c.iter() {
            if p.motif == id {
                for (u, v) in p.edges(m) {
                    trial.insert(Placement::edge(catalog, u, v));
                }
            } else {
                trial.insert(p.clone());
            }
        }
        let s = description_length(ctx, catalog, &trial, g, variant)?.sigma;
        if s < current {
            current = s;
            c = trial;
        }
    }
    Ok(c)
}

/// Result of running every requested variant.
#[derive(Debug, Clone)]
pub struct Selection {
    pub selected: ModelVariant,
    pub results: Vec<GreedyResult>,
    /// Edge-only configuration under the total-degree model.
    pub baseline: DlBreakdown,
    /// `ln Lambda = Sigma_e - Sigma_selected`.
    pub log_odds_vs_edges: f64,
}

impl Selection {
    pub fn best(&self) -> &GreedyResult {
        self.results.iter().find(|r| r.variant == self.selected).expect("selected variant present")
    }

    pub fn get(&self, v: ModelVariant) -> Option<&GreedyResult> {
        self.results.iter().find(|r| r.variant == v)
    }
}

/// Runs the greedy search for each variant and keeps the shortest description.
pub fn select_model(
    g: &Graph,
    catalog: &Arc<Catalog>,
    variants: &[ModelVariant],
    ctx: &DlContext,
    opts: &InferOptions,
) -> Result<Selection> {
    let variants: Vec<ModelVariant> =
        variants.iter().copied().filter(|&v| g.is_directed() || v != ModelVariant::DcDirected).collect();
    if variants.is_empty() {
        return Err(Error::VariantNotApplicable("no applicable model variant requested".into()));
    }
    let mut results = Vec::new();
    for &v in &variants {
        results.push(greedy_infer(g, catalog, v, ctx, opts)?);
    }
    let best = results
        .iter()
        .min_by(|a, b| a.dl.sigma.total_cmp(&b.dl.sigma).then(a.variant.cmp(&b.variant)))
        .unwrap();
    let selected = best.variant;
    let baseline = edge_baseline(ctx, catalog, g)?;
    let log_odds_vs_edges = baseline.sigma - best.dl.sigma;
    Ok(Selection { selected, results, baseline, log_odds_vs_edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::DlOptions;
    use crate::motif::SmallGraph;

    fn planted_triangles(k: u32) -> Graph {
        let edges: Vec<(u32, u32)> =
            (0..k).flat_map(|i| [(3 * i, 3 * i + 1), (3 * i + 1, 3 * i + 2), (3 * i, 3 * i + 2)]).collect();
        Graph::new(3 * k as usize, false, edges).unwrap()
    }

    fn triangle_catalog() -> (Arc<Catalog>, usize) {
        let mut cat = Catalog::new(false);
        cat.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2)])).unwrap();
        let tri = cat.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        (Arc::new(cat), tri)
    }

    #[test]
    fn recovers_planted_triangles() {
        let g = planted_triangles(30);
        let (cat, tri) = triangle_catalog();
        let ctx = DlContext::new(false, DlOptions::default());
        for v in ModelVariant::applicable(false) {
            let r = greedy_infer(&g, &cat, v, &ctx, &InferOptions::default()).unwrap();
            let counts = r.configuration.atom_counts();
            assert_eq!(counts.get(&tri), Some(&30), "{v}");
            assert_eq!(counts.len(), 1, "{v}");
        }
    }

    #[test]
    fn triangle_scores_below_edge() {
        let g = planted_triangles(30);
        let (cat, tri) = triangle_catalog();
        let ctx = DlContext::new(false, DlOptions::default());
        let state =
            DlState::new(&ctx, cat.clone(), ModelVariant::DcTotal, 90, 90, &SubgraphConfiguration::all_edges(&cat, &g))
                .unwrap();
        let sigma = state.evaluate().unwrap().sigma;
        let embs = find_disjoint_embeddings_with(&g, cat.get(tri), &[false; 90], DEFAULT_NODE_BUDGET);
        let s = score_atom(&state, sigma, tri, &embs).unwrap().unwrap();
        assert!(s.score < 0.0);
        assert!(score_atom(&state, sigma, tri, &[]).unwrap().is_none());
    }

    #[test]
    fn selection_reports_baseline_odds() {
        let g = planted_triangles(10);
        let (cat, _) = triangle_catalog();
        let ctx = DlContext::new(false, DlOptions::default());
        let s = select_model(&g, &cat, &ModelVariant::ALL, &ctx, &InferOptions::default()).unwrap();
        assert_eq!(s.results.len(), 4);
        assert!((s.log_odds_vs_edges - (s.baseline.sigma - s.best().dl.sigma)).abs() < 1e-12);
        assert!(s.results.iter().all(|r| r.dl.sigma >= s.best().dl.sigma));
    }
}
