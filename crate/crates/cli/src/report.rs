use serde::{Deserialize, Serialize};
use sgcm::{Catalog, ModelVariant, SubgraphConfiguration};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub vertices: usize,
    pub edges: usize,
    pub directed: bool,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscoverySummary {
    /// Candidate atoms, the single edge included.
    pub candidates: usize,
    /// Vertex sets visited; zero when the atoms came from a motif list.
    pub vertex_sets: usize,
    pub exhaustive: bool,
    pub from_motif_list: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantReport {
    pub variant: ModelVariant,
    pub sigma: f64,
    pub entropy: f64,
    pub epsilon: f64,
    pub degree_prior: f64,
    pub counts_prior: f64,
    pub motif_prior: f64,
    pub lambda: f64,
    pub contraction: Option<f64>,
    pub duplicate: Option<f64>,
    /// Distinct atoms in the configuration, the single edge included.
    pub atoms: usize,
    pub greedy_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    pub sigma: f64,
    pub entropy: f64,
    pub epsilon: f64,
}

/// One row of the atom table of the selected configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRow {
    pub id: usize,
    /// Hex-encoded canonical code.
    pub code: String,
    pub size: usize,
    /// Edges of the canonical adjacency.
    pub edges: Vec<(u8, u8)>,
    pub count: u64,
    pub edges_covered: u64,
    pub coverage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: InputSummary,
    pub max_size: usize,
    pub budget: usize,
    pub seed: u64,
    pub discovery: DiscoverySummary,
    pub variants: Vec<VariantReport>,
    pub edge_baseline: BaselineReport,
    pub selected: ModelVariant,
    /// `ln Lambda` of the selected configuration against the edge-only one.
    pub log_odds_vs_edges: f64,
    /// Gap between the two shortest descriptions, when at least two variants ran.
    pub min_delta_sigma: Option<f64>,
    pub atoms: Vec<AtomRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomEntry {
    pub id: usize,
    pub code: String,
    pub size: usize,
    pub edges: Vec<(u8, u8)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlacementEntry {
    pub atom: usize,
    pub vertices: Vec<u32>,
}

/// Serialized form of a configuration: the atoms used and every placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationFile {
    pub directed: bool,
    pub vertices: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<ModelVariant>,
    pub atoms: Vec<AtomEntry>,
    pub placements: Vec<PlacementEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex_labels: Option<Vec<String>>,
}

impl ConfigurationFile {
    /// Atom ids are renumbered densely in catalog order.
    pub fn new(catalog: &Catalog, c: &SubgraphConfiguration, vertices: usize) -> ConfigurationFile {
        let used: Vec<usize> = c.atom_counts().keys().copied().collect();
        let dense: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let atoms = used
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                let m = catalog.get(id);
                AtomEntry { id: i, code: m.code.to_hex(m.directed), size: m.size(), edges: m.edges.clone() }
            })
            .collect();
        let placements =
            c.iter().map(|p| PlacementEntry { atom: dense[&p.motif], vertices: p.vertices.clone() }).collect();
        ConfigurationFile {
            directed: catalog.is_directed(),
            vertices,
            variant: None,
            atoms,
            placements,
            vertex_labels: None,
        }
    }

    /// Rebuilds the configuration against a fresh catalog.
    pub fn to_configuration(&self) -> sgcm::Result<(Catalog, SubgraphConfiguration)> {
        let mut cat = Catalog::new(self.directed);
        let mut ids = Vec::new();
        for a in &self.atoms {
            let bytes = hex::decode(&a.code).map_err(|e| sgcm::Error::InvalidGraph(e.to_string()))?;
            let code = sgcm::CanonCode::from_bytes(&bytes, self.directed)
                .ok_or_else(|| sgcm::Error::InvalidGraph(format!("bad code {}", a.code)))?;
            ids.push(cat.insert_code(code)?);
        }
        let mut c = SubgraphConfiguration::new();
        for p in &self.placements {
            c.insert(sgcm::Placement::new(&cat, ids[p.atom], &p.vertices)?);
        }
        Ok((cat, c))
    }
}

pub const SUMMARY_HEADER: &str =
    "network\tvertices\tedges\tvariant\tsigma\tentropy\tepsilon\tsigma_e\tdelta_to_best\tatoms\tselected";

pub fn summary_tsv(name: &str, report: &Report) -> String {
    let best = report.variants.iter().map(|v| v.sigma).fold(f64::INFINITY, f64::min);
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for v in &report.variants {
        s.push_str(&format!(
            "{name}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{}\t{}\n",
            report.input.vertices,
            report.input.edges,
            v.variant,
            v.sigma,
            v.entropy,
            v.epsilon,
            report.edge_baseline.sigma,
            v.sigma - best,
            v.atoms,
            v.variant == report.selected,
        ));
    }
    s
}
