use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::ingest::{ingest_edge_list, Ingested};
use crate::report::*;
use sgcm::discover::{discover_candidates, DiscoverOptions};
use sgcm::dl::{DlContext, DlOptions};
use sgcm::infer::{select_model, InferOptions, Selection};
use sgcm::{CanonCode, Catalog, Graph, SmallGraph};
use std::path::Path;
use std::sync::Arc;

pub const REPORT_FILE: &str = "report.json";
pub const CONFIGURATION_FILE: &str = "configuration.json";
pub const SUMMARY_FILE: &str = "summary.tsv";

/// Parses a motif list: one motif per line, either as `u-v` edge pairs separated by
/// spaces or as a hex canonical code. `#` starts a comment line.
pub fn parse_motif_list(text: &str, directed: bool) -> CliResult<Catalog> {
    let mut cat = Catalog::new(directed);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| CliError::input("motifs", format!("line {}: {msg}", lineno + 1));
        if line.contains('-') {
            let mut edges = Vec::new();
            for pair in line.split_whitespace() {
                let (a, b) = pair.split_once('-').ok_or_else(|| err(format!("bad edge '{pair}'")))?;
                let a: usize = a.parse().map_err(|_| err(format!("bad vertex '{a}'")))?;
                let b: usize = b.parse().map_err(|_| err(format!("bad vertex '{b}'")))?;
                edges.push((a, b));
            }
            let n = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
            if n > sgcm::motif::hard_max(directed) || edges.iter().any(|&(a, b)| a == b) {
                return Err(err("motif too large or has a self-loop".into()));
            }
            let g = SmallGraph::from_edges(n, directed, &edges);
            cat.insert_graph(&g).map_err(|e| err(e.to_string()))?;
        } else {
            let bytes = hex::decode(line).map_err(|e| err(e.to_string()))?;
            let code = CanonCode::from_bytes(&bytes, directed).ok_or_else(|| err("malformed canonical code".into()))?;
            cat.insert_code(code).map_err(|e| err(e.to_string()))?;
        }
    }
    Ok(cat)
}

/// Everything `run` computes, before it is written out.
#[derive(Debug)]
pub struct RunOutput {
    pub report: Report,
    pub configuration: ConfigurationFile,
    pub summary: String,
    pub selection: Selection,
    pub catalog: Arc<Catalog>,
    pub input: Ingested,
}

/// Ingest, discover, infer and select; nothing is written.
pub fn analyze(config: &RunConfig) -> CliResult<RunOutput> {
    let input = ingest_edge_list(&config.input, config.directed)?;
    let name = config.input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let work = || analyze_graph(config, input, &name);
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Internal { stage: "threads", message: e.to_string() })?
            .install(work),
        None => work(),
    }
}

fn catalog_for(config: &RunConfig, g: &Graph, ctx: &DlContext) -> CliResult<(Catalog, DiscoverySummary)> {
    if let Some(path) = &config.motifs {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io("motifs", path, e))?;
        let cat = parse_motif_list(&text, config.directed)?;
        for (_, m) in cat.iter() {
            ctx.prior.motif_index(m).map_err(|e| CliError::from_core("motifs", e))?;
        }
        let summary =
            DiscoverySummary { candidates: cat.len(), vertex_sets: 0, exhaustive: true, from_motif_list: true };
        return Ok((cat, summary));
    }
    let d = discover_candidates(g, &DiscoverOptions::new(config.max_size, config.budget, config.seed))
        .map_err(|e| CliError::from_core("discover", e))?;
    let summary = DiscoverySummary {
        candidates: d.catalog.len(),
        vertex_sets: d.vertex_sets,
        exhaustive: d.exhaustive,
        from_motif_list: false,
    };
    Ok((d.catalog, summary))
}

fn analyze_graph(config: &RunConfig, input: Ingested, name: &str) -> CliResult<RunOutput> {
    let g = &input.graph;
    let options = DlOptions { count_support: config.count_support, ..DlOptions::default() };
    let ctx = DlContext::new(config.directed, options);
    let (cat, discovery) = catalog_for(config, g, &ctx)?;
    let cat = Arc::new(cat);
    let infer = InferOptions { prune_pass: config.prune, ..InferOptions::default() };
    let selection = select_model(g, &cat, &config.variants, &ctx, &infer).map_err(|e| CliError::from_core("infer", e))?;

    let variants: Vec<VariantReport> = selection
        .results
        .iter()
        .map(|r| VariantReport {
            variant: r.variant,
            sigma: r.dl.sigma,
            entropy: r.dl.entropy,
            epsilon: r.dl.epsilon,
            degree_prior: r.dl.degree_prior,
            counts_prior: r.dl.counts_prior,
            motif_prior: r.dl.motif_prior,
            lambda: r.dl.lambda,
            contraction: r.dl.terms.as_ref().map(|t| t.contraction),
            duplicate: r.dl.terms.as_ref().map(|t| t.duplicate),
            atoms: r.configuration.atom_counts().len(),
            greedy_steps: r.steps.len(),
        })
        .collect();
    let mut sigmas: Vec<f64> = variants.iter().map(|v| v.sigma).collect();
    sigmas.sort_by(f64::total_cmp);
    let min_delta_sigma = (sigmas.len() > 1).then(|| sigmas[1] - sigmas[0]);

    let best = selection.best();
    let e_total = g.n_edges() as f64;
    let atoms = best
        .configuration
        .atom_counts()
        .into_iter()
        .enumerate()
        .map(|(i, (id, count))| {
            let m = cat.get(id);
            let covered = count * m.edge_count() as u64;
            AtomRow {
                id: i,
                code: m.code.to_hex(m.directed),
                size: m.size(),
                edges: m.edges.clone(),
                count,
                edges_covered: covered,
                coverage: covered as f64 / e_total,
            }
        })
        .collect();
    let report = Report {
        input: InputSummary {
            vertices: g.n_vertices(),
            edges: g.n_edges(),
            directed: g.is_directed(),
            duplicate_edges: input.duplicate_edges,
            self_loops: input.self_loops,
        },
        max_size: config.max_size,
        budget: config.budget,
        seed: config.seed,
        discovery,
        variants,
        edge_baseline: BaselineReport {
            sigma: selection.baseline.sigma,
            entropy: selection.baseline.entropy,
            epsilon: selection.baseline.epsilon,
        },
        selected: selection.selected,
        log_odds_vs_edges: selection.log_odds_vs_edges,
        min_delta_sigma,
        atoms,
    };
    let mut configuration = ConfigurationFile::new(&cat, &best.configuration, g.n_vertices());
    configuration.variant = Some(best.variant);
    configuration.vertex_labels = Some(input.labels.clone());
    let summary = summary_tsv(name, &report);
    Ok(RunOutput { report, configuration, summary, selection, catalog: cat, input })
}

fn write(out: &Path, file: &str, contents: &str) -> CliResult<()> {
    let path = out.join(file);
    std::fs::write(&path, contents).map_err(|e| CliError::io("write", &path, e))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal { stage: "write", message: e.to_string() })
}

/// Runs the full analysis and writes report.json, configuration.json and summary.tsv.
pub fn run(config: &RunConfig) -> CliResult<RunOutput> {
    let out = analyze(config)?;
    std::fs::create_dir_all(&config.out).map_err(|e| CliError::io("write", &config.out, e))?;
    write(&config.out, REPORT_FILE, &to_json(&out.report)?)?;
    write(&config.out, CONFIGURATION_FILE, &to_json(&out.configuration)?)?;
    write(&config.out, SUMMARY_FILE, &out.summary)?;
    Ok(out)
}
