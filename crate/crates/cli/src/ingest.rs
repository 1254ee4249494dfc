use crate::error::{CliError, CliResult};
use sgcm::Graph;
use std::collections::{BTreeSet, HashMap};
use std::path::Path;

/// A parsed edge list with the label of every dense vertex id.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub graph: Graph,
    /// `labels[v]` is the input label of vertex `v`, in order of first appearance.
    pub labels: Vec<String>,
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

pub fn ingest_edge_list(path: &Path, directed: bool) -> CliResult<Ingested> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io("ingest", path, e))?;
    parse_edge_list(&text, directed)
}

/// Parses whitespace-separated `u v` lines. Blank lines and lines starting with
/// `#` are skipped.
pub fn parse_edge_list<'a>(text: &'a str, directed: bool) -> CliResult<Ingested> {
    let mut ids: HashMap<&'a str, u32> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = BTreeSet::new();
    let (mut duplicate_edges, mut self_loops) = (0, 0);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(CliError::input(
                "ingest",
                format!("line {}: expected two vertex labels, found {}", lineno + 1, tokens.len()),
            ));
        }
        let mut id = |label: &'a str| -> u32 {
            *ids.entry(label).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() as u32 - 1
            })
        };
        let (u, v) = (id(tokens[0]), id(tokens[1]));
        if u == v {
            self_loops += 1;
            continue;
        }
        let e = if directed || u < v { (u, v) } else { (v, u) };
        if !edges.insert(e) {
            duplicate_edges += 1;
        }
    }
    if edges.is_empty() {
        return Err(CliError::input("ingest", "edge list contains no edges"));
    }
    let graph = Graph::new(labels.len(), directed, edges.into_iter().collect::<Vec<_>>())
        .map_err(|e| CliError::from_core("ingest", e))?;
    Ok(Ingested { graph, labels, duplicate_edges, self_loops })
}

/// Writes `u v` lines, one per edge, using vertex ids as labels.
pub fn write_edge_list(g: &Graph) -> String {
    let mut s = String::new();
    for &(u, v) in g.edges() {
        s.push_str(&format!("{u}\t{v}\n"));
    }
    s
}
