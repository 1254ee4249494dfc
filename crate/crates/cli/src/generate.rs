use crate::config::{AtomSpec, GeneratorModel, GeneratorSpec};
use crate::error::{CliError, CliResult};
use crate::ingest::write_edge_list;
use crate::report::ConfigurationFile;
use crate::run::{to_json, CONFIGURATION_FILE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sgcm::configuration::ComponentKey;
use sgcm::generators::{sample_dc, sample_homogeneous, SimplePolicy, DEFAULT_MAX_ATTEMPTS};
use sgcm::motif::{canonical_form, hard_max};
use sgcm::{CanonCode, Catalog, Granularity, Graph, OrbitDegreeTable, SmallGraph, SubgraphConfiguration};
use std::collections::BTreeMap;
use std::path::Path;

pub const EDGES_FILE: &str = "edges.tsv";

#[derive(Debug, Clone)]
pub struct Generated {
    pub catalog: Catalog,
    pub configuration: SubgraphConfiguration,
    pub graph: Graph,
}

fn spec_err(message: impl Into<String>) -> CliError {
    CliError::Infeasible { stage: "generate", message: message.into() }
}

/// Adds the atom to the catalog. Returns its id and, for each orbit in the user's
/// order, the canonical orbit index.
fn atom(cat: &mut Catalog, a: &AtomSpec, directed: bool) -> CliResult<(usize, Vec<usize>)> {
    let (id, perm) = match (&a.edges, &a.code) {
        (Some(edges), None) => {
            let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
            if n > hard_max(directed) || edges.iter().any(|&(u, v)| u == v) {
                return Err(CliError::input("generate", format!("atom {edges:?} is too large or has a self-loop")));
            }
            let g = SmallGraph::from_edges(n, directed, edges);
            let c = canonical_form(&g, hard_max(directed)).map_err(|e| CliError::from_core("generate", e))?;
            let id = cat.insert_graph(&g).map_err(|e| CliError::from_core("generate", e))?;
            (id, c.perm)
        }
        (None, Some(code)) => {
            let bytes = hex::decode(code).map_err(|e| CliError::input("generate", e.to_string()))?;
            let code = CanonCode::from_bytes(&bytes, directed)
                .ok_or_else(|| CliError::input("generate", "malformed canonical code"))?;
            let id = cat.insert_code(code).map_err(|e| CliError::from_core("generate", e))?;
            (id, (0..code.size).collect())
        }
        _ => return Err(CliError::input("generate", "each atom needs exactly one of `edges` or `code`")),
    };
    let m = cat.get(id);
    let mut first: Vec<(usize, usize)> = (0..m.orbits.len())
        .map(|i| ((0..m.size()).find(|&u| m.orbit_of[perm[u] as usize] == i).unwrap(), i))
        .collect();
    first.sort_unstable();
    Ok((id, first.into_iter().map(|(_, i)| i).collect()))
}

fn fill(t: &mut OrbitDegreeTable, key: ComponentKey, d: &[u32], n: &mut Option<usize>) -> CliResult<()> {
    match *n {
        Some(len) if len != d.len() => return Err(spec_err(format!("degree vectors of lengths {len} and {}", d.len()))),
        _ => *n = Some(d.len()),
    }
    let k = t.index_of(key).ok_or_else(|| spec_err(format!("no component {key:?} for these atoms")))?;
    t.degrees[k] = d.to_vec();
    Ok(())
}

/// Degree table of a degree-corrected spec; vertices are taken from the vectors.
fn degree_table(spec: &GeneratorSpec, cat: &Catalog, atoms: &[(usize, Vec<usize>)]) -> CliResult<OrbitDegreeTable> {
    let gran = spec.granularity.unwrap_or(Granularity::Orbit);
    if gran == Granularity::Directed && !spec.directed {
        return Err(CliError::input("generate", "directed granularity needs directed = true"));
    }
    let ids: Vec<usize> = atoms.iter().map(|a| a.0).collect();
    let mut n = spec.vertices;
    let mut t = OrbitDegreeTable::empty(gran, 0, gran.components(cat, ids.iter().copied()));
    let missing = |what: &str| CliError::input("generate", format!("granularity {gran:?} needs {what}"));
    match gran {
        Granularity::Orbit => {
            for (a, (id, order)) in spec.atoms.iter().zip(atoms) {
                let vectors = a.orbit_degrees.as_ref().ok_or_else(|| missing("orbit_degrees on every atom"))?;
                if vectors.len() != order.len() {
                    return Err(spec_err(format!("atom has {} orbits, spec lists {}", order.len(), vectors.len())));
                }
                for (d, &orbit) in vectors.iter().zip(order) {
                    fill(&mut t, ComponentKey::Orbit { motif: *id, orbit }, d, &mut n)?;
                }
            }
        }
        Granularity::Motif => {
            for (a, (id, _)) in spec.atoms.iter().zip(atoms) {
                let d = a.degrees.as_ref().ok_or_else(|| missing("degrees on every atom"))?;
                fill(&mut t, ComponentKey::Motif(*id), d, &mut n)?;
            }
        }
        Granularity::Total => {
            let d = spec.degrees.as_ref().ok_or_else(|| missing("degrees"))?;
            fill(&mut t, ComponentKey::Total, d, &mut n)?;
        }
        Granularity::Directed => {
            for (key, d) in [
                (ComponentKey::InOnly, &spec.in_degrees),
                (ComponentKey::OutOnly, &spec.out_degrees),
                (ComponentKey::Mixed, &spec.mixed_degrees),
            ] {
                if let Some(d) = d {
                    fill(&mut t, key, d, &mut n)?;
                }
            }
        }
    }
    let n = n.ok_or_else(|| missing("at least one degree vector"))?;
    t.n_vertices = n;
    for d in t.degrees.iter_mut() {
        if d.is_empty() {
            *d = vec![0; n];
        }
    }
    Ok(t)
}

pub fn generate(spec: &GeneratorSpec, seed: Option<u64>) -> CliResult<Generated> {
    let mut cat = Catalog::new(spec.directed);
    let mut atoms = Vec::new();
    for a in &spec.atoms {
        atoms.push(atom(&mut cat, a, spec.directed)?);
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for (a, (id, _)) in spec.atoms.iter().zip(&atoms) {
        *counts.entry(*id).or_insert(0) += a.count;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.or(spec.seed).unwrap_or(0));
    let (configuration, projection) = match spec.model {
        GeneratorModel::Homogeneous => {
            let n = spec.vertices.ok_or_else(|| CliError::input("generate", "homogeneous model needs `vertices`"))?;
            let attempts = spec.max_attempts.unwrap_or(DEFAULT_MAX_ATTEMPTS);
            let mut sample = Err(sgcm::Error::RejectionCap { attempts, rate: 0.0 });
            for _ in 0..attempts {
                match sample_homogeneous(&cat, n, &counts, &mut rng) {
                    Ok((_, p)) if spec.policy == SimplePolicy::Reject && p.parallel_edges() > 0 => continue,
                    other => {
                        sample = other;
                        break;
                    }
                }
            }
            sample
        }
        GeneratorModel::DegreeCorrected => {
            let table = degree_table(spec, &cat, &atoms)?;
            let attempts = spec.max_attempts.unwrap_or(DEFAULT_MAX_ATTEMPTS);
            sample_dc(&cat, &table, &counts, spec.policy, attempts, &mut rng)
        }
    }
    .map_err(|e| CliError::from_core("generate", e))?;
    Ok(Generated { catalog: cat, configuration, graph: projection.graph })
}

/// Samples the spec and writes edges.tsv plus the ground-truth configuration.json.
pub fn generate_to(spec: &GeneratorSpec, seed: Option<u64>, out: &Path) -> CliResult<Generated> {
    let g = generate(spec, seed)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io("write", out, e))?;
    let edges = out.join(EDGES_FILE);
    std::fs::write(&edges, write_edge_list(&g.graph)).map_err(|e| CliError::io("write", &edges, e))?;
    let file = ConfigurationFile::new(&g.catalog, &g.configuration, g.graph.n_vertices());
    let path = out.join(CONFIGURATION_FILE);
    std::fs::write(&path, to_json(&file)?).map_err(|e| CliError::io("write", &path, e))?;
    Ok(g)
}
