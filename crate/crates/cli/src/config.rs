use crate::error::{CliError, CliResult};
use serde::{Deserialize, Serialize};
use sgcm::generators::SimplePolicy;
use sgcm::motif::default_max_size;
use sgcm::priors::CountSupport;
use sgcm::{Granularity, ModelVariant};
use std::path::{Path, PathBuf};

pub const DEFAULT_BUDGET: usize = 1_000_000;
pub const DEFAULT_SEED: u64 = 0;

/// Settings for one `run`, after merging flags, the config file and defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub directed: bool,
    pub max_size: usize,
    pub budget: usize,
    pub variants: Vec<ModelVariant>,
    pub seed: u64,
    pub out: PathBuf,
    pub motifs: Option<PathBuf>,
    /// Worker threads; `None` uses the available parallelism.
    #[serde(skip)]
    pub threads: Option<usize>,
    pub count_support: CountSupport,
    pub prune: bool,
}

/// Keys accepted in a TOML config file; every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub directed: Option<bool>,
    pub max_size: Option<usize>,
    pub budget: Option<usize>,
    pub variants: Option<Vec<ModelVariant>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub motifs: Option<PathBuf>,
    pub threads: Option<usize>,
    pub count_support: Option<CountSupport>,
    pub prune: Option<bool>,
    pub generate: Option<GeneratorSpec>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<FileConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io("config", path, e))?;
        FileConfig::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<FileConfig> {
        toml::from_str(text).map_err(|e| CliError::input("config", e.to_string()))
    }
}

/// Values given on the command line. Anything set here beats the config file.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub input: Option<PathBuf>,
    pub directed: Option<bool>,
    pub max_size: Option<usize>,
    pub budget: Option<usize>,
    pub variants: Option<Vec<ModelVariant>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub motifs: Option<PathBuf>,
    pub threads: Option<usize>,
    pub count_support: Option<CountSupport>,
    pub prune: Option<bool>,
}

impl RunConfig {
    pub fn resolve(flags: RunOverrides, file: FileConfig) -> CliResult<RunConfig> {
        let input = flags
            .input
            .or(file.input)
            .ok_or_else(|| CliError::input("config", "no input edge list given"))?;
        let directed = flags.directed.or(file.directed).unwrap_or(false);
        let cap = default_max_size(directed);
        let max_size = flags.max_size.or(file.max_size).unwrap_or(cap);
        if !(2..=cap).contains(&max_size) {
            return Err(CliError::input(
                "config",
                format!("max motif size {max_size} outside 2..={cap} for {} graphs", if directed { "directed" } else { "undirected" }),
            ));
        }
        let variants = flags.variants.or(file.variants).unwrap_or_else(|| ModelVariant::applicable(directed));
        if variants.is_empty() {
            return Err(CliError::input("config", "empty variant list"));
        }
        if !directed && variants.contains(&ModelVariant::DcDirected) {
            return Err(CliError::input("config", "dc_directed needs a directed graph"));
        }
        let threads = flags.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::input("config", "thread count must be positive"));
        }
        Ok(RunConfig {
            input,
            directed,
            max_size,
            budget: flags.budget.or(file.budget).unwrap_or(DEFAULT_BUDGET),
            variants,
            seed: flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            motifs: flags.motifs.or(file.motifs),
            threads,
            count_support: flags.count_support.or(file.count_support).unwrap_or_default(),
            prune: flags.prune.or(file.prune).unwrap_or(false),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorModel {
    Homogeneous,
    DegreeCorrected,
}

/// One atom type in a generator spec, given by its edges or a hex canonical code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub edges: Option<Vec<(usize, usize)>>,
    pub code: Option<String>,
    pub count: u64,
    /// Per-vertex degrees for `granularity = "motif"`.
    pub degrees: Option<Vec<u32>>,
    /// Per-orbit, per-vertex degrees for `granularity = "orbit"`. Orbits are ordered
    /// by their smallest vertex in `edges` (or canonical position for `code`).
    pub orbit_degrees: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub model: GeneratorModel,
    /// Vertex count; required for the homogeneous model.
    pub vertices: Option<usize>,
    #[serde(default)]
    pub directed: bool,
    pub seed: Option<u64>,
    #[serde(default)]
    pub policy: SimplePolicy,
    pub granularity: Option<Granularity>,
    pub max_attempts: Option<u64>,
    pub atoms: Vec<AtomSpec>,
    /// Per-vertex degrees for `granularity = "total"`.
    pub degrees: Option<Vec<u32>>,
    pub in_degrees: Option<Vec<u32>>,
    pub out_degrees: Option<Vec<u32>>,
    pub mixed_degrees: Option<Vec<u32>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file() {
        let file = FileConfig::parse("input = \"a.txt\"\nseed = 5\nmax_size = 4\nvariants = [\"dc_total\"]\n").unwrap();
        let flags = RunOverrides { seed: Some(9), ..Default::default() };
        let c = RunConfig::resolve(flags, file).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.max_size, 4);
        assert_eq!(c.input, PathBuf::from("a.txt"));
        assert_eq!(c.variants, vec![ModelVariant::DcTotal]);
    }

    #[test]
    fn defaults_and_validation() {
        let flags = RunOverrides { input: Some("g.txt".into()), ..Default::default() };
        let c = RunConfig::resolve(flags.clone(), FileConfig::default()).unwrap();
        assert_eq!(c.max_size, 8);
        assert_eq!(c.variants.len(), 4);
        let d = RunConfig::resolve(RunOverrides { directed: Some(true), ..flags.clone() }, FileConfig::default()).unwrap();
        assert_eq!(d.max_size, 5);
        assert_eq!(d.variants.len(), 5);
        assert!(RunConfig::resolve(RunOverrides { max_size: Some(9), ..flags.clone() }, FileConfig::default()).is_err());
        let bad = RunOverrides { variants: Some(vec![ModelVariant::DcDirected]), ..flags };
        assert!(RunConfig::resolve(bad, FileConfig::default()).is_err());
        assert!(FileConfig::parse("colour = 3").is_err());
        assert!(RunConfig::resolve(RunOverrides::default(), FileConfig::default()).is_err());
    }

    #[test]
    fn generator_section() {
        let f = FileConfig::parse(
            "[generate]\nmodel = \"degree_corrected\"\ngranularity = \"orbit\"\n\n[[generate.atoms]]\nedges = [[0, 1]]\ncount = 2\norbit_degrees = [[1, 1, 1, 1]]\n",
        )
        .unwrap();
        let g = f.generate.unwrap();
        assert_eq!(g.atoms[0].orbit_degrees, Some(vec![vec![1, 1, 1, 1]]));
        assert_eq!(g.policy, SimplePolicy::Reject);
    }
}
