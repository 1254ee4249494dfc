use sgcm::dl::{description_length, DlContext, DlOptions};
use sgcm::{Graph, ModelVariant};
use sgcm_cli::report::{ConfigurationFile, Report};
use sgcm_cli::{generate_to, ingest_edge_list, run, FileConfig, RunConfig, RunOverrides};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;

const PLANTED: &str = r#"
[generate]
model = "homogeneous"
vertices = 150
seed = 3

[[generate.atoms]]
edges = [[0, 1], [1, 2], [2, 0]]
count = 40

[[generate.atoms]]
edges = [[0, 1]]
count = 60
"#;

fn write_planted(dir: &Path) -> std::path::PathBuf {
    let spec = FileConfig::parse(PLANTED).unwrap().generate.unwrap();
    generate_to(&spec, None, dir).unwrap();
    dir.join("edges.tsv")
}

fn config(input: &Path, out: &Path) -> RunConfig {
    let flags = RunOverrides {
        input: Some(input.to_path_buf()),
        out: Some(out.to_path_buf()),
        max_size: Some(4),
        ..Default::default()
    };
    RunConfig::resolve(flags, FileConfig::default()).unwrap()
}

#[test]
fn generated_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = FileConfig::parse(PLANTED).unwrap().generate.unwrap();
    let g = generate_to(&spec, None, dir.path()).unwrap();
    let back = ingest_edge_list(&dir.path().join("edges.tsv"), false).unwrap();
    let relabeled: Vec<(u32, u32)> = back
        .graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (back.labels[u as usize].parse::<u32>().unwrap(), back.labels[v as usize].parse::<u32>().unwrap());
            (a.min(b), a.max(b))
        })
        .collect();
    let rebuilt = Graph::new(g.graph.n_vertices(), false, relabeled).unwrap();
    assert_eq!(rebuilt.edges(), g.graph.edges());
    let text = std::fs::read_to_string(dir.path().join("configuration.json")).unwrap();
    let file: ConfigurationFile = serde_json::from_str(&text).unwrap();
    let (cat, c) = file.to_configuration().unwrap();
    assert_eq!(c.len(), g.configuration.len());
    let p = sgcm::configuration::project(&c, &cat, file.vertices).unwrap();
    assert_eq!(p.graph.edges(), g.graph.edges());
}

#[test]
fn report_values_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_planted(dir.path());
    let out = dir.path().join("out");
    let result = run(&config(&input, &out)).unwrap();
    let report: Report = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report, result.report);
    assert_eq!(report.variants.len(), 4);
    let tri = report.atoms.iter().find(|a| a.size == 3 && a.edges.len() == 3);
    assert!(tri.is_some(), "triangle atom missing from {:?}", report.atoms);
    assert!(report.log_odds_vs_edges > 0.0);

    let file: ConfigurationFile =
        serde_json::from_str(&std::fs::read_to_string(out.join("configuration.json")).unwrap()).unwrap();
    let (cat, c) = file.to_configuration().unwrap();
    let g = &result.input.graph;
    let ctx = DlContext::new(false, DlOptions::default());
    let dl = description_length(&ctx, &Arc::new(cat), &c, g, report.selected).unwrap();
    let reported = report.variants.iter().find(|v| v.variant == report.selected).unwrap();
    assert!((dl.sigma - reported.sigma).abs() < 1e-9 * dl.sigma);
    assert!((reported.entropy + reported.epsilon - reported.sigma).abs() < 1e-9 * reported.sigma);
    let best_sigma = reported.sigma;
    assert!((report.edge_baseline.sigma - best_sigma - report.log_odds_vs_edges).abs() < 1e-9 * best_sigma);

    let summary = std::fs::read_to_string(out.join("summary.tsv")).unwrap();
    assert_eq!(summary.lines().count(), 5);
    let row = format!("edges\t{}\t{}\t", report.input.vertices, report.input.edges);
    assert!(summary.lines().nth(1).unwrap().starts_with(&row));
}

#[test]
fn single_variant() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_planted(dir.path());
    let mut c = config(&input, &dir.path().join("out"));
    c.variants = vec![ModelVariant::Homogeneous];
    let r = run(&c).unwrap();
    assert_eq!(r.report.variants.len(), 1);
    assert_eq!(r.report.selected, ModelVariant::Homogeneous);
    assert_eq!(r.report.min_delta_sigma, None);
}

#[test]
fn motif_list_restricts_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_planted(dir.path());
    let motifs = dir.path().join("motifs.txt");
    std::fs::write(&motifs, "# only triangles\n0-1 1-2 2-0\n").unwrap();
    let mut c = config(&input, &dir.path().join("out"));
    c.motifs = Some(motifs);
    let r = run(&c).unwrap();
    assert!(r.report.discovery.from_motif_list);
    assert_eq!(r.report.discovery.candidates, 2);
    assert!(r.report.atoms.len() <= 2);
}

fn sgcm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sgcm"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_planted(dir.path());
    let out = dir.path().join("bin-out");
    let ok = sgcm()
        .args(["run", "--max-size", "3", "--threads", "2", "--variants", "dc_total,homogeneous", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(out.join("report.json").exists());
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().count(), 3);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "a b\nnonsense\n").unwrap();
    let st = sgcm().args(["run", "--input"]).arg(&bad).arg("--out").arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&st.stderr).contains("line 2"));

    let missing = sgcm().args(["run", "--input", "/nonexistent/graph.txt"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let spec = dir.path().join("spec.toml");
    std::fs::write(
        &spec,
        "[generate]\nmodel = \"degree_corrected\"\n[[generate.atoms]]\nedges = [[0, 1]]\ncount = 2\norbit_degrees = [[1, 1, 1]]\n",
    )
    .unwrap();
    let st = sgcm().args(["generate", "--config"]).arg(&spec).arg("--out").arg(&out).output().unwrap();
    assert_eq!(st.status.code(), Some(3));
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_planted(dir.path());
    let out = dir.path().join("cfg-out");
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!("input = {:?}\nout = {:?}\nmax_size = 3\nvariants = [\"dc_total\", \"dc_orbit\"]\nseed = 4\n", input, out),
    )
    .unwrap();
    let st = sgcm().args(["run", "--seed", "9", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    let report: Report = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report.seed, 9);
    assert_eq!(report.max_size, 3);
    assert_eq!(report.variants.len(), 2);
}
