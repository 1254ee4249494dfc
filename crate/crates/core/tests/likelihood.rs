use proptest::prelude::*;
use sgcm::configuration::{orbit_degree_table, ComponentKey};
use sgcm::generators::{enumerate_configurations, enumerate_stub_assemblies, Constraints};
use sgcm::models::{log_matchings, loglik_dc, loglik_dc_coarse, loglik_homogeneous};
use sgcm::{Catalog, Granularity, OrbitDegreeTable, Placement, SmallGraph, SubgraphConfiguration};
use std::collections::BTreeMap;

fn catalog() -> (Catalog, usize, usize) {
    let mut c = Catalog::new(false);
    let path = c.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2)])).unwrap();
    let tri = c.insert_graph(&SmallGraph::from_edges(3, false, &[(0, 1), (1, 2), (0, 2)])).unwrap();
    (c, path, tri)
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[test]
fn homogeneous_examples() {
    let (cat, _, tri) = catalog();
    let l = loglik_homogeneous(&BTreeMap::from([(0, 2)]), &cat, 4).unwrap();
    assert!((l + 15f64.ln()).abs() < 1e-12);
    let l = loglik_homogeneous(&BTreeMap::from([(0, 1), (tri, 1)]), &cat, 5).unwrap();
    assert!((l + 100f64.ln()).abs() < 1e-12);
    assert_eq!(loglik_homogeneous(&BTreeMap::new(), &cat, 5).unwrap(), 0.0);
    assert!(loglik_homogeneous(&BTreeMap::from([(tri, 11)]), &cat, 5).is_err());
}

#[test]
fn homogeneous_matches_enumeration() {
    let (cat, path, tri) = catalog();
    for n in 3..=5 {
        for ne in 0..=2u64 {
            for np in 0..=1u64 {
                for nt in 0..=1u64 {
                    let counts = BTreeMap::from([(0, ne), (path, np), (tri, nt)]);
                    let configs = enumerate_configurations(&cat, n, &Constraints::Counts(counts.clone())).unwrap();
                    let l = loglik_homogeneous(&counts, &cat, n).unwrap();
                    assert!((l + (configs.len() as f64).ln()).abs() < 1e-9, "n={n} {counts:?}");
                }
            }
        }
    }
}

#[test]
fn matchings_examples() {
    let (cat, _, tri) = catalog();
    let e = cat.get(0);
    assert_eq!(log_matchings(e, &[vec![1, 1]], 1).unwrap(), 0.0);
    assert!((log_matchings(e, &[vec![1, 1, 1, 1]], 2).unwrap() - 3f64.ln()).abs() < 1e-12);
    assert!(log_matchings(cat.get(tri), &[vec![1, 1, 1]], 1).unwrap().abs() < 1e-12);
    assert!(log_matchings(e, &[vec![1, 1, 1]], 2).is_err());
}

#[test]
fn edge_model_reduces_to_configuration_model_count() {
    // Stub pairings of a degree sequence: (sum d - 1)!! / prod d!.
    let cat = Catalog::new(false);
    let d = vec![3u32, 2, 2, 1, 1, 1];
    let s: u32 = d.iter().sum();
    let double_fact: f64 = (1..s).step_by(2).map(|x| (x as f64).ln()).sum();
    let denom: f64 = d.iter().map(|&x| sgcm::math::ln_factorial(x as u64)).sum();
    let got = log_matchings(cat.get(0), &[d], s as u64 / 2).unwrap();
    assert!((got - (double_fact - denom)).abs() < 1e-10);
}

/// All orbit-level tables over the motifs in `counts` that aggregate to `coarse`
/// and have the stub totals implied by `counts`.
fn refinements(cat: &Catalog, coarse: &OrbitDegreeTable, counts: &BTreeMap<usize, u64>) -> Vec<OrbitDegreeTable> {
    let fine = OrbitDegreeTable::empty(
        Granularity::Orbit,
        coarse.n_vertices,
        Granularity::Orbit.components(cat, counts.keys().copied()),
    );
    let target: Vec<u32> = fine
        .components
        .iter()
        .map(|k| match *k {
            ComponentKey::Orbit { motif, orbit } => (counts[&motif] as usize * cat.get(motif).orbits[orbit].size()) as u32,
            _ => unreachable!(),
        })
        .collect();
    let parent: Vec<usize> = fine
        .components
        .iter()
        .map(|k| match *k {
            ComponentKey::Orbit { motif, orbit } => {
                coarse.index_of(coarse.granularity.key(motif, cat.get(motif), orbit)).unwrap()
            }
            _ => unreachable!(),
        })
        .collect();
    let mut out = Vec::new();
    let cells: Vec<(usize, usize)> =
        (0..coarse.n_vertices).flat_map(|v| (0..coarse.components.len()).map(move |k| (v, k))).collect();
    fn split(
        cells: &[(usize, usize)],
        ci: usize,
        coarse: &OrbitDegreeTable,
        parent: &[usize],
        target: &[u32],
        t: &mut OrbitDegreeTable,
        out: &mut Vec<OrbitDegreeTable>,
    ) {
        if ci == cells.len() {
            if t.degrees.iter().zip(target).all(|(d, &s)| d.iter().sum::<u32>() == s) {
                out.push(t.clone());
            }
            return;
        }
        let (v, k) = cells[ci];
        let children: Vec<usize> = (0..parent.len()).filter(|&j| parent[j] == k).collect();
        fn distribute(
            left: u32,
            ch: &[usize],
            v: usize,
            next: &mut dyn FnMut(&mut OrbitDegreeTable),
            t: &mut OrbitDegreeTable,
        ) {
            if ch.len() == 1 {
                t.degrees[ch[0]][v] = left;
                next(t);
                t.degrees[ch[0]][v] = 0;
                return;
            }
            for x in 0..=left {
                t.degrees[ch[0]][v] = x;
                distribute(left - x, &ch[1..], v, next, t);
            }
            t.degrees[ch[0]][v] = 0;
        }
        if children.is_empty() {
            split(cells, ci + 1, coarse, parent, target, t, out);
            return;
        }
        let total = coarse.degrees[k][v];
        distribute(total, &children, v, &mut |t| split(cells, ci + 1, coarse, parent, target, t, out), t);
    }
    let mut t = fine;
    split(&cells, 0, coarse, &parent, &target, &mut t, &mut out);
    out
}

fn random_configuration(cat: &Catalog, n: usize, picks: &[(usize, Vec<u32>)]) -> SubgraphConfiguration {
    let mut c = SubgraphConfiguration::new();
    for (id, raw) in picks {
        let k = cat.get(*id).size();
        let mut verts: Vec<u32> = Vec::new();
        for &r in raw {
            let v = r % n as u32;
            if !verts.contains(&v) {
                verts.push(v);
            }
            if verts.len() == k {
                break;
            }
        }
        if verts.len() == k {
            c.insert(Placement::new(cat, *id, &verts).unwrap());
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    /// The coarse stub count is the sum of the orbit-level counts over every
    /// orbit-level table that aggregates to it.
    #[test]
    fn coarse_count_is_sum_over_refinements(
        picks in proptest::collection::vec((0usize..3, proptest::collection::vec(0u32..50, 8)), 1..4),
        total in any::<bool>(),
    ) {
        let (cat, _, _) = catalog();
        let n = 4;
        let c = random_configuration(&cat, n, &picks);
        prop_assume!(!c.is_empty());
        let counts = c.atom_counts();
        let gran = if total { Granularity::Total } else { Granularity::Motif };
        let coarse = orbit_degree_table(&c, &cat, n, gran);
        let coarse_omega = loglik_dc_coarse(&coarse, &cat, &counts).unwrap().ln_omega;
        let fine: Vec<f64> = refinements(&cat, &coarse, &counts)
            .iter()
            .map(|t| loglik_dc(t, &cat, &counts).unwrap().ln_omega)
            .collect();
        prop_assert!(!fine.is_empty());
        prop_assert!((log_sum_exp(&fine) - coarse_omega).abs() < 1e-9);
    }

    #[test]
    fn aggregation_agrees_with_direct_tables(
        picks in proptest::collection::vec((0usize..3, proptest::collection::vec(0u32..50, 8)), 1..8),
    ) {
        let (cat, _, _) = catalog();
        let c = random_configuration(&cat, 6, &picks);
        let orbit = orbit_degree_table(&c, &cat, 6, Granularity::Orbit);
        for g in [Granularity::Motif, Granularity::Total] {
            prop_assert_eq!(orbit.aggregate(&cat, g).unwrap(), orbit_degree_table(&c, &cat, 6, g));
        }
    }
}

#[test]
fn stub_counts_match_labeled_enumeration() {
    let (cat, path, tri) = catalog();
    let cases: Vec<(usize, Vec<Vec<u32>>, u64)> = vec![
        (0, vec![vec![1, 1, 1, 1]], 2),
        (0, vec![vec![2, 1, 1, 0, 2]], 3),
        (tri, vec![vec![1, 1, 1]], 1),
        (tri, vec![vec![2, 2, 1, 1]], 2),
        (path, vec![vec![1, 1, 0, 1, 1], vec![0, 0, 2, 0, 0]], 2),
        (path, vec![vec![1, 2, 1], vec![1, 0, 1]], 2),
    ];
    for (id, vectors, n) in cases {
        let m = cat.get(id);
        let ln_omega = log_matchings(m, &vectors, n).unwrap();
        let mut table = OrbitDegreeTable::empty(
            Granularity::Orbit,
            vectors[0].len(),
            Granularity::Orbit.components(&cat, [id]),
        );
        table.degrees = vectors.clone();
        let labeled = enumerate_stub_assemblies(&cat, &table, &BTreeMap::from([(id, n)])).unwrap();
        let ln_fact: f64 = vectors.iter().flatten().map(|&d| sgcm::math::ln_factorial(d as u64)).sum();
        let predicted = (ln_omega + ln_fact).exp();
        assert_eq!(predicted.round() as u64, labeled, "motif {id}, {vectors:?}");
        assert!((predicted - labeled as f64).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Coarser degree constraints admit at least as many configurations.
    #[test]
    fn coarser_tables_admit_more_configurations(
        picks in proptest::collection::vec((0usize..3, proptest::collection::vec(0u32..50, 8)), 1..4),
        n in 4usize..=6,
    ) {
        let (cat, _, _) = catalog();
        let c = random_configuration(&cat, n, &picks);
        prop_assume!(!c.is_empty());
        let counts = c.atom_counts();
        let count = |g: Granularity| {
            let t = orbit_degree_table(&c, &cat, n, g);
            enumerate_configurations(&cat, n, &Constraints::Degrees(counts.clone(), t)).unwrap().len()
        };
        let (orbit, motif, total) = (count(Granularity::Orbit), count(Granularity::Motif), count(Granularity::Total));
        prop_assert!(orbit >= 1);
        prop_assert!(orbit <= motif && motif <= total, "{orbit} {motif} {total}");
    }
}
