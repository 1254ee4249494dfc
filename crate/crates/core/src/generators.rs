//! Samplers for the homogeneous and degree-corrected ensembles, plus brute-force
//! enumerators used as oracles in tests.

use crate::catalog::Catalog;
use crate::configuration::{orbit_degree_table, project, OrbitDegreeTable, Placement, Projection, SubgraphConfiguration};
use crate::error::{Error, Result};
use crate::motif::Motif;
use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// What to do with projected parallel edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplePolicy {
    /// Resample until the projection is simple.
    #[default]
    Reject,
    /// Keep the configuration; the projected graph collapses repeated edges.
    Discard,
}

/// Default number of stub-matching attempts before giving up.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// Enumeration of every placement of `m` in `K_n`, sorted.
pub fn all_placements(catalog: &Catalog, id: usize, n: usize) -> Vec<Placement> {
    let k = catalog.get(id).size();
    let mut out = BTreeSet::new();
    let mut tuple = Vec::with_capacity(k);
    fn rec(catalog: &Catalog, id: usize, n: usize, k: usize, tuple: &mut Vec<u32>, out: &mut BTreeSet<Placement>) {
        if tuple.len() == k {
            out.insert(Placement::new(catalog, id, tuple).expect("distinct vertices"));
            return;
        }
        for v in 0..n as u32 {
            if !tuple.contains(&v) {
                tuple.push(v);
                rec(catalog, id, n, k, tuple, out);
                tuple.pop();
            }
        }
    }
    rec(catalog, id, n, k, &mut tuple, &mut out);
    out.into_iter().collect()
}

/// Uniform sample of `n_m` distinct placements of each motif in `K_n`.
pub fn sample_homogeneous<R: Rng>(
    catalog: &Catalog,
    n: usize,
    counts: &BTreeMap<usize, u64>,
    rng: &mut R,
) -> Result<(SubgraphConfiguration, Projection)> {
    let mut c = SubgraphConfiguration::new();
    for (&id, &count) in counts {
        if count == 0 {
            continue;
        }
        let m = catalog.get(id);
        let h = m.count_placements(n)?;
        let h_f = h.map_or(f64::INFINITY, |x| x as f64);
        if count as f64 > h_f {
            return Err(Error::CountExceedsPlacements { count, available: h_f });
        }
        if h_f <= 1e6 && count as f64 > h_f / 2.0 {
            let all = all_placements(catalog, id, n);
            for i in index::sample(rng, all.len(), count as usize).into_iter() {
                c.insert(all[i].clone());
            }
        } else {
            let mut added = 0;
            while added < count {
                let tuple: Vec<u32> = index::sample(rng, n, m.size()).into_iter().map(|v| v as u32).collect();
                if c.insert(Placement::new(catalog, id, &tuple)?) {
                    added += 1;
                }
            }
        }
    }
    let p = project(&c, catalog, n)?;
    Ok((c, p))
}

/// Why a stub matching was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    Contraction,
    Duplicate,
    ParallelEdge,
}

/// Slot layout for stub matching: which component feeds each motif position.
struct Layout {
    /// `(motif id, first slot)` per instance.
    instances: Vec<(usize, usize)>,
    /// Slots (global indices) belonging to each component.
    comp_slots: Vec<Vec<usize>>,
    /// Stub list (vertex per stub) for each component.
    stubs: Vec<Vec<u32>>,
    n_slots: usize,
}

fn layout(catalog: &Catalog, table: &OrbitDegreeTable, counts: &BTreeMap<usize, u64>) -> Result<Layout> {
    let mut instances = Vec::new();
    let mut comp_slots = vec![Vec::new(); table.components.len()];
    let mut slot = 0;
    for (&id, &n) in counts {
        let m = catalog.get(id);
        for _ in 0..n {
            instances.push((id, slot));
            for pos in 0..m.size() {
                let key = table.granularity.key(id, m, m.orbit_of[pos]);
                let k = table
                    .index_of(key)
                    .ok_or_else(|| Error::Infeasible(format!("degree table lacks component {key:?}")))?;
                comp_slots[k].push(slot);
                slot += 1;
            }
        }
    }
    let stubs: Vec<Vec<u32>> = table
        .degrees
        .iter()
        .map(|d| d.iter().enumerate().flat_map(|(v, &x)| std::iter::repeat(v as u32).take(x as usize)).collect())
        .collect();
    for (k, (slots, s)) in comp_slots.iter().zip(&stubs).enumerate() {
        if slots.len() != s.len() {
            return Err(Error::Infeasible(format!(
                "component {:?}: {} stubs for {} slots",
                table.components[k],
                s.len(),
                slots.len()
            )));
        }
    }
    Ok(Layout { instances, comp_slots, stubs, n_slots: slot })
}

/// One stub-matching attempt. `stubs` is shuffled in place.
fn match_once<R: Rng>(
    catalog: &Catalog,
    n: usize,
    lay: &mut Layout,
    policy: SimplePolicy,
    rng: &mut R,
) -> Result<std::result::Result<(SubgraphConfiguration, Projection), Rejection>> {
    let mut assign = vec![0u32; lay.n_slots];
    for (slots, stubs) in lay.comp_slots.iter().zip(lay.stubs.iter_mut()) {
        stubs.shuffle(rng);
        for (&s, &v) in slots.iter().zip(stubs.iter()) {
            assign[s] = v;
        }
    }
    let mut c = SubgraphConfiguration::new();
    for &(id, first) in &lay.instances {
        let k = catalog.get(id).size();
        let tuple = &assign[first..first + k];
        let mut seen = tuple.to_vec();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Ok(Err(Rejection::Contraction));
        }
        if !c.insert(Placement::new(catalog, id, tuple)?) {
            return Ok(Err(Rejection::Duplicate));
        }
    }
    let p = project(&c, catalog, n)?;
    if policy == SimplePolicy::Reject && p.parallel_edges() > 0 {
        return Ok(Err(Rejection::ParallelEdge));
    }
    Ok(Ok((c, p)))
}

/// Acceptance statistics of repeated stub matching.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AcceptanceCounts {
    pub attempts: u64,
    pub accepted: u64,
    pub contractions: u64,
    pub duplicates: u64,
    pub parallel: u64,
}

/// Runs `attempts` independent stub matchings and tallies the outcomes.
pub fn acceptance_counts<R: Rng>(
    catalog: &Catalog,
    table: &OrbitDegreeTable,
    counts: &BTreeMap<usize, u64>,
    policy: SimplePolicy,
    attempts: u64,
    rng: &mut R,
) -> Result<AcceptanceCounts> {
    let mut lay = layout(catalog, table, counts)?;
    let mut a = AcceptanceCounts { attempts, ..Default::default() };
    for _ in 0..attempts {
        match match_once(catalog, table.n_vertices, &mut lay, policy, rng)? {
            Ok(_) => a.accepted += 1,
            Err(Rejection::Contraction) => a.contractions += 1,
            Err(Rejection::Duplicate) => a.duplicates += 1,
            Err(Rejection::ParallelEdge) => a.parallel += 1,
        }
    }
    Ok(a)
}

/// Stub-matching sample with the degrees of `table` (any granularity).
///
/// Accepted samples are uniform over configurations without contractions and
/// repeated subgraphs (and, under [`SimplePolicy::Reject`], without parallel edges).
pub fn sample_dc<R: Rng>(
    catalog: &Catalog,
    table: &OrbitDegreeTable,
    counts: &BTreeMap<usize, u64>,
    policy: SimplePolicy,
    max_attempts: u64,
    rng: &mut R,
) -> Result<(SubgraphConfiguration, Projection)> {
    let mut lay = layout(catalog, table, counts)?;
    for _ in 0..max_attempts {
        if let Ok(out) = match_once(catalog, table.n_vertices, &mut lay, policy, rng)? {
            return Ok(out);
        }
    }
    Err(Error::RejectionCap { attempts: max_attempts, rate: 0.0 })
}

/// Constraint sets understood by [`enumerate_configurations`].
#[derive(Debug, Clone)]
pub enum Constraints {
    Counts(BTreeMap<usize, u64>),
    /// Counts plus an exact degree table at the table's granularity.
    Degrees(BTreeMap<usize, u64>, OrbitDegreeTable),
}

pub const ORACLE_MAX_VERTICES: usize = 6;
pub const ORACLE_MAX_PLACEMENTS: u64 = 4;

/// Every configuration on `n` vertices satisfying `constraints`, by brute force.
pub fn enumerate_configurations(catalog: &Catalog, n: usize, constraints: &Constraints) -> Result<Vec<SubgraphConfiguration>> {
    let counts = match constraints {
        Constraints::Counts(c) | Constraints::Degrees(c, _) => c,
    };
    let total: u64 = counts.values().sum();
    if n > ORACLE_MAX_VERTICES || total > ORACLE_MAX_PLACEMENTS {
        return Err(Error::GuardRail(format!("n = {n}, placements = {total}")));
    }
    let pools: Vec<(Vec<Placement>, usize)> = counts
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(&id, &k)| (all_placements(catalog, id, n), k as usize))
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<Placement> = Vec::new();
    fn rec(
        pools: &[(Vec<Placement>, usize)],
        i: usize,
        start: usize,
        left: usize,
        current: &mut Vec<Placement>,
        visit: &mut dyn FnMut(&[Placement]),
    ) {
        if i == pools.len() {
            visit(current);
            return;
        }
        if left == 0 {
            let next_left = pools.get(i + 1).map_or(0, |p| p.1);
            rec(pools, i + 1, 0, next_left, current, visit);
            return;
        }
        let pool = &pools[i].0;
        for j in start..pool.len() {
            current.push(pool[j].clone());
            rec(pools, i, j + 1, left - 1, current, visit);
            current.pop();
        }
    }
    let first_left = pools.first().map_or(0, |p| p.1);
    let mut visit = |ps: &[Placement]| {
        let c: SubgraphConfiguration = ps.iter().cloned().collect();
        let keep = match constraints {
            Constraints::Counts(_) => true,
            Constraints::Degrees(_, table) => &orbit_degree_table(&c, catalog, n, table.granularity) == table,
        };
        if keep {
            out.push(c);
        }
    };
    rec(&pools, 0, 0, first_left, &mut current, &mut visit);
    Ok(out)
}

/// Number of distinct assemblies of labeled stubs into unlabeled atoms for a degree
/// table: stubs of each component are placed in that component's slots in every
/// possible order, and orderings that give the same set of atoms (each atom read up
/// to its automorphisms) are identified.
pub fn enumerate_stub_assemblies(catalog: &Catalog, table: &OrbitDegreeTable, counts: &BTreeMap<usize, u64>) -> Result<u64> {
    let lay = layout(catalog, table, counts)?;
    if lay.n_slots > 10 {
        return Err(Error::GuardRail(format!("{} stubs", lay.n_slots)));
    }
    // Stub labels: global ids, component by component.
    let mut labels: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for s in &lay.stubs {
        labels.push((next..next + s.len()).collect());
        next += s.len();
    }
    let mut seen: HashSet<Vec<(usize, Vec<usize>)>> = HashSet::new();
    let mut assign = vec![0usize; lay.n_slots];
    fn perms(k: usize, lay: &Layout, labels: &mut [Vec<usize>], assign: &mut Vec<usize>, done: &mut dyn FnMut(&[usize])) {
        if k == labels.len() {
            done(assign);
            return;
        }
        let len = labels[k].len();
        heap_permute(len, &mut labels[k].clone(), &mut |p: &[usize]| {
            for (&s, &l) in lay.comp_slots[k].iter().zip(p) {
                assign[s] = l;
            }
            // Recursion needs the other components; copy to keep borrowck simple.
            let mut rest: Vec<Vec<usize>> = labels.to_vec();
            perms(k + 1, lay, &mut rest, &mut assign.clone(), done);
        });
    }
    let instances = lay.instances.clone();
    let mut done = |a: &[usize]| {
        let mut atoms: Vec<(usize, Vec<usize>)> = instances
            .iter()
            .map(|&(id, first)| {
                let m: &Motif = catalog.get(id);
                let tuple: Vec<u32> = a[first..first + m.size()].iter().map(|&x| x as u32).collect();
                (id, m.normalize_tuple(&tuple).into_iter().map(|x| x as usize).collect())
            })
            .collect();
        atoms.sort();
        seen.insert(atoms);
    };
    perms(0, &lay, &mut labels, &mut assign, &mut done);
    Ok(seen.len() as u64)
}

fn heap_permute(k: usize, a: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(a);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, f);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, f);
}
