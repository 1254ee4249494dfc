//! Priors on atom sets, atom counts and atomic degree sequences.

use crate::configuration::OrbitDegreeTable;
use crate::error::{Error, Result};
use crate::math::{ln_binomial, ln_expm1, ln_factorial, log2_star};
use crate::motif::universe::Universe;
use crate::motif::Motif;
use crate::partitions;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Rissanen's normalizer: the sum over positive integers of `2^{-log2*(n)}`.
pub const RISSANEN_CONSTANT: f64 = 2.865064;

/// Prior probability of the motif with one-based index `index`.
pub fn motif_probability(index: usize) -> f64 {
    (-log2_star(index as f64)).exp2() / RISSANEN_CONSTANT
}

/// Independent-inclusion prior over motif sets, truncated to a finite universe.
#[derive(Debug, Clone)]
pub struct MotifPrior {
    universe: Arc<Universe>,
    ln_z: f64,
}

impl MotifPrior {
    pub fn new(universe: Arc<Universe>) -> MotifPrior {
        let ln_z = (1..=universe.len()).map(|i| -(-motif_probability(i)).ln_1p()).sum();
        MotifPrior { universe, ln_z }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// `ln Z = -sum_m ln(1 - p_m)` over the universe.
    pub fn ln_z(&self) -> f64 {
        self.ln_z
    }

    /// Position of `m` in (size, edge count, code) order, starting at 1.
    pub fn motif_index(&self, m: &Motif) -> Result<usize> {
        if m.directed != self.universe.is_directed() {
            return Err(Error::OutsideUniverse(format!("{} has the wrong direction", m.code)));
        }
        self.universe.index_of(&m.code).ok_or_else(|| Error::OutsideUniverse(m.code.to_string()))
    }

    /// `ln(p / (1 - p))` for one motif index.
    pub fn ln_odds(index: usize) -> f64 {
        let p = motif_probability(index);
        p.ln() - (-p).ln_1p()
    }

    /// `ln P(M) = sum_{m in M} ln(p_m / (1 - p_m)) - ln Z` for motif indices.
    pub fn log_prior_indices(&self, indices: impl IntoIterator<Item = usize>) -> f64 {
        indices.into_iter().map(Self::ln_odds).sum::<f64>() - self.ln_z
    }

    pub fn log_prior<'a>(&self, motifs: impl IntoIterator<Item = &'a Motif>) -> Result<f64> {
        let mut idx = Vec::new();
        for m in motifs {
            idx.push(self.motif_index(m)?);
        }
        Ok(self.log_prior_indices(idx))
    }
}

/// Which counts the count prior ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountSupport {
    /// `n_m >= 1`: the mass `e^{-lambda sum n e}` with normalizer `prod (e^{lambda e} - 1)^{-1}`.
    #[default]
    Positive,
    /// `n_m >= 0`: normalizer `prod (1 - e^{-lambda e})^{-1}`.
    NonNegative,
}

/// Solves `E = sum_m e_m / (1 - e^{-lambda e_m})` for `lambda > 0`.
pub fn solve_lambda(edges: f64, edge_counts: &[usize]) -> Result<f64> {
    solve_lambda_with(edges, edge_counts, CountSupport::Positive)
}

/// As [`solve_lambda`]; under `NonNegative` support the mean constraint is
/// `E = sum_m e_m / (e^{lambda e_m} - 1)`.
pub fn solve_lambda_with(edges: f64, edge_counts: &[usize], support: CountSupport) -> Result<f64> {
    if edge_counts.is_empty() || edges <= 0.0 || edge_counts.contains(&0) {
        return Err(Error::InfeasibleLambda { edges, minimum: f64::NAN });
    }
    let es: Vec<f64> = edge_counts.iter().map(|&e| e as f64).collect();
    let floor = match support {
        CountSupport::Positive => es.iter().sum(),
        CountSupport::NonNegative => 0.0,
    };
    if edges <= floor {
        return Err(Error::InfeasibleLambda { edges, minimum: floor });
    }
    // f is strictly decreasing from +inf towards `floor`.
    let f = |lambda: f64| -> (f64, f64) {
        let mut val = -edges;
        let mut deriv = 0.0;
        for &e in &es {
            let x = lambda * e;
            let om = -(-x).exp_m1(); // 1 - e^{-x}
            match support {
                CountSupport::Positive => {
                    val += e / om;
                    deriv -= e * e * (-x).exp() / (om * om);
                }
                CountSupport::NonNegative => {
                    let em1 = x.exp_m1();
                    val += e / em1;
                    deriv -= e * e * x.exp() / (em1 * em1);
                }
            }
        }
        (val, deriv)
    };
    let (mut lo, mut hi) = (1e-300f64, 1.0f64);
    while f(hi).0 > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    // Bisection until the bracket is tight relative to hi, then Newton.
    for _ in 0..200 {
        if hi - lo <= 1e-6 * hi {
            break;
        }
        let mid = if lo < 1e-12 * hi { (lo * hi).sqrt().max(hi * 1e-12) } else { 0.5 * (lo + hi) };
        if f(mid).0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut lambda = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (val, deriv) = f(lambda);
        let mut next = lambda - val / deriv;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if val > 0.0 {
            lo = lo.max(lambda);
        } else {
            hi = hi.min(lambda);
        }
        let done = (next - lambda).abs() <= 1e-15 * lambda;
        lambda = next;
        if done {
            break;
        }
    }
    let residual = f(lambda).0.abs();
    if residual >= 1e-9 * edges {
        return Err(Error::InfeasibleLambda { edges, minimum: floor });
    }
    Ok(lambda)
}

/// `ln P(n | E, M)` for pairs `(n_m, e_m)` at a given `lambda`.
pub fn counts_log_prior(counts: &[(u64, usize)], lambda: f64, support: CountSupport) -> f64 {
    counts
        .iter()
        .map(|&(n, e)| {
            let x = lambda * e as f64;
            let norm = match support {
                CountSupport::Positive => ln_expm1(x),
                CountSupport::NonNegative => (-(-x).exp()).ln_1p(),
            };
            -x * n as f64 + norm
        })
        .sum()
}

/// `ln P_1 = -ln C(N + D - 1, D)`.
pub fn uniform_log_prior(n_vertices: u64, d_sum: u64) -> f64 {
    if n_vertices == 0 || d_sum == 0 {
        return 0.0;
    }
    -ln_binomial(n_vertices + d_sum - 1, d_sum)
}

/// `ln P_2 = sum_k ln eta_k! - ln N! - ln q(D, N)` given `sum_k ln eta_k!`.
pub fn hyper_log_prior(n_vertices: u64, d_sum: u64, ln_eta_fact: f64, threshold: u64) -> f64 {
    if n_vertices == 0 {
        return 0.0;
    }
    ln_eta_fact - ln_factorial(n_vertices) - partitions::restricted_partitions_log_with(d_sum, n_vertices, threshold)
}

pub fn degree_logprior_uniform(d: &[u32]) -> f64 {
    uniform_log_prior(d.len() as u64, d.iter().map(|&x| x as u64).sum())
}

pub fn degree_logprior_hyper(d: &[u32]) -> f64 {
    degree_logprior_hyper_with(d, partitions::DEFAULT_THRESHOLD)
}

pub fn degree_logprior_hyper_with(d: &[u32], threshold: u64) -> f64 {
    let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
    for &x in d {
        *hist.entry(x).or_insert(0) += 1;
    }
    let ln_eta: f64 = hist.values().map(|&c| ln_factorial(c)).sum();
    hyper_log_prior(d.len() as u64, d.iter().map(|&x| x as u64).sum(), ln_eta, threshold)
}

/// The better of the two one-dimensional priors.
pub fn degree_logprior_component(d: &[u32]) -> f64 {
    degree_logprior_uniform(d).max(degree_logprior_hyper(d))
}

/// Sum over components of the better prior per component.
pub fn degree_logprior(table: &OrbitDegreeTable) -> f64 {
    table.degrees.iter().map(|d| degree_logprior_component(d)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_probability() {
        assert!((motif_probability(1) - 1.0 / RISSANEN_CONSTANT).abs() < 1e-15);
        assert!(motif_probability(2) < motif_probability(1));
        assert!(motif_probability(1000) < motif_probability(999));
    }

    #[test]
    fn adding_atoms_costs() {
        let u = Arc::new(Universe::new(false, 5));
        let prior = MotifPrior::new(u);
        let base = prior.log_prior_indices([1]);
        let more = prior.log_prior_indices([1, 3]);
        assert!(more < base);
        assert!((more - base - MotifPrior::ln_odds(3)).abs() < 1e-12);
        assert!(prior.log_prior_indices([1, 2]) > prior.log_prior_indices([1, 3]));
    }

    #[test]
    fn lambda_closed_forms() {
        let l = solve_lambda(10.0, &[1]).unwrap();
        assert!((l - (10.0f64 / 9.0).ln()).abs() < 1e-12);
        let l = solve_lambda(2.0, &[1]).unwrap();
        assert!((l - 2f64.ln()).abs() < 1e-12);
        assert!(solve_lambda(4.0, &[1, 3]).is_err());
        assert!(solve_lambda(3.0, &[1, 3]).is_err());
    }

    #[test]
    fn lambda_edge_and_triangle() {
        let l = solve_lambda(100.0, &[1, 3]).unwrap();
        let r: f64 = [1.0f64, 3.0].iter().map(|&e| e / (1.0 - (-l * e).exp())).sum();
        assert!((r - 100.0).abs() < 1e-9 * 100.0);
    }

    #[test]
    fn count_prior_values() {
        let l = 2f64.ln();
        assert!((counts_log_prior(&[(2, 1)], l, CountSupport::Positive) + 2.0 * 2f64.ln()).abs() < 1e-12);
        let zero = counts_log_prior(&[(0, 1), (0, 3)], l, CountSupport::Positive);
        assert!((zero - (ln_expm1(l) + ln_expm1(3.0 * l))).abs() < 1e-12);
        let ratio = counts_log_prior(&[(5, 3)], l, CountSupport::Positive) - counts_log_prior(&[(4, 3)], l, CountSupport::Positive);
        assert!((ratio + 3.0 * l).abs() < 1e-12);
    }

    #[test]
    fn count_prior_normalizes() {
        for support in [CountSupport::Positive, CountSupport::NonNegative] {
            let es = [1usize, 3];
            let l = solve_lambda_with(12.0, &es, support).unwrap();
            let start = if support == CountSupport::Positive { 1 } else { 0 };
            let mut mass = 0.0;
            for a in start..400u64 {
                for b in start..200u64 {
                    mass += counts_log_prior(&[(a, 1), (b, 3)], l, support).exp();
                }
            }
            assert!((mass - 1.0).abs() < 1e-6, "{support:?}: {mass}");
        }
    }

    #[test]
    fn degree_prior_examples() {
        assert!((uniform_log_prior(3, 2) + 6f64.ln()).abs() < 1e-12);
        assert_eq!(uniform_log_prior(1, 9), 0.0);
        assert_eq!(uniform_log_prior(5, 0), 0.0);
        let h = degree_logprior_hyper(&[2, 1, 1]);
        assert!((h - (2f64.ln() - 6f64.ln() - 4f64.ln())).abs() < 1e-12);
        let constant = degree_logprior_hyper(&[3, 3, 3, 3]);
        assert!((constant + partitions::restricted_partitions_log(12, 4)).abs() < 1e-12);
        assert_eq!(degree_logprior_component(&[0, 0, 0]), 0.0);
    }

    #[test]
    fn constant_degrees_prefer_hyper_prior() {
        let d = vec![4u32; 200];
        assert!(degree_logprior_hyper(&d) > degree_logprior_uniform(&d));
        assert_eq!(degree_logprior_component(&d), degree_logprior_hyper(&d));
    }

    #[test]
    fn distinct_degrees_prefer_uniform_prior() {
        // Every partition has at most N! orderings, so with all multiplicities equal
        // to one the histogram prior cannot beat the uniform one.
        let d: Vec<u32> = (0..40).map(|i| 3 * i + 1).collect();
        assert!(degree_logprior_uniform(&d) > degree_logprior_hyper(&d));
        assert_eq!(degree_logprior_component(&d), degree_logprior_uniform(&d));
    }

    proptest! {
        #[test]
        fn lambda_residual(edges in 10.0f64..5000.0, es in proptest::collection::vec(1usize..12, 1..5)) {
            let floor: usize = es.iter().sum();
            prop_assume!(edges > floor as f64 + 1e-6);
            let l = solve_lambda(edges, &es).unwrap();
            let r: f64 = es.iter().map(|&e| e as f64 / (1.0 - (-l * e as f64).exp())).sum();
            prop_assert!((r - edges).abs() < 1e-9 * edges);
            let l2 = solve_lambda(edges * 1.5, &es).unwrap();
            prop_assert!(l2 < l);
        }

        #[test]
        fn degree_prior_permutation_invariant(mut d in proptest::collection::vec(0u32..6, 1..30), seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let before = degree_logprior_component(&d);
            d.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert!((degree_logprior_component(&d) - before).abs() < 1e-9);
        }
    }
}
