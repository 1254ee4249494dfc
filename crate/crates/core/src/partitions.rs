//! Restricted partition counts `q(m, n)`: partitions of `m` into at most `n` parts.

use crate::math::{ln_binomial, ln_factorial};
use polylog::Li2;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Below this `m` the count is computed exactly.
pub const DEFAULT_THRESHOLD: u64 = 10_000;

/// `ln q(m, n)` using the default threshold.
pub fn restricted_partitions_log(m: u64, n: u64) -> f64 {
    restricted_partitions_log_with(m, n, DEFAULT_THRESHOLD)
}

pub fn restricted_partitions_log_with(m: u64, n: u64, threshold: u64) -> f64 {
    if m < threshold {
        exact_log(m, n, threshold)
    } else {
        asymptotic_log(m, n)
    }
}

/// Exact `ln q(m, n)` for `m < threshold`, from a table cached per `(threshold, n)`.
pub fn exact_log(m: u64, n: u64, threshold: u64) -> f64 {
    assert!(m < threshold, "exact table only covers m below the threshold");
    if m == 0 {
        return 0.0;
    }
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    table(threshold, n.min(threshold))[m as usize].ln()
}

type Tables = Mutex<HashMap<(u64, u64), Arc<Vec<f64>>>>;

/// `q(j, k)` for all `j < threshold`, built with `q_k(j) = q_{k-1}(j) + q_k(j - k)`.
fn table(threshold: u64, k: u64) -> Arc<Vec<f64>> {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    let tables = TABLES.get_or_init(Default::default);
    if let Some(t) = tables.lock().unwrap().get(&(threshold, k)) {
        return t.clone();
    }
    let len = threshold as usize;
    let mut q = vec![0.0f64; len];
    q[0] = 1.0;
    for part in 1..=(k as usize).min(len.saturating_sub(1)) {
        for j in part..len {
            q[j] += q[j - part];
        }
    }
    let t = Arc::new(q);
    tables.lock().unwrap().insert((threshold, k), t.clone());
    t
}

/// Asymptotic `ln q(m, n)`: a binomial estimate when `n < m^{1/4}`, otherwise
/// Szekeres' uniform formula with `u = n / sqrt(m)` and `v` solving
/// `v = u sqrt(Li2(1 - e^{-v}))`.
pub fn asymptotic_log(m: u64, n: u64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    let n = n.min(m);
    let mf = m as f64;
    if (n as f64) < mf.powf(0.25) {
        return ln_binomial(m - 1, n - 1) - ln_factorial(n);
    }
    let u = n as f64 / mf.sqrt();
    let v = solve_v(u);
    let em = (-v).exp();
    let ln_f = v.ln() - 0.5 * (-em * (1.0 + u * u / 2.0)).ln_1p() - 1.5 * 2f64.ln() - u.ln() - PI.ln();
    let g = 2.0 * v / u - u * (-em).ln_1p();
    ln_f - mf.ln() + mf.sqrt() * g
}

fn solve_v(u: f64) -> f64 {
    let mut v = (u * u).min(u * PI / 6f64.sqrt());
    for _ in 0..10_000 {
        let next = u * (1.0 - (-v).exp()).li2().sqrt();
        if (next - v).abs() <= 1e-15 * v {
            return next;
        }
        v = next;
    }
    v
}
