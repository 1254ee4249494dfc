//! Log-space combinatorics shared by the likelihoods and priors.

use statrs::function::gamma::ln_gamma;

/// `ln n!`.
pub fn ln_factorial(n: u64) -> f64 {
    const EXACT: usize = 21;
    static SMALL: std::sync::OnceLock<[f64; EXACT]> = std::sync::OnceLock::new();
    let table = SMALL.get_or_init(|| {
        let mut t = [0.0; EXACT];
        let mut f = 1.0f64;
        for (i, slot) in t.iter_mut().enumerate().skip(1) {
            f *= i as f64;
            *slot = f.ln();
        }
        t
    });
    if (n as usize) < EXACT {
        table[n as usize]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln C(n, k)` for integer arguments; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    ln_falling(n as f64, (n as f64).ln(), k) - ln_factorial(k)
}

/// `ln [h (h-1) ... (h-k+1)]` for a (possibly huge) count `h` whose logarithm is
/// supplied separately so that values beyond 2^53 keep full precision.
pub fn ln_falling(h: f64, ln_h: f64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let kf = k as f64;
    if kf > h + 0.5 {
        return f64::NEG_INFINITY;
    }
    if kf / h < 0.01 {
        // k ln h + sum_j ln(1 - j/h), expanded in powers of 1/h.
        let m = kf - 1.0;
        let s = faulhaber(m);
        let mut corr = 0.0;
        let mut hp = 1.0;
        for (p, sp) in s.iter().enumerate() {
            hp *= h;
            corr -= sp / ((p + 1) as f64 * hp);
        }
        kf * ln_h + corr
    } else {
        ln_gamma(h + 1.0) - ln_gamma(h - kf + 1.0)
    }
}

/// `sum_{j=0}^{m} j^p` for p = 1..=6.
fn faulhaber(m: f64) -> [f64; 6] {
    let m1 = m + 1.0;
    let s1 = m * m1 / 2.0;
    let s2 = m * m1 * (2.0 * m + 1.0) / 6.0;
    let s3 = s1 * s1;
    let s4 = m * m1 * (2.0 * m + 1.0) * (3.0 * m * m + 3.0 * m - 1.0) / 30.0;
    let s5 = m * m * m1 * m1 * (2.0 * m * m + 2.0 * m - 1.0) / 12.0;
    let s6 = m * m1 * (2.0 * m + 1.0) * (3.0 * m.powi(4) + 6.0 * m.powi(3) - 3.0 * m + 1.0) / 42.0;
    [s1, s2, s3, s4, s5, s6]
}

/// `ln (e^x - 1)` for `x > 0`.
pub fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// Rissanen's iterated logarithm: `log2 x + log2 log2 x + ...`, positive terms only.
pub fn log2_star(x: f64) -> f64 {
    let mut total = 0.0;
    let mut t = x.log2();
    while t > 0.0 {
        total += t;
        t = t.log2();
    }
    total
}
