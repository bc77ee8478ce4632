//! Exact null distribution of the cross-match count.
//!
//! With `n` points per group, `2n` pooled points and a matching chosen without
//! reference to the labels, the number of cross pairs `A` satisfies
//!
//! ```text
//! P(A = a) = 2^a n! / ( C(2n, n) · ((n − a)/2)!² · a! ),   n − a even.
//! ```

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// `f(0..=n)`, evaluated in log space.
pub fn null_pmf(n: usize) -> Vec<f64> {
    if n == 0 {
        return vec![1.0];
    }
    let lf = |k: usize| ln_factorial(k as u64);
    let ln_binom = lf(2 * n) - 2.0 * lf(n);
    (0..=n)
        .map(|a| {
            if (n - a) % 2 == 1 {
                return 0.0;
            }
            let half = (n - a) / 2;
            let log_f = a as f64 * std::f64::consts::LN_2 + lf(n) - ln_binom - 2.0 * lf(half) - lf(a);
            log_f.exp()
        })
        .collect()
}

/// `F(a_obs) = P(A ≤ a_obs)`, the lower-tail p-value.
pub fn p_value(a_obs: usize, n: usize) -> Result<f64> {
    if a_obs > n {
        return Err(Error::invalid(format!("cross count {a_obs} exceeds group size {n}")));
    }
    if a_obs == n {
        return Ok(1.0);
    }
    Ok(null_pmf(n)[..=a_obs].iter().sum::<f64>().min(1.0))
}

/// All lower-tail p-values `F(0..=n)` at once.
pub fn null_cdf(n: usize) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = null_pmf(n)
        .into_iter()
        .map(|f| {
            acc += f;
            acc.min(1.0)
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

/// Expected p-value under the null: `(1 + Σ f(a)²) / 2`.
pub fn null_mean_p_value(n: usize) -> f64 {
    (1.0 + null_pmf(n).iter().map(|f| f * f).sum::<f64>()) / 2.0
}
