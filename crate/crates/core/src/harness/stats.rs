use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HISTOGRAM_BINS: usize = 20;

/// Summary of a set of p-values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PValueStats {
    pub p_values: Vec<f64>,
    pub mean_p: f64,
    /// Counts in `[0, 0.05), [0.05, 0.10), …, [0.95, 1.0]`.
    pub histogram: Vec<u64>,
    /// Two-sided sup distance between the empirical CDF and Uniform[0,1].
    pub ks_vs_uniform: f64,
    /// `sup_t (F_emp(t) − t)`: how far the empirical CDF rises above the uniform one.
    pub max_excess_over_uniform: f64,
}

pub fn pvalue_stats(p_values: &[f64]) -> Result<PValueStats> {
    if p_values.is_empty() {
        return Err(Error::Empty("p-values"));
    }
    if p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::invalid("p-values must lie in [0, 1]"));
    }
    let n = p_values.len() as f64;
    let mean_p = p_values.iter().sum::<f64>() / n;

    let mut histogram = vec![0u64; HISTOGRAM_BINS];
    for &p in p_values {
        let bin = ((p * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
        histogram[bin] += 1;
    }

    let mut sorted = p_values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (mut above, mut below) = (0.0f64, 0.0f64);
    for (i, &p) in sorted.iter().enumerate() {
        above = above.max((i + 1) as f64 / n - p);
        below = below.max(p - i as f64 / n);
    }

    Ok(PValueStats {
        p_values: p_values.to_vec(),
        mean_p,
        histogram,
        ks_vs_uniform: above.max(below),
        max_excess_over_uniform: above.max(0.0),
    })
}
