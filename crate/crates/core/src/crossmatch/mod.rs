//! The Crossmatch two-sample test.
//!
//! The two samples are pooled, matched into pairs by a minimum-total-Hamming
//! perfect matching, and the number of pairs with one point from each sample
//! is compared against its exact null distribution. Few cross pairs means the
//! samples look different, so the p-value is the lower tail.

mod blossom;
mod distance;
mod matching;
mod null;

pub use distance::{pairwise_distances, DistanceMatrix};
pub use matching::{greedy_matching, optimal_matching, Matching, MatchingMethod};
pub use null::{null_cdf, null_mean_p_value, null_pmf, p_value};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rbm::SampleBatch;

/// Pooled sizes up to this use the optimal matching under [`MatchingChoice::Auto`].
pub const AUTO_OPTIMAL_LIMIT: usize = 400;

/// Which matching a test should use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingChoice {
    Optimal,
    Greedy,
    /// Optimal for pooled size ≤ [`AUTO_OPTIMAL_LIMIT`], greedy above.
    #[default]
    Auto,
}

impl MatchingChoice {
    pub fn resolve(self, pooled: usize) -> MatchingMethod {
        match self {
            MatchingChoice::Optimal => MatchingMethod::Optimal,
            MatchingChoice::Greedy => MatchingMethod::Greedy,
            MatchingChoice::Auto if pooled <= AUTO_OPTIMAL_LIMIT => MatchingMethod::Optimal,
            MatchingChoice::Auto => MatchingMethod::Greedy,
        }
    }
}

impl From<MatchingMethod> for MatchingChoice {
    fn from(m: MatchingMethod) -> Self {
        match m {
            MatchingMethod::Optimal => MatchingChoice::Optimal,
            MatchingMethod::Greedy => MatchingChoice::Greedy,
        }
    }
}

impl std::str::FromStr for MatchingChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(MatchingChoice::Auto),
            other => other.parse::<MatchingMethod>().map(Into::into),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossmatchOutcome {
    pub n: usize,
    pub a_obs: usize,
    pub p_value: f64,
    pub method: MatchingMethod,
    /// The closed-form null is exact only for the optimal matching.
    pub null_exact: bool,
}

/// Number of pairs with one index below `n` and one at or above it.
pub fn cross_count(m: &Matching, n: usize) -> Result<usize> {
    m.validate(2 * n)?;
    Ok(m.pairs.iter().filter(|&&(i, j)| (i < n) != (j < n)).count())
}

pub fn crossmatch_test(
    x: &SampleBatch,
    y: &SampleBatch,
    choice: MatchingChoice,
    tie_seed: u64,
) -> Result<CrossmatchOutcome> {
    if x.is_empty() {
        return Err(Error::Empty("sample batch"));
    }
    let d = pairwise_distances(x, y)?;
    let method = choice.resolve(d.size());
    let m = match method {
        MatchingMethod::Optimal => optimal_matching(&d, tie_seed)?,
        MatchingMethod::Greedy => greedy_matching(&d, tie_seed)?,
    };
    let n = x.len();
    let a_obs = cross_count(&m, n)?;
    Ok(CrossmatchOutcome {
        n,
        a_obs,
        p_value: p_value(a_obs, n)?,
        method,
        null_exact: method == MatchingMethod::Optimal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitMatrix;
    use crate::rbm::ChainSettings;

    fn batch(rows: &[Vec<bool>]) -> SampleBatch {
        let mut m = BitMatrix::with_cols(rows[0].len());
        for r in rows {
            m.push_bools(r).unwrap();
        }
        SampleBatch {
            samples: m,
            sampler_id: "fixture".into(),
            seed: 0,
            settings: ChainSettings::default(),
        }
    }

    fn pairs(p: &[(usize, usize)]) -> Matching {
        Matching {
            pairs: p.to_vec(),
            total_cost: 0,
            method: MatchingMethod::Optimal,
        }
    }

    #[test]
    fn cross_count_examples() {
        assert_eq!(cross_count(&pairs(&[(0, 3), (1, 4), (2, 5)]), 3).unwrap(), 3);
        assert_eq!(cross_count(&pairs(&[(0, 1), (2, 3)]), 2).unwrap(), 0);
        assert_eq!(cross_count(&pairs(&[(0, 2), (1, 3)]), 2).unwrap(), 2);
        assert!(cross_count(&pairs(&[(0, 2)]), 2).is_err());
    }

    #[test]
    fn distance_matrix_contract() {
        let x = batch(&[vec![true, false, true], vec![false, false, false]]);
        let d = pairwise_distances(&x, &x).unwrap();
        assert_eq!(d.size(), 4);
        assert_eq!(d.get(0, 2), 0);
        assert_eq!(d.get(1, 3), 0);
        assert_eq!(d.get(0, 1), 2);
        assert!(d.is_symmetric());

        let x1 = batch(&[vec![true, true, false]]);
        let y1 = batch(&[vec![false, true, true]]);
        let d = pairwise_distances(&x1, &y1).unwrap();
        assert_eq!((d.size(), d.get(0, 1), d.get(1, 0)), (2, 2, 2));

        let short = batch(&[vec![true, true]]);
        assert!(pairwise_distances(&x1, &short).is_err());
        assert!(pairwise_distances(&x, &x1).is_err());
    }

    #[test]
    fn separated_clusters_give_zero_cross_pairs() {
        let x = batch(&vec![vec![false; 16]; 10]);
        let y = batch(&vec![vec![true; 16]; 10]);
        let out = crossmatch_test(&x, &y, MatchingChoice::Optimal, 3).unwrap();
        assert_eq!(out.a_obs, 0);
        assert!((out.p_value - null_pmf(10)[0]).abs() < 1e-15);
        assert!((out.p_value - 1.364e-3).abs() < 1e-6);
        assert!(out.null_exact);
    }

    #[test]
    fn single_pair_always_crosses() {
        let x = batch(&[vec![true, false]]);
        let y = batch(&[vec![false, false]]);
        let out = crossmatch_test(&x, &y, MatchingChoice::Auto, 0).unwrap();
        assert_eq!((out.a_obs, out.p_value), (1, 1.0));
    }

    #[test]
    fn auto_resolution() {
        assert_eq!(MatchingChoice::Auto.resolve(400), MatchingMethod::Optimal);
        assert_eq!(MatchingChoice::Auto.resolve(402), MatchingMethod::Greedy);
        assert_eq!("greedy".parse::<MatchingChoice>().unwrap(), MatchingChoice::Greedy);
        assert!("bogus".parse::<MatchingChoice>().is_err());
    }
}
