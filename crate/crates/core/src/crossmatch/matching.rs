use rand::Rng;
use serde::{Deserialize, Serialize};

use super::blossom::min_weight_perfect_matching;
use super::DistanceMatrix;
use crate::error::{Error, Result};
use crate::rng;

/// Resolution of one unit of distance in the tie-broken integer costs.
const COST_SCALE: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingMethod {
    Optimal,
    Greedy,
}

impl std::fmt::Display for MatchingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MatchingMethod::Optimal => "optimal",
            MatchingMethod::Greedy => "greedy",
        })
    }
}

impl std::str::FromStr for MatchingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" => Ok(MatchingMethod::Optimal),
            "greedy" => Ok(MatchingMethod::Greedy),
            other => Err(Error::invalid(format!("unknown matching method '{other}'"))),
        }
    }
}

/// A perfect matching of the pooled sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// `(i, j)` with `i < j`, sorted by `i`.
    pub pairs: Vec<(usize, usize)>,
    /// Sum of the untouched distances over the pairs.
    pub total_cost: u64,
    pub method: MatchingMethod,
}

impl Matching {
    fn from_mates(mate: &[usize], d: &DistanceMatrix, method: MatchingMethod) -> Self {
        let pairs: Vec<(usize, usize)> = (0..mate.len()).filter(|&i| i < mate[i]).map(|i| (i, mate[i])).collect();
        let total_cost = pairs.iter().map(|&(i, j)| d.get(i, j) as u64).sum();
        Matching {
            pairs,
            total_cost,
            method,
        }
    }

    /// Checks that every index in `0..size` is covered exactly once.
    pub fn validate(&self, size: usize) -> Result<()> {
        let mut seen = vec![false; size];
        for &(i, j) in &self.pairs {
            if i == j || i >= size || j >= size {
                return Err(Error::InvalidMatching(format!("bad pair ({i}, {j}) for size {size}")));
            }
            for k in [i, j] {
                if std::mem::replace(&mut seen[k], true) {
                    return Err(Error::InvalidMatching(format!("index {k} matched twice")));
                }
            }
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidMatching(format!("index {k} unmatched")));
        }
        Ok(())
    }
}

/// Integer costs `d · 2^20 + jitter` with seeded jitter per unordered pair.
///
/// Jitter lies in `[0, 2^20 / (size/2))`, so the jitter summed over any perfect
/// matching stays below one distance unit: matchings with different integer
/// totals keep their order and the jitter only picks among equal totals.
pub(crate) fn tie_broken_costs(d: &DistanceMatrix, tie_seed: u64) -> Vec<i64> {
    let size = d.size();
    let pairs = (size / 2).max(1) as i64;
    let span = (COST_SCALE / pairs).max(1);
    let mut rng = rng::substream(tie_seed, &[size as u64]);
    let mut c = vec![0i64; size * size];
    for i in 0..size {
        for j in i + 1..size {
            let x = d.get(i, j) as i64 * COST_SCALE + rng.random_range(0..span);
            c[i * size + j] = x;
            c[j * size + i] = x;
        }
    }
    c
}

fn check_even(d: &DistanceMatrix) -> Result<()> {
    if d.size() % 2 == 1 {
        return Err(Error::invalid(format!(
            "perfect matching needs an even number of points, got {}",
            d.size()
        )));
    }
    Ok(())
}

/// Minimum-total-distance perfect matching (blossom algorithm).
pub fn optimal_matching(d: &DistanceMatrix, tie_seed: u64) -> Result<Matching> {
    check_even(d)?;
    let size = d.size();
    let c = tie_broken_costs(d, tie_seed);
    let mate = min_weight_perfect_matching(size, |i, j| c[i * size + j]);
    Ok(Matching::from_mates(&mate, d, MatchingMethod::Optimal))
}

/// Repeatedly pairs the globally closest unmatched points.
pub fn greedy_matching(d: &DistanceMatrix, tie_seed: u64) -> Result<Matching> {
    check_even(d)?;
    let size = d.size();
    let c = tie_broken_costs(d, tie_seed);
    let mut edges: Vec<(i64, usize, usize)> = Vec::with_capacity(size * size.saturating_sub(1) / 2);
    for i in 0..size {
        for j in i + 1..size {
            edges.push((c[i * size + j], i, j));
        }
    }
    edges.sort_unstable();
    let mut mate = vec![usize::MAX; size];
    let mut left = size / 2;
    for (_, i, j) in edges {
        if left == 0 {
            break;
        }
        if mate[i] == usize::MAX && mate[j] == usize::MAX {
            mate[i] = j;
            mate[j] = i;
            left -= 1;
        }
    }
    Ok(Matching::from_mates(&mate, d, MatchingMethod::Greedy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[u32]]) -> DistanceMatrix {
        DistanceMatrix::from_entries(rows.len(), rows.len() / 2, rows.concat()).unwrap()
    }

    fn random_matrix(size: usize, max: u32, seed: u64) -> DistanceMatrix {
        let mut rng = rng::stream(seed);
        let mut e = vec![0u32; size * size];
        for i in 0..size {
            for j in i + 1..size {
                let x = rng.random_range(0..=max);
                e[i * size + j] = x;
                e[j * size + i] = x;
            }
        }
        DistanceMatrix::from_entries(size, size / 2, e).unwrap()
    }

    fn brute_force_min(d: &DistanceMatrix) -> u64 {
        fn rec(free: &mut Vec<usize>, d: &DistanceMatrix) -> u64 {
            if free.is_empty() {
                return 0;
            }
            let a = free.remove(0);
            let mut best = u64::MAX;
            for k in 0..free.len() {
                let b = free.remove(k);
                best = best.min(d.get(a, b) as u64 + rec(free, d));
                free.insert(k, b);
            }
            free.insert(0, a);
            best
        }
        rec(&mut (0..d.size()).collect(), d)
    }

    /// Second greedy implementation: scan for the cheapest open pair each round.
    fn greedy_oracle(d: &DistanceMatrix, tie_seed: u64) -> Vec<(usize, usize)> {
        let size = d.size();
        let c = tie_broken_costs(d, tie_seed);
        let mut open: Vec<bool> = vec![true; size];
        let mut pairs = Vec::new();
        for _ in 0..size / 2 {
            let mut best: Option<(i64, usize, usize)> = None;
            for i in 0..size {
                for j in i + 1..size {
                    if open[i] && open[j] {
                        let cand = (c[i * size + j], i, j);
                        if best.is_none_or(|b| cand < b) {
                            best = Some(cand);
                        }
                    }
                }
            }
            let (_, i, j) = best.unwrap();
            open[i] = false;
            open[j] = false;
            pairs.push((i, j));
        }
        pairs.sort();
        pairs
    }

    #[test]
    fn picks_the_jointly_cheapest_pairing() {
        let d = matrix(&[&[0, 1, 9, 9], &[1, 0, 9, 9], &[9, 9, 0, 2], &[9, 9, 2, 0]]);
        for seed in 0..10 {
            let m = optimal_matching(&d, seed).unwrap();
            assert_eq!(m.pairs, vec![(0, 1), (2, 3)]);
            assert_eq!(m.total_cost, 3);
        }
    }

    #[test]
    fn optimal_equals_brute_force() {
        for seed in 0..200 {
            let size = 2 * (1 + seed as usize % 5);
            let d = random_matrix(size, 6, seed);
            let m = optimal_matching(&d, seed ^ 0xabc).unwrap();
            m.validate(size).unwrap();
            assert_eq!(m.total_cost, brute_force_min(&d), "seed {seed}");
        }
    }

    #[test]
    fn all_equal_distances() {
        let size = 12;
        let mut e = vec![3u32; size * size];
        (0..size).for_each(|i| e[i * size + i] = 0);
        let d = DistanceMatrix::from_entries(size, 6, e).unwrap();
        let m = optimal_matching(&d, 1).unwrap();
        m.validate(size).unwrap();
        assert_eq!(m.total_cost, 18);
        // Different seeds choose among the tied matchings.
        let distinct: std::collections::HashSet<_> = (0..20).map(|s| optimal_matching(&d, s).unwrap().pairs).collect();
        assert!(distinct.len() > 1);
    }

    #[test]
    fn greedy_is_dominated_and_agrees_on_clusters() {
        for seed in 0..100 {
            let size = 2 * (1 + seed as usize % 5);
            let d = random_matrix(size, 10, seed);
            let g = greedy_matching(&d, seed).unwrap();
            g.validate(size).unwrap();
            assert!(g.total_cost >= optimal_matching(&d, seed).unwrap().total_cost);
            assert_eq!(g.pairs, greedy_oracle(&d, seed));
        }
        // Two far-apart tight pairs: greedy is optimal.
        let d = matrix(&[&[0, 1, 50, 51], &[1, 0, 52, 50], &[50, 52, 0, 1], &[51, 50, 1, 0]]);
        assert_eq!(
            greedy_matching(&d, 0).unwrap().total_cost,
            optimal_matching(&d, 0).unwrap().total_cost
        );
    }

    #[test]
    fn deterministic_in_tie_seed() {
        let d = random_matrix(30, 3, 9);
        assert_eq!(optimal_matching(&d, 4).unwrap(), optimal_matching(&d, 4).unwrap());
        assert_eq!(greedy_matching(&d, 4).unwrap(), greedy_matching(&d, 4).unwrap());
    }

    #[test]
    fn odd_size_rejected() {
        let d = DistanceMatrix::from_entries(3, 1, vec![0, 1, 1, 1, 0, 1, 1, 1, 0]).unwrap();
        assert!(optimal_matching(&d, 0).is_err());
        assert!(greedy_matching(&d, 0).is_err());
    }

    #[test]
    fn jitter_never_reorders_integer_totals() {
        // The jitter budget over a full matching is below one distance unit.
        for size in [2usize, 10, 100, 400] {
            let d = random_matrix(size, 0, 1);
            let c = tie_broken_costs(&d, 3);
            let max = c.iter().copied().max().unwrap();
            assert!(max * (size as i64 / 2) < COST_SCALE);
        }
    }

    #[test]
    fn validate_catches_bad_matchings() {
        let ok = Matching {
            pairs: vec![(0, 2), (1, 3)],
            total_cost: 0,
            method: MatchingMethod::Optimal,
        };
        assert!(ok.validate(4).is_ok());
        let dup = Matching {
            pairs: vec![(0, 2), (2, 3)],
            ..ok.clone()
        };
        assert!(dup.validate(4).is_err());
        assert!(ok.validate(6).is_err());
    }
}
