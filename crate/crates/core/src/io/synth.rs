//! Small synthetic binary datasets for desk-scale experiments.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthKind {
    /// All-zeros or all-ones prototype, chosen with equal probability.
    TwoCluster,
    /// Either the first or the second half of the bits set.
    Bars,
}

impl std::str::FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-cluster" => Ok(SynthKind::TwoCluster),
            "bars" => Ok(SynthKind::Bars),
            other => Err(Error::invalid(format!("unknown dataset kind '{other}'"))),
        }
    }
}

/// `count` rows of length `r`: a random prototype with each bit flipped with probability `noise`.
pub fn synth_dataset(kind: SynthKind, r: usize, count: usize, noise: f64, seed: u64) -> Result<BitMatrix> {
    if r < 4 {
        return Err(Error::invalid(format!("synthetic rows need at least 4 bits, got {r}")));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::invalid(format!(
            "flip probability must be in [0, 1], got {noise}"
        )));
    }
    let mut rng = rng::substream(seed, &[kind as u64]);
    let mut out = BitMatrix::with_cols(r);
    let mut row = vec![false; r];
    for _ in 0..count {
        let which: bool = rng.random();
        for (i, b) in row.iter_mut().enumerate() {
            let proto = match kind {
                SynthKind::TwoCluster => which,
                SynthKind::Bars => (i < r / 2) == which,
            };
            *b = proto ^ (rng.random::<f64>() < noise);
        }
        out.push_bools(&row)?;
    }
    Ok(out)
}
