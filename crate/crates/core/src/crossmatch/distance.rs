use crate::bits::hamming_words;
use crate::error::{Error, Result};
use crate::rbm::SampleBatch;

/// Pooled pairwise Hamming distances. Indices `0..n_first` are the first
/// sample, the rest the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    size: usize,
    n_first: usize,
    entries: Vec<u32>,
}

impl DistanceMatrix {
    /// Builds from a row-major `size × size` table, checking symmetry and the zero diagonal.
    pub fn from_entries(size: usize, n_first: usize, entries: Vec<u32>) -> Result<Self> {
        Error::check_dim("distance entries", size * size, entries.len())?;
        if n_first > size {
            return Err(Error::invalid("first-group size exceeds matrix size"));
        }
        for i in 0..size {
            if entries[i * size + i] != 0 {
                return Err(Error::invalid(format!("non-zero diagonal at {i}")));
            }
            for j in 0..i {
                if entries[i * size + j] != entries[j * size + i] {
                    return Err(Error::invalid(format!("asymmetric entry ({i}, {j})")));
                }
            }
        }
        Ok(DistanceMatrix { size, n_first, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn n_first(&self) -> usize {
        self.n_first
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.size + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| self.get(i, i) == 0 && (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Hamming distances over the pooled rows of `x` followed by `y`.
pub fn pairwise_distances(x: &SampleBatch, y: &SampleBatch) -> Result<DistanceMatrix> {
    Error::check_dim("sample dimension", x.dim(), y.dim())?;
    Error::check_dim("group size", x.len(), y.len())?;
    let n = x.len();
    let size = 2 * n;
    let row = |k: usize| {
        if k < n {
            x.samples.row_words(k)
        } else {
            y.samples.row_words(k - n)
        }
    };
    let mut entries = vec![0u32; size * size];
    for i in 0..size {
        for j in i + 1..size {
            let d = hamming_words(row(i), row(j));
            entries[i * size + j] = d;
            entries[j * size + i] = d;
        }
    }
    Ok(DistanceMatrix {
        size,
        n_first: n,
        entries,
    })
}
