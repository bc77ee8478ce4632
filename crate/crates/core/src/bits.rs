//! Bit-packed binary row storage.

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A single binary vector packed 64 bits per word. Bits past `len` are zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut row = BitRow::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                row.set(i, true);
            }
        }
        row
    }

    /// Parse a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        let mut row = BitRow::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => row.set(i, true),
                _ => return None,
            }
        }
        Some(row)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Hamming distance via XOR and popcount.
    pub fn hamming(&self, other: &BitRow) -> Result<u32> {
        Error::check_dim("bit row length", self.len, other.len)?;
        Ok(hamming_words(&self.words, &other.words))
    }
}

impl std::fmt::Display for BitRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub(crate) fn hamming_words(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// `rows × cols` binary matrix, each row packed into its own run of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn with_cols(cols: usize) -> Self {
        BitMatrix::zeros(0, cols)
    }

    pub fn from_rows(cols: usize, rows: &[BitRow]) -> Result<Self> {
        let mut m = BitMatrix::with_cols(cols);
        for row in rows {
            m.push_row(row)?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn push_row(&mut self, row: &BitRow) -> Result<()> {
        Error::check_dim("row length", self.cols, row.len())?;
        self.words.extend_from_slice(row.words());
        self.rows += 1;
        Ok(())
    }

    pub fn push_bools(&mut self, bits: &[bool]) -> Result<()> {
        Error::check_dim("row length", self.cols, bits.len())?;
        let start = self.words.len();
        self.words.resize(start + self.stride, 0);
        for (i, &b) in bits.iter().enumerate() {
            if b {
                self.words[start + i / WORD] |= 1u64 << (i % WORD);
            }
        }
        self.rows += 1;
        Ok(())
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitRow {
        BitRow {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(c < self.cols);
        (self.row_words(r)[c / WORD] >> (c % WORD)) & 1 == 1
    }

    pub fn row_bools(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = BitRow> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    /// Per-column fraction of ones.
    pub fn column_means(&self) -> Vec<f64> {
        let mut counts = vec![0usize; self.cols];
        for r in 0..self.rows {
            for (c, count) in counts.iter_mut().enumerate() {
                if self.get(r, c) {
                    *count += 1;
                }
            }
        }
        counts.into_iter().map(|k| k as f64 / self.rows.max(1) as f64).collect()
    }

    /// Rows reordered by `perm` (row `i` of the result is row `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::with_cols(self.cols);
        for &p in perm {
            out.words.extend_from_slice(self.row_words(p));
            out.rows += 1;
        }
        out
    }
}
