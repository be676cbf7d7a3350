//! Dense matrices over GF(2) with rows packed into 64-bit words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::pauli::words_for;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = words_for(cols).max(1);
        Self {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from 0/1 rows. All rows must share a length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return invalid(format!("row {r} has {} entries, expected {cols}", row.len()));
            }
            for (c, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(r, c, true),
                    other => return invalid(format!("entry ({r},{c}) = {other} is not a bit")),
                }
            }
        }
        Ok(m)
    }

    pub fn from_bool_rows(rows: &[Vec<bool>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &b) in row.iter().enumerate() {
                m.set(r, c, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let i = r * self.words + c / 64;
        let m = 1u64 << (c % 64);
        if v {
            self.bits[i] |= m;
        } else {
            self.bits[i] &= !m;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    /// Column indices holding a 1 in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn column(&self, c: usize) -> Vec<bool> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) as u8).collect())
            .collect()
    }

    fn xor_row_into(&mut self, dst: usize, src: usize) {
        for w in 0..self.words {
            let v = self.bits[src * self.words + w];
            self.bits[dst * self.words + w] ^= v;
        }
    }

    /// `M · v` over GF(2).
    pub fn mul_vec(&self, v: &[bool]) -> Result<Vec<bool>> {
        if v.len() != self.cols {
            return invalid(format!("vector length {} does not match {} columns", v.len(), self.cols));
        }
        let mut packed = vec![0u64; self.words];
        for (c, &b) in v.iter().enumerate() {
            if b {
                packed[c / 64] |= 1 << (c % 64);
            }
        }
        Ok(self.mul_packed(&packed))
    }

    pub(crate) fn mul_packed(&self, packed: &[u64]) -> Vec<bool> {
        (0..self.rows)
            .map(|r| {
                self.row_words(r)
                    .iter()
                    .zip(packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    & 1
                    == 1
            })
            .collect()
    }

    /// `self · otherᵀ`.
    pub fn mul_transpose(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.cols {
            return invalid(format!("column mismatch ({} vs {})", self.cols, other.cols));
        }
        let mut out = BinaryMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                let parity = self
                    .row_words(i)
                    .iter()
                    .zip(other.row_words(j))
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>();
                out.set(i, j, parity & 1 == 1);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (BinaryMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            if p != r {
                for w in 0..m.words {
                    m.bits.swap(p * m.words + w, r * m.words + w);
                }
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row_into(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<bool>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![false; self.cols];
                v[f] = true;
                for (r, &p) in pivots.iter().enumerate() {
                    if m.get(r, f) {
                        v[p] = true;
                    }
                }
                v
            })
            .collect()
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[bool]) -> bool {
        let mut stacked = self.to_bool_rows();
        stacked.push(v.to_vec());
        BinaryMatrix::from_bool_rows(&stacked, self.cols).rank() == self.rank()
    }

    pub fn to_bool_rows(&self) -> Vec<Vec<bool>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

impl Serialize for BinaryMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<u8>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, |r| r.len());
        BinaryMatrix::from_rows(&rows, cols).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hamming() -> BinaryMatrix {
        BinaryMatrix::from_rows(
            &[
                [0u8, 0, 0, 1, 1, 1, 1],
                [0, 1, 1, 0, 0, 1, 1],
                [1, 0, 1, 0, 1, 0, 1],
            ],
            7,
        )
        .unwrap()
    }

    #[test]
    fn hamming_rank_and_kernel() {
        let h = hamming();
        assert_eq!(h.rank(), 3);
        let ker = h.kernel();
        assert_eq!(ker.len(), 4);
        for v in &ker {
            assert!(h.mul_vec(v).unwrap().iter().all(|b| !b));
        }
    }

    #[test]
    fn self_orthogonal() {
        let h = hamming();
        assert!(h.mul_transpose(&h).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_bits_and_ragged_rows() {
        assert!(BinaryMatrix::from_rows(&[vec![0u8, 2]], 2).is_err());
        assert!(BinaryMatrix::from_rows(&[vec![0u8, 1, 1]], 2).is_err());
    }

    #[test]
    fn row_space_membership() {
        let h = hamming();
        let sum: Vec<bool> = h.row(0).iter().zip(h.row(1)).map(|(a, b)| a ^ b).collect();
        assert!(h.row_space_contains(&sum));
        assert!(!h.row_space_contains(&[true; 7]));
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in proptest::collection::vec(proptest::collection::vec(0u8..2, 9), 1..7)) {
            let m = BinaryMatrix::from_rows(&rows, 9).unwrap();
            let ker = m.kernel();
            prop_assert_eq!(m.rank() + ker.len(), 9);
            for v in &ker {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|b| !b));
            }
        }
    }
}
