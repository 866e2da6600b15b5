//! Sparse integer matrices with arbitrary-precision entries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A sparse matrix over the integers. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sets an entry, dropping it from storage when the value is zero.
    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    /// Adds `value` to the entry at (row, col).
    pub fn add_to(&mut self, row: usize, col: usize, value: &BigInt) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        if value.is_zero() {
            return;
        }
        let e = self.entries.entry((row, col)).or_insert_with(BigInt::zero);
        *e += value;
        if e.is_zero() {
            self.entries.remove(&(row, col));
        }
    }

    pub fn get(&self, row: usize, col: usize) -> BigInt {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            t.set(c, r, v.clone());
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        // Group the right factor by row for the sparse product.
        let mut right_rows: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in other.iter() {
            right_rows[r].push((c, v));
        }
        let mut out = Self::zero(self.rows, other.cols);
        for (r, k, v) in self.iter() {
            for &(c, w) in &right_rows[k] {
                out.add_to(r, c, &(v * w));
            }
        }
        out
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, vec: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(vec.len(), self.cols, "dimension mismatch");
        let mut out = vec![BigInt::zero(); self.rows];
        for (r, c, v) in self.iter() {
            if !vec[c].is_zero() {
                out[r] += v * &vec[c];
            }
        }
        out
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (r, c, v) in self.iter() {
            out.set(r, c, v * factor);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (r, c, v) in other.iter() {
            out.add_to(r, c, v);
        }
        out
    }

    pub fn column(&self, col: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rows];
        for (r, c, val) in self.iter() {
            if c == col {
                v[r] = val.clone();
            }
        }
        v
    }

    /// Builds a matrix from dense columns.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zero(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut m = Self::zero(self.rows, self.cols + other.cols);
        for (r, c, v) in self.iter() {
            m.set(r, c, v.clone());
        }
        for (r, c, v) in other.iter() {
            m.set(r, c + self.cols, v.clone());
        }
        m
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column count mismatch");
        let mut m = Self::zero(self.rows + other.rows, self.cols);
        for (r, c, v) in self.iter() {
            m.set(r, c, v.clone());
        }
        for (r, c, v) in other.iter() {
            m.set(r + self.rows, c, v.clone());
        }
        m
    }

    /// Copies `block` into `self` with its top-left corner at (row, col).
    pub fn paste(&mut self, row: usize, col: usize, block: &Self) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for (r, c, v) in block.iter() {
            self.set(row + r, col + c, v.clone());
        }
    }

    /// Coordinate-list text export: a `rows cols nnz` header followed by one
    /// `row col value` line per stored entry, in row-major order.
    pub fn to_coordinate_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {}", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.iter() {
            let _ = writeln!(s, "{} {} {}", r, c, v);
        }
        s
    }

    /// True when all entries have absolute value one or zero.
    pub fn entries_are_units(&self) -> bool {
        self.iter().all(|(_, _, v)| v.abs().is_one())
    }
}
