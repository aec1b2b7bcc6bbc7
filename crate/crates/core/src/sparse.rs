//! Minimal coordinate-format sparse matrix used during operator assembly.
//!
//! Assembly accumulates duplicate entries; `to_dense` sums them. Only the
//! handful of operations the thermal assembly needs are provided.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct CooMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl CooMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Accumulates `v` at `(i, j)`.
    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.nrows && j < self.ncols);
        if v != 0.0 {
            self.entries.push((i, j, v));
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = DVector::zeros(self.nrows);
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulates_duplicates() {
        let mut c = CooMatrix::new(2, 2);
        c.push(0, 1, 1.5);
        c.push(0, 1, 0.5);
        c.push(1, 0, -1.0);
        let d = c.to_dense();
        assert_eq!(d[(0, 1)], 2.0);
        assert_eq!(d[(1, 0)], -1.0);
        assert_eq!(d[(0, 0)], 0.0);
    }

    #[test]
    fn matvec_matches_dense() {
        let mut c = CooMatrix::new(3, 3);
        c.push(0, 0, 2.0);
        c.push(1, 2, -1.0);
        c.push(2, 1, 4.0);
        let x = DVector::from_row_slice(&[1.0, 2.0, 3.0]);
        assert_eq!(c.mul_vec(&x), c.to_dense() * x);
    }
}
