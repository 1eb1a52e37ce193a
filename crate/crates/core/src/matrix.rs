//! Sparse matrices over the exact scalar field, with float norms at the end.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;

use crate::json::scalar_to_json;
use crate::scalars::RadScalar;

/// Row-major sparse matrix; zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, RadScalar>>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                writeln!(f, "  ({i},{j}) = {v}")?;
            }
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RadScalar::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> RadScalar {
        self.data[i].get(&j).cloned().unwrap_or_else(RadScalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: RadScalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &RadScalar) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[i];
        let nv = match row.get(&j) {
            Some(x) => x + v,
            None => v.clone(),
        };
        if nv.is_zero() {
            row.remove(&j);
        } else {
            row.insert(j, nv);
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RadScalar)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, RadScalar> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &o.data[*k] {
                    *acc.entry(*j).or_insert_with(RadScalar::zero) += a * b;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        out
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch in sum");
        let mut out = self.clone();
        for (i, j, v) in o.entries() {
            out.add_at(i, j, v);
        }
        out
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        self.add(&o.scale(&RadScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &RadScalar) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols);
        if c.is_zero() {
            return out;
        }
        for (i, j, v) in self.entries() {
            out.set(i, j, v * c);
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            out.set(j, i, v.conj());
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`, adding to existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for (i, j, v) in block.entries() {
            self.add_at(r0 + i, c0 + j, v);
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for (j, v) in self.data[r0 + i].range(c0..c0 + cols) {
                out.set(i, j - c0, v.clone());
            }
        }
        out
    }

    /// `A ⊗ B` with index `i·rows(B) + k`.
    pub fn kron(&self, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * b.rows, self.cols * b.cols);
        for (i, j, v) in self.entries() {
            for (k, l, w) in b.entries() {
                out.set(i * b.rows + k, j * b.cols + l, v * w);
            }
        }
        out
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(self.rows, self.cols, Complex64::new(0.0, 0.0));
        for (i, j, v) in self.entries() {
            m[(i, j)] = v.to_complex();
        }
        m
    }

    /// Operator 2-norm from the largest eigenvalue of `A†A`.
    pub fn op_norm(&self) -> f64 {
        op_norm(&self.to_complex())
    }

    /// Largest entrywise modulus of `self − o`.
    pub fn max_abs_diff(&self, o: &Matrix) -> f64 {
        self.sub(o).entries().map(|(_, _, v)| v.to_complex().norm()).fold(0.0, f64::max)
    }

    /// Exact rank when every entry is a Gaussian rational.
    pub fn rank_exact(&self) -> Option<usize> {
        if self.entries().any(|(_, _, v)| v.as_gauss().is_none()) {
            return None;
        }
        let mut rows: Vec<BTreeMap<usize, RadScalar>> =
            self.data.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut rank = 0;
        while let Some(pos) = rows.iter().position(|r| !r.is_empty()) {
            let pivot_row = rows.swap_remove(pos);
            let (&pc, pv) = pivot_row.iter().next().expect("nonempty row");
            let inv = pv.inv_single().expect("Gaussian pivot is invertible");
            let pivot_row: BTreeMap<usize, RadScalar> = pivot_row.iter().map(|(j, v)| (*j, v * &inv)).collect();
            for r in rows.iter_mut() {
                if let Some(f) = r.get(&pc).cloned() {
                    for (j, v) in &pivot_row {
                        let nv = r.get(j).cloned().unwrap_or_else(RadScalar::zero) - &f * v;
                        if nv.is_zero() {
                            r.remove(j);
                        } else {
                            r.insert(*j, nv);
                        }
                    }
                }
            }
            rows.retain(|r| !r.is_empty());
            rank += 1;
        }
        Some(rank)
    }

    /// Rank from singular values above `tol`.
    pub fn rank_numeric(&self, tol: f64) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.to_complex().singular_values().iter().filter(|s| **s > tol).count()
    }

    /// Exact rank if available, else numeric with `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.rank_exact().unwrap_or_else(|| self.rank_numeric(tol))
    }

    /// Flattens into a single row, for span computations.
    pub fn flatten(&self) -> Vec<(usize, RadScalar)> {
        self.entries().map(|(i, j, v)| (i * self.cols + j, v.clone())).collect()
    }

    /// Matrix whose rows are the given sparse vectors.
    pub fn from_rows(cols: usize, rows: &[Vec<(usize, RadScalar)>]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r {
                m.add_at(i, *j, v);
            }
        }
        m
    }

    /// Trace of `A†A`, exact.
    pub fn hs_norm2(&self) -> RadScalar {
        self.entries().map(|(_, _, v)| v.abs2()).sum()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| scalar_to_json(&self.get(i, j))).collect()))
                .collect(),
        )
    }

    pub fn to_json_complex(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        (0..self.cols)
                            .map(|j| {
                                let z = self.get(i, j).to_complex();
                                serde_json::json!([z.re, z.im])
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

pub fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let ev = gram.symmetric_eigenvalues();
    ev.iter().cloned().fold(0.0_f64, f64::max).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_adjoint() {
        let mut a = Matrix::zeros(2, 2);
        a.set(0, 1, RadScalar::i());
        a.set(1, 0, RadScalar::from_int(2));
        let b = a.mul(&a.adjoint());
        assert_eq!(b.get(0, 0), RadScalar::one());
        assert_eq!(b.get(1, 1), RadScalar::from_int(4));
        assert!((a.op_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn exact_rank() {
        let mut a = Matrix::zeros(3, 3);
        a.set(0, 0, RadScalar::one());
        a.set(0, 1, RadScalar::i());
        a.set(1, 0, RadScalar::from_int(2));
        a.set(1, 1, RadScalar::from_int(2) * RadScalar::i());
        a.set(2, 2, RadScalar::from_frac(1, 3));
        assert_eq!(a.rank_exact(), Some(2));
        assert_eq!(a.rank_numeric(1e-9), 2);
    }
}
