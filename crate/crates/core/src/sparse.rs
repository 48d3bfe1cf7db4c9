//! Column-sparse matrices over any [`Field`].

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coeffs::{Field, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp<T: Field> {
    rows: usize,
    cols: Vec<BTreeMap<usize, T>>,
}

impl<T: Field> SparseOp<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseOp { rows, cols: vec![BTreeMap::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            m.cols[j].insert(j, T::one());
        }
        m
    }

    pub fn diagonal(diag: Vec<T>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (j, v) in diag.into_iter().enumerate() {
            if !v.is_zero() {
                m.cols[j].insert(j, v);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.cols[j].get(&i).cloned().unwrap_or_else(T::zero)
    }

    pub fn column(&self, j: usize) -> &BTreeMap<usize, T> {
        &self.cols[j]
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: T) {
        if v.is_zero() {
            return;
        }
        let col = &mut self.cols[j];
        let nv = match col.get(&i) {
            Some(old) => old.add(&v),
            None => v,
        };
        if nv.is_zero() {
            col.remove(&i);
        } else {
            col.insert(i, nv);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SparseOp<T>) -> SparseOp<T> {
        assert_eq!(self.ncols(), other.rows, "dimension mismatch in compose");
        let mut out = SparseOp::zeros(self.rows, other.ncols());
        for (j, col) in other.cols.iter().enumerate() {
            for (k, b) in col {
                for (i, a) in &self.cols[*k] {
                    out.add_entry(*i, j, a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &SparseOp<T>) -> SparseOp<T> {
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_entry(i, j, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparseOp<T>) -> SparseOp<T> {
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_entry(i, j, v.neg());
        }
        out
    }

    pub fn scale(&self, s: &T) -> SparseOp<T> {
        let mut out = SparseOp::zeros(self.rows, self.ncols());
        for (i, j, v) in self.entries() {
            out.add_entry(i, j, v.mul(s));
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j].is_zero() {
                continue;
            }
            for (i, a) in col {
                out[*i] = out[*i].add(&a.mul(&v[j]));
            }
        }
        out
    }

    pub fn map<U: Field>(&self, f: &dyn Fn(&T) -> U) -> SparseOp<U> {
        let mut out = SparseOp::zeros(self.rows, self.ncols());
        for (i, j, v) in self.entries() {
            out.add_entry(i, j, f(v));
        }
        out
    }

    pub fn try_map<U: Field, E>(&self, f: &dyn Fn(&T) -> Result<U, E>) -> Result<SparseOp<U>, E> {
        let mut out = SparseOp::zeros(self.rows, self.ncols());
        for (i, j, v) in self.entries() {
            out.add_entry(i, j, f(v)?);
        }
        Ok(out)
    }

    /// First nonzero entry in column-major order, for counterexample reports.
    pub fn first_nonzero(&self) -> Option<(usize, usize, T)> {
        self.entries().next().map(|(i, j, v)| (i, j, v.clone()))
    }
}

impl SparseOp<Complex64> {
    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn approx_zero(&self, tol: Tolerance, scale: f64) -> bool {
        self.max_abs() <= tol.abs + tol.rel * scale
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.ncols());
        for (i, j, v) in self.entries() {
            m[(i, j)] = *v;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::QCoeff;

    #[test]
    fn compose_matches_dense_product() {
        let mut a = SparseOp::<QCoeff>::zeros(2, 2);
        a.add_entry(0, 1, QCoeff::q());
        let mut b = SparseOp::<QCoeff>::zeros(2, 2);
        b.add_entry(1, 0, QCoeff::from_i64(2));
        let ab = a.compose(&b);
        assert_eq!(ab.get(0, 0), &QCoeff::q() * &QCoeff::from_i64(2));
        assert!(b.compose(&a).get(1, 1) == &QCoeff::q() * &QCoeff::from_i64(2));
        assert!(ab.sub(&ab).is_zero());
    }
}
