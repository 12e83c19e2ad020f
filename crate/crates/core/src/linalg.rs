//! Dense row-major matrices over a finite field and Gaussian elimination.

use rayon::prelude::*;

use crate::gf::{Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Matrix {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.concat() }
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn row_reduce(&mut self, field: &Field) -> Vec<usize> {
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = field.inv(self.get(r, c));
            for j in c..cols {
                let v = field.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            let pivot_row: Vec<FieldElement> = self.row(r)[c..].to_vec();
            self.data.par_chunks_mut(cols).enumerate().for_each(|(i, row)| {
                if i == r {
                    return;
                }
                let f = row[c];
                if f.is_zero() {
                    return;
                }
                for (x, &pv) in row[c..].iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(f, pv));
                }
            });
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.clone().row_reduce(field).len()
    }

    /// `v * self` for a row vector `v` of length `rows`.
    pub fn left_mul(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .into_par_iter()
            .map(|c| {
                let mut acc = FieldElement::ZERO;
                for (r, &x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = field.add(acc, field.mul(x, self.get(r, c)));
                    }
                }
                acc
            })
            .collect()
    }
}

/// Solves `x * a = b` for a square invertible `a`; `None` when singular.
pub fn solve_left(field: &Field, a: &Matrix, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return None;
    }
    // x a = b  <=>  a^T x^T = b^T; reduce [a^T | b]
    let mut aug = Matrix::zeros(n, n + 1);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, a.get(j, i));
        }
        aug.set(i, n, b[i]);
    }
    let pivots = aug.row_reduce(field);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some((0..n).map(|i| aug.get(i, n)).collect())
}
