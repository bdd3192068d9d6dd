//! Dense linear algebra over GF(q).

use std::fmt;

use thiserror::Error;

use crate::gf::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("interpolation nodes must be pairwise distinct (node {0} repeats)")]
    DuplicateNode(u32),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("need at least one node")]
    Empty,
}

/// Row-major matrix over a single field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for row in self.row_iter() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        debug_assert!(data.iter().all(|&x| x < field.q()));
        Self {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Self::from_vec(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        // chunks_exact panics on 0, and a 0-column matrix still has rows
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Keeps the given columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            data.extend(cols.iter().map(|&j| self.get(i, j)));
        }
        Matrix::from_vec(&self.field, self.rows, cols.len(), data)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Matrix::from_vec(&self.field, rows.len(), self.cols, data)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix: `Σ x_i · row_i`.
    pub fn left_mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.rows, "dimension mismatch");
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (i, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, g));
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        let f = &self.field;
        self.row_iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref(mat: &Matrix) -> Rref {
    let f = mat.field.clone();
    let mut m = mat.clone();
    let cols = m.cols;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.rows {
            break;
        }
        let Some(found) = (row..m.rows).find(|&i| m.get(i, col) != 0) else {
            continue;
        };
        if found != row {
            for j in 0..cols {
                m.data.swap(found * cols + j, row * cols + j);
            }
        }
        let inv = f.inv(m.get(row, col)).expect("pivot is nonzero");
        for j in col..cols {
            let v = f.mul(m.get(row, j), inv);
            m.set(row, j, v);
        }
        for i in 0..m.rows {
            if i == row {
                continue;
            }
            let factor = m.get(i, col);
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let v = f.sub(m.get(i, j), f.mul(factor, m.get(row, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Rref {
        matrix: m,
        rank: pivots.len(),
        pivots,
    }
}

/// Basis of `{x : mat · x = 0}`, one row per free column in ascending order.
/// Row for free column `c` has a 1 at `c`, zeros at the other free columns.
pub fn null_space(mat: &Matrix) -> Matrix {
    let f = &mat.field;
    let reduced = rref(mat);
    let cols = mat.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &reduced.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = Matrix::zeros(f, free.len(), cols);
    for (bi, &fc) in free.iter().enumerate() {
        out.set(bi, fc, 1);
        for (pr, &pc) in reduced.pivots.iter().enumerate() {
            out.set(bi, pc, f.neg(reduced.matrix.get(pr, fc)));
        }
    }
    out
}

/// Left null space: basis of `{y : y · mat = 0}`.
pub fn left_null_space(mat: &Matrix) -> Matrix {
    null_space(&mat.transpose())
}

fn check_distinct(nodes: &[u32]) -> Result<(), LinalgError> {
    let mut seen = std::collections::HashSet::with_capacity(nodes.len());
    for &x in nodes {
        if !seen.insert(x) {
            return Err(LinalgError::DuplicateNode(x));
        }
    }
    Ok(())
}

/// Entry `(i, h)` is `nodes[i]^h`, with `0^0 = 1`.
pub fn vandermonde(field: &Field, nodes: &[u32], cols: usize) -> Result<Matrix, LinalgError> {
    check_distinct(nodes)?;
    let mut m = Matrix::zeros(field, nodes.len(), cols);
    for (i, &x) in nodes.iter().enumerate() {
        let mut pw = 1;
        for h in 0..cols {
            m.set(i, h, pw);
            pw = field.mul(pw, x);
        }
    }
    Ok(m)
}

/// Coefficients (low degree first) of the unique polynomial of degree
/// `< nodes.len()` through the points `(nodes[i], values[i])`, obtained by
/// reducing the augmented Vandermonde system.
pub fn solve_interpolation(
    field: &Field,
    nodes: &[u32],
    values: &[u32],
) -> Result<Vec<u32>, LinalgError> {
    if nodes.len() != values.len() {
        return Err(LinalgError::LengthMismatch {
            expected: nodes.len(),
            got: values.len(),
        });
    }
    if nodes.is_empty() {
        return Err(LinalgError::Empty);
    }
    let d = nodes.len();
    let v = vandermonde(field, nodes, d)?;
    let mut aug = Matrix::zeros(field, d, d + 1);
    for (i, &value) in values.iter().enumerate() {
        for j in 0..d {
            aug.set(i, j, v.get(i, j));
        }
        aug.set(i, d, value);
    }
    let reduced = rref(&aug);
    debug_assert_eq!(reduced.pivots, (0..d).collect::<Vec<_>>());
    Ok((0..d).map(|i| reduced.matrix.get(i, d)).collect())
}
