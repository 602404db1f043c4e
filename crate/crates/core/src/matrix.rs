//! Dense matrices over `F_q` and the trace form on `Mat(n x m, F_q)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldContext, FieldElement};
use crate::subspace::Subspace;

/// Reduces `rows` to reduced row echelon form in place: leftmost pivot,
/// scaled to one, cleared above and below. Zero rows end up at the bottom.
/// Returns the pivot columns.
pub(crate) fn rref_rows(ctx: &FieldContext, rows: &mut [Vec<FieldElement>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = ctx.inv(rows[r][col]).expect("pivot is nonzero");
        if inv != FieldElement::ONE {
            for x in rows[r][col..].iter_mut() {
                *x = ctx.mul(*x, inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let factor = other[col];
            if factor.is_zero() {
                continue;
            }
            for (x, &pv) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = ctx.sub(*x, ctx.mul(factor, pv));
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Rank of a list of rows, without keeping the reduced form.
pub(crate) fn rank_of_rows(ctx: &FieldContext, rows: &[Vec<FieldElement>], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rref_rows(ctx, &mut work, ncols).len()
}

/// Basis of `{x : A x = 0}` for the matrix whose rows are given, in RREF.
pub(crate) fn kernel_of_rows(ctx: &FieldContext, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut work = rows.to_vec();
    let pivots = rref_rows(ctx, &mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis: Vec<Vec<FieldElement>> = (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![FieldElement::ZERO; ncols];
            v[free] = FieldElement::ONE;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = ctx.neg(work[row][free]);
            }
            v
        })
        .collect();
    rref_rows(ctx, &mut basis, ncols);
    basis
}

/// Standard inner product of two vectors.
pub(crate) fn dot(ctx: &FieldContext, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    a.iter()
        .zip(b)
        .fold(FieldElement::ZERO, |acc, (&x, &y)| ctx.add(acc, ctx.mul(x, y)))
}

/// An `n x m` matrix over `F_q`, row-major.
#[derive(Clone)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
    ctx: Arc<FieldContext>,
}

/// Result of [`MatrixFq::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: MatrixFq,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl PartialEq for MatrixFq {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries && self.ctx == other.ctx
    }
}

impl Eq for MatrixFq {}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixFq{:?}", self.to_rows())
    }
}

impl MatrixFq {
    pub fn new(ctx: &Arc<FieldContext>, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        if let Some(bad) = entries.iter().find(|x| x.value() >= ctx.q()) {
            return Err(Error::ElementOutOfRange { value: bad.value() as u64, q: ctx.q() });
        }
        Ok(MatrixFq { rows, cols, entries, ctx: ctx.clone() })
    }

    /// Builds a matrix from integer-encoded rows. An empty row list gives a `0 x 0` matrix.
    pub fn from_rows(ctx: &Arc<FieldContext>, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    expected: format!("rows of length {cols}"),
                    found: format!("a row of length {}", row.len()),
                });
            }
            for &v in row {
                entries.push(ctx.element(v as u64)?);
            }
        }
        Ok(MatrixFq { rows: rows.len(), cols, entries, ctx: ctx.clone() })
    }

    pub fn zeros(ctx: &Arc<FieldContext>, rows: usize, cols: usize) -> Self {
        MatrixFq { rows, cols, entries: vec![FieldElement::ZERO; rows * cols], ctx: ctx.clone() }
    }

    pub fn identity(ctx: &Arc<FieldContext>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.entries[i * n + i] = FieldElement::ONE;
        }
        m
    }

    /// The matrix unit with a single one at `(i, j)`.
    pub fn unit(ctx: &Arc<FieldContext>, rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(ctx, rows, cols);
        m.entries[i * cols + j] = FieldElement::ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.cols + j]
    }

    /// Row-major entries, i.e. the vectorisation used to identify
    /// `Mat(n x m, F_q)` with `F_q^{nm}`.
    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.value()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        MatrixFq { rows: self.cols, cols: self.rows, entries, ctx: self.ctx.clone() }
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| self.ctx.add(a, b)).collect();
        Ok(MatrixFq { entries, ..self.clone() })
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        let entries = self.entries.iter().map(|&a| self.ctx.mul(c, a)).collect();
        MatrixFq { entries, ..self.clone() }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", other.rows),
            });
        }
        let ctx = &self.ctx;
        let mut entries = vec![FieldElement::ZERO; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let slot = &mut entries[i * other.cols + j];
                    *slot = ctx.add(*slot, ctx.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(MatrixFq { rows: self.rows, cols: other.cols, entries, ctx: ctx.clone() })
    }

    pub fn trace(&self) -> FieldElement {
        (0..self.rows.min(self.cols)).fold(FieldElement::ZERO, |acc, i| self.ctx.add(acc, self.get(i, i)))
    }

    fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rref(&self) -> Rref {
        let mut rows = self.row_vecs();
        let pivots = rref_rows(&self.ctx, &mut rows, self.cols);
        let entries = rows.into_iter().flatten().collect();
        Rref {
            reduced: MatrixFq { entries, ..self.clone() },
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.ctx, &self.row_vecs(), self.cols)
    }

    /// A basis of the right kernel `{x : M x = 0}`, in RREF.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        kernel_of_rows(&self.ctx, &self.row_vecs(), self.cols)
    }

    /// The span of the columns, a subspace of `F_q^rows`.
    pub fn column_space(&self) -> Subspace {
        let cols: Vec<_> = (0..self.cols).map(|j| self.column(j)).collect();
        Subspace::span(&self.ctx, self.rows, &cols).expect("columns have length rows")
    }

    /// `<M, N> = Tr(M N^T)`.
    pub fn trace_product(&self, other: &Self) -> Result<FieldElement> {
        self.check_same_shape(other)?;
        Ok(self.matmul(&other.transpose())?.trace())
    }
}
