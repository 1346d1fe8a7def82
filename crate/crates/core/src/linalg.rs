//! Exact rational linear algebra.
//!
//! Every routine here works over `Q` with exact arithmetic. Matrices are
//! small (tens of rows at most in practice), so plain Gaussian elimination
//! over [`Rational`] is used throughout.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Dense row-major matrix over `Q`.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::InvalidShape("ragged rows".into()));
        }
        Self::from_vec(n, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: col.len(),
                });
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rational::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn try_mul(&self, rhs: &MatrixQ) -> Result<MatrixQ> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = MatrixQ::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &MatrixQ) -> Result<MatrixQ> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::InvalidShape(format!(
                "{}x{} minus {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(MatrixQ {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Places `self` and `rhs` side by side.
    pub fn hconcat(&self, rhs: &MatrixQ) -> Result<MatrixQ> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: rhs.rows,
            });
        }
        let mut out = MatrixQ::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        Ok(out)
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, rhs: &MatrixQ) -> MatrixQ {
        let mut out = MatrixQ::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..rhs.rows {
            for j in 0..rhs.cols {
                out[(self.rows + i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for MatrixQ {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for MatrixQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &MatrixQ {
    type Output = MatrixQ;

    fn mul(self, rhs: &MatrixQ) -> MatrixQ {
        self.try_mul(rhs).expect("matrix dimensions do not agree")
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixQ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut MatrixQ) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        m.swap_rows(r, p);
        let inv = m[(r, c)].recip();
        for j in c..m.cols {
            let v = &m[(r, j)] * &inv;
            m[(r, j)] = v;
        }
        for i in 0..m.rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for j in c..m.cols {
                if m[(r, j)].is_zero() {
                    continue;
                }
                let v = &m[(i, j)] - &factor * &m[(r, j)];
                m[(i, j)] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &MatrixQ) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Rank together with a basis of the right kernel `{x : m x = 0}`.
pub fn rank_kernel(m: &MatrixQ) -> (usize, Vec<Vec<Rational>>) {
    let mut work = m.clone();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); m.cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -work[(row, f)].clone();
            }
            v
        })
        .collect();
    (pivots.len(), kernel)
}

pub fn determinant(m: &MatrixQ) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        let pivot = a[(c, c)].clone();
        det *= &pivot;
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let factor = &a[(i, c)] / &pivot;
            for j in c..n {
                let v = &a[(i, j)] - &factor * &a[(c, j)];
                a[(i, j)] = v;
            }
        }
    }
    Ok(det)
}

pub fn inverse(m: &MatrixQ) -> Result<MatrixQ> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut aug = m.hconcat(&MatrixQ::identity(n))?;
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    let mut inv = MatrixQ::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Ok(inv)
}

/// Output of [`congruence_diagonalize`]: `Pᵀ Q P = diag(diagonal)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceResult {
    pub diagonal: Vec<Rational>,
    pub change_of_basis: MatrixQ,
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

/// Symmetric Gaussian elimination by simultaneous row/column operations.
///
/// When the current diagonal pivot vanishes but some off-diagonal entry
/// `Q_ij` in its row does not, the basis vector `e_i` is replaced by
/// `e_i + e_j` (or swapped with `e_j` if that sum would again be isotropic).
pub fn congruence_diagonalize(q: &MatrixQ) -> Result<CongruenceResult> {
    if !q.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = q.rows;
    let mut a = q.clone();
    let mut p = MatrixQ::identity(n);

    // e_k <- e_k + c e_i, applied to both the form and the basis matrix.
    fn add_basis(a: &mut MatrixQ, p: &mut MatrixQ, k: usize, i: usize, c: &Rational) {
        let n = a.rows;
        for r in 0..n {
            let v = &a[(r, k)] + c * &a[(r, i)];
            a[(r, k)] = v;
        }
        for col in 0..n {
            let v = &a[(k, col)] + c * &a[(i, col)];
            a[(k, col)] = v;
        }
        for r in 0..n {
            let v = &p[(r, k)] + c * &p[(r, i)];
            p[(r, k)] = v;
        }
    }

    fn swap_basis(a: &mut MatrixQ, p: &mut MatrixQ, i: usize, j: usize) {
        a.swap_rows(i, j);
        for r in 0..a.rows {
            a.entries.swap(r * a.cols + i, r * a.cols + j);
        }
        for r in 0..p.rows {
            p.entries.swap(r * p.cols + i, r * p.cols + j);
        }
    }

    for i in 0..n {
        if a[(i, i)].is_zero() {
            let Some(j) = (i + 1..n).find(|&j| !a[(i, j)].is_zero()) else {
                continue;
            };
            // (e_i + e_j)ᵀ A (e_i + e_j) = 2 A_ij + A_jj
            let two_aij: Rational = &a[(i, j)] + &a[(i, j)];
            if (&two_aij + &a[(j, j)]).is_zero() {
                swap_basis(&mut a, &mut p, i, j);
            } else {
                add_basis(&mut a, &mut p, i, j, &Rational::one());
            }
        }
        let pivot = a[(i, i)].clone();
        for k in i + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let c = -(&a[(i, k)] / &pivot);
            add_basis(&mut a, &mut p, k, i, &c);
        }
    }

    let diagonal: Vec<Rational> = (0..n).map(|i| a[(i, i)].clone()).collect();
    let (mut positives, mut negatives, mut zeros) = (0, 0, 0);
    for d in &diagonal {
        match rational::sign(d) {
            1 => positives += 1,
            -1 => negatives += 1,
            _ => zeros += 1,
        }
    }
    Ok(CongruenceResult {
        diagonal,
        change_of_basis: p,
        positives,
        negatives,
        zeros,
    })
}
