//! Dense matrices over the Gaussian rationals and the elimination
//! primitives (reduced row echelon form, linear solving, inversion)
//! that everything else is built on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::GaussianRational;

/// A dense m×n matrix of exact Gaussian rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

pub type Vector = Vec<GaussianRational>;

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, GaussianRational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussianRational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch(
                    "rows have different lengths".into(),
                ));
            }
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer entries, mostly for tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| GaussianRational::from_int(n)).collect())
                .collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn diagonal(diag: &[GaussianRational]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n, n);
        for (k, v) in diag.iter().enumerate() {
            m.set(k, k, v.clone());
        }
        m
    }

    /// The m×m nilpotent Jordan block: ones on the superdiagonal.
    pub fn jordan_block(m: usize) -> Self {
        let mut j = Matrix::zeros(m, m);
        for k in 0..m.saturating_sub(1) {
            j.set(k, k + 1, GaussianRational::one());
        }
        j
    }

    /// The standard unit matrix with a single 1 in position (k, l), 0-indexed.
    pub fn unit(rows: usize, cols: usize, k: usize, l: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        m.set(k, l, GaussianRational::one());
        m
    }

    pub fn block_diag(blocks: &[Matrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.at(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn column(v: &[GaussianRational]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
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

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &GaussianRational {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: GaussianRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn row_vec(&self, r: usize) -> Vector {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col_vec(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |r, c| self.at(r0 + r, c0 + c).clone())
    }

    pub fn scale(&self, s: &GaussianRational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut acc = GaussianRational::zero();
            for c in 0..self.cols {
                let a = self.at(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    acc = &acc + &(a * &v[c]);
                }
            }
            out.push(acc);
        }
        out
    }

    pub fn pow(&self, mut k: usize) -> Matrix {
        assert!(self.is_square(), "pow of non-square matrix");
        let mut result = Matrix::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Reduced row echelon form with the deterministic pivot rule:
    /// leftmost column first, first nonzero row from the top, pivot
    /// normalized to 1, full reduction above and below.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.at(r, c).inverse().unwrap();
            if !inv.is_one() {
                for j in c..m.cols {
                    let v = m.at(r, j) * &inv;
                    m.set(r, j, v);
                }
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        if !m.at(r, j).is_zero() {
                            let v = m.at(i, j) - &(&f * m.at(r, j));
                            m.set(i, j, v);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            rank: pivots.len(),
            pivots,
            r: m,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the kernel as matrix columns (one column per free variable,
    /// in ascending free-column order). Not canonicalized; `Subspace` does that.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { r, pivots, .. } = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_set[*c].is_none()).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            basis.set(f, j, GaussianRational::one());
            for (i, &p) in pivots.iter().enumerate() {
                if !r.at(i, f).is_zero() {
                    basis.set(p, j, -r.at(i, f));
                }
            }
        }
        basis
    }

    /// Solve A·X = B for X where A has full column rank; `None` when the
    /// system is inconsistent or the solution is not unique.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, b.rows, "solve dimension mismatch");
        let aug = self.hstack(b);
        let Rref { r, rank, pivots } = aug.rref();
        if rank > self.cols || pivots.iter().any(|&p| p >= self.cols) {
            return None; // inconsistent
        }
        if rank < self.cols {
            return None; // underdetermined
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(p, c, r.at(i, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let Rref { r, pivots, .. } = aug.rref();
        // Invertible iff the pivots of the augmented system stay inside
        // the original columns.
        if pivots.iter().filter(|&&p| p < n).count() < n {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare(self.rows, self.cols))
        }
    }
}

/// Result of [`Matrix::rref`].
pub struct Rref {
    pub r: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// One exact solution of A·x = b together with a basis of the homogeneous
/// solution space; `None` from [`solve_linear`] means the system is
/// inconsistent.
pub struct AffineSolution {
    pub particular: Vector,
    /// Columns span ker A (raw basis, one column per free variable).
    pub homogeneous: Matrix,
}

/// Solve A·x = b, returning a particular solution plus the homogeneous basis.
pub fn solve_linear(a: &Matrix, b: &[GaussianRational]) -> Option<AffineSolution> {
    assert_eq!(a.rows(), b.len(), "solve dimension mismatch");
    let aug = a.hstack(&Matrix::column(b));
    let Rref { r, pivots, .. } = aug.rref();
    if pivots.iter().any(|&p| p == a.cols()) {
        return None;
    }
    let mut x = vec![GaussianRational::zero(); a.cols()];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.at(i, a.cols()).clone();
    }
    Some(AffineSolution {
        particular: x,
        homogeneous: a.kernel_basis(),
    })
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix addition dimension mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix subtraction dimension mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix multiplication dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if !b.is_zero() {
                        let v = &(a * b) + out.at(r, c);
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}{}", self.at(r, c), if c + 1 < self.cols { " " } else { "" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}{}", self.at(r, c), if c + 1 < self.cols { " " } else { "" })?;
            }
            if r + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;

    #[test]
    fn rref_identity() {
        let i2 = Matrix::identity(2);
        let r = i2.rref();
        assert_eq!(r.r, i2);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.r, Matrix::from_int_rows(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_scales_unit_i() {
        let m = Matrix::from_fn(1, 1, |_, _| G::i());
        let r = m.rref();
        assert_eq!(r.r, Matrix::identity(1));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn solve_identity() {
        let a = Matrix::identity(2);
        let b = vec![G::from_int(1), G::from_int(2)];
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.particular, b);
        assert_eq!(s.homogeneous.cols(), 0);
    }

    #[test]
    fn solve_rank_one_system() {
        let a = Matrix::from_int_rows(&[&[1, 1], &[0, 0]]);
        let b = vec![G::from_int(1), G::from_int(0)];
        let s = solve_linear(&a, &b).unwrap();
        assert_eq!(s.particular, vec![G::from_int(1), G::from_int(0)]);
        assert_eq!(s.homogeneous.cols(), 1);
        // Homogeneous basis spans (1, -1).
        let h = s.homogeneous.col_vec(0);
        let ratio = &h[1] / &h[0];
        assert_eq!(ratio, G::from_int(-1));
    }

    #[test]
    fn solve_inconsistent() {
        let a = Matrix::from_int_rows(&[&[1], &[1]]);
        let b = vec![G::from_int(1), G::from_int(0)];
        assert!(solve_linear(&a, &b).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_int_rows(&[&[1, 1], &[0, 2]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        assert!(Matrix::jordan_block(3).inverse().is_none());
    }

    #[test]
    fn jordan_block_action() {
        let j = Matrix::jordan_block(3);
        // J e_1 = 0, J e_2 = e_1, J e_3 = e_2.
        let e = |k: usize| {
            let mut v = vec![G::zero(); 3];
            v[k] = G::one();
            v
        };
        assert!(j.mul_vec(&e(0)).iter().all(|x| x.is_zero()));
        assert_eq!(j.mul_vec(&e(1)), e(0));
        assert_eq!(j.mul_vec(&e(2)), e(1));
    }
}
