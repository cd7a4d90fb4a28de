//! Canonically represented subspaces of ℂⁿ and the lattice operations
//! (join = sum, meet = intersection), plus invariance and preimage tests.
//!
//! The canonical form is reduced column echelon: each basis column has its
//! first nonzero entry equal to 1, those pivot rows are strictly increasing
//! across columns, and every pivot row is zero in all other columns. Two
//! subspaces are equal iff their canonical basis matrices are entrywise
//! equal, so equality, hashing and set membership are purely structural.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::scalar::GaussianRational;

#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// ambient × dim, reduced column echelon form.
    basis: Matrix,
}

/// Outcome of comparing two subspaces by inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOrder {
    Equal,
    /// First is strictly contained in the second.
    Less,
    /// Second is strictly contained in the first.
    Greater,
    Incomparable,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Canonicalize the span of the columns of `m`.
    pub fn from_columns(m: &Matrix) -> Self {
        let rref = m.transpose().rref();
        let dim = rref.rank;
        let basis = Matrix::from_fn(m.rows(), dim, |r, c| rref.r.at(c, r).clone());
        Subspace {
            ambient: m.rows(),
            basis,
        }
    }

    /// Span of a list of vectors; duplicates and zero vectors are permitted,
    /// the empty list gives the zero subspace.
    pub fn span_of(ambient: usize, vectors: &[Vector]) -> Result<Self> {
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::AmbientMismatch(ambient, v.len()));
            }
        }
        if vectors.is_empty() {
            return Ok(Subspace::zero(ambient));
        }
        let m = Matrix::from_fn(ambient, vectors.len(), |r, c| vectors[c][r].clone());
        Ok(Subspace::from_columns(&m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_columns(&self) -> Vec<Vector> {
        (0..self.dim()).map(|c| self.basis.col_vec(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Pivot row of each canonical basis column (strictly increasing).
    pub fn pivot_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|c| {
                (0..self.ambient)
                    .find(|&r| !self.basis.at(r, c).is_zero())
                    .expect("canonical basis column is zero")
            })
            .collect()
    }

    /// Membership test by reduction against the canonical basis.
    pub fn contains_vector(&self, v: &[GaussianRational]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        let mut w = v.to_vec();
        for (c, &p) in self.pivot_rows().iter().enumerate() {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for r in 0..self.ambient {
                    let b = self.basis.at(r, c);
                    if !b.is_zero() {
                        w[r] = &w[r] - &(&f * b);
                    }
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok((0..other.dim()).all(|c| self.contains_vector(&other.basis.col_vec(c))))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    /// Lattice join M₁ ∨ M₂ = M₁ + M₂.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        Ok(Subspace::from_columns(&self.basis.hstack(&other.basis)))
    }

    /// Lattice meet M₁ ∧ M₂ = M₁ ∩ M₂, via the kernel of [B₁ | B₂].
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let stacked = self.basis.hstack(&other.basis.scale(&-&GaussianRational::one()));
        let kernel = stacked.kernel_basis();
        // First-block coordinates of kernel vectors give intersection points.
        let k1 = self.dim();
        let coords = kernel.submatrix(0, 0, k1, kernel.cols());
        Ok(Subspace::from_columns(&(&self.basis * &coords)))
    }

    pub fn compare(&self, other: &Subspace) -> Result<SubspaceOrder> {
        self.check_ambient(other)?;
        let fwd = self.contains(other)?;
        let bwd = other.contains(self)?;
        Ok(match (bwd, fwd) {
            (true, true) => SubspaceOrder::Equal,
            (true, false) => SubspaceOrder::Less,
            (false, true) => SubspaceOrder::Greater,
            (false, false) => SubspaceOrder::Incomparable,
        })
    }

    /// Rows of the projector-like map whose kernel is exactly this subspace:
    /// one row per non-pivot coordinate r, reading xᵣ − Σⱼ B[r, j]·x_{pⱼ}.
    pub fn complement_rows(&self) -> Matrix {
        let pivots = self.pivot_rows();
        let mut is_pivot = vec![false; self.ambient];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.ambient).filter(|&r| !is_pivot[r]).collect();
        let mut m = Matrix::zeros(free.len(), self.ambient);
        for (i, &r) in free.iter().enumerate() {
            m.set(i, r, GaussianRational::one());
            for (j, &p) in pivots.iter().enumerate() {
                if !self.basis.at(r, j).is_zero() {
                    m.set(i, p, -self.basis.at(r, j));
                }
            }
        }
        m
    }
}

impl Ord for Subspace {
    /// Deterministic total order: by ambient, then dimension, then the
    /// canonical basis entries lexicographically. Used for reproducible
    /// enumeration of subspace families, not for lattice comparisons.
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.dim().cmp(&other.dim()))
            .then_with(|| {
                for c in 0..self.dim() {
                    for r in 0..self.ambient {
                        let o = self.basis.at(r, c).cmp(other.basis.at(r, c));
                        if o != Ordering::Equal {
                            return o;
                        }
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of C^{}) basis:\n{}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

/// Kernel of `m` as a canonical subspace of the column space ℂ^cols.
pub fn nullspace(m: &Matrix) -> Subspace {
    Subspace::from_columns(&m.kernel_basis())
}

/// Image A·S as a canonical subspace.
pub fn image(a: &Matrix, s: &Subspace) -> Result<Subspace> {
    if a.cols() != s.ambient_dim() {
        return Err(Error::AmbientMismatch(a.cols(), s.ambient_dim()));
    }
    if s.is_zero() {
        return Ok(Subspace::zero(a.rows()));
    }
    Ok(Subspace::from_columns(&(a * s.basis())))
}

/// Whether A·S ⊆ S.
pub fn is_invariant(a: &Matrix, s: &Subspace) -> Result<bool> {
    a.require_square()?;
    if a.rows() != s.ambient_dim() {
        return Err(Error::AmbientMismatch(a.rows(), s.ambient_dim()));
    }
    for c in 0..s.dim() {
        let col = s.basis().col_vec(c);
        if !s.contains_vector(&a.mul_vec(&col)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Preimage A⁻¹(S) = { x : A·x ∈ S }, computed as the kernel of the
/// composition of the canonical complement map of S with A. Always
/// contains ker A.
pub fn preimage(a: &Matrix, s: &Subspace) -> Result<Subspace> {
    a.require_square()?;
    if a.rows() != s.ambient_dim() {
        return Err(Error::AmbientMismatch(a.rows(), s.ambient_dim()));
    }
    if s.is_full() {
        return Ok(Subspace::full(a.cols()));
    }
    let comp = s.complement_rows();
    Ok(nullspace(&(&comp * a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;

    fn e(n: usize, k: usize) -> Vector {
        let mut v = vec![G::zero(); n];
        v[k] = G::one();
        v
    }

    fn add(a: &[G], b: &[G]) -> Vector {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn span_dedupes_and_canonicalizes() {
        let two_e1: Vector = e(3, 0).iter().map(|x| x * &G::from_int(2)).collect();
        let s = Subspace::span_of(3, &[e(3, 0), two_e1]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s, Subspace::span_of(3, &[e(3, 0)]).unwrap());
    }

    #[test]
    fn empty_span_is_zero() {
        let s = Subspace::span_of(3, &[]).unwrap();
        assert_eq!(s.dim(), 0);
        assert!(s.is_zero());
    }

    #[test]
    fn span_mixed_ambient_error() {
        let r = Subspace::span_of(3, &[e(2, 0)]);
        assert!(matches!(r, Err(Error::AmbientMismatch(3, 2))));
    }

    #[test]
    fn plane_in_c4_has_dim_two() {
        // span{e1+e3, e2+e4}
        let s = Subspace::span_of(4, &[add(&e(4, 0), &e(4, 2)), add(&e(4, 1), &e(4, 3))]).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn sum_and_intersect_basics() {
        let s1 = Subspace::span_of(3, &[e(3, 0)]).unwrap();
        let s2 = Subspace::span_of(3, &[e(3, 1)]).unwrap();
        let s = s1.sum(&s2).unwrap();
        assert_eq!(s, Subspace::span_of(3, &[e(3, 0), e(3, 1)]).unwrap());

        let a = Subspace::span_of(3, &[e(3, 0), e(3, 1)]).unwrap();
        let b = Subspace::span_of(3, &[e(3, 1), e(3, 2)]).unwrap();
        assert_eq!(a.intersect(&b).unwrap(), Subspace::span_of(3, &[e(3, 1)]).unwrap());
    }

    #[test]
    fn intersect_diagonal_plane() {
        // span{e1+e3, e2+e4} ∩ span{e1, e3} = span{e1+e3}
        let p = Subspace::span_of(4, &[add(&e(4, 0), &e(4, 2)), add(&e(4, 1), &e(4, 3))]).unwrap();
        let q = Subspace::span_of(4, &[e(4, 0), e(4, 2)]).unwrap();
        let expected = Subspace::span_of(4, &[add(&e(4, 0), &e(4, 2))]).unwrap();
        assert_eq!(p.intersect(&q).unwrap(), expected);
    }

    #[test]
    fn compare_cases() {
        let zero = Subspace::zero(2);
        let l1 = Subspace::span_of(2, &[e(2, 0)]).unwrap();
        let l2 = Subspace::span_of(2, &[e(2, 1)]).unwrap();
        let full = Subspace::full(2);
        assert_eq!(zero.compare(&l1).unwrap(), SubspaceOrder::Less);
        assert_eq!(l1.compare(&full).unwrap(), SubspaceOrder::Less);
        assert_eq!(full.compare(&l1).unwrap(), SubspaceOrder::Greater);
        assert_eq!(l1.compare(&l2).unwrap(), SubspaceOrder::Incomparable);
        assert_eq!(l1.compare(&l1.clone()).unwrap(), SubspaceOrder::Equal);
    }

    #[test]
    fn invariance_under_jordan_block() {
        let j2 = Matrix::jordan_block(2);
        let s1 = Subspace::span_of(2, &[e(2, 0)]).unwrap();
        let s2 = Subspace::span_of(2, &[e(2, 1)]).unwrap();
        assert!(is_invariant(&j2, &s1).unwrap());
        assert!(!is_invariant(&j2, &s2).unwrap());
    }

    #[test]
    fn diagonal_plane_invariant_under_j2j2() {
        let n = Matrix::block_diag(&[Matrix::jordan_block(2), Matrix::jordan_block(2)]);
        let s = Subspace::span_of(4, &[add(&e(4, 0), &e(4, 2)), add(&e(4, 1), &e(4, 3))]).unwrap();
        assert!(is_invariant(&n, &s).unwrap());
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(
            nullspace(&Matrix::jordan_block(2)),
            Subspace::span_of(2, &[e(2, 0)]).unwrap()
        );
        assert!(nullspace(&Matrix::identity(4)).is_zero());
        let n = Matrix::block_diag(&[Matrix::jordan_block(2), Matrix::jordan_block(2)]);
        assert_eq!(
            nullspace(&n),
            Subspace::span_of(4, &[e(4, 0), e(4, 2)]).unwrap()
        );
    }

    #[test]
    fn preimage_examples() {
        let n = Matrix::block_diag(&[Matrix::jordan_block(2), Matrix::jordan_block(2)]);
        let m = Subspace::span_of(4, &[e(4, 0)]).unwrap();
        let expected = Subspace::span_of(4, &[e(4, 0), e(4, 1), e(4, 2)]).unwrap();
        assert_eq!(preimage(&n, &m).unwrap(), expected);

        let s = Subspace::span_of(4, &[e(4, 1), e(4, 3)]).unwrap();
        assert_eq!(preimage(&Matrix::identity(4), &s).unwrap(), s);
        assert_eq!(
            preimage(&Matrix::zeros(4, 4), &s).unwrap(),
            Subspace::full(4)
        );
    }

    #[test]
    fn preimage_contains_kernel() {
        let n = Matrix::block_diag(&[Matrix::jordan_block(3), Matrix::jordan_block(2)]);
        let s = Subspace::span_of(5, &[e(5, 0)]).unwrap();
        let pre = preimage(&n, &s).unwrap();
        assert!(pre.contains(&nullspace(&n)).unwrap());
    }
}
