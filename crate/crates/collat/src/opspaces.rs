//! Linear spaces of operators: commutants, intertwiner spaces, the
//! closed-form reflexive covers of Jordan-block intertwiners, the algebra
//! Alg Lat(N)′ of maps fixing every hyperinvariant subspace, and a sampled
//! upper-bound oracle for reflexive covers of general spaces.
//!
//! An [`OperatorSpace`] is canonically represented: the row-major
//! vectorizations of its basis matrices, stacked as rows, form a reduced
//! row echelon matrix. Equality of spaces is therefore structural.

use crate::error::{Error, Result};
use crate::matrix::{solve_linear, Matrix, Vector};
use crate::sample::VectorSample;
use crate::scalar::GaussianRational;
use crate::structure::{is_nilpotent, nil_index, JordanType};
use crate::subspace::{is_invariant, nullspace, Subspace};

/// A linear subspace of the m×n matrices with a canonical basis.
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorSpace {
    rows: usize,
    cols: usize,
    /// The vectorized space: a canonical subspace of ℂ^{rows·cols}.
    vec_space: Subspace,
    basis: Vec<Matrix>,
}

fn vectorize(m: &Matrix) -> Vector {
    let mut v = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            v.push(m.at(r, c).clone());
        }
    }
    v
}

fn unvectorize(rows: usize, cols: usize, v: &[GaussianRational]) -> Matrix {
    Matrix::from_fn(rows, cols, |r, c| v[r * cols + c].clone())
}

impl OperatorSpace {
    pub fn zero(rows: usize, cols: usize) -> Self {
        OperatorSpace {
            rows,
            cols,
            vec_space: Subspace::zero(rows * cols),
            basis: Vec::new(),
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Self::from_vec_space(rows, cols, Subspace::full(rows * cols))
    }

    /// Canonicalize the span of a list of matrices.
    pub fn from_span(rows: usize, cols: usize, mats: &[Matrix]) -> Self {
        for m in mats {
            assert!(
                m.rows() == rows && m.cols() == cols,
                "operator space shape mismatch"
            );
        }
        let vecs: Vec<Vector> = mats.iter().map(vectorize).collect();
        let sub = Subspace::span_of(rows * cols, &vecs).expect("consistent ambient");
        Self::from_vec_space(rows, cols, sub)
    }

    /// From an already-canonical subspace of ℂ^{rows·cols}.
    pub fn from_vec_space(rows: usize, cols: usize, vec_space: Subspace) -> Self {
        assert_eq!(vec_space.ambient_dim(), rows * cols);
        let basis = (0..vec_space.dim())
            .map(|k| unvectorize(rows, cols, &vec_space.basis().col_vec(k)))
            .collect();
        OperatorSpace {
            rows,
            cols,
            vec_space,
            basis,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn vec_space(&self) -> &Subspace {
        &self.vec_space
    }

    /// Membership by one reduction against the canonical basis.
    pub fn contains(&self, t: &Matrix) -> bool {
        t.rows() == self.rows
            && t.cols() == self.cols
            && self.vec_space.contains_vector(&vectorize(t))
    }

    /// Σ coeffs\[k\] · basis\[k\].
    pub fn element(&self, coeffs: &[GaussianRational]) -> Matrix {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count mismatch");
        let mut out = Matrix::zeros(self.rows, self.cols);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = &out + &b.scale(c);
            }
        }
        out
    }

    /// The orbit S·x = { T·x : T ∈ S } ⊆ ℂ^rows of a fixed vector.
    pub fn orbit(&self, x: &[GaussianRational]) -> Result<Subspace> {
        if x.len() != self.cols {
            return Err(Error::AmbientMismatch(self.cols, x.len()));
        }
        let images: Vec<Vector> = self.basis.iter().map(|b| b.mul_vec(x)).collect();
        Subspace::span_of(self.rows, &images)
    }
}

impl std::fmt::Debug for OperatorSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "OperatorSpace(dim {} of M_{}x{})",
            self.dim(),
            self.rows,
            self.cols
        )
    }
}

/// Row-echelon accumulator over vectorized constraint rows; tracks rank so
/// constraint generation can stop once the solution space cannot shrink
/// further.
struct ConstraintRows {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl ConstraintRows {
    fn new(ambient: usize) -> Self {
        ConstraintRows {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn add(&mut self, v: Vector) {
        let mut w = v;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for c in 0..self.ambient {
                    if !row[c].is_zero() {
                        w[c] = &w[c] - &(&f * &row[c]);
                    }
                }
            }
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = w[p].inverse().unwrap();
        if !inv.is_one() {
            for c in 0..self.ambient {
                if !w[c].is_zero() {
                    w[c] = &w[c] * &inv;
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
    }

    /// Kernel of the accumulated rows as an operator space.
    fn solution_space(&self, rows: usize, cols: usize) -> OperatorSpace {
        if self.rows.is_empty() {
            return OperatorSpace::full(rows, cols);
        }
        let m = Matrix::from_rows(self.rows.clone()).unwrap();
        OperatorSpace::from_vec_space(rows, cols, nullspace(&m))
    }
}

/// The intertwiner space { T : A·T = T·B } for A m×m and B n×n, as the
/// kernel of the linearized system in the m·n entries of T.
pub fn intertwiners(a: &Matrix, b: &Matrix) -> Result<OperatorSpace> {
    a.require_square()?;
    b.require_square()?;
    let m = a.rows();
    let n = b.rows();
    let mut cons = ConstraintRows::new(m * n);
    for i in 0..m {
        for j in 0..n {
            // Σ_k A[i,k]·T[k,j] − Σ_k T[i,k]·B[k,j] = 0
            let mut row = vec![GaussianRational::zero(); m * n];
            for k in 0..m {
                if !a.at(i, k).is_zero() {
                    row[k * n + j] = &row[k * n + j] + a.at(i, k);
                }
            }
            for k in 0..n {
                if !b.at(k, j).is_zero() {
                    row[i * n + k] = &row[i * n + k] - b.at(k, j);
                }
            }
            cons.add(row);
        }
    }
    Ok(cons.solution_space(m, n))
}

/// The commutant (A)′ = { T : A·T = T·A }.
pub fn commutant(a: &Matrix) -> Result<OperatorSpace> {
    intertwiners(a, a)
}

/// Closed form of (J_m, J_n)^Int: for m ≤ n all blocks [0 | p(J_m)], for
/// m > n all blocks [p(J_n); 0], one basis element per power of the block.
pub fn jordan_intertwiner_closed_form(m: usize, n: usize) -> OperatorSpace {
    let k = m.min(n);
    let jk = Matrix::jordan_block(k);
    let mut mats = Vec::with_capacity(k);
    let mut p = Matrix::identity(k);
    for _ in 0..k {
        let mut t = Matrix::zeros(m, n);
        for r in 0..k {
            for c in 0..k {
                if !p.at(r, c).is_zero() {
                    if m <= n {
                        t.set(r, n - m + c, p.at(r, c).clone());
                    } else {
                        t.set(r, c, p.at(r, c).clone());
                    }
                }
            }
        }
        mats.push(t);
        p = &p * &jk;
    }
    OperatorSpace::from_span(m, n, &mats)
}

/// Structural membership test for the reflexive-cover closed form: in the
/// m ≤ n case the only nonzero entries sit in the upper triangle of the
/// trailing m×m block, i.e. t\[i\]\[c\] = 0 whenever c < n − m + i; dually for
/// m > n. Equivalent to `jordan_refl_closed_form(m, n).contains(t)` but
/// without constructing the space.
pub fn in_jordan_refl_closed_form(t: &Matrix) -> bool {
    let (m, n) = (t.rows(), t.cols());
    for i in 0..m {
        for c in 0..n {
            let allowed = if m <= n {
                c >= n - m + i
            } else {
                i < n && c >= i
            };
            if !allowed && !t.at(i, c).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Closed form of Refl (J_m, J_n)^Int: [0 | V] (m ≤ n) or [U; 0] (m ≥ n)
/// with V, U upper-triangular of size min(m, n); dimension k(k+1)/2.
pub fn jordan_refl_closed_form(m: usize, n: usize) -> OperatorSpace {
    let k = m.min(n);
    let mut mats = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            let t = if m <= n {
                Matrix::unit(m, n, i, n - m + j)
            } else {
                Matrix::unit(m, n, i, j)
            };
            mats.push(t);
        }
    }
    OperatorSpace::from_span(m, n, &mats)
}

/// Blockwise assembly of Refl (N)′ for N = J_{n₁} ⊕ … ⊕ J_{n_k}: the space
/// of block matrices whose (i, j) block lies in the closed-form reflexive
/// cover of (J_{n_i}, J_{n_j})^Int.
pub fn refl_blockwise(t: &JordanType) -> OperatorSpace {
    let sizes = t.sizes();
    let d = t.total_dim();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    let mut mats = Vec::new();
    for (bi, &ni) in sizes.iter().enumerate() {
        for (bj, &nj) in sizes.iter().enumerate() {
            for block in jordan_refl_closed_form(ni, nj).basis() {
                let mut t = Matrix::zeros(d, d);
                for r in 0..ni {
                    for c in 0..nj {
                        if !block.at(r, c).is_zero() {
                            t.set(offsets[bi] + r, offsets[bj] + c, block.at(r, c).clone());
                        }
                    }
                }
                mats.push(t);
            }
        }
    }
    OperatorSpace::from_span(d, d, &mats)
}

/// Invariance constraints "T·S ⊆ S" for one subspace, linearized over the
/// entries of T: one row per (complement row of S) × (basis column of S).
fn add_invariance_constraints(cons: &mut ConstraintRows, s: &Subspace) {
    let d = s.ambient_dim();
    if s.is_zero() || s.is_full() {
        return;
    }
    let comp = s.complement_rows();
    for rho in 0..comp.rows() {
        for bc in 0..s.dim() {
            let mut row = vec![GaussianRational::zero(); d * d];
            for a in 0..d {
                let ra = comp.at(rho, a);
                if ra.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let xc = s.basis().at(c, bc);
                    if !xc.is_zero() {
                        row[a * d + c] = &row[a * d + c] + &(ra * xc);
                    }
                }
            }
            cons.add(row);
        }
    }
}

/// Deduplicated kernel/range subspaces of the powers of (A − λ·I) over the
/// supplied eigenvalues; these generate the hyperinvariant subspace lattice.
fn hyperinvariant_generating_subspaces(
    a: &Matrix,
    spectrum: &[GaussianRational],
) -> Result<Vec<Subspace>> {
    a.require_square()?;
    let d = a.rows();
    let mut subs: Vec<Subspace> = vec![Subspace::zero(d), Subspace::full(d)];
    for lambda in spectrum {
        let shifted = a - &Matrix::diagonal(&vec![lambda.clone(); d]);
        let mut power = shifted.clone();
        loop {
            let ker = nullspace(&power);
            let ran = Subspace::from_columns(&power);
            let stagnant = subs.contains(&ker) && subs.contains(&ran);
            if !subs.contains(&ker) {
                subs.push(ker);
            }
            if !subs.contains(&ran) {
                subs.push(ran);
            }
            if stagnant {
                break;
            }
            power = &power * &shifted;
        }
    }
    Ok(subs)
}

/// Alg Lat(N)′ for nilpotent N: all T leaving every kernel and range of a
/// power of N invariant. Sums and intersections of T-invariant subspaces
/// are T-invariant, so these finitely many generators pin down the whole
/// algebra of maps leaving every hyperinvariant subspace invariant.
pub fn alg_lat_commutant(n: &Matrix) -> Result<OperatorSpace> {
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent);
    }
    alg_lat_with_spectrum(n, &[GaussianRational::zero()])
}

/// The same construction for a general matrix with the given spectrum:
/// Alg Lat(A)′ from the kernels and ranges of powers of (A − λ·I).
pub fn alg_lat_with_spectrum(a: &Matrix, spectrum: &[GaussianRational]) -> Result<OperatorSpace> {
    let d = a.rows();
    let subs = hyperinvariant_generating_subspaces(a, spectrum)?;
    let mut cons = ConstraintRows::new(d * d);
    for s in &subs {
        add_invariance_constraints(&mut cons, s);
    }
    Ok(cons.solution_space(d, d))
}

/// Finite generating family for the hyperinvariant subspace lattice of a
/// nilpotent matrix, together with its closure under sum and intersection.
#[derive(Clone, Debug)]
pub struct HyperinvariantGenerators {
    /// Kernels and ranges of powers of N (deduplicated).
    pub generators: Vec<Subspace>,
    /// Closure of the generators under sum and intersection, sorted by the
    /// deterministic subspace order.
    pub closure: Vec<Subspace>,
}

pub fn hyperinvariant_generators(n: &Matrix) -> Result<HyperinvariantGenerators> {
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent);
    }
    let _ = nil_index(n)?;
    let generators = hyperinvariant_generating_subspaces(n, &[GaussianRational::zero()])?;
    let mut closure: Vec<Subspace> = generators.clone();
    closure.sort();
    closure.dedup();
    loop {
        let mut added = false;
        let snapshot = closure.clone();
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                for candidate in [
                    snapshot[i].sum(&snapshot[j])?,
                    snapshot[i].intersect(&snapshot[j])?,
                ] {
                    if let Err(pos) = closure.binary_search(&candidate) {
                        closure.insert(pos, candidate);
                        added = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    Ok(HyperinvariantGenerators {
        generators,
        closure,
    })
}

/// Whether M is invariant under every element of the commutant of N.
pub fn is_hyperinvariant(n: &Matrix, m: &Subspace) -> Result<bool> {
    let comm = commutant(n)?;
    for b in comm.basis() {
        if !is_invariant(b, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Finite-sample relaxation of the reflexive cover: the set of T with
/// T·x ∈ S·x for every sampled x. This is always a superset of Refl S
/// (each sampled vector only adds constraints that every element of
/// Refl S satisfies), so it serves as an upper-bound oracle.
pub fn refl_sampled_superset(s: &OperatorSpace, sample: &VectorSample) -> OperatorSpace {
    let (m, n) = s.shape();
    assert_eq!(sample.dim, n, "sample dimension must match operator domain");
    let mut cons = ConstraintRows::new(m * n);
    // The solution space always contains S, so once the constraint rank
    // reaches m·n − dim S no further sample can shrink it.
    let max_rank = m * n - s.dim();
    'outer: for x in sample.vectors() {
        if x.iter().all(|c| c.is_zero()) {
            continue;
        }
        let orbit = s.orbit(&x).expect("sample has ambient dim n");
        if orbit.is_full() {
            continue;
        }
        let comp = orbit.complement_rows();
        for rho in 0..comp.rows() {
            let mut row = vec![GaussianRational::zero(); m * n];
            for a in 0..m {
                let ra = comp.at(rho, a);
                if ra.is_zero() {
                    continue;
                }
                for c in 0..n {
                    if !x[c].is_zero() {
                        row[a * n + c] = &row[a * n + c] + &(ra * &x[c]);
                    }
                }
            }
            cons.add(row);
            if cons.rank() == max_rank {
                break 'outer;
            }
        }
    }
    cons.solution_space(m, n)
}

/// Witness construction behind the reflexive-cover closed form: for
/// T = [0 | V] with V upper-triangular (m ≤ n) and a vector x, produce
/// S_x = [0 | p(J_m)] in the intertwiner space with S_x·x = T·x, by solving
/// the anti-triangular Hankel system in the coefficients of p. When the
/// relevant coordinates of x all vanish, the zero map works.
pub fn hankel_witness(m: usize, n: usize, t: &Matrix, x: &[GaussianRational]) -> Result<Matrix> {
    if m > n {
        return Err(Error::Precondition(format!(
            "hankel_witness requires m <= n, got m = {m}, n = {n}"
        )));
    }
    if t.rows() != m || t.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "T must be {m}x{n}, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    if x.len() != n {
        return Err(Error::AmbientMismatch(n, x.len()));
    }
    if !in_jordan_refl_closed_form(t) {
        return Err(Error::Precondition(
            "T is outside the closed-form reflexive cover".into(),
        ));
    }
    let v = t.submatrix(0, n - m, m, m);
    let y: Vector = x[n - m..].to_vec();
    // Largest index with y[k] ≠ 0; the zero map handles y = 0.
    let Some(k0) = (0..m).rev().find(|&i| !y[i].is_zero()) else {
        return Ok(Matrix::zeros(m, n));
    };
    let k = k0 + 1;
    // Rows a = 0..k: Σ_i y[a+i]·s_i = (V·y)[a]; anti-triangular Hankel in s.
    let hankel = Matrix::from_fn(k, k, |a, i| {
        if a + i < k {
            y[a + i].clone()
        } else {
            GaussianRational::zero()
        }
    });
    let vy = v.mul_vec(&y);
    let rhs: Vector = vy[..k].to_vec();
    let sol = solve_linear(&hankel, &rhs).expect("anti-triangular Hankel system is invertible");
    debug_assert_eq!(sol.homogeneous.cols(), 0);
    // p(J_m) is the upper-triangular Toeplitz matrix of the coefficients,
    // embedded as [0 | p(J_m)].
    let mut out = Matrix::zeros(m, n);
    for r in 0..m {
        for c in r..m {
            if let Some(s) = sol.particular.get(c - r) {
                if !s.is_zero() {
                    out.set(r, n - m + c, s.clone());
                }
            }
        }
    }
    debug_assert_eq!(out.mul_vec(x), t.mul_vec(x));
    Ok(out)
}

/// dim (N)′ = Σ_{i,j} min(n_i, n_j) for a nilpotent of the given type.
pub fn commutant_dim_formula(t: &JordanType) -> usize {
    let s = t.sizes();
    s.iter()
        .flat_map(|&a| s.iter().map(move |&b| a.min(b)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as G;

    fn j2j2() -> Matrix {
        Matrix::block_diag(&[Matrix::jordan_block(2), Matrix::jordan_block(2)])
    }

    fn e(n: usize, k: usize) -> Vector {
        let mut v = vec![G::zero(); n];
        v[k] = G::one();
        v
    }

    #[test]
    fn commutant_dims() {
        assert_eq!(commutant(&j2j2()).unwrap().dim(), 8);
        assert_eq!(commutant(&Matrix::identity(3)).unwrap().dim(), 9);
        let n = Matrix::block_diag(&[Matrix::jordan_block(3), Matrix::jordan_block(2)]);
        let c = commutant(&n).unwrap();
        assert_eq!(c.dim(), 9);
        assert_eq!(c.dim(), commutant_dim_formula(&JordanType::new(vec![3, 2])));
    }

    #[test]
    fn commutant_j2j2_matches_display_pattern() {
        // Rows 2 and 4 repeat the (1,1), (1,3) / (3,1), (3,3) entries.
        let pattern = [
            &Matrix::unit(4, 4, 0, 0) + &Matrix::unit(4, 4, 1, 1),
            Matrix::unit(4, 4, 0, 1),
            &Matrix::unit(4, 4, 0, 2) + &Matrix::unit(4, 4, 1, 3),
            Matrix::unit(4, 4, 0, 3),
            &Matrix::unit(4, 4, 2, 0) + &Matrix::unit(4, 4, 3, 1),
            Matrix::unit(4, 4, 2, 1),
            &Matrix::unit(4, 4, 2, 2) + &Matrix::unit(4, 4, 3, 3),
            Matrix::unit(4, 4, 2, 3),
        ];
        let display = OperatorSpace::from_span(4, 4, &pattern);
        assert_eq!(commutant(&j2j2()).unwrap(), display);
    }

    #[test]
    fn intertwiners_jordan_blocks_are_toeplitz() {
        for m in 1..=4usize {
            let space = intertwiners(&Matrix::jordan_block(m), &Matrix::jordan_block(m)).unwrap();
            assert_eq!(space.dim(), m);
            assert_eq!(space, jordan_intertwiner_closed_form(m, m));
        }
    }

    #[test]
    fn intertwiners_mixed_sizes() {
        let space = intertwiners(&Matrix::jordan_block(2), &Matrix::jordan_block(3)).unwrap();
        assert_eq!(space.dim(), 2);
        assert_eq!(space, jordan_intertwiner_closed_form(2, 3));
        // I_m intertwined with 0_n forces T = 0.
        let z = intertwiners(&Matrix::identity(2), &Matrix::zeros(3, 3)).unwrap();
        assert_eq!(z.dim(), 0);
    }

    #[test]
    fn intertwiner_closed_form_blocks() {
        let f23 = jordan_intertwiner_closed_form(2, 3);
        // Basis {[0 | I₂], [0 | J₂]}.
        let b0 = Matrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1]]);
        let b1 = Matrix::from_int_rows(&[&[0, 0, 1], &[0, 0, 0]]);
        assert!(f23.contains(&b0) && f23.contains(&b1));
        assert_eq!(f23.dim(), 2);
        let f32 = jordan_intertwiner_closed_form(3, 2);
        let c0 = Matrix::from_int_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        let c1 = Matrix::from_int_rows(&[&[0, 1], &[0, 0], &[0, 0]]);
        assert!(f32.contains(&c0) && f32.contains(&c1));
        assert_eq!(jordan_intertwiner_closed_form(1, 1).dim(), 1);
    }

    #[test]
    fn refl_closed_form_dims_and_bases() {
        let r23 = jordan_refl_closed_form(2, 3);
        assert_eq!(r23.dim(), 3);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            assert!(r23.contains(&Matrix::unit(2, 3, i, j)));
        }
        let r22 = jordan_refl_closed_form(2, 2);
        assert_eq!(r22.dim(), 3);
        assert!(r22.contains(&Matrix::from_int_rows(&[&[1, 5], &[0, 7]])));
        assert!(!r22.contains(&Matrix::from_int_rows(&[&[1, 0], &[1, 1]])));
        let r15 = jordan_refl_closed_form(1, 5);
        assert_eq!(r15.dim(), 1);
        assert!(r15.contains(&Matrix::unit(1, 5, 0, 4)));
    }

    #[test]
    fn alg_lat_examples() {
        assert_eq!(alg_lat_commutant(&j2j2()).unwrap().dim(), 12);
        let upper = alg_lat_commutant(&Matrix::jordan_block(3)).unwrap();
        assert_eq!(upper.dim(), 6);
        assert!(upper.contains(&Matrix::from_int_rows(&[&[1, 2, 3], &[0, 4, 5], &[0, 0, 6]])));
        assert!(!upper.contains(&Matrix::unit(3, 3, 2, 0)));
        let n32 = Matrix::block_diag(&[Matrix::jordan_block(3), Matrix::jordan_block(2)]);
        assert_eq!(alg_lat_commutant(&n32).unwrap().dim(), 15);
    }

    #[test]
    fn alg_lat_matches_blockwise_refl() {
        for t in [
            JordanType::new(vec![2, 2]),
            JordanType::new(vec![3, 2]),
            JordanType::new(vec![4]),
            JordanType::new(vec![2, 1, 1]),
        ] {
            let n = crate::structure::jordan_matrix(&t);
            assert_eq!(alg_lat_commutant(&n).unwrap(), refl_blockwise(&t), "type {t}");
        }
    }

    #[test]
    fn diagonals_lie_in_alg_lat() {
        for t in JordanType::all_of_dim(5) {
            let n = crate::structure::jordan_matrix(&t);
            let space = alg_lat_commutant(&n).unwrap();
            let diag =
                Matrix::diagonal(&(1..=5).map(|k| G::from_int(k as i64)).collect::<Vec<_>>());
            assert!(space.contains(&diag), "type {t}");
        }
    }

    #[test]
    fn refl_sampled_superset_examples() {
        let s = commutant(&j2j2()).unwrap();
        let oracle = refl_sampled_superset(&s, &VectorSample::deterministic(4));
        assert_eq!(oracle, refl_blockwise(&JordanType::new(vec![2, 2])));

        let full = OperatorSpace::full(3, 3);
        assert_eq!(
            refl_sampled_superset(&full, &VectorSample::deterministic(3)),
            full
        );
        let zero = OperatorSpace::zero(3, 3);
        assert_eq!(
            refl_sampled_superset(&zero, &VectorSample::deterministic(3)).dim(),
            0
        );
    }

    #[test]
    fn hankel_witness_examples() {
        // m = n = 2, T = E₁₂, x = (1,1): p(z) = z, S_x = J₂.
        let t = Matrix::unit(2, 2, 0, 1);
        let x = vec![G::one(), G::one()];
        let s = hankel_witness(2, 2, &t, &x).unwrap();
        assert_eq!(s, Matrix::jordan_block(2));
        assert_eq!(s.mul_vec(&x), t.mul_vec(&x));

        // m = 2, n = 3, T = E₁₂, x = e₂: p = 1, S_x = [0 | I₂].
        let t = Matrix::unit(2, 3, 0, 1);
        let x = e(3, 1);
        let s = hankel_witness(2, 3, &t, &x).unwrap();
        assert_eq!(s, Matrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(s.mul_vec(&x), vec![G::one(), G::zero()]);

        // Relevant coordinates of x all zero: the zero map.
        let t = Matrix::unit(2, 3, 0, 2);
        let x = e(3, 0);
        let s = hankel_witness(2, 3, &t, &x).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn structural_refl_membership_matches_space() {
        for (m, n) in [(2, 3), (3, 2), (3, 3), (1, 5), (4, 2)] {
            let space = jordan_refl_closed_form(m, n);
            for b in space.basis() {
                assert!(in_jordan_refl_closed_form(b));
            }
            // A matrix violating the pattern is rejected by both.
            let bad = Matrix::unit(m, n, m - 1, 0);
            assert_eq!(in_jordan_refl_closed_form(&bad), space.contains(&bad), "({m},{n})");
        }
    }

    #[test]
    fn hankel_witness_preconditions() {
        assert!(matches!(
            hankel_witness(3, 2, &Matrix::zeros(3, 2), &[G::zero(), G::zero()]),
            Err(Error::Precondition(_))
        ));
        // A lower-triangular entry is outside the closed form.
        let bad = Matrix::unit(2, 2, 1, 0);
        assert!(matches!(
            hankel_witness(2, 2, &bad, &[G::one(), G::one()]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn hyperinvariant_generators_j2j2() {
        let h = hyperinvariant_generators(&j2j2()).unwrap();
        // Kernel and range coincide; the closure is {0, ker N, C⁴}.
        assert_eq!(h.closure.len(), 3);
        let ker = Subspace::span_of(4, &[e(4, 0), e(4, 2)]).unwrap();
        assert!(h.closure.contains(&ker));
        assert!(h.closure.contains(&Subspace::zero(4)));
        assert!(h.closure.contains(&Subspace::full(4)));
        for m in &h.closure {
            assert!(is_hyperinvariant(&j2j2(), m).unwrap());
        }
    }

    #[test]
    fn hyperinvariant_membership_examples() {
        let m = Subspace::span_of(4, &[e(4, 0)]).unwrap();
        assert!(!is_hyperinvariant(&j2j2(), &m).unwrap());
    }

    #[test]
    fn module_property_of_refl() {
        // B′·T·A′ stays in the closed form for A′, B′ in the reflexive
        // covers of the commutants (upper-triangular algebras).
        let a = Matrix::from_int_rows(&[&[1, 2, 3], &[0, 4, 5], &[0, 0, 6]]);
        let b = Matrix::from_int_rows(&[&[2, 1], &[0, 3]]);
        let space = jordan_refl_closed_form(2, 3);
        for t in space.basis() {
            let moved = &(&b * t) * &a;
            assert!(space.contains(&moved));
        }
    }
}
