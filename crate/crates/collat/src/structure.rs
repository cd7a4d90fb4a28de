//! Nilpotent structure analysis — nil-index, Jordan type via the rank
//! sequence of powers, cyclic subspaces and their chains, Jordan bases and
//! similarity of nilpotents — plus the primary decomposition of a general
//! matrix with a supplied (and verified) spectrum.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Vector};
use crate::sample::VectorSample;
use crate::scalar::{GaussianRational, Rational};
use crate::subspace::{nullspace, Subspace};

/// Multiset of Jordan block sizes of a nilpotent matrix, kept in
/// descending order. The sizes sum to the ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JordanType {
    sizes: Vec<usize>,
}

impl JordanType {
    pub fn new(mut sizes: Vec<usize>) -> Self {
        assert!(sizes.iter().all(|&s| s > 0), "block sizes must be positive");
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        JordanType { sizes }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    /// Number of blocks of size at least `k`.
    pub fn blocks_of_size_at_least(&self, k: usize) -> usize {
        self.sizes.iter().filter(|&&s| s >= k).count()
    }

    /// All Jordan types of the given total dimension (partitions, each in
    /// descending order), enumerated deterministically.
    pub fn all_of_dim(total: usize) -> Vec<JordanType> {
        fn rec(remaining: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<JordanType>) {
            if remaining == 0 {
                out.push(JordanType {
                    sizes: current.clone(),
                });
                return;
            }
            for next in (1..=remaining.min(max)).rev() {
                current.push(next);
                rec(remaining - next, next, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        if total > 0 {
            rec(total, total, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Debug for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JordanType{:?}", self.sizes)
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", strs.join(","))
    }
}

/// The canonical nilpotent with the given type: J_{n₁} ⊕ … ⊕ J_{n_k},
/// blocks in descending order.
pub fn jordan_matrix(t: &JordanType) -> Matrix {
    let blocks: Vec<Matrix> = t.sizes().iter().map(|&s| Matrix::jordan_block(s)).collect();
    Matrix::block_diag(&blocks)
}

pub fn is_nilpotent(m: &Matrix) -> Result<bool> {
    m.require_square()?;
    Ok(m.pow(m.rows()).is_zero())
}

/// Smallest n ≥ 1 with Nⁿ = 0; the zero matrix has nil-index 1.
pub fn nil_index(n: &Matrix) -> Result<usize> {
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent);
    }
    let mut p = n.clone();
    for k in 1..=n.rows().max(1) {
        if p.is_zero() {
            return Ok(k);
        }
        p = &p * n;
    }
    // Unreachable: nilpotency was verified above.
    unreachable!("nil-index exceeded ambient dimension");
}

/// Jordan type from the rank sequence: the number of blocks of size ≥ k
/// equals rank(N^{k−1}) − rank(N^k).
pub fn jordan_type(n: &Matrix) -> Result<JordanType> {
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent);
    }
    let d = n.rows();
    if d == 0 {
        return Ok(JordanType { sizes: vec![] });
    }
    let mut ranks = vec![d];
    let mut p = n.clone();
    while ranks.last().copied().unwrap() > 0 {
        ranks.push(p.rank());
        p = &p * n;
    }
    let idx = ranks.len() - 1; // nil-index
    let mut sizes = Vec::new();
    for k in 1..=idx {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_k1 = if k < idx { ranks[k] - ranks[k + 1] } else { 0 };
        for _ in 0..at_least_k.saturating_sub(at_least_k1) {
            sizes.push(k);
        }
    }
    Ok(JordanType::new(sizes))
}

/// The cyclic subspace (A)ₓ = span{x, Ax, A²x, …}, built by Krylov
/// iteration up to stagnation.
pub fn cyclic_subspace(a: &Matrix, x: &[GaussianRational]) -> Result<Subspace> {
    a.require_square()?;
    if a.rows() != x.len() {
        return Err(Error::AmbientMismatch(a.rows(), x.len()));
    }
    let mut span = KrylovSpan::new(x.len());
    let mut v = x.to_vec();
    while span.add(&v) {
        v = a.mul_vec(&v);
    }
    Ok(span.subspace())
}

/// Incrementally reduced spanning set; used for Krylov iterations where we
/// only need stagnation detection and a final canonical form.
pub(crate) struct KrylovSpan {
    ambient: usize,
    rows: Vec<Vector>,       // echelon rows with unit pivots
    pivots: Vec<usize>,      // pivot column of each row
    originals: Vec<Vector>,  // the accepted vectors in insertion order
}

impl KrylovSpan {
    pub(crate) fn new(ambient: usize) -> Self {
        KrylovSpan {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
            originals: Vec::new(),
        }
    }

    /// Reduce `v` against the current rows; if independent, insert and
    /// return true.
    pub(crate) fn add(&mut self, v: &[GaussianRational]) -> bool {
        let mut w = v.to_vec();
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
            return false;
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
        self.originals.push(v.to_vec());
        true
    }

    pub(crate) fn subspace(&self) -> Subspace {
        if self.rows.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let m = Matrix::from_fn(self.ambient, self.rows.len(), |r, c| self.rows[c][r].clone());
        Subspace::from_columns(&m)
    }
}

/// Fraction-free span accumulator: elimination by cross-multiplication
/// (w ← pivot·w − w[p]·row) instead of pivot normalization, with rows
/// rescaled to primitive integer form on insertion. Integer inputs stay
/// integers throughout, which keeps the hot sampled checks on the inline
/// fast path of the scalar type. Used only for dimension and membership
/// queries; canonical subspaces are extracted through [`FfSpan::subspace`].
pub(crate) struct FfSpan {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl FfSpan {
    pub(crate) fn new(ambient: usize) -> Self {
        FfSpan {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, w: &mut Vector) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let a = row[p].clone();
            let b = std::mem::replace(&mut w[p], GaussianRational::zero());
            let mut grew = false;
            for c in 0..self.ambient {
                if c == p {
                    continue;
                }
                let rc = &row[c];
                if rc.is_zero() {
                    if !w[c].is_zero() {
                        w[c] = &a * &w[c];
                    }
                } else if w[c].is_zero() {
                    w[c] = -&(&b * rc);
                } else {
                    w[c] = &(&a * &w[c]) - &(&b * rc);
                }
                if !grew && entry_is_large(&w[c]) {
                    grew = true;
                }
            }
            // Rescale early so cross-multiplied entries stay in the inline
            // integer range.
            if grew {
                make_primitive(w);
            }
        }
    }

    /// Insert if independent; returns whether the vector was new.
    pub(crate) fn add(&mut self, v: &[GaussianRational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        make_primitive(&mut w);
        self.rows.push(w);
        self.pivots.push(p);
        true
    }

    pub(crate) fn contains(&self, v: &[GaussianRational]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    pub(crate) fn subspace(&self) -> Subspace {
        if self.rows.is_empty() {
            return Subspace::zero(self.ambient);
        }
        let m = Matrix::from_fn(self.ambient, self.rows.len(), |r, c| self.rows[c][r].clone());
        Subspace::from_columns(&m)
    }
}

fn entry_is_large(e: &GaussianRational) -> bool {
    let big = |r: &Rational| match r.as_small() {
        Some((n, d)) => n.unsigned_abs() > (1 << 40) || d > (1 << 40),
        None => true,
    };
    big(&e.re) || big(&e.im)
}

/// Rescale a nonzero vector by a positive rational so its components become
/// coprime integers. Pure rescaling, so spans and zero-tests are unchanged.
fn make_primitive(w: &mut Vector) {
    // Fast path: all components are inline integers.
    let mut g: u64 = 0;
    let mut fast = true;
    for e in w.iter() {
        for part in [&e.re, &e.im] {
            match part.as_small() {
                Some((n, 1)) => {
                    g = num_integer::gcd(g, n.unsigned_abs());
                }
                _ => {
                    fast = false;
                    break;
                }
            }
        }
        if !fast {
            break;
        }
    }
    if fast {
        if g > 1 {
            let inv = Rational::new(1, g as i64);
            let s = GaussianRational::from_rational(inv);
            for e in w.iter_mut() {
                if !e.is_zero() {
                    *e = &*e * &s;
                }
            }
        }
        return;
    }
    // General path: clear denominators, then divide by the numerator gcd.
    use num_bigint::BigInt;
    use num_traits::{One, Zero as _};
    let mut lcm = BigInt::one();
    for e in w.iter() {
        for part in [&e.re, &e.im] {
            if !part.is_zero() {
                lcm = num_integer::lcm(lcm, part.denom());
            }
        }
    }
    let mut gcd = BigInt::zero();
    for e in w.iter() {
        for part in [&e.re, &e.im] {
            if !part.is_zero() {
                let scaled = part.numer() * (&lcm / part.denom());
                gcd = num_integer::gcd(gcd, scaled);
            }
        }
    }
    if gcd.is_zero() {
        return;
    }
    let s = GaussianRational::from_rational(Rational::from_bigint(lcm, gcd));
    for e in w.iter_mut() {
        if !e.is_zero() {
            *e = &*e * &s;
        }
    }
}

/// The full chain of cyclic subspaces of a nilpotent N at a generator x:
/// chain\[j\] = span{N^{kₓ}x, …, N^{kₓ−j}x} for j = 0..=kₓ, strictly
/// increasing and each N-invariant. The zero generator has an empty chain.
#[derive(Clone, Debug)]
pub struct CyclicChain {
    pub generator: Vector,
    /// Krylov vectors x, Nx, …, N^{kₓ}x.
    pub krylov: Vec<Vector>,
    /// chain\[j\] has dimension j + 1.
    pub subspaces: Vec<Subspace>,
}

impl CyclicChain {
    /// kₓ: the largest k with N^k·x ≠ 0; `None` for the zero generator.
    pub fn height(&self) -> Option<usize> {
        if self.subspaces.is_empty() {
            None
        } else {
            Some(self.subspaces.len() - 1)
        }
    }

    /// The top of the chain, (N)ₓ itself.
    pub fn cyclic_subspace(&self) -> Subspace {
        self.subspaces
            .last()
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.generator.len()))
    }
}

/// Cyclic chain of a nilpotent matrix at x.
pub fn cyclic_chain(n: &Matrix, x: &[GaussianRational]) -> Result<CyclicChain> {
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent);
    }
    if n.rows() != x.len() {
        return Err(Error::AmbientMismatch(n.rows(), x.len()));
    }
    let mut krylov = Vec::new();
    let mut v = x.to_vec();
    while !v.iter().all(|c| c.is_zero()) {
        krylov.push(v.clone());
        v = n.mul_vec(&v);
    }
    // chain[j] = span of the last j+1 Krylov vectors.
    let mut subspaces = Vec::with_capacity(krylov.len());
    for j in 0..krylov.len() {
        let tail: Vec<Vector> = krylov[krylov.len() - 1 - j..].to_vec();
        subspaces.push(Subspace::span_of(x.len(), &tail)?);
    }
    Ok(CyclicChain {
        generator: x.to_vec(),
        krylov,
        subspaces,
    })
}

/// A single violation found by [`cycle_check`].
#[derive(Clone, Debug)]
pub struct CycleViolation {
    pub y: Vector,
    pub cyclic: Subspace,
}

/// Report of the cycle property test at one generator.
#[derive(Clone, Debug)]
pub struct CycleReport {
    pub tested: usize,
    pub violations: Vec<CycleViolation>,
}

impl CycleReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For sampled nonzero y ∈ (N)ₓ, check that (N)_y is a member of the chain
/// of (N)ₓ — i.e. that the interval [0, (N)ₓ] is the chain. Violations are
/// collected (none are expected; this is a theorem test).
pub fn cycle_check(n: &Matrix, x: &[GaussianRational], sample: &VectorSample) -> Result<CycleReport> {
    let chain = cyclic_chain(n, x)?;
    let mut report = CycleReport {
        tested: 0,
        violations: Vec::new(),
    };
    let Some(_) = chain.height() else {
        return Ok(report);
    };
    let k = chain.krylov.len();
    let coeff_sample = VectorSample::new(k, sample.random_count, sample.seed);
    for coeffs in coeff_sample.vectors() {
        // y = Σ coeffs[j]·Nʲx
        let mut y = vec![GaussianRational::zero(); x.len()];
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                for (r, kv) in chain.krylov[j].iter().enumerate() {
                    if !kv.is_zero() {
                        y[r] = &y[r] + &(c * kv);
                    }
                }
            }
        }
        if y.iter().all(|c| c.is_zero()) {
            continue;
        }
        report.tested += 1;
        let cy = cyclic_subspace(n, &y)?;
        if !chain.subspaces.iter().any(|s| *s == cy) {
            report.violations.push(CycleViolation { y, cyclic: cy });
        }
    }
    Ok(report)
}

/// One generalized eigenspace V_j = ker (A − λ_j·I)^{n_j} together with the
/// nilpotent part of the restriction in the chosen basis.
#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    pub eigenvalue: GaussianRational,
    /// Minimal exponent n_j (kernel stagnation point).
    pub exponent: usize,
    pub component: Subspace,
    /// Jordan basis of V_j as matrix columns: the change of basis under
    /// which the restriction takes its canonical form.
    pub basis: Matrix,
    /// N_j = A|_{V_j} − λ_j·I in that basis: exactly the canonical
    /// `jordan_matrix` of its type, nilpotent of nil-index n_j.
    pub nilpotent: Matrix,
}

/// The primary decomposition V = V₁ ⊕ … ⊕ V_s, A = ⊕ (λ_j·I + N_j).
#[derive(Clone, Debug)]
pub struct PrimaryDecomposition {
    pub ambient: usize,
    pub components: Vec<PrimaryComponent>,
}

impl PrimaryDecomposition {
    /// Concatenated component bases: an invertible ambient × ambient matrix
    /// whose column blocks span the components in order.
    pub fn change_of_basis(&self) -> Matrix {
        let blocks: Vec<Matrix> = self.components.iter().map(|c| c.basis.clone()).collect();
        let mut m = Matrix::zeros(self.ambient, self.ambient);
        let mut c0 = 0;
        for b in &blocks {
            for r in 0..self.ambient {
                for c in 0..b.cols() {
                    m.set(r, c0 + c, b.at(r, c).clone());
                }
            }
            c0 += b.cols();
        }
        m
    }

    /// Column offset of each component block in `change_of_basis`.
    pub fn block_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.components.len());
        let mut acc = 0;
        for c in &self.components {
            offsets.push(acc);
            acc += c.component.dim();
        }
        offsets
    }
}

/// Primary decomposition with a caller-supplied spectrum. The spectrum is
/// verified, not trusted: it must list each distinct eigenvalue exactly once,
/// every λ_j must have a nonzero generalized eigenspace, and the product of
/// the (A − λ_j·I) powers must annihilate the whole space.
pub fn primary_decompose(a: &Matrix, spectrum: &[GaussianRational]) -> Result<PrimaryDecomposition> {
    a.require_square()?;
    let d = a.rows();
    for (i, l) in spectrum.iter().enumerate() {
        if spectrum[..i].contains(l) {
            return Err(Error::DuplicateEigenvalue(l.to_string()));
        }
    }
    if spectrum.is_empty() && d > 0 {
        return Err(Error::SpectrumInvalid("empty spectrum".into()));
    }
    let mut components = Vec::with_capacity(spectrum.len());
    let mut annihilator = Matrix::identity(d);
    for lambda in spectrum {
        let shifted = a - &Matrix::diagonal(&vec![lambda.clone(); d]);
        // Kernel stagnation gives the minimal exponent.
        let mut power = shifted.clone();
        let mut prev_dim = 0;
        let mut exponent = 0;
        let mut kernel = Subspace::zero(d);
        for e in 1..=d {
            let k = nullspace(&power);
            if k.dim() == prev_dim {
                break;
            }
            prev_dim = k.dim();
            kernel = k;
            exponent = e;
            power = &power * &shifted;
        }
        if exponent == 0 {
            return Err(Error::SpectrumInvalid(format!(
                "{lambda} is not an eigenvalue (V_j = 0)"
            )));
        }
        annihilator = &annihilator * &shifted.pow(exponent);
        let echelon_basis = kernel.basis().clone();
        // Restriction of A to V_j: solve B·X = A·B, then change to a Jordan
        // basis of the nilpotent part so the stored restriction is the
        // canonical form and callers can move between coordinates exactly.
        let restriction = echelon_basis
            .solve_matrix(&(a * &echelon_basis))
            .expect("component is A-invariant");
        let raw_nilpotent =
            &restriction - &Matrix::diagonal(&vec![lambda.clone(); echelon_basis.cols()]);
        let (block_type, chains) = jordan_chains(&raw_nilpotent)?;
        let basis = &echelon_basis * &chains;
        let nilpotent = jordan_matrix(&block_type);
        debug_assert_eq!(
            &(a * &basis),
            &(&basis
                * &(&Matrix::diagonal(&vec![lambda.clone(); basis.cols()]) + &nilpotent))
        );
        components.push(PrimaryComponent {
            eigenvalue: lambda.clone(),
            exponent,
            component: kernel,
            basis,
            nilpotent,
        });
    }
    if !annihilator.is_zero() {
        return Err(Error::SpectrumInvalid(
            "the product of (A - λ·I) powers over the supplied spectrum does not vanish".into(),
        ));
    }
    let total: usize = components.iter().map(|c| c.component.dim()).sum();
    debug_assert_eq!(total, d, "components must sum to the ambient space");
    Ok(PrimaryDecomposition {
        ambient: d,
        components,
    })
}

/// Jordan chains of a nilpotent matrix: returns the type and an invertible P
/// with P⁻¹·N·P equal to the canonical `jordan_matrix` of that type.
pub fn jordan_chains(n: &Matrix) -> Result<(JordanType, Matrix)> {
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent);
    }
    let d = n.rows();
    if d == 0 {
        return Ok((JordanType { sizes: vec![] }, Matrix::zeros(0, 0)));
    }
    let index = nil_index(n)?;
    // Kernels of successive powers.
    let mut kernels = vec![Subspace::zero(d)];
    let mut p = n.clone();
    for _ in 1..=index {
        kernels.push(nullspace(&p));
        p = &p * n;
    }
    // Pick generators top-down: at level m, extend K_{m−1} plus the images
    // of higher chains to a basis of K_m; each new vector starts a chain.
    let mut generators: Vec<(usize, Vector)> = Vec::new(); // (size, generator)
    for m in (1..=index).rev() {
        let mut span = KrylovSpan::new(d);
        for c in 0..kernels[m - 1].dim() {
            span.add(&kernels[m - 1].basis().col_vec(c));
        }
        for (size, g) in &generators {
            if *size >= m {
                span.add(&n.pow(size - m).mul_vec(g));
            }
        }
        for c in 0..kernels[m].dim() {
            let cand = kernels[m].basis().col_vec(c);
            if span.add(&cand) {
                generators.push((m, cand));
            }
        }
    }
    generators.sort_by(|a, b| b.0.cmp(&a.0));
    let sizes: Vec<usize> = generators.iter().map(|(s, _)| *s).collect();
    let mut p = Matrix::zeros(d, d);
    let mut col = 0;
    for (size, g) in &generators {
        // Chain columns N^{s−1}g, …, Ng, g so the restriction is J_s.
        for j in (0..*size).rev() {
            let v = n.pow(j).mul_vec(g);
            for (r, value) in v.into_iter().enumerate() {
                p.set(r, col, value);
            }
            col += 1;
        }
    }
    let t = JordanType::new(sizes);
    debug_assert!(p.is_invertible());
    debug_assert_eq!(
        &(&p.inverse().unwrap() * &(n * &p)),
        &jordan_matrix(&t),
        "Jordan basis must conjugate N to its canonical form"
    );
    Ok((t, p))
}

/// A similarity S with S·N₁ = N₂·S (so N₂ = S·N₁·S⁻¹), or `None` when the
/// Jordan types differ. Built from the Jordan bases of both sides.
pub fn nilpotent_similarity(n1: &Matrix, n2: &Matrix) -> Result<Option<Matrix>> {
    if n1.rows() != n2.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            n1.rows(),
            n1.cols(),
            n2.rows(),
            n2.cols()
        )));
    }
    let (t1, p1) = jordan_chains(n1)?;
    let (t2, p2) = jordan_chains(n2)?;
    if t1 != t2 {
        return Ok(None);
    }
    // N_i = P_i · J · P_i⁻¹, so S = P₂ · P₁⁻¹ intertwines them.
    let s = &p2 * &p1.inverse().unwrap();
    debug_assert_eq!(&(&s * n1), &(n2 * &s));
    Ok(Some(s))
}

/// Partition of component indices into similarity classes of their
/// nilpotent parts: indices i, j share a class iff N_i and N_j are similar
/// (equal Jordan types). Classes are ordered by smallest member.
pub fn group_by_similarity(pd: &PrimaryDecomposition) -> Result<Vec<Vec<usize>>> {
    let mut types: Vec<JordanType> = Vec::with_capacity(pd.components.len());
    for c in &pd.components {
        types.push(jordan_type(&c.nilpotent)?);
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, t) in types.iter().enumerate() {
        if let Some(g) = groups.iter_mut().find(|g| &types[g[0]] == t) {
            g.push(i);
        } else {
            groups.push(vec![i]);
        }
    }
    Ok(groups)
}
