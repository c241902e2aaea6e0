//! Dense complex matrices and the leg-numbering calculus.
//!
//! Convention: row-major storage, and on a multi-leg space leg 1 is the
//! slowest-varying index. Legs are numbered from 1 in every public API, as
//! in the subscript notation `W₁₃`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// A dense complex matrix with explicit row and column counts.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad lengths and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidSignature(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::mismatch("matrix entries", rows * cols, data.len()));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(format!("entry ({}, {})", pos / cols, pos % cols)));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, d, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(entries: &[C64]) -> Self {
        let d = entries.len();
        Self::from_fn(d, d, |i, j| if i == j { entries[i] } else { ZERO })
    }

    /// The permutation matrix sending basis vector `j` to `image[j]`.
    pub fn permutation(image: &[usize]) -> Result<Self> {
        let d = image.len();
        let mut seen = vec![false; d];
        for &i in image {
            if i >= d || seen[i] {
                return Err(Error::InvalidPermutation(format!("{image:?}")));
            }
            seen[i] = true;
        }
        let mut m = Self::zeros(d, d);
        for (j, &i) in image.iter().enumerate() {
            m[(i, j)] = ONE;
        }
        Ok(m)
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

    /// Side length of a square matrix.
    pub fn side(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Hilbert–Schmidt inner product `Tr(self* other)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::mismatch("matrix product", self.cols, rhs.rows));
        }
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let brow = &rhs.data[k * p..(k + 1) * p];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(ComplexMatrix {
            rows: n,
            cols: p,
            data: out,
        })
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::mismatch("matrix-vector product", self.cols, v.len()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Product of a nonempty list of matrices, in list order.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Result<Self> {
        let mut it = factors.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidSignature("empty product".into()))?
            .clone();
        it.try_fold(first, |acc, m| acc.try_mul(m))
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<C64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<C64>) -> Result<Self> {
        Self::new(m.nrows(), m.ncols(), m.transpose().as_slice().to_vec())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on a shape mismatch; use [`ComplexMatrix::try_mul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

fn zip_with(a: &ComplexMatrix, b: &ComplexMatrix, f: impl Fn(C64, C64) -> C64) -> ComplexMatrix {
    assert!(
        a.rows == b.rows && a.cols == b.cols,
        "elementwise operation shape mismatch"
    );
    ComplexMatrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>8.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product with `a` on the slower index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * rb, a.cols * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

/// Kronecker product of a nonempty list, leftmost factor slowest.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut it = factors.into_iter();
    let first = it.next().expect("kron_all of an empty list").clone();
    it.fold(first, |acc, m| kron(&acc, m))
}

/// Max absolute entrywise difference.
pub fn residual(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows != b.rows {
        return Err(Error::mismatch("residual rows", a.rows, b.rows));
    }
    if a.cols != b.cols {
        return Err(Error::mismatch("residual columns", a.cols, b.cols));
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max))
}

/// Worst of `residual(x x*, I)` and `residual(x* x, I)`; infinite for
/// non-square input.
pub fn unitarity_residual(x: &ComplexMatrix) -> f64 {
    if !x.is_square() {
        return f64::INFINITY;
    }
    let id = ComplexMatrix::identity(x.rows);
    let xa = x.adjoint();
    let r1 = residual(&(x * &xa), &id).unwrap_or(f64::INFINITY);
    let r2 = residual(&(&xa * x), &id).unwrap_or(f64::INFINITY);
    r1.max(r2)
}

/// `(passed, residual)` for the unitarity test at `tol`.
pub fn is_unitary(x: &ComplexMatrix, tol: f64) -> (bool, f64) {
    let r = unitarity_residual(x);
    (r <= tol, r)
}

/// The flip `Σ: ℂ^{d1}⊗ℂ^{d2} → ℂ^{d2}⊗ℂ^{d1}`, `x⊗y ↦ y⊗x`.
pub fn flip(d1: usize, d2: usize) -> ComplexMatrix {
    let d = d1 * d2;
    let mut m = ComplexMatrix::zeros(d, d);
    for a in 0..d1 {
        for b in 0..d2 {
            m[(b * d1 + a, a * d2 + b)] = ONE;
        }
    }
    m
}

/// Ordered leg dimensions of a multi-factor space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SpaceSignature {
    dims: Vec<usize>,
}

impl TryFrom<Vec<usize>> for SpaceSignature {
    type Error = Error;
    fn try_from(dims: Vec<usize>) -> Result<Self> {
        SpaceSignature::new(dims)
    }
}

impl From<SpaceSignature> for Vec<usize> {
    fn from(s: SpaceSignature) -> Self {
        s.dims
    }
}

impl SpaceSignature {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::InvalidSignature("signature has no legs".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidSignature(format!(
                "leg dimensions must be positive: {dims:?}"
            )));
        }
        Ok(SpaceSignature { dims })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_legs(&self) -> usize {
        self.dims.len()
    }

    /// Dimension of leg `leg` (1-based).
    pub fn dim(&self, leg: usize) -> usize {
        self.dims[leg - 1]
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    /// Product of the dimensions at the given (1-based) legs.
    pub fn dim_of(&self, legs: &[usize]) -> usize {
        legs.iter().map(|&l| self.dims[l - 1]).product()
    }

    /// The signature with the given legs removed, or `None` if nothing remains.
    pub fn without(&self, legs: &[usize]) -> Option<SpaceSignature> {
        let dims: Vec<usize> = (1..=self.dims.len())
            .filter(|l| !legs.contains(l))
            .map(|l| self.dims[l - 1])
            .collect();
        SpaceSignature::new(dims).ok()
    }

    fn check_legs(&self, legs: &[usize]) -> Result<()> {
        if legs.is_empty() {
            return Err(Error::InvalidSignature("empty leg list".into()));
        }
        for w in legs.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidSignature(format!(
                    "legs must be strictly increasing: {legs:?}"
                )));
            }
        }
        if legs[0] == 0 || *legs.last().unwrap() > self.dims.len() {
            return Err(Error::InvalidSignature(format!(
                "legs {legs:?} out of range for {} legs",
                self.dims.len()
            )));
        }
        Ok(())
    }

    /// Multi-index of a flat basis index.
    fn split(&self, mut idx: usize, out: &mut [usize]) {
        for (o, &d) in out.iter_mut().zip(&self.dims).rev() {
            *o = idx % d;
            idx /= d;
        }
    }
}

impl fmt::Display for SpaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// A square operator placed on chosen legs of a signature.
#[derive(Clone, Debug)]
pub struct LegPlacement {
    op: ComplexMatrix,
    legs: Vec<usize>,
    signature: SpaceSignature,
}

impl LegPlacement {
    pub fn new(op: ComplexMatrix, legs: impl Into<Vec<usize>>, signature: SpaceSignature) -> Result<Self> {
        let legs = legs.into();
        signature.check_legs(&legs)?;
        if !op.is_square() {
            return Err(Error::mismatch("placed operator columns", op.rows, op.cols));
        }
        let expected = signature.dim_of(&legs);
        if op.rows != expected {
            return Err(Error::mismatch(
                format!("operator on legs {legs:?} of {signature}"),
                expected,
                op.rows,
            ));
        }
        Ok(LegPlacement { op, legs, signature })
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn signature(&self) -> &SpaceSignature {
        &self.signature
    }

    pub fn embed(&self) -> ComplexMatrix {
        embed_placement(self)
    }
}

/// Splits flat indices of `sig` into (index on `legs`, index on the rest).
fn leg_split_tables(sig: &SpaceSignature, legs: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let n = sig.total();
    let k = sig.num_legs();
    let mut multi = vec![0; k];
    let mut on = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    for idx in 0..n {
        sig.split(idx, &mut multi);
        let (mut a, mut b) = (0, 0);
        for leg in 1..=k {
            let d = sig.dims[leg - 1];
            if legs.contains(&leg) {
                a = a * d + multi[leg - 1];
            } else {
                b = b * d + multi[leg - 1];
            }
        }
        on.push(a);
        off.push(b);
    }
    (on, off)
}

fn embed_placement(p: &LegPlacement) -> ComplexMatrix {
    let sig = &p.signature;
    let n = sig.total();
    let m = p.op.rows;
    let (on, off) = leg_split_tables(sig, &p.legs);
    let rest = n / m;
    let mut inverse = vec![0; n];
    for idx in 0..n {
        inverse[on[idx] * rest + off[idx]] = idx;
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let (a, b) = (on[i], off[i]);
        for a2 in 0..m {
            let z = p.op[(a, a2)];
            if z != ZERO {
                out[(i, inverse[a2 * rest + b])] = z;
            }
        }
    }
    out
}

/// Acts as `op` on the listed legs and as the identity elsewhere.
pub fn embed_legs(p: &LegPlacement) -> ComplexMatrix {
    embed_placement(p)
}

/// Shorthand for `embed_legs(LegPlacement::new(op, legs, sig))`.
pub fn embed(op: &ComplexMatrix, legs: &[usize], sig: &SpaceSignature) -> Result<ComplexMatrix> {
    Ok(LegPlacement::new(op.clone(), legs.to_vec(), sig.clone())?.embed())
}

/// `op` placed on `legs` of the space with leg dimensions `dims`.
pub fn place(op: &ComplexMatrix, legs: &[usize], dims: &[usize]) -> Result<ComplexMatrix> {
    embed(op, legs, &SpaceSignature::new(dims.to_vec())?)
}

/// Product of placed factors on the space `dims`, leftmost factor leftmost.
pub fn leg_product(dims: &[usize], factors: &[(&ComplexMatrix, &[usize])]) -> Result<ComplexMatrix> {
    let sig = SpaceSignature::new(dims.to_vec())?;
    let mut acc: Option<ComplexMatrix> = None;
    for (op, legs) in factors {
        let placed = embed(op, legs, &sig)?;
        acc = Some(match acc {
            None => placed,
            Some(a) => a.try_mul(&placed)?,
        });
    }
    Ok(acc.unwrap_or_else(|| ComplexMatrix::identity(sig.total())))
}

/// Residual between two leg products on the same space.
pub fn leg_equation_residual(
    dims: &[usize],
    lhs: &[(&ComplexMatrix, &[usize])],
    rhs: &[(&ComplexMatrix, &[usize])],
) -> Result<f64> {
    residual(&leg_product(dims, lhs)?, &leg_product(dims, rhs)?)
}

fn check_perm(perm: &[usize], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    if perm.len() != k {
        return Err(Error::InvalidPermutation(format!(
            "{perm:?} has {} entries for {k} legs",
            perm.len()
        )));
    }
    for &p in perm {
        if p == 0 || p > k || seen[p - 1] {
            return Err(Error::InvalidPermutation(format!("{perm:?}")));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

/// The unitary reordering legs so that new leg `p` is old leg `perm[p-1]`,
/// together with the permuted signature.
pub fn leg_permutation(sig: &SpaceSignature, perm: &[usize]) -> Result<(ComplexMatrix, SpaceSignature)> {
    let k = sig.num_legs();
    check_perm(perm, k)?;
    let new_sig = SpaceSignature::new(perm.iter().map(|&p| sig.dims[p - 1]).collect::<Vec<_>>())?;
    let n = sig.total();
    let mut multi = vec![0; k];
    let mut image = Vec::with_capacity(n);
    for idx in 0..n {
        sig.split(idx, &mut multi);
        let mut j = 0;
        for (q, &p) in perm.iter().enumerate() {
            j = j * new_sig.dims[q] + multi[p - 1];
        }
        image.push(j);
    }
    Ok((ComplexMatrix::permutation(&image)?, new_sig))
}

/// Conjugates `x` by [`leg_permutation`]: returns `P x P*` on the permuted signature.
pub fn permute_legs(
    x: &ComplexMatrix,
    sig: &SpaceSignature,
    perm: &[usize],
) -> Result<(ComplexMatrix, SpaceSignature)> {
    if !x.is_square() || x.rows != sig.total() {
        return Err(Error::mismatch(format!("operator on {sig}"), sig.total(), x.rows));
    }
    let (p, new_sig) = leg_permutation(sig, perm)?;
    Ok((&(&p * x) * &p.adjoint(), new_sig))
}

/// Partial trace over the listed legs. Returns the operator on the remaining
/// legs (a 1×1 matrix if every leg is traced out).
pub fn partial_trace(x: &ComplexMatrix, sig: &SpaceSignature, legs: &[usize]) -> Result<ComplexMatrix> {
    sig.check_legs(legs)?;
    if !x.is_square() || x.rows != sig.total() {
        return Err(Error::mismatch(format!("operator on {sig}"), sig.total(), x.rows));
    }
    let n = sig.total();
    let traced = sig.dim_of(legs);
    let rest = n / traced;
    let (on, off) = leg_split_tables(sig, legs);
    let mut out = ComplexMatrix::zeros(rest, rest);
    for i in 0..n {
        for j in 0..n {
            if on[i] == on[j] {
                out[(off[i], off[j])] += x[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Result of a trivial-leg extraction: the reduced operator when the
/// re-embedding matches within tolerance, and the achieved residual.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub op: Option<ComplexMatrix>,
    pub residual: f64,
}

impl Extraction {
    pub fn ok_or(self, what: impl Into<String>) -> Result<ComplexMatrix> {
        match self.op {
            Some(op) => Ok(op),
            None => Err(Error::ExtractionFailed {
                what: what.into(),
                residual: self.residual,
            }),
        }
    }
}

/// Tests whether `x` acts trivially on `leg` and, if so, returns the operator
/// on the remaining legs.
pub fn extract_trivial_leg(x: &ComplexMatrix, sig: &SpaceSignature, leg: usize, tol: f64) -> Result<Extraction> {
    extract_trivial_legs(x, sig, &[leg], tol)
}

/// Multi-leg version of [`extract_trivial_leg`]. Extracting every leg yields
/// a 1×1 scalar.
pub fn extract_trivial_legs(x: &ComplexMatrix, sig: &SpaceSignature, legs: &[usize], tol: f64) -> Result<Extraction> {
    let traced = sig.dim_of(legs);
    let y = partial_trace(x, sig, legs)?.scale(C64::new(1.0 / traced as f64, 0.0));
    let back = match sig.without(legs) {
        Some(_) => {
            let others: Vec<usize> = (1..=sig.num_legs()).filter(|l| !legs.contains(l)).collect();
            embed(&y, &others, sig)?
        }
        None => ComplexMatrix::identity(sig.total()).scale(y[(0, 0)]),
    };
    let r = residual(x, &back)?;
    Ok(Extraction {
        op: (r <= tol).then_some(y),
        residual: r,
    })
}
