//! Representations of a multiplicative unitary: checks, tensor products,
//! intertwiners, the left/right duality and antimultiplicative
//! representations.
//!
//! A right representation on `K` is a unitary `S` on `K⊗H` with
//! `W₂₃S₁₂ = S₁₂S₁₃W₂₃`; a left representation is a unitary `V` on `H⊗K`
//! with `V₂₃W₁₂ = W₁₂V₁₃V₂₃`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multunit::{antimultiplicative_check, MultiplicativeUnitary};
use crate::report::CheckReport;
use crate::tensor::{
    extract_trivial_leg, flip, place, residual, unitarity_residual, ComplexMatrix, SpaceSignature, C64, ZERO,
};

/// Relative singular-value cutoff for intertwiner spaces.
pub const NULLSPACE_REL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

/// A representation of `base` on a `carrier_dim`-dimensional space. The
/// operator lives on `(k,d)` for right and `(d,k)` for left representations.
#[derive(Clone, Debug)]
pub struct Representation {
    side: Side,
    k: usize,
    base: Arc<MultiplicativeUnitary>,
    op: ComplexMatrix,
}

fn rep_shape(op: &ComplexMatrix, k: usize, d: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidSignature("carrier dimension must be positive".into()));
    }
    if !op.is_square() || op.rows() != k * d {
        return Err(Error::mismatch("representation operator side", k * d, op.rows()));
    }
    Ok(())
}

/// Unitarity and `W₂₃S₁₂ = S₁₂S₁₃W₂₃` on `(k,d,d)`.
pub fn right_rep_check(s: &ComplexMatrix, k: usize, m: &MultiplicativeUnitary, tol: f64) -> Result<CheckReport> {
    let d = m.dim();
    rep_shape(s, k, d)?;
    let dims = [k, d, d];
    let s12 = place(s, &[1, 2], &dims)?;
    let s13 = place(s, &[1, 3], &dims)?;
    let w23 = place(m.matrix(), &[2, 3], &dims)?;
    let r = residual(&(&w23 * &s12), &ComplexMatrix::product([&s12, &s13, &w23])?)?;
    Ok(CheckReport::group(
        "right representation",
        tol,
        vec![
            CheckReport::leaf("unitarity", unitarity_residual(s), tol),
            CheckReport::leaf("W23 S12 = S12 S13 W23", r, tol),
        ],
    ))
}

/// Unitarity and `V₂₃W₁₂ = W₁₂V₁₃V₂₃` on `(d,d,k)`.
pub fn left_rep_check(v: &ComplexMatrix, k: usize, m: &MultiplicativeUnitary, tol: f64) -> Result<CheckReport> {
    let d = m.dim();
    rep_shape(v, k, d)?;
    let dims = [d, d, k];
    let v13 = place(v, &[1, 3], &dims)?;
    let v23 = place(v, &[2, 3], &dims)?;
    let w12 = place(m.matrix(), &[1, 2], &dims)?;
    let r = residual(&(&v23 * &w12), &ComplexMatrix::product([&w12, &v13, &v23])?)?;
    Ok(CheckReport::group(
        "left representation",
        tol,
        vec![
            CheckReport::leaf("unitarity", unitarity_residual(v), tol),
            CheckReport::leaf("V23 W12 = W12 V13 V23", r, tol),
        ],
    ))
}

impl Representation {
    /// Validates the representation equation for `side` at `tol`.
    pub fn new(side: Side, k: usize, base: Arc<MultiplicativeUnitary>, op: ComplexMatrix, tol: f64) -> Result<Self> {
        let rep = Self::new_unchecked(side, k, base, op)?;
        rep.check(tol)?.into_result()?;
        Ok(rep)
    }

    /// Checks shapes only.
    pub fn new_unchecked(side: Side, k: usize, base: Arc<MultiplicativeUnitary>, op: ComplexMatrix) -> Result<Self> {
        rep_shape(&op, k, base.dim())?;
        Ok(Representation { side, k, base, op })
    }

    pub(crate) fn from_parts(side: Side, k: usize, base: Arc<MultiplicativeUnitary>, op: ComplexMatrix) -> Self {
        debug_assert_eq!(op.rows(), k * base.dim());
        Representation { side, k, base, op }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn carrier_dim(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &Arc<MultiplicativeUnitary> {
        &self.base
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    /// Leg dimensions of the operator: `(k,d)` or `(d,k)`.
    pub fn dims(&self) -> [usize; 2] {
        match self.side {
            Side::Right => [self.k, self.base.dim()],
            Side::Left => [self.base.dim(), self.k],
        }
    }

    pub fn check(&self, tol: f64) -> Result<CheckReport> {
        match self.side {
            Side::Right => right_rep_check(&self.op, self.k, &self.base, tol),
            Side::Left => left_rep_check(&self.op, self.k, &self.base, tol),
        }
    }

    /// Same side, base and carrier, operators equal within `tol`.
    pub fn approx_eq(&self, other: &Representation, tol: f64) -> bool {
        self.side == other.side
            && self.k == other.k
            && same_base(&self.base, &other.base)
            && residual(&self.op, &other.op).is_ok_and(|r| r <= tol)
    }
}

fn same_base(a: &Arc<MultiplicativeUnitary>, b: &Arc<MultiplicativeUnitary>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn compatible(a: &Representation, b: &Representation, side: Option<Side>) -> Result<()> {
    if a.side != b.side {
        return Err(Error::SideMismatch(format!(
            "{} and {} representations",
            a.side, b.side
        )));
    }
    if let Some(s) = side {
        if a.side != s {
            return Err(Error::SideMismatch(format!(
                "expected {s} representations, got {}",
                a.side
            )));
        }
    }
    if !same_base(&a.base, &b.base) {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// `S¹⊠S² = S¹₁₃S²₂₃` on `(k₁,k₂,d)`.
pub fn tensor_right(a: &Representation, b: &Representation) -> Result<Representation> {
    compatible(a, b, Some(Side::Right))?;
    let dims = [a.k, b.k, a.base.dim()];
    let op = &place(&a.op, &[1, 3], &dims)? * &place(&b.op, &[2, 3], &dims)?;
    Ok(Representation::from_parts(Side::Right, a.k * b.k, a.base.clone(), op))
}

/// `V¹⊠V² = V²₁₃V¹₁₂` on `(d,k₁,k₂)`.
pub fn tensor_left(a: &Representation, b: &Representation) -> Result<Representation> {
    compatible(a, b, Some(Side::Left))?;
    let dims = [a.base.dim(), a.k, b.k];
    let op = &place(&b.op, &[1, 3], &dims)? * &place(&a.op, &[1, 2], &dims)?;
    Ok(Representation::from_parts(Side::Left, a.k * b.k, a.base.clone(), op))
}

/// Tensor product for either side.
pub fn tensor(a: &Representation, b: &Representation) -> Result<Representation> {
    match a.side {
        Side::Right => tensor_right(a, b),
        Side::Left => tensor_left(a, b),
    }
}

/// `V ↦ ΣV*Σ`: a left representation of `W` becomes a right representation
/// of the dual `Ŵ`.
pub fn left_to_right_dual(v: &Representation) -> Result<Representation> {
    if v.side != Side::Left {
        return Err(Error::SideMismatch(
            "left_to_right_dual expects a left representation".into(),
        ));
    }
    let (d, k) = (v.base.dim(), v.k);
    let op = ComplexMatrix::product([&flip(d, k), &v.op.adjoint(), &flip(k, d)])?;
    Ok(Representation::from_parts(Side::Right, k, Arc::new(v.base.dual()), op))
}

/// Inverse of [`left_to_right_dual`].
pub fn right_to_left_dual(s: &Representation) -> Result<Representation> {
    if s.side != Side::Right {
        return Err(Error::SideMismatch(
            "right_to_left_dual expects a right representation".into(),
        ));
    }
    let (d, k) = (s.base.dim(), s.k);
    let op = ComplexMatrix::product([&flip(k, d), &s.op.adjoint(), &flip(d, k)])?;
    Ok(Representation::from_parts(Side::Left, k, Arc::new(s.base.dual()), op))
}

/// `τ(ℂᵏ)`: the identity as a right representation.
pub fn trivial_rep(m: &Arc<MultiplicativeUnitary>, k: usize) -> Representation {
    trivial_rep_on(Side::Right, m, k)
}

/// The identity as a representation on either side.
pub fn trivial_rep_on(side: Side, m: &Arc<MultiplicativeUnitary>, k: usize) -> Representation {
    Representation::from_parts(side, k, m.clone(), ComplexMatrix::identity(k * m.dim()))
}

/// Block-diagonal sum in the carrier leg.
pub fn direct_sum(a: &Representation, b: &Representation) -> Result<Representation> {
    compatible(a, b, None)?;
    let (d, k1, k2) = (a.base.dim(), a.k, b.k);
    let k = k1 + k2;
    let split = |i: usize| match a.side {
        Side::Right => (i / d, i % d),
        Side::Left => (i % k, i / k),
    };
    let op = ComplexMatrix::from_fn(k * d, k * d, |i, j| {
        let ((p, x), (q, y)) = (split(i), split(j));
        let at = |m: &ComplexMatrix, kk: usize, p: usize, q: usize| match a.side {
            Side::Right => m[(p * d + x, q * d + y)],
            Side::Left => m[(x * kk + p, y * kk + q)],
        };
        match (p < k1, q < k1) {
            (true, true) => at(&a.op, k1, p, q),
            (false, false) => at(&b.op, k2, p - k1, q - k1),
            _ => ZERO,
        }
    });
    Ok(Representation::from_parts(a.side, k, a.base.clone(), op))
}

/// An orthonormal basis of an intertwiner space together with the full
/// singular spectrum of the linear condition it solves.
#[derive(Clone, Debug)]
pub struct IntertwinerBasis {
    pub elements: Vec<ComplexMatrix>,
    /// All singular values of the linearized condition, descending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub source_dim: usize,
    pub target_dim: usize,
}

impl IntertwinerBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Ratio of the smallest retained singular value to the largest
    /// discarded one; infinite when one side of the cut is empty or the
    /// discarded values are exactly zero.
    pub fn gap(&self) -> f64 {
        let r = self.singular_values.len() - self.dim();
        if r == 0 || r == self.singular_values.len() {
            return f64::INFINITY;
        }
        let kept = self.singular_values[r - 1];
        let dropped = self.singular_values[r];
        if dropped == 0.0 {
            f64::INFINITY
        } else {
            kept / dropped
        }
    }
}

/// The matrix of `a ↦ U²(a⊗1) − (a⊗1)U¹` (right) or `a ↦ V²(1⊗a) − (1⊗a)V¹`
/// (left), acting on row-major vectorized `a ∈ B(ℂ^{k₁}, ℂ^{k₂})`.
pub fn intertwiner_map(a: &Representation, b: &Representation) -> Result<ComplexMatrix> {
    compatible(a, b, None)?;
    let (d, k1, k2) = (a.base.dim(), a.k, b.k);
    let rows = k2 * d * k1 * d;
    let cols = k2 * k1;
    let mut l = ComplexMatrix::zeros(rows, cols);
    let (u1, u2) = (&a.op, &b.op);
    for i in 0..k2 {
        for j in 0..k1 {
            let col = i * k1 + j;
            match a.side {
                Side::Right => {
                    // U²(E_ij⊗1)[(r,x),(j,y)] = U²[(r,x),(i,y)];
                    // (E_ij⊗1)U¹[(i,x),(q,y)] = U¹[(j,x),(q,y)].
                    for r in 0..k2 {
                        for x in 0..d {
                            for y in 0..d {
                                let row = (r * d + x) * (k1 * d) + (j * d + y);
                                l[(row, col)] += u2[(r * d + x, i * d + y)];
                            }
                        }
                    }
                    for x in 0..d {
                        for q in 0..k1 {
                            for y in 0..d {
                                let row = (i * d + x) * (k1 * d) + (q * d + y);
                                l[(row, col)] -= u1[(j * d + x, q * d + y)];
                            }
                        }
                    }
                }
                Side::Left => {
                    // V²(1⊗E_ij)[(x,r),(y,j)] = V²[(x,r),(y,i)];
                    // (1⊗E_ij)V¹[(x,i),(y,q)] = V¹[(x,j),(y,q)].
                    for x in 0..d {
                        for r in 0..k2 {
                            for y in 0..d {
                                let row = (x * k2 + r) * (d * k1) + (y * k1 + j);
                                l[(row, col)] += u2[(x * k2 + r, y * k2 + i)];
                            }
                        }
                    }
                    for x in 0..d {
                        for y in 0..d {
                            for q in 0..k1 {
                                let row = (x * k2 + i) * (d * k1) + (y * k1 + q);
                                l[(row, col)] -= u1[(x * k1 + j, y * k1 + q)];
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(l)
}

/// Orthonormal basis of the null space of `l`, cut at `rel_tol` times the
/// largest singular value. Returns `(basis vectors, singular values, threshold)`.
pub fn null_space(l: &ComplexMatrix, rel_tol: f64) -> (Vec<Vec<C64>>, Vec<f64>, f64) {
    let n = l.cols();
    let mut m = l.to_nalgebra();
    if m.nrows() < n {
        m = m.resize_vertically(n, ZERO);
    }
    let svd = nalgebra::SVD::new(m, false, true);
    let v_t = svd.v_t.expect("requested V");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.first().copied().unwrap_or(0.0);
    let threshold = rel_tol * smax;
    let null: Vec<usize> = (0..n).filter(|&i| sv[i] <= threshold).collect();
    if null.is_empty() {
        return (Vec::new(), sv, threshold);
    }
    // Columns of V spanning the null space.
    let raw = DMatrix::from_fn(n, null.len(), |r, c| v_t[(null[c], r)].conj());
    (canonical_basis(&raw), sv, threshold)
}

/// A deterministic orthonormal basis for the column span of `q` (which must
/// have orthonormal columns): project standard basis vectors, pivoting on
/// the largest remaining norm, then fix phases so the first significant
/// entry is real and positive.
fn canonical_basis(q: &DMatrix<C64>) -> Vec<Vec<C64>> {
    let (n, r) = q.shape();
    let proj = q * q.adjoint();
    let mut candidates: Vec<Vec<C64>> = (0..n).map(|j| proj.column(j).iter().copied().collect()).collect();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(r);
    let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..r {
        let mut best = 0;
        let mut best_norm = -1.0;
        for (j, c) in candidates.iter().enumerate() {
            let nj = norm(c);
            if nj > best_norm * (1.0 + 1e-9) {
                best = j;
                best_norm = nj;
            }
        }
        let mut v = candidates[best].clone();
        for b in &basis {
            let ip: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= ip * bi;
            }
        }
        let nv = norm(&v);
        for z in v.iter_mut() {
            *z /= nv;
        }
        if let Some(first) = v.iter().find(|z| z.norm() > 1e-10).copied() {
            let phase = first.conj() / first.norm();
            for z in v.iter_mut() {
                *z *= phase;
            }
        }
        for c in candidates.iter_mut() {
            let ip: C64 = v.iter().zip(c.iter()).map(|(x, y)| x.conj() * y).sum();
            for (ci, vi) in c.iter_mut().zip(&v) {
                *ci -= ip * vi;
            }
        }
        basis.push(v);
    }
    basis
}

/// Hilbert–Schmidt orthonormal basis of `Hom(a, b)`, computed from the SVD
/// of [`intertwiner_map`] with relative cutoff `rel_tol`.
pub fn intertwiner_basis(a: &Representation, b: &Representation, rel_tol: f64) -> Result<IntertwinerBasis> {
    let l = intertwiner_map(a, b)?;
    let (vecs, singular_values, threshold) = null_space(&l, rel_tol);
    let elements = vecs
        .into_iter()
        .map(|v| ComplexMatrix::new(b.k, a.k, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntertwinerBasis {
        elements,
        singular_values,
        threshold,
        source_dim: a.k,
        target_dim: b.k,
    })
}

/// Residual of the intertwining condition for a single operator `t: K¹→K²`.
pub fn intertwiner_residual(t: &ComplexMatrix, a: &Representation, b: &Representation) -> Result<f64> {
    compatible(a, b, None)?;
    if t.rows() != b.k || t.cols() != a.k {
        return Err(Error::mismatch("intertwiner shape", b.k * a.k, t.rows() * t.cols()));
    }
    let id = ComplexMatrix::identity(a.base.dim());
    let amp = match a.side {
        Side::Right => crate::tensor::kron(t, &id),
        Side::Left => crate::tensor::kron(&id, t),
    };
    residual(&(&b.op * &amp), &(&amp * &a.op))
}

/// An antimultiplicative unitary `U^λ` on `(d,d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiBase {
    pub dim: usize,
    pub u: ComplexMatrix,
}

impl AntiBase {
    pub fn new(u: ComplexMatrix, dim: usize, tol: f64) -> Result<Self> {
        antimultiplicative_check(&u, dim, tol)?.into_result()?;
        Ok(AntiBase { dim, u })
    }
}

/// A representation `U^x` on `(d,k)` of an antimultiplicative unitary:
/// `U^x₂₃U^x₁₃U^λ₁₂ = U^λ₁₂U^x₂₃`.
#[derive(Clone, Debug)]
pub struct AntiRep {
    k: usize,
    base: Arc<AntiBase>,
    op: ComplexMatrix,
}

/// Unitarity and `U^x₂₃U^x₁₃U^λ₁₂ = U^λ₁₂U^x₂₃` on `(d,d,k)`.
pub fn anti_rep_check(
    x: &ComplexMatrix,
    k: usize,
    u_lambda: &ComplexMatrix,
    d: usize,
    tol: f64,
) -> Result<CheckReport> {
    rep_shape(x, k, d)?;
    if !u_lambda.is_square() || u_lambda.rows() != d * d {
        return Err(Error::mismatch("antimultiplicative base", d * d, u_lambda.rows()));
    }
    let dims = [d, d, k];
    let x13 = place(x, &[1, 3], &dims)?;
    let x23 = place(x, &[2, 3], &dims)?;
    let l12 = place(u_lambda, &[1, 2], &dims)?;
    let r = residual(&ComplexMatrix::product([&x23, &x13, &l12])?, &(&l12 * &x23))?;
    Ok(CheckReport::group(
        "anti-representation",
        tol,
        vec![
            CheckReport::leaf("unitarity", unitarity_residual(x), tol),
            CheckReport::leaf("X23 X13 L12 = L12 X23", r, tol),
        ],
    ))
}

impl AntiRep {
    pub fn new(k: usize, base: Arc<AntiBase>, op: ComplexMatrix, tol: f64) -> Result<Self> {
        anti_rep_check(&op, k, &base.u, base.dim, tol)?.into_result()?;
        Ok(AntiRep { k, base, op })
    }

    pub fn new_unchecked(k: usize, base: Arc<AntiBase>, op: ComplexMatrix) -> Result<Self> {
        rep_shape(&op, k, base.dim)?;
        Ok(AntiRep { k, base, op })
    }

    pub fn trivial(base: &Arc<AntiBase>, k: usize) -> Self {
        AntiRep {
            k,
            base: base.clone(),
            op: ComplexMatrix::identity(base.dim * k),
        }
    }

    /// `U^λ` as a representation of itself.
    pub fn regular(base: &Arc<AntiBase>) -> Self {
        AntiRep {
            k: base.dim,
            base: base.clone(),
            op: base.u.clone(),
        }
    }

    pub fn carrier_dim(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &Arc<AntiBase> {
        &self.base
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    pub fn check(&self, tol: f64) -> Result<CheckReport> {
        anti_rep_check(&self.op, self.k, &self.base.u, self.base.dim, tol)
    }
}

/// `U⊠V = V₁₃U₁₂` on `(d,k₁,k₂)`.
pub fn tensor_anti(u: &AntiRep, v: &AntiRep) -> Result<AntiRep> {
    if !(Arc::ptr_eq(&u.base, &v.base) || u.base == v.base) {
        return Err(Error::BaseMismatch);
    }
    let dims = [u.base.dim, u.k, v.k];
    let op = &place(&v.op, &[1, 3], &dims)? * &place(&u.op, &[1, 2], &dims)?;
    Ok(AntiRep {
        k: u.k * v.k,
        base: u.base.clone(),
        op,
    })
}

/// Data linking a right absorber `ρ` (unitary `U^ρ` on `H`) with a left
/// absorber `λ` (antimultiplicative `Ǔ^λ` on `Ȟ`): `v = U^λ` and `w = Ǔ^ρ`,
/// both on `(Ȟ,H)`.
#[derive(Clone, Debug)]
pub struct MixedData {
    pub right: Arc<MultiplicativeUnitary>,
    pub left: Arc<AntiBase>,
    pub v: ComplexMatrix,
    pub w: ComplexMatrix,
}

impl MixedData {
    pub fn new(
        right: Arc<MultiplicativeUnitary>,
        left: Arc<AntiBase>,
        v: ComplexMatrix,
        w: ComplexMatrix,
    ) -> Result<Self> {
        let n = left.dim * right.dim();
        for (name, m) in [("V", &v), ("W", &w)] {
            if !m.is_square() || m.rows() != n {
                return Err(Error::mismatch(format!("mixed operator {name} on (Ȟ,H)"), n, m.rows()));
            }
        }
        Ok(MixedData { right, left, v, w })
    }
}

pub enum TransferInput<'a> {
    Rep(&'a Representation),
    Anti(&'a AntiRep),
}

#[derive(Clone, Debug)]
pub enum TransferOutput {
    Rep(Representation),
    Anti(AntiRep),
}

/// `Ǔ^x₁₂ = W₁₃*(U^x₂₃)*W₁₃U^x₂₃` on `(Ȟ,K,H)`; the right-hand side must
/// act trivially on leg 3.
pub fn rep_to_antirep(x: &Representation, data: &MixedData, tol: f64) -> Result<AntiRep> {
    if x.side != Side::Right {
        return Err(Error::SideMismatch(
            "rep_to_antirep expects a right representation".into(),
        ));
    }
    if !same_base(&x.base, &data.right) {
        return Err(Error::BaseMismatch);
    }
    let dims = [data.left.dim, x.k, data.right.dim()];
    let w13 = place(&data.w, &[1, 3], &dims)?;
    let x23 = place(&x.op, &[2, 3], &dims)?;
    let rhs = ComplexMatrix::product([&w13.adjoint(), &x23.adjoint(), &w13, &x23])?;
    let sig = SpaceSignature::new(dims.to_vec())?;
    let op = extract_trivial_leg(&rhs, &sig, 3, tol)?.ok_or("rep to anti-rep transfer, leg 3")?;
    Ok(AntiRep {
        k: x.k,
        base: data.left.clone(),
        op,
    })
}

/// `U^x₂₃ = V₁₃*(Ǔ^x₁₂)*V₁₃Ǔ^x₁₂` on `(Ȟ,K,H)`; the right-hand side must
/// act trivially on leg 1.
pub fn antirep_to_rep(x: &AntiRep, data: &MixedData, tol: f64) -> Result<Representation> {
    if !(Arc::ptr_eq(&x.base, &data.left) || *x.base == *data.left) {
        return Err(Error::BaseMismatch);
    }
    let dims = [data.left.dim, x.k, data.right.dim()];
    let v13 = place(&data.v, &[1, 3], &dims)?;
    let x12 = place(&x.op, &[1, 2], &dims)?;
    let rhs = ComplexMatrix::product([&v13.adjoint(), &x12.adjoint(), &v13, &x12])?;
    let sig = SpaceSignature::new(dims.to_vec())?;
    let op = extract_trivial_leg(&rhs, &sig, 1, tol)?.ok_or("anti-rep to rep transfer, leg 1")?;
    Ok(Representation::from_parts(Side::Right, x.k, data.right.clone(), op))
}

/// Dispatches to [`rep_to_antirep`] or [`antirep_to_rep`].
pub fn rep_antirep_transfer(x: TransferInput<'_>, data: &MixedData, tol: f64) -> Result<TransferOutput> {
    match x {
        TransferInput::Rep(r) => rep_to_antirep(r, data, tol).map(TransferOutput::Anti),
        TransferInput::Anti(a) => antirep_to_rep(a, data, tol).map(TransferOutput::Rep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multunit::GroupTable;
    use crate::tensor::testutil::{random_unitary, rng};

    fn group(n: usize) -> Arc<MultiplicativeUnitary> {
        Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(n)))
    }

    #[test]
    fn trivial_and_self_representations_pass() {
        let m = group(3);
        for side in [Side::Right, Side::Left] {
            let t = trivial_rep_on(side, &m, 2);
            assert_eq!(t.check(0.0).unwrap().residual, 0.0);
        }
        assert!(m.as_right_rep().check(0.0).unwrap().passed);
        assert!(m.as_left_rep().check(0.0).unwrap().passed);
    }

    #[test]
    fn random_unitary_is_not_a_representation() {
        let m = group(2);
        let s = random_unitary(4, &mut rng(21));
        assert!(!right_rep_check(&s, 2, &m, 1e-10).unwrap().passed);
        assert!(Representation::new(Side::Right, 2, m, s, 1e-10)
            .unwrap_err()
            .is_check_failure());
    }

    #[test]
    fn dual_of_right_rep_is_not_a_left_rep_of_the_same_unitary() {
        let m = group(3);
        let s = flip(3, 3);
        let v = ComplexMatrix::product([&s, &m.matrix().adjoint(), &s]).unwrap();
        assert!(!left_rep_check(&v, 3, &m, 1e-10).unwrap().passed);
    }

    #[test]
    fn tensor_unit_and_associativity() {
        let m = group(2);
        let w = m.as_right_rep();
        let unit = trivial_rep(&m, 1);
        assert!(tensor_right(&unit, &w).unwrap().approx_eq(&w, 0.0));
        let ww = tensor_right(&w, &w).unwrap();
        assert_eq!(ww.check(0.0).unwrap().residual, 0.0);
        let s = direct_sum(&w, &unit).unwrap();
        let l = tensor_right(&tensor_right(&w, &s).unwrap(), &w).unwrap();
        let r = tensor_right(&w, &tensor_right(&s, &w).unwrap()).unwrap();
        assert_eq!(residual(l.op(), r.op()).unwrap(), 0.0);
    }

    #[test]
    fn left_tensor_products() {
        let m = group(3);
        let v = m.as_left_rep();
        let unit = trivial_rep_on(Side::Left, &m, 1);
        assert!(tensor_left(&unit, &v).unwrap().approx_eq(&v, 0.0));
        assert!(tensor_left(&v, &v).unwrap().check(0.0).unwrap().passed);
        let l = tensor_left(&tensor_left(&v, &unit).unwrap(), &v).unwrap();
        let r = tensor_left(&v, &tensor_left(&unit, &v).unwrap()).unwrap();
        assert_eq!(residual(l.op(), r.op()).unwrap(), 0.0);
        assert!(matches!(
            tensor_left(&v, &m.as_right_rep()),
            Err(Error::SideMismatch(_))
        ));
    }

    #[test]
    fn left_to_right_duality() {
        let m = group(3);
        let t = left_to_right_dual(&trivial_rep_on(Side::Left, &m, 2)).unwrap();
        assert_eq!(t.op(), &ComplexMatrix::identity(6));
        let w_hat = left_to_right_dual(&m.as_left_rep()).unwrap();
        assert_eq!(w_hat.op(), m.dual().matrix());
        assert!(w_hat.check(0.0).unwrap().passed);
        let back = right_to_left_dual(&w_hat).unwrap();
        assert!(back.approx_eq(&m.as_left_rep(), 0.0));
        let v = m.as_left_rep();
        let vv = tensor_left(&v, &v).unwrap();
        let lhs = left_to_right_dual(&vv).unwrap();
        let rhs = tensor_right(&left_to_right_dual(&v).unwrap(), &left_to_right_dual(&v).unwrap()).unwrap();
        assert!(residual(lhs.op(), rhs.op()).unwrap() <= 1e-10);
    }

    #[test]
    fn direct_sums() {
        let m = group(2);
        let one = trivial_rep(&m, 1);
        assert!(direct_sum(&one, &one).unwrap().approx_eq(&trivial_rep(&m, 2), 0.0));
        let w = m.as_right_rep();
        assert_eq!(direct_sum(&w, &w).unwrap().check(0.0).unwrap().residual, 0.0);
        let v = m.as_left_rep();
        assert_eq!(direct_sum(&v, &v).unwrap().check(0.0).unwrap().residual, 0.0);
    }

    #[test]
    fn trivial_hom_spaces() {
        let m = group(3);
        let h = intertwiner_basis(&trivial_rep(&m, 1), &trivial_rep(&m, 1), NULLSPACE_REL_TOL).unwrap();
        assert_eq!(h.dim(), 1);
        let h = intertwiner_basis(&trivial_rep(&m, 2), &trivial_rep(&m, 3), NULLSPACE_REL_TOL).unwrap();
        assert_eq!(h.dim(), 6);
    }

    #[test]
    fn hom_basis_is_orthonormal_and_intertwines() {
        let m = group(3);
        for side in [Side::Right, Side::Left] {
            let w = match side {
                Side::Right => m.as_right_rep(),
                Side::Left => m.as_left_rep(),
            };
            let s = direct_sum(&w, &trivial_rep_on(side, &m, 1)).unwrap();
            let h = intertwiner_basis(&w, &s, NULLSPACE_REL_TOL).unwrap();
            assert!(h.dim() >= 3);
            for (i, a) in h.elements.iter().enumerate() {
                assert!(intertwiner_residual(a, &w, &s).unwrap() <= 1e-10);
                for (j, b) in h.elements.iter().enumerate() {
                    let ip = a.hs_inner(b);
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - C64::new(expected, 0.0)).norm() <= 1e-10);
                }
            }
            assert!(h.gap() >= 1e4);
        }
    }

    #[test]
    fn composition_stays_in_hom() {
        let m = group(2);
        let w = m.as_right_rep();
        let ww = tensor_right(&w, &w).unwrap();
        let ab = intertwiner_basis(&w, &ww, NULLSPACE_REL_TOL).unwrap();
        let bc = intertwiner_basis(&ww, &w, NULLSPACE_REL_TOL).unwrap();
        for f in &ab.elements {
            for g in &bc.elements {
                assert!(intertwiner_residual(&(g * f), &w, &w).unwrap() <= 1e-10);
            }
        }
        // Adjoints of intertwiners between unitaries are intertwiners.
        for f in &ab.elements {
            assert!(intertwiner_residual(&f.adjoint(), &ww, &w).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn identity_arrow_forces_equal_representations() {
        let m = group(2);
        let w = m.as_right_rep();
        let t = trivial_rep(&m, 2);
        assert!(intertwiner_residual(&ComplexMatrix::identity(2), &w, &t).unwrap() > 0.5);
        assert!(intertwiner_residual(&ComplexMatrix::identity(2), &w, &w).unwrap() == 0.0);
    }

    fn z2_anti() -> Arc<AntiBase> {
        let m = group(2);
        Arc::new(AntiBase::new(m.matrix().adjoint(), 2, 0.0).unwrap())
    }

    #[test]
    fn anti_representations() {
        let base = z2_anti();
        assert!(AntiRep::trivial(&base, 3).check(0.0).unwrap().passed);
        let reg = AntiRep::regular(&base);
        assert!(reg.check(0.0).unwrap().passed);
        let rr = tensor_anti(&reg, &reg).unwrap();
        assert!(rr.check(0.0).unwrap().passed);
        let unit = AntiRep::trivial(&base, 1);
        assert_eq!(tensor_anti(&unit, &reg).unwrap().op(), reg.op());
        let l = tensor_anti(&tensor_anti(&reg, &unit).unwrap(), &reg).unwrap();
        let r = tensor_anti(&reg, &tensor_anti(&unit, &reg).unwrap()).unwrap();
        assert_eq!(residual(l.op(), r.op()).unwrap(), 0.0);
        let x = random_unitary(4, &mut rng(23));
        assert!(!anti_rep_check(&x, 2, &base.u, 2, 1e-10).unwrap().passed);
    }

    #[test]
    fn degenerate_transfer_is_identity() {
        let m = Arc::new(MultiplicativeUnitary::trivial());
        let l = Arc::new(AntiBase::new(ComplexMatrix::identity(1), 1, 0.0).unwrap());
        let data = MixedData::new(
            m.clone(),
            l.clone(),
            ComplexMatrix::identity(1),
            ComplexMatrix::identity(1),
        )
        .unwrap();
        let t = trivial_rep(&m, 2);
        let a = rep_to_antirep(&t, &data, 1e-10).unwrap();
        assert_eq!(a.op(), &ComplexMatrix::identity(2));
        let back = antirep_to_rep(&a, &data, 1e-10).unwrap();
        assert!(back.approx_eq(&t, 0.0));
    }
}
