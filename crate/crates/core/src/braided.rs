//! Braided multiplicative unitaries `(W, U, V, 𝔽)` over a multiplicative
//! unitary `W`, their representations `(K, S, T)`, the braided tensor
//! product, and the semidirect product `𝕎_C` with its projection.
//!
//! Leg conventions: `W` on `(H,H)`, `U` on `(L,H)` (a right representation),
//! `V` on `(H,L)` (a left representation), `𝔽` on `(L,L)`. A braided
//! representation has `S` on `(K,H)` and `T` on `(K,L)`.

use std::sync::Arc;

use crate::absorber::{absorber_to_mu, equation, AbsorberCandidate};
use crate::category::TensorCategory;
use crate::error::{Error, Result};
use crate::multunit::MultiplicativeUnitary;
use crate::repcat::{
    intertwiner_map, left_rep_check, null_space, right_rep_check, IntertwinerBasis, Representation, Side,
};
use crate::report::CheckReport;
use crate::tensor::{
    extract_trivial_leg, extract_trivial_legs, flip, kron, kron_all, leg_product, place, residual, unitarity_residual,
    ComplexMatrix, SpaceSignature,
};

/// The quadruple `(W, U, V, 𝔽)`.
#[derive(Clone, Debug)]
pub struct BraidedMU {
    dl: usize,
    w: Arc<MultiplicativeUnitary>,
    u: ComplexMatrix,
    v: ComplexMatrix,
    f: ComplexMatrix,
}

fn square_on(m: &ComplexMatrix, n: usize, what: &str) -> Result<()> {
    if !m.is_square() || m.rows() != n {
        return Err(Error::mismatch(what.to_string(), n, m.rows()));
    }
    Ok(())
}

impl BraidedMU {
    /// Builds the quadruple and runs [`bmu_validity_check`] at `tol`.
    pub fn new(
        w: Arc<MultiplicativeUnitary>,
        dl: usize,
        u: ComplexMatrix,
        v: ComplexMatrix,
        f: ComplexMatrix,
        tol: f64,
    ) -> Result<Self> {
        let b = Self::new_unchecked(w, dl, u, v, f)?;
        bmu_validity_check(&b, tol).into_result()?;
        Ok(b)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        w: Arc<MultiplicativeUnitary>,
        dl: usize,
        u: ComplexMatrix,
        v: ComplexMatrix,
        f: ComplexMatrix,
    ) -> Result<Self> {
        if dl == 0 {
            return Err(Error::InvalidSignature("dL must be positive".into()));
        }
        let dh = w.dim();
        square_on(&u, dl * dh, "U on (dL,dH)")?;
        square_on(&v, dh * dl, "V on (dH,dL)")?;
        square_on(&f, dl * dl, "F on (dL,dL)")?;
        Ok(BraidedMU { dl, w, u, v, f })
    }

    /// `dL = 1` and `U = V = 𝔽 = 1`.
    pub fn trivial(w: Arc<MultiplicativeUnitary>) -> Self {
        let dh = w.dim();
        let id = ComplexMatrix::identity(dh);
        BraidedMU {
            dl: 1,
            u: id.clone(),
            v: id,
            f: ComplexMatrix::identity(1),
            w,
        }
    }

    /// `U = V = 1` with `𝔽` an ordinary multiplicative unitary on `L`.
    pub fn product(w: Arc<MultiplicativeUnitary>, f: &MultiplicativeUnitary) -> Self {
        let (dh, dl) = (w.dim(), f.dim());
        let id = ComplexMatrix::identity(dh * dl);
        BraidedMU {
            dl,
            u: id.clone(),
            v: id,
            f: f.matrix().clone(),
            w,
        }
    }

    pub fn dh(&self) -> usize {
        self.w.dim()
    }

    pub fn dl(&self) -> usize {
        self.dl
    }

    pub fn w(&self) -> &Arc<MultiplicativeUnitary> {
        &self.w
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn f(&self) -> &ComplexMatrix {
        &self.f
    }

    /// `U` as a right representation of `W` on `L`.
    pub fn u_rep(&self) -> Representation {
        Representation::from_parts(Side::Right, self.dl, self.w.clone(), self.u.clone())
    }

    /// `c_{L,L}`, from the braiding of `(L, U)`.
    pub fn braiding_l(&self, tol: f64) -> Result<Braiding> {
        braiding_of(&self.u, self.dl, self, tol)
    }
}

/// `Z` on `(k,dL)` and `c_{L,K} = ZΣ: L⊗K → K⊗L`.
#[derive(Clone, Debug)]
pub struct Braiding {
    pub k: usize,
    pub z: ComplexMatrix,
    pub braid: ComplexMatrix,
    /// Residual of the trivial middle leg extraction.
    pub residual: f64,
}

fn z_product(s: &ComplexMatrix, k: usize, bmu: &BraidedMU) -> Result<ComplexMatrix> {
    let dims = [k, bmu.dh(), bmu.dl];
    leg_product(
        &dims,
        &[
            (&bmu.v, &[2, 3]),
            (&s.adjoint(), &[1, 2]),
            (&bmu.v.adjoint(), &[2, 3]),
            (s, &[1, 2]),
        ],
    )
}

fn braiding_of(s: &ComplexMatrix, k: usize, bmu: &BraidedMU, tol: f64) -> Result<Braiding> {
    square_on(s, k * bmu.dh(), "S on (k,dH)")?;
    let x = z_product(s, k, bmu)?;
    let sig = SpaceSignature::new(vec![k, bmu.dh(), bmu.dl])?;
    let ex = extract_trivial_leg(&x, &sig, 2, tol)?;
    let r = ex.residual;
    let z = ex.ok_or("middle leg of V23 S12* V23* S12")?;
    let braid = &z * &flip(bmu.dl, k);
    Ok(Braiding {
        k,
        z,
        braid,
        residual: r,
    })
}

/// `Z₁₃ = V₂₃S₁₂*V₂₃*S₁₂` on `(k,dH,dL)` and `c_{L,K} = ZΣ`. Fails with
/// [`Error::ExtractionFailed`] if the middle leg is not trivial.
pub fn braiding(s: &Representation, bmu: &BraidedMU, tol: f64) -> Result<Braiding> {
    if s.side() != Side::Right {
        return Err(Error::SideMismatch("braiding needs a right representation".into()));
    }
    if s.base().as_ref() != bmu.w.as_ref() {
        return Err(Error::BaseMismatch);
    }
    braiding_of(s.op(), s.carrier_dim(), bmu, tol)
}

/// `c̄_{K,L}: K⊗L → L⊗K`, the inverse of `c_{L,K}`.
pub fn dual_braiding(b: &Braiding) -> ComplexMatrix {
    b.braid.adjoint()
}

/// A representation `(K, S, T)` of a braided multiplicative unitary.
#[derive(Clone, Debug)]
pub struct BraidedRep {
    k: usize,
    s: ComplexMatrix,
    t: ComplexMatrix,
    parent: Arc<BraidedMU>,
}

impl BraidedRep {
    /// Builds the triple and runs [`braided_rep_check`] at `tol`.
    pub fn new(parent: Arc<BraidedMU>, k: usize, s: ComplexMatrix, t: ComplexMatrix, tol: f64) -> Result<Self> {
        let r = Self::new_unchecked(parent, k, s, t)?;
        braided_rep_check(&r, tol)?.into_result()?;
        Ok(r)
    }

    /// Checks shapes only.
    pub fn new_unchecked(parent: Arc<BraidedMU>, k: usize, s: ComplexMatrix, t: ComplexMatrix) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSignature("carrier dimension must be positive".into()));
        }
        square_on(&s, k * parent.dh(), "S on (k,dH)")?;
        square_on(&t, k * parent.dl, "T on (k,dL)")?;
        Ok(BraidedRep { k, s, t, parent })
    }

    /// `(ℂᵏ, 1, 1)`.
    pub fn unit(parent: &Arc<BraidedMU>, k: usize) -> Self {
        BraidedRep {
            k,
            s: ComplexMatrix::identity(k * parent.dh()),
            t: ComplexMatrix::identity(k * parent.dl),
            parent: parent.clone(),
        }
    }

    /// `(K, S, 1)` for a right representation `S` of `W`.
    pub fn from_corep(parent: &Arc<BraidedMU>, s: &Representation) -> Result<Self> {
        if s.side() != Side::Right {
            return Err(Error::SideMismatch("(K,S,1) needs a right representation".into()));
        }
        if s.base().as_ref() != parent.w.as_ref() {
            return Err(Error::BaseMismatch);
        }
        let k = s.carrier_dim();
        Self::new_unchecked(
            parent.clone(),
            k,
            s.op().clone(),
            ComplexMatrix::identity(k * parent.dl),
        )
    }

    /// `(H, W, 1)`.
    pub fn regular(parent: &Arc<BraidedMU>) -> Self {
        let dh = parent.dh();
        BraidedRep {
            k: dh,
            s: parent.w.matrix().clone(),
            t: ComplexMatrix::identity(dh * parent.dl),
            parent: parent.clone(),
        }
    }

    /// `(L, U, 𝔽)`.
    pub fn l_object(parent: &Arc<BraidedMU>) -> Self {
        BraidedRep {
            k: parent.dl,
            s: parent.u.clone(),
            t: parent.f.clone(),
            parent: parent.clone(),
        }
    }

    /// `ρ = (H⊗L, W⊠U, 1⊠𝔽)` with `S = W₁₃U₂₃` on `(H,L,H)` and `T = 𝔽₂₃`
    /// on `(H,L,L)`.
    pub fn rho(parent: &Arc<BraidedMU>) -> Result<Self> {
        let (dh, dl) = (parent.dh(), parent.dl);
        let s = leg_product(&[dh, dl, dh], &[(parent.w.matrix(), &[1, 3]), (&parent.u, &[2, 3])])?;
        let t = place(&parent.f, &[2, 3], &[dh, dl, dl])?;
        Self::new_unchecked(parent.clone(), dh * dl, s, t)
    }

    pub fn carrier_dim(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> &ComplexMatrix {
        &self.s
    }

    pub fn t(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn parent(&self) -> &Arc<BraidedMU> {
        &self.parent
    }

    /// `S` as a right representation of `W`.
    pub fn s_rep(&self) -> Representation {
        Representation::from_parts(Side::Right, self.k, self.parent.w.clone(), self.s.clone())
    }

    /// Same carrier and both structure maps within `tol`.
    pub fn approx_eq(&self, other: &BraidedRep, tol: f64) -> bool {
        self.k == other.k
            && residual(&self.s, &other.s).is_ok_and(|r| r <= tol)
            && residual(&self.t, &other.t).is_ok_and(|r| r <= tol)
    }

    /// Largest entrywise distance of the structure maps, `∞` for
    /// different carriers.
    pub fn distance(&self, other: &BraidedRep) -> f64 {
        if self.k != other.k {
            return f64::INFINITY;
        }
        let rs = residual(&self.s, &other.s).unwrap_or(f64::INFINITY);
        let rt = residual(&self.t, &other.t).unwrap_or(f64::INFINITY);
        rs.max(rt)
    }

    pub fn check(&self, tol: f64) -> Result<CheckReport> {
        braided_rep_check(self, tol)
    }
}

fn same_parent(a: &BraidedRep, b: &BraidedRep) -> Result<()> {
    if Arc::ptr_eq(&a.parent, &b.parent) {
        return Ok(());
    }
    let (p, q) = (&a.parent, &b.parent);
    if p.dl == q.dl && p.w == q.w && p.u == q.u && p.v == q.v && p.f == q.f {
        Ok(())
    } else {
        Err(Error::BaseMismatch)
    }
}

/// The three defining equations of a braided representation:
/// `W₂₃S₁₂ = S₁₂S₁₃W₂₃`; `S₁₃U₂₃T₁₂ = T₁₂S₁₃U₂₃` on `(K,L,H)`; and
/// `𝔽₂₃T₁₂ = T₁₂(c_{L,L})₂₃T₁₂(c̄_{L,L})₂₃𝔽₂₃` on `(K,L,L)`.
pub fn braided_rep_check(r: &BraidedRep, tol: f64) -> Result<CheckReport> {
    let b = &r.parent;
    let (k, dh, dl) = (r.k, b.dh(), b.dl);
    let mut s_corep = right_rep_check(&r.s, k, &b.w, tol)?.renamed("S right representation");
    s_corep.push(CheckReport::leaf("T unitarity", unitarity_residual(&r.t), tol));
    let su = equation(
        "S13 U23 T12 = T12 S13 U23",
        &[k, dl, dh],
        &[(&r.s, &[1, 3]), (&b.u, &[2, 3]), (&r.t, &[1, 2])],
        &[(&r.t, &[1, 2]), (&r.s, &[1, 3]), (&b.u, &[2, 3])],
        tol,
    )?;
    let corep_name = "F23 T12 = T12 c23 T12 cbar23 F23";
    let t_corep = match b.braiding_l(tol) {
        Ok(c) => {
            let dims = [k, dl, dl];
            let lhs = leg_product(&dims, &[(&b.f, &[2, 3]), (&r.t, &[1, 2])])?;
            let rhs = leg_product(
                &dims,
                &[
                    (&r.t, &[1, 2]),
                    (&c.braid, &[2, 3]),
                    (&r.t, &[1, 2]),
                    (&dual_braiding(&c), &[2, 3]),
                    (&b.f, &[2, 3]),
                ],
            )?;
            CheckReport::leaf(corep_name, residual(&lhs, &rhs)?, tol)
        }
        Err(Error::ExtractionFailed { residual, .. }) => {
            CheckReport::leaf(format!("{corep_name} (no braiding on L)"), residual, tol)
        }
        Err(e) => return Err(e),
    };
    Ok(CheckReport::group(
        "braided representation",
        tol,
        vec![s_corep, su, t_corep],
    ))
}

/// The conditions on `(W, U, V, 𝔽)` used here: `W` multiplicative, `U` a
/// right and `V` a left representation, the braiding on `(L, U)` exists,
/// and `(L, U, 𝔽)` is a braided representation. These are necessary, not
/// sufficient, for a braided multiplicative unitary.
pub fn bmu_validity_check(bmu: &BraidedMU, tol: f64) -> CheckReport {
    let dl = bmu.dl;
    let mut subs = vec![
        bmu.w.check(tol).renamed("W pentagon"),
        right_rep_check(&bmu.u, dl, &bmu.w, tol)
            .expect("shape validated at construction")
            .renamed("U right representation"),
        left_rep_check(&bmu.v, dl, &bmu.w, tol)
            .expect("shape validated at construction")
            .renamed("V left representation"),
    ];
    let x = z_product(&bmu.u, dl, bmu).expect("shape validated at construction");
    let sig = SpaceSignature::new(vec![dl, bmu.dh(), dl]).expect("positive dimensions");
    let ex = extract_trivial_leg(&x, &sig, 2, tol).expect("shape validated at construction");
    subs.push(CheckReport::leaf("braiding on L exists", ex.residual, tol));
    let parent = Arc::new(bmu.clone());
    let l = BraidedRep::l_object(&parent);
    subs.push(match braided_rep_check(&l, tol) {
        Ok(r) => r.renamed("(L,U,F) braided representation"),
        Err(_) => CheckReport::flag("(L,U,F) braided representation", false, tol),
    });
    CheckReport::group("braided multiplicative unitary (necessary conditions)", tol, subs)
}

/// `S¹⊠S² = S¹₁₃S²₂₃` and `T¹⊠T² = (c_{L,K²})₂₃T¹₁₂(c̄_{K²,L})₂₃T²₂₃` on
/// `(K¹,K²,·)`.
pub fn braided_tensor(r1: &BraidedRep, r2: &BraidedRep, tol: f64) -> Result<BraidedRep> {
    same_parent(r1, r2)?;
    let b = &r1.parent;
    let (k1, k2, dh) = (r1.k, r2.k, b.dh());
    let s = leg_product(&[k1, k2, dh], &[(&r1.s, &[1, 3]), (&r2.s, &[2, 3])])?;
    let c = braiding_of(&r2.s, k2, b, tol)?;
    let i1 = ComplexMatrix::identity(k1);
    let t = ComplexMatrix::product([
        &kron(&i1, &c.braid),
        &kron(&r1.t, &ComplexMatrix::identity(k2)),
        &kron(&i1, &dual_braiding(&c)),
        &kron(&i1, &r2.t),
    ])?;
    BraidedRep::new_unchecked(b.clone(), k1 * k2, s, t)
}

/// `Z^{12} = Z²₂₃Z¹₁₃` on `(K¹,K²,L)`, where `Z^{12}` is computed from
/// `S¹⊠S²`.
pub fn z_multiplicativity(r1: &BraidedRep, r2: &BraidedRep, tol: f64) -> Result<CheckReport> {
    same_parent(r1, r2)?;
    let b = &r1.parent;
    let (k1, k2) = (r1.k, r2.k);
    let s12 = leg_product(&[k1, k2, b.dh()], &[(&r1.s, &[1, 3]), (&r2.s, &[2, 3])])?;
    let z12 = braiding_of(&s12, k1 * k2, b, tol)?.z;
    let z1 = braiding_of(&r1.s, k1, b, tol)?.z;
    let z2 = braiding_of(&r2.s, k2, b, tol)?.z;
    let rhs = leg_product(&[k1, k2, b.dl], &[(&z2, &[2, 3]), (&z1, &[1, 3])])?;
    Ok(CheckReport::leaf("Z^12 = Z2_23 Z1_13", residual(&z12, &rhs)?, tol))
}

/// Both associations of a triple braided tensor product against the
/// explicit four-leg formula
/// `(c_{L,K²K³})₂₃₄T¹₁₂(c̄)₂₃₄(c_{L,K³})₃₄T²₂₃(c̄)₃₄T³₃₄`.
pub fn triple_tensor_check(r1: &BraidedRep, r2: &BraidedRep, r3: &BraidedRep, tol: f64) -> Result<CheckReport> {
    same_parent(r1, r2)?;
    same_parent(r2, r3)?;
    let b = &r1.parent;
    let left = braided_tensor(&braided_tensor(r1, r2, tol)?, r3, tol)?;
    let right = braided_tensor(r1, &braided_tensor(r2, r3, tol)?, tol)?;
    let (k1, k2, k3) = (r1.k, r2.k, r3.k);
    let s23 = leg_product(&[k2, k3, b.dh()], &[(&r2.s, &[1, 3]), (&r3.s, &[2, 3])])?;
    let c23 = braiding_of(&s23, k2 * k3, b, tol)?;
    let c3 = braiding_of(&r3.s, k3, b, tol)?;
    let id = ComplexMatrix::identity;
    let explicit = ComplexMatrix::product([
        &kron(&id(k1), &c23.braid),
        &kron(&r1.t, &id(k2 * k3)),
        &kron(&id(k1), &dual_braiding(&c23)),
        &kron(&id(k1 * k2), &c3.braid),
        &kron_all([&id(k1), &r2.t, &id(k3)]),
        &kron(&id(k1 * k2), &dual_braiding(&c3)),
        &kron(&id(k1 * k2), &r3.t),
    ])?;
    Ok(CheckReport::group(
        "triple tensor",
        tol,
        vec![
            CheckReport::leaf("S associativity", residual(&left.s, &right.s)?, tol),
            CheckReport::leaf("T (12)3 = 1(23)", residual(&left.t, &right.t)?, tol),
            CheckReport::leaf("T (12)3 = explicit", residual(&left.t, &explicit)?, tol),
            CheckReport::leaf("T 1(23) = explicit", residual(&right.t, &explicit)?, tol),
        ],
    ))
}

/// The semidirect product `𝕎_C = W₁₃U₂₃V₃₄*𝔽₂₄V₃₄` on `(H⊗L)⊗(H⊗L)` with
/// its projection `ℙ = W₁₃U₂₃`.
#[derive(Clone, Debug)]
pub struct SemidirectResult {
    pub bmu: Arc<BraidedMU>,
    pub wc: Arc<MultiplicativeUnitary>,
    /// `ℙ` on `(H,L,H,L)`.
    pub p: ComplexMatrix,
}

fn wc_matrix(b: &BraidedMU) -> Result<ComplexMatrix> {
    let (dh, dl) = (b.dh(), b.dl);
    leg_product(
        &[dh, dl, dh, dl],
        &[
            (b.w.matrix(), &[1, 3]),
            (&b.u, &[2, 3]),
            (&b.v.adjoint(), &[3, 4]),
            (&b.f, &[2, 4]),
            (&b.v, &[3, 4]),
        ],
    )
}

/// Validates `bmu`, then builds `𝕎_C` and checks its pentagon equation.
pub fn semidirect(bmu: &Arc<BraidedMU>, tol: f64) -> Result<SemidirectResult> {
    bmu_validity_check(bmu, tol).into_result()?;
    let (dh, dl) = (bmu.dh(), bmu.dl);
    let wc = Arc::new(MultiplicativeUnitary::new(wc_matrix(bmu)?, dh * dl, tol)?);
    let p = place_p(bmu)?;
    Ok(SemidirectResult {
        bmu: bmu.clone(),
        wc,
        p,
    })
}

/// [`semidirect`] without validation.
pub fn semidirect_unchecked(bmu: &Arc<BraidedMU>) -> Result<SemidirectResult> {
    let (dh, dl) = (bmu.dh(), bmu.dl);
    let wc = Arc::new(MultiplicativeUnitary::new_unchecked(wc_matrix(bmu)?, dh * dl)?);
    Ok(SemidirectResult {
        bmu: bmu.clone(),
        wc,
        p: place_p(bmu)?,
    })
}

fn place_p(b: &BraidedMU) -> Result<ComplexMatrix> {
    let (dh, dl) = (b.dh(), b.dl);
    leg_product(&[dh, dl, dh, dl], &[(b.w.matrix(), &[1, 3]), (&b.u, &[2, 3])])
}

/// The three projection equations for `ℙ`, the bicharacter equations for
/// `W₁₃U₂₃` (from `𝕎_C` to `W`) and `W₁₂` (back), and
/// `W₃₄(W₁₃U₂₃) = (W₁₃U₂₃)(W₁₄U₂₄)W₃₄` on `(H,L,H,H)`.
pub fn projection_check(sr: &SemidirectResult, tol: f64) -> Result<CheckReport> {
    let b = &sr.bmu;
    let (dh, dl) = (b.dh(), b.dl);
    let c = dh * dl;
    let (wc, p, w, u) = (sr.wc.matrix(), &sr.p, b.w.matrix(), &b.u);
    let x = leg_product(&[dh, dl, dh], &[(w, &[1, 3]), (u, &[2, 3])])?;
    let y = place(w, &[1, 2], &[dh, dh, dl])?;
    let ccc = [c, c, c];
    let subs = vec![
        equation(
            "P23 WC12 = WC12 P13 P23",
            &ccc,
            &[(p, &[2, 3]), (wc, &[1, 2])],
            &[(wc, &[1, 2]), (p, &[1, 3]), (p, &[2, 3])],
            tol,
        )?,
        equation(
            "WC23 P12 = P12 P13 WC23",
            &ccc,
            &[(wc, &[2, 3]), (p, &[1, 2])],
            &[(p, &[1, 2]), (p, &[1, 3]), (wc, &[2, 3])],
            tol,
        )?,
        equation(
            "P23 P12 = P12 P13 P23",
            &ccc,
            &[(p, &[2, 3]), (p, &[1, 2])],
            &[(p, &[1, 2]), (p, &[1, 3]), (p, &[2, 3])],
            tol,
        )?,
        CheckReport::group(
            "bicharacters",
            tol,
            vec![
                equation(
                    "W23 X12 = X12 X13 W23",
                    &[c, dh, dh],
                    &[(w, &[2, 3]), (&x, &[1, 2])],
                    &[(&x, &[1, 2]), (&x, &[1, 3]), (w, &[2, 3])],
                    tol,
                )?,
                equation(
                    "X23 WC12 = WC12 X13 X23",
                    &[c, c, dh],
                    &[(&x, &[2, 3]), (wc, &[1, 2])],
                    &[(wc, &[1, 2]), (&x, &[1, 3]), (&x, &[2, 3])],
                    tol,
                )?,
                equation(
                    "WC23 Y12 = Y12 Y13 WC23",
                    &[dh, c, c],
                    &[(wc, &[2, 3]), (&y, &[1, 2])],
                    &[(&y, &[1, 2]), (&y, &[1, 3]), (wc, &[2, 3])],
                    tol,
                )?,
                equation(
                    "Y23 W12 = W12 Y13 Y23",
                    &[dh, dh, c],
                    &[(&y, &[2, 3]), (w, &[1, 2])],
                    &[(w, &[1, 2]), (&y, &[1, 3]), (&y, &[2, 3])],
                    tol,
                )?,
            ],
        ),
        equation(
            "W34 W13 U23 = W13 U23 W14 U24 W34",
            &[dh, dl, dh, dh],
            &[(w, &[3, 4]), (w, &[1, 3]), (u, &[2, 3])],
            &[(w, &[1, 3]), (u, &[2, 3]), (w, &[1, 4]), (u, &[2, 4]), (w, &[3, 4])],
            tol,
        )?,
    ];
    Ok(CheckReport::group("projection", tol, subs))
}

/// `Φ(K,S,T) = S₁₂V₂₃*T₁₃V₂₃` on `(K, H⊗L)`, a right representation of
/// `𝕎_C`.
pub fn phi(sr: &SemidirectResult, r: &BraidedRep) -> Result<Representation> {
    same_parent_bmu(&sr.bmu, r)?;
    let b = &sr.bmu;
    let op = leg_product(
        &[r.k, b.dh(), b.dl],
        &[
            (&r.s, &[1, 2]),
            (&b.v.adjoint(), &[2, 3]),
            (&r.t, &[1, 3]),
            (&b.v, &[2, 3]),
        ],
    )?;
    Representation::new_unchecked(Side::Right, r.k, sr.wc.clone(), op)
}

fn same_parent_bmu(b: &Arc<BraidedMU>, r: &BraidedRep) -> Result<()> {
    same_parent(r, &BraidedRep::unit(b, 1))
}

/// A braided representation recovered from a representation of `𝕎_C`,
/// with the extraction residuals and the validity and round-trip checks.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub rep: BraidedRep,
    pub s_extraction_residual: f64,
    pub t_extraction_residual: f64,
    pub report: CheckReport,
}

/// Solves `(W₂₄U₃₄)A₁₂₃ = A₁₂₃S₁₄(W₂₄U₃₄)` for `S` by conjugation, then
/// `T₁₃ = V₂₃S₁₂*A₁₂₃V₂₃*`. Both steps must have trivial middle legs.
pub fn reconstruct(sr: &SemidirectResult, a: &Representation, tol: f64) -> Result<Reconstruction> {
    if a.side() != Side::Right {
        return Err(Error::SideMismatch("reconstruct needs a right representation".into()));
    }
    if a.base().as_ref() != sr.wc.as_ref() {
        return Err(Error::BaseMismatch);
    }
    let b = &sr.bmu;
    let (k, dh, dl) = (a.carrier_dim(), b.dh(), b.dl);
    let dims4 = [k, dh, dl, dh];
    let wu = leg_product(&dims4, &[(b.w.matrix(), &[2, 4]), (&b.u, &[3, 4])])?;
    let a123 = place(a.op(), &[1, 2, 3], &dims4)?;
    let s14 = ComplexMatrix::product([&a123.adjoint(), &wu, &a123, &wu.adjoint()])?;
    let ex = extract_trivial_legs(&s14, &SpaceSignature::new(dims4.to_vec())?, &[2, 3], tol)?;
    let s_res = ex.residual;
    let s = ex.ok_or("legs 2,3 of A123* (W24 U34) A123 (W24 U34)*")?;

    let dims3 = [k, dh, dl];
    let t13 = leg_product(
        &dims3,
        &[
            (&b.v, &[2, 3]),
            (&s.adjoint(), &[1, 2]),
            (a.op(), &[1, 2, 3]),
            (&b.v.adjoint(), &[2, 3]),
        ],
    )?;
    let ex = extract_trivial_leg(&t13, &SpaceSignature::new(dims3.to_vec())?, 2, tol)?;
    let t_res = ex.residual;
    let t = ex.ok_or("leg 2 of V23 S12* A123 V23*")?;

    let rep = BraidedRep::new_unchecked(b.clone(), k, s, t)?;
    let round = residual(phi(sr, &rep)?.op(), a.op())?;
    let report = CheckReport::group(
        "reconstruction",
        tol,
        vec![
            CheckReport::leaf("S extraction", s_res, tol),
            CheckReport::leaf("T extraction", t_res, tol),
            braided_rep_check(&rep, tol)?,
            CheckReport::leaf("Phi(reconstruct(A)) = A", round, tol),
        ],
    );
    Ok(Reconstruction {
        rep,
        s_extraction_residual: s_res,
        t_extraction_residual: t_res,
        report,
    })
}

/// Orthonormal basis of the operators `a: K¹ → K²` intertwining both
/// `S¹, S²` (as representations of `W`) and `T¹, T²`.
pub fn braided_intertwiner_basis(a: &BraidedRep, b: &BraidedRep, rel_tol: f64) -> Result<IntertwinerBasis> {
    same_parent(a, b)?;
    let ls = intertwiner_map(&a.s_rep(), &b.s_rep())?;
    let parent = &a.parent;
    let fbase = Arc::new(MultiplicativeUnitary::new_unchecked(parent.f.clone(), parent.dl)?);
    let ta = Representation::from_parts(Side::Right, a.k, fbase.clone(), a.t.clone());
    let tb = Representation::from_parts(Side::Right, b.k, fbase, b.t.clone());
    let lt = intertwiner_map(&ta, &tb)?;
    let cols = ls.cols();
    let mut data = ls.into_entries();
    let rows = data.len() / cols + lt.rows();
    data.extend(lt.into_entries());
    let l = ComplexMatrix::new(rows, cols, data)?;
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

/// Representations of a braided multiplicative unitary as a tensor category.
/// `tol` governs the braiding extractions inside tensor products.
#[derive(Clone, Debug)]
pub struct BraidedCorep {
    pub bmu: Arc<BraidedMU>,
    pub tol: f64,
}

impl TensorCategory for BraidedCorep {
    type Object = BraidedRep;

    fn carrier_dim(&self, x: &BraidedRep) -> usize {
        x.k
    }

    fn unit(&self, k: usize) -> BraidedRep {
        BraidedRep::unit(&self.bmu, k)
    }

    fn is_trivial(&self, x: &BraidedRep, tol: f64) -> bool {
        x.approx_eq(&self.unit(x.k), tol)
    }

    fn tensor(&self, a: &BraidedRep, b: &BraidedRep) -> Result<BraidedRep> {
        braided_tensor(a, b, self.tol)
    }

    fn hom_basis(&self, a: &BraidedRep, b: &BraidedRep, rel_tol: f64) -> Result<Vec<ComplexMatrix>> {
        Ok(braided_intertwiner_basis(a, b, rel_tol)?.elements)
    }

    fn same_object(&self, a: &BraidedRep, b: &BraidedRep, tol: f64) -> bool {
        a.approx_eq(b, tol)
    }

    fn check_object(&self, x: &BraidedRep, tol: f64) -> Result<CheckReport> {
        braided_rep_check(x, tol)
    }
}

/// `A^x = S₁₂(c_{L,H})₂₃T₁₂(c̄_{H,L})₂₃` on `(K,H,L)`, where `c_{L,H}` is the
/// braiding of `(H, W)`.
pub fn braided_absorbing_unitary(x: &BraidedRep, tol: f64) -> Result<ComplexMatrix> {
    let b = &x.parent;
    let (k, dh) = (x.k, b.dh());
    let c = braiding_of(b.w.matrix(), dh, b, tol)?;
    let ik = ComplexMatrix::identity(k);
    ComplexMatrix::product([
        &place(&x.s, &[1, 2], &[k, dh, b.dl])?,
        &kron(&ik, &c.braid),
        &kron(&x.t, &ComplexMatrix::identity(dh)),
        &kron(&ik, &dual_braiding(&c)),
    ])
}

/// The absorber `ρ = (H⊗L, W⊠U, 1⊠𝔽)` over the family `τ(ℂ)`, `τ(ℂ²)`,
/// `(L,U,𝔽)`, `ρ` and `extra`, with `U^x = A^x`.
pub fn braided_absorber_candidate(
    bmu: &Arc<BraidedMU>,
    extra: Vec<(String, BraidedRep)>,
    tol: f64,
) -> Result<AbsorberCandidate> {
    let cat = BraidedCorep { bmu: bmu.clone(), tol };
    let mut objects = vec![
        ("tau1".to_string(), cat.unit(1)),
        ("tau2".to_string(), cat.unit(2)),
        ("L".to_string(), BraidedRep::l_object(bmu)),
        ("rho".to_string(), BraidedRep::rho(bmu)?),
    ];
    objects.extend(extra);
    AbsorberCandidate::from_rule(
        &cat,
        Side::Right,
        &objects,
        "rho",
        |x| braided_absorbing_unitary(x, tol),
        tol,
    )
}

/// Runs [`absorber_to_mu`] on [`braided_absorber_candidate`] and compares the
/// result with `𝕎_C` and with `Φ` on every family member.
pub fn braided_absorber_check(sr: &SemidirectResult, tol: f64) -> Result<CheckReport> {
    let cand = braided_absorber_candidate(&sr.bmu, Vec::new(), tol)?;
    let absorbed = absorber_to_mu(&cand, tol)?;
    let mut phi_checks = Vec::new();
    let cat = BraidedCorep {
        bmu: sr.bmu.clone(),
        tol,
    };
    let objects = [
        ("tau1", cat.unit(1)),
        ("tau2", cat.unit(2)),
        ("L", BraidedRep::l_object(&sr.bmu)),
        ("rho", BraidedRep::rho(&sr.bmu)?),
    ];
    for (name, x) in &objects {
        let a = &cand.entry(name)?.absorbing;
        phi_checks.push(CheckReport::leaf(
            format!("A^{name} = Phi({name})"),
            residual(a, phi(sr, x)?.op())?,
            tol,
        ));
    }
    Ok(CheckReport::group(
        "braided absorber",
        tol,
        vec![
            absorbed.report,
            CheckReport::leaf("A^rho = WC", residual(absorbed.unitary.matrix(), sr.wc.matrix())?, tol),
            CheckReport::group("absorber agrees with Phi", tol, phi_checks),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multunit::GroupTable;
    use crate::report::{DEFAULT_TOL, ROUND_TRIP_TOL};
    use crate::tensor::testutil::{random_unitary, rng};

    fn z2() -> Arc<MultiplicativeUnitary> {
        Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(2)))
    }

    fn product_example() -> Arc<BraidedMU> {
        Arc::new(BraidedMU::product(
            z2(),
            &MultiplicativeUnitary::from_group(&GroupTable::cyclic(2)),
        ))
    }

    #[test]
    fn identity_v_gives_flip() {
        let b = product_example();
        let c = b.braiding_l(DEFAULT_TOL).unwrap();
        assert_eq!(c.z, ComplexMatrix::identity(4));
        assert_eq!(c.braid, flip(2, 2));
        assert_eq!(dual_braiding(&c), flip(2, 2));
        assert_eq!(&c.braid * &dual_braiding(&c), ComplexMatrix::identity(4));
    }

    #[test]
    fn trivial_s_gives_identity_z() {
        let w = Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(3)));
        let mut r = rng(3);
        // Any V works when S = 1.
        let v = random_unitary(3 * 2, &mut r);
        let b =
            BraidedMU::new_unchecked(w.clone(), 2, ComplexMatrix::identity(6), v, ComplexMatrix::identity(4)).unwrap();
        let s = crate::repcat::trivial_rep(&w, 2);
        let c = braiding(&s, &b, DEFAULT_TOL).unwrap();
        assert!(residual(&c.z, &ComplexMatrix::identity(4)).unwrap() <= 1e-14);
    }

    #[test]
    fn trivial_bmu_is_valid_and_collapses() {
        let w = Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(3)));
        let b = Arc::new(BraidedMU::trivial(w.clone()));
        assert!(bmu_validity_check(&b, DEFAULT_TOL).passed);
        let sr = semidirect(&b, DEFAULT_TOL).unwrap();
        assert_eq!(residual(sr.wc.matrix(), w.matrix()).unwrap(), 0.0);
        assert!(projection_check(&sr, DEFAULT_TOL).unwrap().passed);
    }

    #[test]
    fn product_bmu_semidirect_is_direct_product() {
        let b = product_example();
        assert!(bmu_validity_check(&b, DEFAULT_TOL).passed);
        let sr = semidirect(&b, DEFAULT_TOL).unwrap();
        let expected = leg_product(&[2, 2, 2, 2], &[(b.w().matrix(), &[1, 3]), (b.f(), &[2, 4])]).unwrap();
        assert_eq!(residual(sr.wc.matrix(), &expected).unwrap(), 0.0);
        let p = projection_check(&sr, DEFAULT_TOL).unwrap();
        assert!(p.passed, "{p}");
        assert_eq!(sr.p, place(b.w().matrix(), &[1, 3], &[2, 2, 2, 2]).unwrap());
    }

    #[test]
    fn non_left_rep_v_fails_validity() {
        let b = product_example();
        let mut v = b.v().clone();
        v[(0, 0)] += crate::tensor::C64::new(1e-3, 0.0);
        let bad = BraidedMU::new_unchecked(b.w().clone(), 2, b.u().clone(), v, b.f().clone()).unwrap();
        let r = bmu_validity_check(&bad, DEFAULT_TOL);
        assert!(!r.passed);
        assert!(!r.find("V left representation").unwrap().passed);
    }

    #[test]
    fn corrupted_u_fails_projection() {
        let b = product_example();
        let mut u = b.u().clone();
        u[(1, 2)] += crate::tensor::C64::new(1e-3, 0.0);
        let bad = Arc::new(BraidedMU::new_unchecked(b.w().clone(), 2, u, b.v().clone(), b.f().clone()).unwrap());
        assert!(semidirect(&bad, DEFAULT_TOL).is_err());
        let sr = semidirect_unchecked(&bad).unwrap();
        assert!(!projection_check(&sr, DEFAULT_TOL).unwrap().passed);
    }

    #[test]
    fn corep_with_trivial_t_is_braided_rep() {
        let b = product_example();
        let r = BraidedRep::from_corep(&b, &b.w().as_right_rep()).unwrap();
        assert!(braided_rep_check(&r, DEFAULT_TOL).unwrap().passed);
        assert!(
            braided_rep_check(&BraidedRep::l_object(&b), DEFAULT_TOL)
                .unwrap()
                .passed
        );
        assert!(
            braided_rep_check(&BraidedRep::rho(&b).unwrap(), DEFAULT_TOL)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn random_t_fails() {
        let b = product_example();
        let mut r = rng(11);
        let x = BraidedRep::new_unchecked(b.clone(), 2, b.w().matrix().clone(), random_unitary(4, &mut r)).unwrap();
        assert!(!braided_rep_check(&x, DEFAULT_TOL).unwrap().passed);
    }

    #[test]
    fn tensor_unit_and_l_squared() {
        let b = product_example();
        let l = BraidedRep::l_object(&b);
        let one = BraidedRep::unit(&b, 1);
        assert!(braided_tensor(&l, &one, DEFAULT_TOL).unwrap().approx_eq(&l, 0.0));
        assert!(braided_tensor(&one, &l, DEFAULT_TOL).unwrap().approx_eq(&l, 0.0));
        let ll = braided_tensor(&l, &l, DEFAULT_TOL).unwrap();
        assert!(braided_rep_check(&ll, DEFAULT_TOL).unwrap().passed);
        assert!(z_multiplicativity(&l, &l, DEFAULT_TOL).unwrap().passed);
        assert!(triple_tensor_check(&l, &one, &ll, DEFAULT_TOL).unwrap().passed);
    }

    #[test]
    fn rho_is_regular_tensor_l() {
        let b = product_example();
        let t = braided_tensor(&BraidedRep::regular(&b), &BraidedRep::l_object(&b), DEFAULT_TOL).unwrap();
        assert!(t.approx_eq(&BraidedRep::rho(&b).unwrap(), 0.0));
    }

    #[test]
    fn phi_examples_and_round_trip() {
        let b = product_example();
        let sr = semidirect(&b, DEFAULT_TOL).unwrap();
        let rho = BraidedRep::rho(&b).unwrap();
        assert_eq!(residual(phi(&sr, &rho).unwrap().op(), sr.wc.matrix()).unwrap(), 0.0);
        let s = b.w().as_right_rep();
        let img = phi(&sr, &BraidedRep::from_corep(&b, &s).unwrap()).unwrap();
        assert_eq!(*img.op(), place(s.op(), &[1, 2], &[2, 2, 2]).unwrap());
        let one = phi(&sr, &BraidedRep::unit(&b, 2)).unwrap();
        assert_eq!(*one.op(), ComplexMatrix::identity(8));
        for x in [BraidedRep::l_object(&b), rho, BraidedRep::unit(&b, 1)] {
            let a = phi(&sr, &x).unwrap();
            assert!(a.check(DEFAULT_TOL).unwrap().passed);
            let rec = reconstruct(&sr, &a, ROUND_TRIP_TOL).unwrap();
            assert!(rec.report.passed, "{}", rec.report);
            assert!(rec.rep.distance(&x) <= ROUND_TRIP_TOL);
        }
    }

    #[test]
    fn phi_is_strict_tensor() {
        let b = product_example();
        let sr = semidirect(&b, DEFAULT_TOL).unwrap();
        let l = BraidedRep::l_object(&b);
        let ll = braided_tensor(&l, &l, DEFAULT_TOL).unwrap();
        let lhs = phi(&sr, &ll).unwrap();
        let pl = phi(&sr, &l).unwrap();
        let rhs = crate::repcat::tensor(&pl, &pl).unwrap();
        assert!(residual(lhs.op(), rhs.op()).unwrap() <= DEFAULT_TOL);
    }

    #[test]
    fn braided_hom_dims() {
        let b = product_example();
        let l = BraidedRep::l_object(&b);
        let one = BraidedRep::unit(&b, 1);
        assert_eq!(braided_intertwiner_basis(&l, &l, 1e-8).unwrap().dim(), 2);
        assert_eq!(braided_intertwiner_basis(&one, &l, 1e-8).unwrap().dim(), 1);
        let two = BraidedRep::unit(&b, 2);
        assert_eq!(braided_intertwiner_basis(&two, &two, 1e-8).unwrap().dim(), 4);
    }

    #[test]
    fn absorber_reproduces_semidirect() {
        let b = product_example();
        let sr = semidirect(&b, DEFAULT_TOL).unwrap();
        let r = braided_absorber_check(&sr, DEFAULT_TOL).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn braiding_is_natural() {
        let b = product_example();
        let l = BraidedRep::l_object(&b);
        let one = BraidedRep::unit(&b, 1);
        for (x, y) in [(&one, &l), (&l, &l)] {
            let cx = braiding(&x.s_rep(), &b, DEFAULT_TOL).unwrap();
            let cy = braiding(&y.s_rep(), &b, DEFAULT_TOL).unwrap();
            let basis = crate::repcat::intertwiner_basis(&x.s_rep(), &y.s_rep(), 1e-8).unwrap();
            let idl = ComplexMatrix::identity(b.dl());
            for a in basis.elements {
                let lhs = &kron(&a, &idl) * &cx.braid;
                let rhs = &cy.braid * &kron(&idl, &a);
                assert!(residual(&lhs, &rhs).unwrap() <= DEFAULT_TOL);
            }
        }
    }
}
