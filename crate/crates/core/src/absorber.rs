//! Natural absorbers verified over a finite test family.
//!
//! A right absorber `ρ` assigns to each object `x` a unitary `U^x` on
//! `(k_x, k_ρ)`; a left absorber `λ` assigns `U_λ^x` on `(k_λ, k_x)`. Both
//! must be natural with respect to every intertwiner, multiplicative under
//! tensor products, and trivial on trivial objects.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::category::{Corep, TensorCategory};
use crate::error::{Error, Result};
use crate::multunit::MultiplicativeUnitary;
use crate::repcat::{intertwiner_basis, AntiBase, MixedData, Representation, Side, NULLSPACE_REL_TOL};
use crate::report::CheckReport;
use crate::tensor::{kron, leg_equation_residual, place, residual, unitarity_residual, ComplexMatrix};

/// One test object together with its absorbing unitary.
#[derive(Clone, Debug)]
pub struct FamilyEntry {
    pub name: String,
    pub carrier_dim: usize,
    /// The object is trivial (`τ(ℂᵏ)`).
    pub trivial: bool,
    pub absorbing: ComplexMatrix,
}

/// An intertwiner between two family members, from a Hom-space basis.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub op: ComplexMatrix,
}

/// `entries[result] = entries[left] ⊗ entries[right]` in the category.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Product {
    pub left: usize,
    pub right: usize,
    pub result: usize,
}

/// The data of a natural absorber restricted to a finite family.
#[derive(Clone, Debug)]
pub struct AbsorberCandidate {
    pub side: Side,
    /// Index of the absorbing object itself.
    pub rho: usize,
    pub entries: Vec<FamilyEntry>,
    pub products: Vec<Product>,
    pub arrows: Vec<Arrow>,
    /// Dimension of `Hom(x_i, x_j)` in the hosting category.
    pub hom_dims: BTreeMap<(usize, usize), usize>,
}

impl AbsorberCandidate {
    /// Builds a candidate from named objects and their absorbing unitaries.
    /// Products and intertwiner generators are detected with `cat`.
    pub fn from_family<C: TensorCategory>(
        cat: &C,
        side: Side,
        objects: &[(String, C::Object)],
        rho: &str,
        absorbing: Vec<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        if objects.len() != absorbing.len() {
            return Err(Error::mismatch("absorbing unitaries", objects.len(), absorbing.len()));
        }
        let rho = objects
            .iter()
            .position(|(n, _)| n == rho)
            .ok_or_else(|| Error::MissingFamilyEntry(rho.to_string()))?;
        let k_rho = cat.carrier_dim(&objects[rho].1);
        let mut entries = Vec::with_capacity(objects.len());
        for ((name, x), u) in objects.iter().zip(absorbing) {
            let k = cat.carrier_dim(x);
            if !u.is_square() || u.rows() != k * k_rho {
                return Err(Error::mismatch(
                    format!("absorbing unitary for `{name}`"),
                    k * k_rho,
                    u.rows(),
                ));
            }
            entries.push(FamilyEntry {
                name: name.clone(),
                carrier_dim: k,
                trivial: cat.is_trivial(x, tol),
                absorbing: u,
            });
        }
        let n = objects.len();
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let t = cat.tensor(&objects[i].1, &objects[j].1)?;
                if let Some(k) = (0..n).find(|&k| cat.same_object(&t, &objects[k].1, tol)) {
                    products.push(Product {
                        left: i,
                        right: j,
                        result: k,
                    });
                }
            }
        }
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let mut arrows = Vec::new();
        let mut hom_dims = BTreeMap::new();
        for (i, j) in pairs {
            let basis = cat.hom_basis(&objects[i].1, &objects[j].1, NULLSPACE_REL_TOL)?;
            hom_dims.insert((i, j), basis.len());
            arrows.extend(basis.into_iter().map(|op| Arrow { from: i, to: j, op }));
        }
        Ok(AbsorberCandidate {
            side,
            rho,
            entries,
            products,
            arrows,
            hom_dims,
        })
    }

    /// Like [`AbsorberCandidate::from_family`] with `U^x = rule(x)`.
    pub fn from_rule<C: TensorCategory>(
        cat: &C,
        side: Side,
        objects: &[(String, C::Object)],
        rho: &str,
        rule: impl Fn(&C::Object) -> Result<ComplexMatrix>,
        tol: f64,
    ) -> Result<Self> {
        let absorbing = objects.iter().map(|(_, x)| rule(x)).collect::<Result<Vec<_>>>()?;
        Self::from_family(cat, side, objects, rho, absorbing, tol)
    }

    pub fn absorber_dim(&self) -> usize {
        self.entries[self.rho].carrier_dim
    }

    pub fn rho_name(&self) -> &str {
        &self.entries[self.rho].name
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.entries
            .iter()
            .position(|e| e.name == name)
            .ok_or_else(|| Error::MissingFamilyEntry(name.to_string()))
    }

    pub fn entry(&self, name: &str) -> Result<&FamilyEntry> {
        Ok(&self.entries[self.index(name)?])
    }

    /// The absorbing unitary of the absorber itself.
    pub fn self_unitary(&self) -> &ComplexMatrix {
        &self.entries[self.rho].absorbing
    }

    /// A copy with one absorbing unitary replaced.
    pub fn with_absorbing(&self, name: &str, u: ComplexMatrix) -> Result<Self> {
        let i = self.index(name)?;
        let old = &self.entries[i].absorbing;
        if u.rows() != old.rows() || u.cols() != old.cols() {
            return Err(Error::mismatch(
                format!("absorbing unitary for `{name}`"),
                old.rows(),
                u.rows(),
            ));
        }
        let mut c = self.clone();
        c.entries[i].absorbing = u;
        Ok(c)
    }
}

fn expect_side(c: &AbsorberCandidate, side: Side) -> Result<()> {
    if c.side != side {
        return Err(Error::SideMismatch(format!(
            "expected a {side} absorber, got a {} one",
            c.side
        )));
    }
    Ok(())
}

fn verify(c: &AbsorberCandidate, tol: f64) -> Result<CheckReport> {
    let kr = c.absorber_dim();
    let id_r = ComplexMatrix::identity(kr);
    let unitarity = c
        .entries
        .iter()
        .map(|e| CheckReport::leaf(format!("U^{} unitary", e.name), unitarity_residual(&e.absorbing), tol))
        .collect();

    let naturality = c
        .arrows
        .par_iter()
        .enumerate()
        .map(|(n, a)| {
            let (x1, x2) = (&c.entries[a.from], &c.entries[a.to]);
            let amp = match c.side {
                Side::Right => kron(&a.op, &id_r),
                Side::Left => kron(&id_r, &a.op),
            };
            let r = residual(&(&amp * &x1.absorbing), &(&x2.absorbing * &amp))?;
            Ok(CheckReport::leaf(
                format!("natural #{n:03} {} -> {}", x1.name, x2.name),
                r,
                tol,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tensor = Vec::with_capacity(c.products.len());
    for p in &c.products {
        let (a, b, ab) = (&c.entries[p.left], &c.entries[p.right], &c.entries[p.result]);
        let lhs = match c.side {
            Side::Right => leg_product_pair(
                &a.absorbing,
                &[1, 3],
                &b.absorbing,
                &[2, 3],
                &[a.carrier_dim, b.carrier_dim, kr],
            )?,
            Side::Left => leg_product_pair(
                &b.absorbing,
                &[1, 3],
                &a.absorbing,
                &[1, 2],
                &[kr, a.carrier_dim, b.carrier_dim],
            )?,
        };
        let r = residual(&ab.absorbing, &lhs)?;
        tensor.push(CheckReport::leaf(
            format!("tensor {} = {} x {}", ab.name, a.name, b.name),
            r,
            tol,
        ));
    }

    let trivial = c
        .entries
        .iter()
        .filter(|e| e.trivial)
        .map(|e| {
            let r = residual(&e.absorbing, &ComplexMatrix::identity(e.absorbing.rows()))?;
            Ok(CheckReport::leaf(format!("U^{} = 1", e.name), r, tol))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(CheckReport::group(
        format!("{} absorber {}", c.side, c.rho_name()),
        tol,
        vec![
            CheckReport::group("naturality", tol, naturality),
            CheckReport::group("tensor", tol, tensor),
            CheckReport::group("trivial objects", tol, trivial),
            CheckReport::group("unitarity", tol, unitarity),
        ],
    ))
}

fn leg_product_pair(
    a: &ComplexMatrix,
    la: &[usize],
    b: &ComplexMatrix,
    lb: &[usize],
    dims: &[usize],
) -> Result<ComplexMatrix> {
    Ok(&place(a, la, dims)? * &place(b, lb, dims)?)
}

/// Naturality `(a⊗1)U^{x₁} = U^{x₂}(a⊗1)` for every arrow, the tensor
/// condition `U^{x₁⊗x₂} = U^{x₁}₁₃U^{x₂}₂₃`, and `U^{τ(K)} = 1`.
pub fn verify_right_absorber(c: &AbsorberCandidate, tol: f64) -> Result<CheckReport> {
    expect_side(c, Side::Right)?;
    verify(c, tol)
}

/// Naturality `(1⊗a)U^{x₁} = U^{x₂}(1⊗a)`, the tensor condition
/// `U^{x₁⊗x₂} = (U^{x₂})₁₃(U^{x₁})₁₂`, and `U^{τ(K)} = 1`.
pub fn verify_left_absorber(c: &AbsorberCandidate, tol: f64) -> Result<CheckReport> {
    expect_side(c, Side::Left)?;
    verify(c, tol)
}

/// The multiplicative unitary of a verified right absorber and the right
/// representations it induces on the family.
#[derive(Clone, Debug)]
pub struct AbsorbedUnitary {
    pub unitary: Arc<MultiplicativeUnitary>,
    pub representations: Vec<(String, Representation)>,
    pub report: CheckReport,
}

/// `U^ρ` is multiplicative, each `U^x` is a right representation of it, and
/// `x ↦ U^x` is full on the family (equal Hom dimensions).
pub fn absorber_to_mu(c: &AbsorberCandidate, tol: f64) -> Result<AbsorbedUnitary> {
    let verified = verify_right_absorber(c, tol)?.into_result()?;
    let unitary = Arc::new(MultiplicativeUnitary::new(
        c.self_unitary().clone(),
        c.absorber_dim(),
        tol,
    )?);
    let mut rep_checks = Vec::new();
    let mut representations = Vec::new();
    for e in &c.entries {
        let rep = Representation::new_unchecked(Side::Right, e.carrier_dim, unitary.clone(), e.absorbing.clone())?;
        let mut r = rep.check(tol)?;
        r.name = format!("U^{} right representation", e.name);
        rep_checks.push(r);
        representations.push((e.name.clone(), rep));
    }
    let mut fullness = Vec::new();
    for (&(i, j), &dim) in &c.hom_dims {
        let got = intertwiner_basis(&representations[i].1, &representations[j].1, NULLSPACE_REL_TOL)?.dim();
        fullness.push(CheckReport::flag(
            format!("dim Hom({}, {}) = {dim} vs {got}", c.entries[i].name, c.entries[j].name),
            dim == got,
            tol,
        ));
    }
    let report = CheckReport::group(
        "absorber to multiplicative unitary",
        tol,
        vec![
            verified,
            unitary.check(tol).renamed("pentagon"),
            CheckReport::group("representations", tol, rep_checks),
            CheckReport::group("fullness", tol, fullness),
        ],
    );
    let report = report.into_result()?;
    Ok(AbsorbedUnitary {
        unitary,
        representations,
        report,
    })
}

impl CheckReport {
    pub(crate) fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

type Factor<'a> = (&'a ComplexMatrix, &'a [usize]);

/// One named leg equation as a report leaf.
pub(crate) fn equation(
    name: &str,
    dims: &[usize],
    lhs: &[Factor<'_>],
    rhs: &[Factor<'_>],
    tol: f64,
) -> Result<CheckReport> {
    Ok(CheckReport::leaf(name, leg_equation_residual(dims, lhs, rhs)?, tol))
}

/// The six pentagon-like equations linking two right absorbers with
/// `U = U^{ρ}`, `Ǔ = Ǔ^{ρ̌}`, `V = U^{ρ̌}` on `(Ȟ,H)`, `W = Ǔ^{ρ}` on `(H,Ȟ)`.
pub fn compare_absorbers(c1: &AbsorberCandidate, c2: &AbsorberCandidate, tol: f64) -> Result<CheckReport> {
    expect_side(c1, Side::Right)?;
    expect_side(c2, Side::Right)?;
    let (h, hc) = (c1.absorber_dim(), c2.absorber_dim());
    let u = c1.self_unitary();
    let uc = c2.self_unitary();
    let v = &c1.entry(c2.rho_name())?.absorbing;
    let w = &c2.entry(c1.rho_name())?.absorbing;
    let subs = vec![
        equation(
            "1: U23 V12 = V12 V13 U23",
            &[hc, h, h],
            &[(u, &[2, 3]), (v, &[1, 2])],
            &[(v, &[1, 2]), (v, &[1, 3]), (u, &[2, 3])],
            tol,
        )?,
        equation(
            "2: Uc23 W12 = W12 W13 Uc23",
            &[h, hc, hc],
            &[(uc, &[2, 3]), (w, &[1, 2])],
            &[(w, &[1, 2]), (w, &[1, 3]), (uc, &[2, 3])],
            tol,
        )?,
        equation(
            "3: V23 Uc12 = Uc12 V13 V23",
            &[hc, hc, h],
            &[(v, &[2, 3]), (uc, &[1, 2])],
            &[(uc, &[1, 2]), (v, &[1, 3]), (v, &[2, 3])],
            tol,
        )?,
        equation(
            "4: W23 U12 = U12 W13 W23",
            &[h, h, hc],
            &[(w, &[2, 3]), (u, &[1, 2])],
            &[(u, &[1, 2]), (w, &[1, 3]), (w, &[2, 3])],
            tol,
        )?,
        equation(
            "5: V23 W12 = W12 U13 V23",
            &[h, hc, h],
            &[(v, &[2, 3]), (w, &[1, 2])],
            &[(w, &[1, 2]), (u, &[1, 3]), (v, &[2, 3])],
            tol,
        )?,
        equation(
            "6: W23 V12 = V12 Uc13 W23",
            &[hc, h, hc],
            &[(w, &[2, 3]), (v, &[1, 2])],
            &[(v, &[1, 2]), (uc, &[1, 3]), (w, &[2, 3])],
            tol,
        )?,
    ];
    Ok(CheckReport::group(
        format!("compare absorbers {} and {}", c1.rho_name(), c2.rho_name()),
        tol,
        subs,
    ))
}

/// The same comparison for two left absorbers, with `V = U_λ^{λ̌}` on
/// `(H,Ȟ)` and `W = Ǔ_{λ̌}^{λ}` on `(Ȟ,H)`.
pub fn compare_left_absorbers(c1: &AbsorberCandidate, c2: &AbsorberCandidate, tol: f64) -> Result<CheckReport> {
    expect_side(c1, Side::Left)?;
    expect_side(c2, Side::Left)?;
    let (h, hc) = (c1.absorber_dim(), c2.absorber_dim());
    let u = c1.self_unitary();
    let uc = c2.self_unitary();
    let v = &c1.entry(c2.rho_name())?.absorbing;
    let w = &c2.entry(c1.rho_name())?.absorbing;
    let subs = vec![
        equation(
            "1: U12 V23 = V23 V13 U12",
            &[h, h, hc],
            &[(u, &[1, 2]), (v, &[2, 3])],
            &[(v, &[2, 3]), (v, &[1, 3]), (u, &[1, 2])],
            tol,
        )?,
        equation(
            "2: Uc12 W23 = W23 W13 Uc12",
            &[hc, hc, h],
            &[(uc, &[1, 2]), (w, &[2, 3])],
            &[(w, &[2, 3]), (w, &[1, 3]), (uc, &[1, 2])],
            tol,
        )?,
        equation(
            "3: V12 Uc23 = Uc23 V13 V12",
            &[h, hc, hc],
            &[(v, &[1, 2]), (uc, &[2, 3])],
            &[(uc, &[2, 3]), (v, &[1, 3]), (v, &[1, 2])],
            tol,
        )?,
        equation(
            "4: W12 U23 = U23 W13 W12",
            &[hc, h, h],
            &[(w, &[1, 2]), (u, &[2, 3])],
            &[(u, &[2, 3]), (w, &[1, 3]), (w, &[1, 2])],
            tol,
        )?,
        equation(
            "5: V12 W23 = W23 U13 V12",
            &[h, hc, h],
            &[(v, &[1, 2]), (w, &[2, 3])],
            &[(w, &[2, 3]), (u, &[1, 3]), (v, &[1, 2])],
            tol,
        )?,
        equation(
            "6: W12 V23 = V23 Uc13 W12",
            &[hc, h, hc],
            &[(w, &[1, 2]), (v, &[2, 3])],
            &[(v, &[2, 3]), (uc, &[1, 3]), (w, &[1, 2])],
            tol,
        )?,
    ];
    Ok(CheckReport::group(
        format!("compare left absorbers {} and {}", c1.rho_name(), c2.rho_name()),
        tol,
        subs,
    ))
}

/// A bicharacter `V` on `(d₁,d₂)` from `U₁` to `U₂`.
#[derive(Clone, Debug)]
pub struct Bicharacter {
    pub v: ComplexMatrix,
    pub source: Arc<MultiplicativeUnitary>,
    pub target: Arc<MultiplicativeUnitary>,
}

/// `V^Φ = U₂^{Φ(ρ₁)}` for a functor given on family names. Checks that
/// carriers are preserved, that `Φ` respects products and arrows at the
/// level of absorbing unitaries, both bicharacter equations, and
/// `V₂₃(U₁^x)₁₂ = (U₁^x)₁₂(U₂^{Φx})₁₃V₂₃` for every family member.
pub fn functor_bicharacter(
    phi: &[(&str, &str)],
    c1: &AbsorberCandidate,
    c2: &AbsorberCandidate,
    tol: f64,
) -> Result<(Bicharacter, CheckReport)> {
    expect_side(c1, Side::Right)?;
    expect_side(c2, Side::Right)?;
    let map: BTreeMap<&str, &str> = phi.iter().copied().collect();
    let image = |name: &str| -> Result<&FamilyEntry> {
        let target = map
            .get(name)
            .ok_or_else(|| Error::MissingFamilyEntry(format!("functor image of `{name}`")))?;
        c2.entry(target)
    };
    let (d1, d2) = (c1.absorber_dim(), c2.absorber_dim());
    let u1 = c1.self_unitary();
    let u2 = c2.self_unitary();
    let v = image(c1.rho_name())?.absorbing.clone();

    let mut carriers = Vec::new();
    let mut per_object = Vec::new();
    for e in &c1.entries {
        let fx = image(&e.name)?;
        carriers.push(CheckReport::flag(
            format!("carrier of {} preserved", e.name),
            fx.carrier_dim == e.carrier_dim,
            tol,
        ));
        if fx.carrier_dim != e.carrier_dim {
            continue;
        }
        per_object.push(equation(
            &format!("V23 U1^{0}12 = U1^{0}12 U2^F{0}13 V23", e.name),
            &[e.carrier_dim, d1, d2],
            &[(&v, &[2, 3]), (&e.absorbing, &[1, 2])],
            &[(&e.absorbing, &[1, 2]), (&fx.absorbing, &[1, 3]), (&v, &[2, 3])],
            tol,
        )?);
    }
    let report_carriers = CheckReport::group("carriers", tol, carriers);
    if !report_carriers.passed {
        return Err(Error::failed(report_carriers));
    }

    let mut strict = Vec::new();
    for p in &c1.products {
        let (a, b, ab) = (&c1.entries[p.left], &c1.entries[p.right], &c1.entries[p.result]);
        let (fa, fb, fab) = (image(&a.name)?, image(&b.name)?, image(&ab.name)?);
        let lhs = leg_product_pair(
            &fa.absorbing,
            &[1, 3],
            &fb.absorbing,
            &[2, 3],
            &[a.carrier_dim, b.carrier_dim, d2],
        )?;
        strict.push(CheckReport::leaf(
            format!("F({}) = F({}) x F({})", ab.name, a.name, b.name),
            residual(&fab.absorbing, &lhs)?,
            tol,
        ));
    }
    let id2 = ComplexMatrix::identity(d2);
    let mut arrows = Vec::new();
    for (n, a) in c1.arrows.iter().enumerate() {
        let (x1, x2) = (image(&c1.entries[a.from].name)?, image(&c1.entries[a.to].name)?);
        let amp = kron(&a.op, &id2);
        let r = residual(&(&amp * &x1.absorbing), &(&x2.absorbing * &amp))?;
        arrows.push(CheckReport::leaf(format!("F(arrow #{n:03})"), r, tol));
    }

    let report = CheckReport::group(
        "functor bicharacter",
        tol,
        vec![
            report_carriers,
            CheckReport::group("strict tensor", tol, strict),
            CheckReport::group("arrows", tol, arrows),
            equation(
                "U2_23 V12 = V12 V13 U2_23",
                &[d1, d2, d2],
                &[(u2, &[2, 3]), (&v, &[1, 2])],
                &[(&v, &[1, 2]), (&v, &[1, 3]), (u2, &[2, 3])],
                tol,
            )?,
            equation(
                "V23 U1_12 = U1_12 V13 V23",
                &[d1, d1, d2],
                &[(&v, &[2, 3]), (u1, &[1, 2])],
                &[(u1, &[1, 2]), (&v, &[1, 3]), (&v, &[2, 3])],
                tol,
            )?,
            CheckReport::group("functor equation", tol, per_object),
        ],
    );
    let source = Arc::new(MultiplicativeUnitary::new_unchecked(u1.clone(), d1)?);
    let target = Arc::new(MultiplicativeUnitary::new_unchecked(u2.clone(), d2)?);
    Ok((Bicharacter { v, source, target }, report))
}

/// Gathers `U = U^ρ`, `Ǔ = Ǔ^λ`, `V = U^λ` and `W = Ǔ^ρ` for a right
/// absorber `ρ` and a left absorber `λ` in the same category.
pub fn mixed_data(rho: &AbsorberCandidate, lam: &AbsorberCandidate) -> Result<MixedData> {
    expect_side(rho, Side::Right)?;
    expect_side(lam, Side::Left)?;
    let (h, hc) = (rho.absorber_dim(), lam.absorber_dim());
    let right = Arc::new(MultiplicativeUnitary::new_unchecked(rho.self_unitary().clone(), h)?);
    let left = Arc::new(AntiBase {
        dim: hc,
        u: lam.self_unitary().clone(),
    });
    let v = rho.entry(lam.rho_name())?.absorbing.clone();
    let w = lam.entry(rho.rho_name())?.absorbing.clone();
    MixedData::new(right, left, v, w)
}

/// The six equations linking a right absorber `ρ` on `H` and a left
/// absorber `λ` on `Ȟ` through `V = U^λ` and `W = Ǔ^ρ`, both on `(Ȟ,H)`.
pub fn mixed_system_check(rho: &AbsorberCandidate, lam: &AbsorberCandidate, tol: f64) -> Result<CheckReport> {
    let data = mixed_data(rho, lam)?;
    mixed_data_check(&data, tol)
}

/// [`mixed_system_check`] on already extracted data.
pub fn mixed_data_check(data: &MixedData, tol: f64) -> Result<CheckReport> {
    let (h, hc) = (data.right.dim(), data.left.dim);
    let (u, uc, v, w) = (data.right.matrix(), &data.left.u, &data.v, &data.w);
    let subs = vec![
        CheckReport::leaf(
            "U multiplicative",
            data.right.pentagon_residual().max(data.right.unitarity_residual()),
            tol,
        ),
        crate::multunit::antimultiplicative_check(uc, hc, tol)?.renamed("Uc antimultiplicative"),
        equation(
            "a: U23 V12 = V12 V13 U23",
            &[hc, h, h],
            &[(u, &[2, 3]), (v, &[1, 2])],
            &[(v, &[1, 2]), (v, &[1, 3]), (u, &[2, 3])],
            tol,
        )?,
        equation(
            "b: Uc12 W23 = W23 W13 Uc12",
            &[hc, hc, h],
            &[(uc, &[1, 2]), (w, &[2, 3])],
            &[(w, &[2, 3]), (w, &[1, 3]), (uc, &[1, 2])],
            tol,
        )?,
        equation(
            "c: V13 Uc12 = Uc12 V13 V23",
            &[hc, hc, h],
            &[(v, &[1, 3]), (uc, &[1, 2])],
            &[(uc, &[1, 2]), (v, &[1, 3]), (v, &[2, 3])],
            tol,
        )?,
        equation(
            "d: W13 U23 = U23 W13 W12",
            &[hc, h, h],
            &[(w, &[1, 3]), (u, &[2, 3])],
            &[(u, &[2, 3]), (w, &[1, 3]), (w, &[1, 2])],
            tol,
        )?,
        equation(
            "e: V13 W12 = W12 V13 U23",
            &[hc, h, h],
            &[(v, &[1, 3]), (w, &[1, 2])],
            &[(w, &[1, 2]), (v, &[1, 3]), (u, &[2, 3])],
            tol,
        )?,
        equation(
            "f: W13 V23 = V23 W13 Uc12",
            &[hc, hc, h],
            &[(w, &[1, 3]), (v, &[2, 3])],
            &[(v, &[2, 3]), (w, &[1, 3]), (uc, &[1, 2])],
            tol,
        )?,
    ];
    Ok(CheckReport::group("mixed right/left system", tol, subs))
}

/// Default test objects of `Corep(W)`: `τ(ℂ)`, `τ(ℂ²)`, `W`, `W⊠W`, plus extras.
pub fn default_family(cat: &Corep, extra: Vec<(String, Representation)>) -> Result<Vec<(String, Representation)>> {
    let w = cat.regular();
    let mut objects = vec![
        ("tau1".to_string(), cat.unit(1)),
        ("tau2".to_string(), cat.unit(2)),
        ("W".to_string(), w.clone()),
        ("WW".to_string(), cat.tensor(&w, &w)?),
    ];
    objects.extend(extra);
    Ok(objects)
}

/// `ρ = W` with `U^x` the representation unitary of `x` itself.
pub fn canonical_candidate(
    m: &Arc<MultiplicativeUnitary>,
    extra: Vec<(String, Representation)>,
    tol: f64,
) -> Result<AbsorberCandidate> {
    let cat = Corep::right(m.clone());
    let objects = default_family(&cat, extra)?;
    AbsorberCandidate::from_rule(&cat, Side::Right, &objects, "W", |x| Ok(x.op().clone()), tol)
}

/// `ρ⊗y` with `Ǔ^x = U^x ⊗ 1_y`, over the default family plus `W⊠y`
/// (named `W*{y_name}`) and extras.
pub fn stabilized_candidate(
    m: &Arc<MultiplicativeUnitary>,
    y_name: &str,
    y: &Representation,
    extra: Vec<(String, Representation)>,
    tol: f64,
) -> Result<(AbsorberCandidate, String)> {
    let cat = Corep::right(m.clone());
    let rho_name = format!("W*{y_name}");
    let rho = cat.tensor(&cat.regular(), y)?;
    let mut objects = default_family(&cat, extra)?;
    if !objects.iter().any(|(n, _)| *n == rho_name) {
        objects.push((rho_name.clone(), rho));
    }
    let (d, ky) = (m.dim(), y.carrier_dim());
    let c = AbsorberCandidate::from_rule(
        &cat,
        Side::Right,
        &objects,
        &rho_name,
        |x| place(x.op(), &[1, 2], &[x.carrier_dim(), d, ky]),
        tol,
    )?;
    Ok((c, rho_name))
}
