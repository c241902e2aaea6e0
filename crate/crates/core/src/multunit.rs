//! Multiplicative and antimultiplicative unitaries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repcat::{right_rep_check, Representation, Side};
use crate::report::{CheckReport, DEFAULT_TOL};
use crate::tensor::{flip, place, residual, unitarity_residual, ComplexMatrix};

/// A unitary `W` on `H⊗H` satisfying `W₂₃W₁₂ = W₁₂W₁₃W₂₃`.
#[derive(Clone, Debug)]
pub struct MultiplicativeUnitary {
    dim: usize,
    w: ComplexMatrix,
    pentagon_residual: f64,
    unitarity_residual: f64,
}

impl PartialEq for MultiplicativeUnitary {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.w == other.w
    }
}

fn check_shape(m: &ComplexMatrix, d: usize, what: &str) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidSignature(format!("{what}: dimension must be positive")));
    }
    if !m.is_square() || m.rows() != d * d {
        return Err(Error::mismatch(format!("{what} on ({d},{d})"), d * d, m.rows()));
    }
    Ok(())
}

fn pentagon_residual(w: &ComplexMatrix, d: usize) -> Result<f64> {
    let dims = [d, d, d];
    let w12 = place(w, &[1, 2], &dims)?;
    let w13 = place(w, &[1, 3], &dims)?;
    let w23 = place(w, &[2, 3], &dims)?;
    residual(&(&w23 * &w12), &ComplexMatrix::product([&w12, &w13, &w23])?)
}

/// Checks unitarity and the pentagon equation on `(d,d,d)`.
pub fn pentagon_check(w: &ComplexMatrix, d: usize, tol: f64) -> Result<CheckReport> {
    check_shape(w, d, "pentagon_check")?;
    Ok(CheckReport::group(
        "multiplicative unitary",
        tol,
        vec![
            CheckReport::leaf("unitarity", unitarity_residual(w), tol),
            CheckReport::leaf("W23 W12 = W12 W13 W23", pentagon_residual(w, d)?, tol),
        ],
    ))
}

/// Checks unitarity and `U₁₂U₂₃ = U₂₃U₁₃U₁₂` on `(d,d,d)`.
pub fn antimultiplicative_check(u: &ComplexMatrix, d: usize, tol: f64) -> Result<CheckReport> {
    check_shape(u, d, "antimultiplicative_check")?;
    let dims = [d, d, d];
    let u12 = place(u, &[1, 2], &dims)?;
    let u13 = place(u, &[1, 3], &dims)?;
    let u23 = place(u, &[2, 3], &dims)?;
    let r = residual(&(&u12 * &u23), &ComplexMatrix::product([&u23, &u13, &u12])?)?;
    Ok(CheckReport::group(
        "antimultiplicative unitary",
        tol,
        vec![
            CheckReport::leaf("unitarity", unitarity_residual(u), tol),
            CheckReport::leaf("U12 U23 = U23 U13 U12", r, tol),
        ],
    ))
}

impl MultiplicativeUnitary {
    /// Validates `w` at `tol`; the failing report is returned inside the error.
    pub fn new(w: ComplexMatrix, d: usize, tol: f64) -> Result<Self> {
        let report = pentagon_check(&w, d, tol)?;
        let unitarity = report.subs[0].residual;
        let pentagon = report.subs[1].residual;
        report.into_result()?;
        Ok(MultiplicativeUnitary {
            dim: d,
            w,
            pentagon_residual: pentagon,
            unitarity_residual: unitarity,
        })
    }

    /// Skips validation (the residuals are still computed and recorded).
    /// Meant for negative tests and for loading data that is checked later.
    pub fn new_unchecked(w: ComplexMatrix, d: usize) -> Result<Self> {
        check_shape(&w, d, "multiplicative unitary")?;
        Ok(MultiplicativeUnitary {
            dim: d,
            pentagon_residual: pentagon_residual(&w, d)?,
            unitarity_residual: unitarity_residual(&w),
            w,
        })
    }

    /// `W(δ_g⊗δ_h) = δ_g⊗δ_{gh}` on `ℓ²(G)⊗ℓ²(G)`.
    pub fn from_group(g: &GroupTable) -> Self {
        let n = g.order();
        let image: Vec<usize> = (0..n * n).map(|i| (i / n) * n + g.mul(i / n, i % n)).collect();
        let w = ComplexMatrix::permutation(&image).expect("group rows are permutations");
        Self::new(w, n, 0.0).expect("group unitaries satisfy the pentagon exactly")
    }

    /// The unitary `1` on `ℂ⊗ℂ`.
    pub fn trivial() -> Self {
        Self::new(ComplexMatrix::identity(1), 1, 0.0).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.w
    }

    pub fn pentagon_residual(&self) -> f64 {
        self.pentagon_residual
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    /// Re-runs [`pentagon_check`] at `tol`.
    pub fn check(&self, tol: f64) -> CheckReport {
        pentagon_check(&self.w, self.dim, tol).expect("shape validated at construction")
    }

    /// `Ŵ = ΣW*Σ`.
    pub fn dual(&self) -> Self {
        let s = flip(self.dim, self.dim);
        let w = ComplexMatrix::product([&s, &self.w.adjoint(), &s]).unwrap();
        MultiplicativeUnitary {
            dim: self.dim,
            w,
            pentagon_residual: self.pentagon_residual,
            unitarity_residual: self.unitarity_residual,
        }
    }

    /// `W` as a right representation of itself.
    pub fn as_right_rep(&self) -> Representation {
        Representation::from_parts(Side::Right, self.dim, self.clone().into(), self.w.clone())
    }

    /// `W` as a left representation of itself.
    pub fn as_left_rep(&self) -> Representation {
        Representation::from_parts(Side::Left, self.dim, self.clone().into(), self.w.clone())
    }
}

/// The multiplicative unitary `W₁₃U^y₂₃` on `(H⊗K)⊗(H⊗K)`, legs `(d,k,d,k)`,
/// obtained from the canonical absorber by tensoring with `y`.
pub fn stabilize(m: &MultiplicativeUnitary, y: &Representation, tol: f64) -> Result<MultiplicativeUnitary> {
    if y.side() != Side::Right {
        return Err(Error::SideMismatch("stabilize needs a right representation".into()));
    }
    if y.base().as_ref() != m {
        return Err(Error::BaseMismatch);
    }
    right_rep_check(y.op(), y.carrier_dim(), m, tol)?.into_result()?;
    let (d, k) = (m.dim(), y.carrier_dim());
    let dims = [d, k, d, k];
    let w = &place(m.matrix(), &[1, 3], &dims)? * &place(y.op(), &[2, 3], &dims)?;
    MultiplicativeUnitary::new(w, d * k, tol.max(DEFAULT_TOL))
}

/// Multiplication table of a finite group, elements `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct GroupTable {
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl TryFrom<Vec<Vec<usize>>> for GroupTable {
    type Error = Error;
    fn try_from(mult: Vec<Vec<usize>>) -> Result<Self> {
        GroupTable::new(mult)
    }
}

impl From<GroupTable> for Vec<Vec<usize>> {
    fn from(g: GroupTable) -> Self {
        g.mult
    }
}

impl GroupTable {
    /// Validates closure, Latin-square rows and columns, associativity and
    /// an identity element.
    pub fn new(mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        let bad = |m: String| Err(Error::InvalidGroupTable(m));
        if n == 0 {
            return bad("empty table".into());
        }
        for (g, row) in mult.iter().enumerate() {
            if row.len() != n {
                return bad(format!("row {g} has {} entries, expected {n}", row.len()));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return bad(format!("row {g} is not a permutation of 0..{n}"));
                }
                seen[x] = true;
            }
        }
        for h in 0..n {
            let mut seen = vec![false; n];
            for row in &mult {
                if seen[row[h]] {
                    return bad(format!("column {h} is not a permutation"));
                }
                seen[row[h]] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return bad(format!("not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|g| mult[e][g] == g && mult[g][e] == g)) else {
            return bad("no identity element".into());
        };
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| mult[g][h] == identity).unwrap())
            .collect();
        Ok(GroupTable {
            mult,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `ℤ/n` with `g·h = g+h mod n`.
    pub fn cyclic(n: usize) -> Self {
        Self::new((0..n).map(|g| (0..n).map(|h| (g + h) % n).collect()).collect()).expect("cyclic groups are groups")
    }

    /// The symmetric group on three letters: permutations of `[0,1,2]` in
    /// lexicographic order, composed as `(gh)(i) = g(h(i))`.
    pub fn s3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let mult = perms
            .iter()
            .map(|g| perms.iter().map(|h| idx([g[h[0]], g[h[1]], g[h[2]]])).collect())
            .collect();
        Self::new(mult).expect("S3 is a group")
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mult[g][h]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|g| (0..n).all(|h| self.mult[g][h] == self.mult[h][g]))
    }
}

impl fmt::Display for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repcat::trivial_rep;
    use crate::tensor::ComplexMatrix;
    use std::sync::Arc;

    /// Hand oracle: the group unitary as a function on basis labels.
    fn apply_group(g: &GroupTable, w_legs: (usize, usize), v: &mut [usize]) {
        let (a, b) = w_legs;
        v[b] = g.mul(v[a], v[b]);
    }

    #[test]
    fn trivial_unitary_passes() {
        let r = pentagon_check(&ComplexMatrix::identity(1), 1, 0.0).unwrap();
        assert!(r.passed);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn z2_pentagon_matches_basis_enumeration() {
        let g = GroupTable::cyclic(2);
        let m = MultiplicativeUnitary::from_group(&g);
        assert_eq!(m.pentagon_residual(), 0.0);
        // W23 W12 versus W12 W13 W23 on all eight basis labels (rightmost acts first).
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    let mut lhs = [x, y, z];
                    apply_group(&g, (0, 1), &mut lhs);
                    apply_group(&g, (1, 2), &mut lhs);
                    let mut rhs = [x, y, z];
                    apply_group(&g, (1, 2), &mut rhs);
                    apply_group(&g, (0, 2), &mut rhs);
                    apply_group(&g, (0, 1), &mut rhs);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn flip_is_not_multiplicative() {
        let r = pentagon_check(&flip(2, 2), 2, 1e-10).unwrap();
        assert!(!r.passed);
        assert!(r.residual >= 1.0);
    }

    #[test]
    fn group_unitaries_have_zero_pentagon_residual() {
        assert_eq!(
            MultiplicativeUnitary::from_group(&GroupTable::trivial()).matrix(),
            &ComplexMatrix::identity(1)
        );
        for g in [GroupTable::cyclic(3), GroupTable::s3()] {
            let m = MultiplicativeUnitary::from_group(&g);
            assert_eq!(m.check(0.0).residual, 0.0);
        }
        assert_eq!(MultiplicativeUnitary::from_group(&GroupTable::s3()).matrix().rows(), 36);
    }

    #[test]
    fn dual_is_an_involution_and_multiplicative() {
        for g in [GroupTable::trivial(), GroupTable::cyclic(3), GroupTable::s3()] {
            let m = MultiplicativeUnitary::from_group(&g);
            let d = m.dual();
            assert_eq!(d.check(0.0).residual, 0.0);
            assert_eq!(residual(d.dual().matrix(), m.matrix()).unwrap(), 0.0);
        }
    }

    #[test]
    fn adjoint_is_antimultiplicative() {
        let id = antimultiplicative_check(&ComplexMatrix::identity(4), 2, 0.0).unwrap();
        assert!(id.passed);
        for g in [GroupTable::cyclic(3), GroupTable::s3()] {
            let m = MultiplicativeUnitary::from_group(&g);
            let r = antimultiplicative_check(&m.matrix().adjoint(), g.order(), 0.0).unwrap();
            assert!(r.passed, "{r}");
        }
        assert!(!antimultiplicative_check(&flip(2, 2), 2, 1e-10).unwrap().passed);
    }

    #[test]
    fn validating_constructor_rejects_flip() {
        let err = MultiplicativeUnitary::new(flip(2, 2), 2, 1e-10).unwrap_err();
        assert!(err.is_check_failure());
        let m = MultiplicativeUnitary::new_unchecked(flip(2, 2), 2).unwrap();
        assert!(m.pentagon_residual() > 0.5);
    }

    #[test]
    fn wrong_shape_is_an_input_error() {
        let err = pentagon_check(&ComplexMatrix::identity(3), 2, 1e-10).unwrap_err();
        assert!(!err.is_check_failure());
    }

    #[test]
    fn stabilize_by_unit_is_identity() {
        let m = Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(3)));
        let s = stabilize(&m, &trivial_rep(&m, 1), 1e-10).unwrap();
        assert_eq!(&s, m.as_ref());
    }

    #[test]
    fn stabilize_by_self_and_by_trivial_plane() {
        let m = Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(2)));
        let s = stabilize(&m, &m.as_right_rep(), 1e-10).unwrap();
        assert!(s.pentagon_residual() <= 1e-12);
        let t = stabilize(&m, &trivial_rep(&m, 2), 1e-10).unwrap();
        assert_eq!(t.dim(), 4);
        let expected = place(m.matrix(), &[1, 3], &[2, 2, 2, 2]).unwrap();
        assert_eq!(t.matrix(), &expected);
    }

    #[test]
    fn group_table_validation() {
        assert!(GroupTable::new(vec![]).is_err());
        assert!(GroupTable::new(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(GroupTable::new(vec![vec![1, 0], vec![0, 1]]).is_ok()); // identity is 1
                                                                        // Latin square without associativity.
        let quasi = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(matches!(GroupTable::new(quasi), Err(Error::InvalidGroupTable(_))));
        let s3 = GroupTable::s3();
        assert!(!s3.is_abelian());
        assert!((0..6).all(|g| s3.mul(g, s3.inverse(g)) == s3.identity()));
    }
}
