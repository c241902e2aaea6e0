//! The finite interface to a tensor category of Hilbert-space objects that
//! absorber verification needs: carriers, units, tensor products and
//! intertwiner bases.

use std::fmt::Debug;
use std::sync::Arc;

use crate::error::Result;
use crate::multunit::MultiplicativeUnitary;
use crate::repcat::{intertwiner_basis, tensor, trivial_rep_on, Representation, Side};
use crate::tensor::{residual, ComplexMatrix};

pub trait TensorCategory {
    type Object: Clone + Debug;

    fn carrier_dim(&self, x: &Self::Object) -> usize;

    /// The trivial object `τ(ℂᵏ)`.
    fn unit(&self, k: usize) -> Self::Object;

    /// Whether `x` is isomorphic to a trivial object via the identity map.
    fn is_trivial(&self, x: &Self::Object, tol: f64) -> bool;

    fn tensor(&self, a: &Self::Object, b: &Self::Object) -> Result<Self::Object>;

    /// Orthonormal basis of `Hom(a, b)` as `k_b × k_a` matrices.
    fn hom_basis(&self, a: &Self::Object, b: &Self::Object, rel_tol: f64) -> Result<Vec<ComplexMatrix>>;

    /// Equality of objects on the nose (same carrier, same structure maps).
    fn same_object(&self, a: &Self::Object, b: &Self::Object, tol: f64) -> bool;

    /// Validity report for an object of this category.
    fn check_object(&self, x: &Self::Object, tol: f64) -> Result<crate::CheckReport>;
}

/// Representations of a multiplicative unitary on one side.
#[derive(Clone, Debug)]
pub struct Corep {
    pub base: Arc<MultiplicativeUnitary>,
    pub side: Side,
}

impl Corep {
    pub fn right(base: Arc<MultiplicativeUnitary>) -> Self {
        Corep {
            base,
            side: Side::Right,
        }
    }

    pub fn left(base: Arc<MultiplicativeUnitary>) -> Self {
        Corep { base, side: Side::Left }
    }

    /// `W` viewed as an object of this category.
    pub fn regular(&self) -> Representation {
        Representation::from_parts(
            self.side,
            self.base.dim(),
            self.base.clone(),
            self.base.matrix().clone(),
        )
    }
}

impl TensorCategory for Corep {
    type Object = Representation;

    fn carrier_dim(&self, x: &Representation) -> usize {
        x.carrier_dim()
    }

    fn unit(&self, k: usize) -> Representation {
        trivial_rep_on(self.side, &self.base, k)
    }

    fn is_trivial(&self, x: &Representation, tol: f64) -> bool {
        residual(x.op(), &ComplexMatrix::identity(x.op().rows())).is_ok_and(|r| r <= tol)
    }

    fn tensor(&self, a: &Representation, b: &Representation) -> Result<Representation> {
        tensor(a, b)
    }

    fn hom_basis(&self, a: &Representation, b: &Representation, rel_tol: f64) -> Result<Vec<ComplexMatrix>> {
        Ok(intertwiner_basis(a, b, rel_tol)?.elements)
    }

    fn same_object(&self, a: &Representation, b: &Representation, tol: f64) -> bool {
        a.approx_eq(b, tol)
    }

    fn check_object(&self, x: &Representation, tol: f64) -> Result<crate::CheckReport> {
        x.check(tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multunit::GroupTable;
    use crate::repcat::NULLSPACE_REL_TOL;

    #[test]
    fn corep_units_and_tensors() {
        let m = Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(2)));
        let c = Corep::right(m.clone());
        let u = c.unit(2);
        assert!(c.is_trivial(&u, 0.0));
        assert!(!c.is_trivial(&c.regular(), 1e-10));
        let t = c.tensor(&c.unit(1), &c.regular()).unwrap();
        assert!(c.same_object(&t, &c.regular(), 0.0));
        assert_eq!(c.hom_basis(&u, &u, NULLSPACE_REL_TOL).unwrap().len(), 4);
    }
}
