//! JSON fixtures: named operators with leg signatures, absorber families and
//! leg-equation corpora. Complex entries are `[re, im]` pairs in row-major
//! order; `f64` values round-trip bit-exactly through the text form.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::absorber::{AbsorberCandidate, Arrow, FamilyEntry, Product};
use crate::braided::{BraidedMU, BraidedRep};
use crate::error::{Error, Result};
use crate::multunit::MultiplicativeUnitary;
use crate::repcat::{Representation, Side};
use crate::tensor::{ComplexMatrix, C64};

/// One operator on the space with leg dimensions `signature`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFixture {
    pub name: String,
    pub signature: Vec<usize>,
    pub entries: Vec<[f64; 2]>,
}

impl OperatorFixture {
    pub fn new(name: impl Into<String>, signature: &[usize], m: &ComplexMatrix) -> Result<Self> {
        let n: usize = signature.iter().product();
        if !m.is_square() || m.rows() != n {
            return Err(Error::mismatch("fixture operator side", n, m.rows()));
        }
        Ok(OperatorFixture {
            name: name.into(),
            signature: signature.to_vec(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        })
    }

    /// Total dimension of the space the operator acts on.
    pub fn side(&self) -> usize {
        self.signature.iter().product()
    }

    pub fn matrix(&self) -> Result<ComplexMatrix> {
        if self.signature.is_empty() || self.signature.contains(&0) {
            return Err(Error::Fixture(format!(
                "`{}`: signature {:?} is not positive",
                self.name, self.signature
            )));
        }
        let n = self.side();
        if self.entries.len() != n * n {
            return Err(Error::Fixture(format!(
                "`{}`: expected {} entries for signature {:?}, found {}",
                self.name,
                n * n,
                self.signature,
                self.entries.len()
            )));
        }
        ComplexMatrix::new(n, n, self.entries.iter().map(|&[re, im]| C64::new(re, im)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyEntryFixture {
    pub name: String,
    pub carrier_dim: usize,
    pub trivial: bool,
    pub absorbing: OperatorFixture,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowFixture {
    pub from: usize,
    pub to: usize,
    pub op: Vec<[f64; 2]>,
}

/// An [`AbsorberCandidate`] in serializable form. Products are
/// `[left, right, result]` and Hom dimensions `[from, to, dim]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorberFixture {
    pub side: Side,
    pub rho: String,
    pub entries: Vec<FamilyEntryFixture>,
    pub products: Vec<[usize; 3]>,
    pub arrows: Vec<ArrowFixture>,
    pub hom_dims: Vec<[usize; 3]>,
}

fn pairs(m: &ComplexMatrix) -> Vec<[f64; 2]> {
    m.entries().iter().map(|z| [z.re, z.im]).collect()
}

impl AbsorberFixture {
    pub fn from_candidate(c: &AbsorberCandidate) -> Result<Self> {
        let kr = c.absorber_dim();
        let entries = c
            .entries
            .iter()
            .map(|e| {
                let sig = match c.side {
                    Side::Right => [e.carrier_dim, kr],
                    Side::Left => [kr, e.carrier_dim],
                };
                Ok(FamilyEntryFixture {
                    name: e.name.clone(),
                    carrier_dim: e.carrier_dim,
                    trivial: e.trivial,
                    absorbing: OperatorFixture::new(format!("U^{}", e.name), &sig, &e.absorbing)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AbsorberFixture {
            side: c.side,
            rho: c.rho_name().to_string(),
            entries,
            products: c.products.iter().map(|p| [p.left, p.right, p.result]).collect(),
            arrows: c
                .arrows
                .iter()
                .map(|a| ArrowFixture {
                    from: a.from,
                    to: a.to,
                    op: pairs(&a.op),
                })
                .collect(),
            hom_dims: c.hom_dims.iter().map(|(&(i, j), &d)| [i, j, d]).collect(),
        })
    }

    pub fn to_candidate(&self) -> Result<AbsorberCandidate> {
        let n = self.entries.len();
        let rho = self
            .entries
            .iter()
            .position(|e| e.name == self.rho)
            .ok_or_else(|| Error::MissingFamilyEntry(self.rho.clone()))?;
        let kr = self.entries[rho].carrier_dim;
        let mut entries = Vec::with_capacity(n);
        for e in &self.entries {
            let absorbing = e.absorbing.matrix()?;
            if absorbing.rows() != e.carrier_dim * kr {
                return Err(Error::Fixture(format!(
                    "absorbing unitary of `{}` has the wrong size",
                    e.name
                )));
            }
            entries.push(FamilyEntry {
                name: e.name.clone(),
                carrier_dim: e.carrier_dim,
                trivial: e.trivial,
                absorbing,
            });
        }
        let index = |i: usize| -> Result<usize> {
            if i < n {
                Ok(i)
            } else {
                Err(Error::Fixture(format!("family index {i} out of range")))
            }
        };
        let products = self
            .products
            .iter()
            .map(|&[l, r, p]| {
                Ok(Product {
                    left: index(l)?,
                    right: index(r)?,
                    result: index(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let arrows = self
            .arrows
            .iter()
            .map(|a| {
                let (rows, cols) = (entries[index(a.to)?].carrier_dim, entries[index(a.from)?].carrier_dim);
                if a.op.len() != rows * cols {
                    return Err(Error::Fixture(format!(
                        "arrow {} -> {} has the wrong size",
                        a.from, a.to
                    )));
                }
                Ok(Arrow {
                    from: a.from,
                    to: a.to,
                    op: ComplexMatrix::new(rows, cols, a.op.iter().map(|&[re, im]| C64::new(re, im)).collect())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let hom_dims = self
            .hom_dims
            .iter()
            .map(|&[i, j, d]| Ok(((index(i)?, index(j)?), d)))
            .collect::<Result<_>>()?;
        Ok(AbsorberCandidate {
            side: self.side,
            rho,
            entries,
            products,
            arrows,
            hom_dims,
        })
    }
}

/// A leg equation `lhs = rhs` on `signature`, in the leg-expression syntax.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationFixture {
    pub name: String,
    pub signature: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

/// The top-level fixture document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureSet {
    pub kind: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(default)]
    pub operators: Vec<OperatorFixture>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub absorbers: Vec<AbsorberFixture>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<EquationFixture>,
}

impl FixtureSet {
    pub fn new(kind: impl Into<String>) -> Self {
        FixtureSet {
            kind: kind.into(),
            description: String::new(),
            operators: Vec::new(),
            absorbers: Vec::new(),
            equations: Vec::new(),
        }
    }

    pub fn with_description(mut self, text: impl Into<String>) -> Self {
        self.description = text.into();
        self
    }

    pub fn push(&mut self, name: &str, signature: &[usize], m: &ComplexMatrix) -> Result<()> {
        self.operators.push(OperatorFixture::new(name, signature, m)?);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&OperatorFixture> {
        self.operators
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| Error::Fixture(format!("no operator named `{name}`")))
    }

    pub fn matrix(&self, name: &str) -> Result<ComplexMatrix> {
        self.get(name)?.matrix()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// Adds `W` on `(d,d)`.
    pub fn push_mu(&mut self, m: &MultiplicativeUnitary) -> Result<()> {
        self.push("W", &[m.dim(), m.dim()], m.matrix())
    }

    /// `W` from its operator, without validation.
    pub fn mu(&self) -> Result<Arc<MultiplicativeUnitary>> {
        let op = self.get("W")?;
        let d = square_legs(op, 2)?[0];
        Ok(Arc::new(MultiplicativeUnitary::new_unchecked(op.matrix()?, d)?))
    }

    /// Adds `W`, `U`, `V`, `F`.
    pub fn push_bmu(&mut self, b: &BraidedMU) -> Result<()> {
        let (dh, dl) = (b.dh(), b.dl());
        self.push_mu(b.w())?;
        self.push("U", &[dl, dh], b.u())?;
        self.push("V", &[dh, dl], b.v())?;
        self.push("F", &[dl, dl], b.f())
    }

    /// The quadruple from `W`, `U`, `V`, `F`, shapes checked only.
    pub fn bmu(&self) -> Result<Arc<BraidedMU>> {
        let w = self.mu()?;
        let f = self.get("F")?;
        let dl = square_legs(f, 2)?[0];
        Ok(Arc::new(BraidedMU::new_unchecked(
            w,
            dl,
            self.matrix("U")?,
            self.matrix("V")?,
            f.matrix()?,
        )?))
    }

    /// A right representation `S` on `(k,d)` of the fixture's `W`.
    pub fn representation(&self, name: &str) -> Result<Representation> {
        let w = self.mu()?;
        let op = self.get(name)?;
        if op.signature.len() != 2 || op.signature[1] != w.dim() {
            return Err(Error::Fixture(format!("`{name}` must live on (k,{})", w.dim())));
        }
        Representation::new_unchecked(Side::Right, op.signature[0], w, op.matrix()?)
    }

    /// A braided representation from operators `S` on `(k,dH)` and `T` on
    /// `(k,dL)`.
    pub fn braided_rep(&self, bmu: &Arc<BraidedMU>) -> Result<BraidedRep> {
        let s = self.get("S")?;
        let k = s.signature.first().copied().unwrap_or(0);
        BraidedRep::new_unchecked(bmu.clone(), k, s.matrix()?, self.matrix("T")?)
    }
}

fn square_legs(op: &OperatorFixture, legs: usize) -> Result<&[usize]> {
    if op.signature.len() != legs || op.signature.iter().any(|&d| d != op.signature[0]) {
        return Err(Error::Fixture(format!(
            "`{}` must have {legs} legs of equal dimension, found {:?}",
            op.name, op.signature
        )));
    }
    Ok(&op.signature)
}
