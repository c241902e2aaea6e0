//! Brute-force search for small braided multiplicative unitaries.
//!
//! Over a fixed `W`, enumerates signed permutation matrices as candidate
//! `U` (right representations) and `V` (left representations), pairs them
//! with group unitaries and their duals as `𝔽`, and returns the first
//! quadruple that passes [`bmu_validity_check`], has a braiding on `L`
//! different from the flip, is not the direct product `W₁₃𝔽₂₄`, and whose
//! semidirect product satisfies the pentagon equation.

use std::sync::Arc;

use crate::absorber::{
    canonical_candidate, default_family, mixed_system_check, verify_left_absorber, AbsorberCandidate,
};
use crate::braided::{bmu_validity_check, semidirect_unchecked, BraidedMU};
use crate::category::Corep;
use crate::error::{Error, Result};
use crate::multunit::{GroupTable, MultiplicativeUnitary};
use crate::repcat::{left_rep_check, rep_to_antirep, right_rep_check, AntiBase, MixedData, Side};
use crate::tensor::{extract_trivial_leg, leg_product, residual, ComplexMatrix, SpaceSignature, C64};

/// Search space and budget.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Values of `dL` tried in order.
    pub dl_values: Vec<usize>,
    /// Maximum number of `(U, V, 𝔽)` triples examined.
    pub budget: usize,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            dl_values: vec![2, 3],
            budget: 1_000_000,
            tol: crate::report::DEFAULT_TOL,
        }
    }
}

/// A found quadruple and how many triples were examined to find it.
#[derive(Clone, Debug)]
pub struct OracleHit {
    pub bmu: BraidedMU,
    pub examined: usize,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// All `n×n` permutation matrices with `±1` entries, in a fixed order.
pub fn signed_permutations(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::new();
    for p in permutations(n) {
        for signs in 0..(1usize << n) {
            let mut m = ComplexMatrix::zeros(n, n);
            for (j, &i) in p.iter().enumerate() {
                let s = if signs >> j & 1 == 1 { -1.0 } else { 1.0 };
                m[(i, j)] = C64::new(s, 0.0);
            }
            out.push(m);
        }
    }
    out
}

fn candidate_f(dl: usize) -> Vec<ComplexMatrix> {
    let g = MultiplicativeUnitary::from_group(&GroupTable::cyclic(dl));
    vec![g.matrix().clone(), g.dual().matrix().clone()]
}

/// Searches for a non-product braided multiplicative unitary over `w`.
pub fn oracle_bmu(w: &Arc<MultiplicativeUnitary>, cfg: &OracleConfig) -> Result<OracleHit> {
    let dh = w.dim();
    let tol = cfg.tol;
    let mut examined = 0usize;
    for &dl in &cfg.dl_values {
        let monos = signed_permutations(dl * dh);
        let us: Vec<&ComplexMatrix> = monos
            .iter()
            .filter(|u| right_rep_check(u, dl, w, tol).is_ok_and(|r| r.passed))
            .collect();
        let vs: Vec<&ComplexMatrix> = monos
            .iter()
            .filter(|v| left_rep_check(v, dl, w, tol).is_ok_and(|r| r.passed))
            .collect();
        let fs = candidate_f(dl);
        let sig = SpaceSignature::new(vec![dl, dh, dl])?;
        for u in &us {
            for v in &vs {
                let x = leg_product(
                    &[dl, dh, dl],
                    &[
                        (v, &[2, 3]),
                        (&u.adjoint(), &[1, 2]),
                        (&v.adjoint(), &[2, 3]),
                        (u, &[1, 2]),
                    ],
                )?;
                let z = extract_trivial_leg(&x, &sig, 2, tol)?.op;
                let braided = z.is_some_and(|z| residual(&z, &ComplexMatrix::identity(dl * dl)).is_ok_and(|r| r > 0.5));
                if !braided {
                    examined += fs.len();
                    if examined > cfg.budget {
                        return Err(Error::BudgetExhausted { examined });
                    }
                    continue;
                }
                for f in &fs {
                    examined += 1;
                    if examined > cfg.budget {
                        return Err(Error::BudgetExhausted { examined });
                    }
                    let b = BraidedMU::new_unchecked(w.clone(), dl, (*u).clone(), (*v).clone(), f.clone())?;
                    if !bmu_validity_check(&b, tol).passed {
                        continue;
                    }
                    let b = Arc::new(b);
                    let sr = semidirect_unchecked(&b)?;
                    let direct = leg_product(&[dh, dl, dh, dl], &[(w.matrix(), &[1, 3]), (f, &[2, 4])])?;
                    if residual(sr.wc.matrix(), &direct)? <= 0.5 {
                        continue;
                    }
                    if sr.wc.pentagon_residual() > tol || sr.wc.unitarity_residual() > tol {
                        continue;
                    }
                    return Ok(OracleHit {
                        bmu: Arc::try_unwrap(b).unwrap_or_else(|a| (*a).clone()),
                        examined,
                    });
                }
            }
        }
    }
    Err(Error::BudgetExhausted { examined })
}

/// A right absorber and a verified left absorber in the same category.
#[derive(Clone, Debug)]
pub struct LeftAbsorberHit {
    pub rho: AbsorberCandidate,
    pub lam: AbsorberCandidate,
    pub examined: usize,
}

/// Searches for a left absorber `λ = W` in the right representations of
/// `m`, over the family `τ(ℂ)`, `τ(ℂ²)`, `W`, `W⊠W`.
///
/// Each signed permutation on `(d,d)` is tried as `Ǔ^ρ` for the canonical
/// right absorber `ρ = W`; the left absorbing unitaries `Ǔ^x` are then
/// forced by the rep to anti-rep transfer. A candidate is accepted when it
/// passes [`verify_left_absorber`], [`mixed_system_check`] against `ρ`, and
/// reproduces the trial `Ǔ^ρ`.
pub fn left_absorber_oracle(m: &Arc<MultiplicativeUnitary>, budget: usize, tol: f64) -> Result<LeftAbsorberHit> {
    let d = m.dim();
    let rho = canonical_candidate(m, Vec::new(), tol)?;
    let cat = Corep::right(m.clone());
    let objects = default_family(&cat, Vec::new())?;
    let placeholder = Arc::new(AntiBase {
        dim: d,
        u: ComplexMatrix::identity(d * d),
    });
    let mut examined = 0usize;
    for w_mix in signed_permutations(d * d) {
        examined += 1;
        if examined > budget {
            return Err(Error::BudgetExhausted { examined });
        }
        let data = MixedData::new(m.clone(), placeholder.clone(), m.matrix().clone(), w_mix.clone())?;
        let Ok(absorbing) = objects
            .iter()
            .map(|(_, x)| rep_to_antirep(x, &data, tol).map(|a| a.op().clone()))
            .collect::<Result<Vec<_>>>()
        else {
            continue;
        };
        let lam = AbsorberCandidate::from_family(&cat, Side::Left, &objects, "W", absorbing, tol)?;
        if residual(&lam.entry("W")?.absorbing, &w_mix)? > tol {
            continue;
        }
        if !verify_left_absorber(&lam, tol)?.passed || !mixed_system_check(&rho, &lam, tol)?.passed {
            continue;
        }
        return Ok(LeftAbsorberHit { rho, lam, examined });
    }
    Err(Error::BudgetExhausted { examined })
}
