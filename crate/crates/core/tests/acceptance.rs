//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use multunit::absorber::{
    absorber_to_mu, canonical_candidate, compare_absorbers, stabilized_candidate, verify_right_absorber,
};
use multunit::braided::{
    braided_tensor, phi, projection_check, reconstruct, semidirect, triple_tensor_check, z_multiplicativity, BraidedMU,
    BraidedRep,
};
use multunit::fixture::FixtureSet;
use multunit::leg_expr::{eval_str, parse};
use multunit::multunit::{antimultiplicative_check, pentagon_check, GroupTable, MultiplicativeUnitary};
use multunit::repcat::{intertwiner_basis, trivial_rep, Representation, Side};
use multunit::tensor::{flip, leg_product, residual, ComplexMatrix, SpaceSignature, C64};

const TOL: f64 = 1e-10;
const RT_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn load(name: &str) -> Result<FixtureSet, String> {
    ok(FixtureSet::read(fixtures().join(name)))
}

fn group(name: &str) -> Arc<MultiplicativeUnitary> {
    let g = match name {
        "Z/2" => GroupTable::cyclic(2),
        "Z/3" => GroupTable::cyclic(3),
        _ => GroupTable::s3(),
    };
    Arc::new(MultiplicativeUnitary::from_group(&g))
}

const ANCHORS: [&str; 3] = ["Z/2", "Z/3", "S3"];

fn product_example() -> Arc<BraidedMU> {
    Arc::new(BraidedMU::product(group("Z/2"), &group("Z/2")))
}

fn c1_pentagon_anchors() -> Outcome {
    let start = Instant::now();
    for g in ANCHORS {
        let w = group(g);
        let r = ok(pentagon_check(w.matrix(), w.dim(), TOL))?;
        ensure!(r.passed && r.residual == 0.0, "{g}: pentagon residual {:e}", r.residual);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.3} s");
    Ok(format!("Z/2, Z/3, S3 exact, {secs:.3} s"))
}

fn c2_dual_involution() -> Outcome {
    for g in ANCHORS {
        let w = group(g);
        let dd = w.dual().dual();
        let r = ok(residual(dd.matrix(), w.matrix()))?;
        ensure!(r == 0.0, "{g}: dual(dual(W)) residual {r:e}");
        let d = w.dual();
        ensure!(
            ok(pentagon_check(d.matrix(), d.dim(), TOL))?.passed,
            "{g}: dual fails pentagon"
        );
        let a = ok(antimultiplicative_check(&w.matrix().adjoint(), w.dim(), TOL))?;
        ensure!(a.passed, "{g}: W* not antimultiplicative ({:e})", a.residual);
    }
    Ok("three anchors".into())
}

fn c3_canonical_absorber() -> Outcome {
    let w = group("Z/3");
    let frozen = load("absorber_z3.json")?;
    let c = ok(frozen.absorbers[0].to_candidate())?;
    let fresh = ok(canonical_candidate(&w, Vec::new(), TOL))?;
    for (a, b) in c.entries.iter().zip(&fresh.entries) {
        ensure!(
            a.name == b.name && ok(residual(&a.absorbing, &b.absorbing))? == 0.0,
            "frozen entry {} drifted",
            a.name
        );
    }
    let names: Vec<&str> = c.entries.iter().map(|e| e.name.as_str()).collect();
    ensure!(names == ["tau1", "tau2", "W", "WW"], "family is {names:?}");
    let r = ok(verify_right_absorber(&c, TOL))?;
    ensure!(r.passed, "verification failed, residual {:e}", r.residual);
    let mu = ok(absorber_to_mu(&c, TOL))?;
    let d = ok(residual(mu.unitary.matrix(), w.matrix()))?;
    ensure!(d == 0.0, "absorber_to_mu differs from W by {d:e}");
    Ok(format!("max residual {:.1e}; U^rho = W exactly", r.residual))
}

fn c4_absorber_comparison() -> Outcome {
    let w = group("Z/3");
    let frozen = load("stabilized_z3.json")?;
    let c1 = ok(frozen.absorbers[0].to_candidate())?;
    let c2 = ok(frozen.absorbers[1].to_candidate())?;
    let y = trivial_rep(&w, 2);
    let (fresh, _) = ok(stabilized_candidate(&w, "tau2", &y, Vec::new(), TOL))?;
    ensure!(
        ok(residual(c2.self_unitary(), fresh.self_unitary()))? == 0.0,
        "frozen stabilized absorber drifted"
    );
    let r = ok(compare_absorbers(&c1, &c2, TOL))?;
    ensure!(r.subs.len() == 6, "expected six equations, got {}", r.subs.len());
    ensure!(r.passed, "comparison failed, residual {:e}", r.residual);
    Ok(format!("six equations, max residual {:.1e}", r.residual))
}

fn c5_trivial_collapse() -> Outcome {
    let w = group("Z/3");
    let b = ok(load("trivial_bmu_z3.json")?.bmu())?;
    ensure!(b.dl() == 1, "dL = {}", b.dl());
    let sr = ok(semidirect(&b, TOL))?;
    let r = ok(residual(sr.wc.matrix(), w.matrix()))?;
    ensure!(r == 0.0, "WC differs from W by {r:e}");
    let p = ok(projection_check(&sr, TOL))?;
    ensure!(p.passed, "projection check residual {:e}", p.residual);
    Ok("WC = W exactly; projection identities pass".into())
}

fn c6_product_example() -> Outcome {
    let start = Instant::now();
    let b = product_example();
    let c = ok(b.braiding_l(TOL))?;
    ensure!(ok(residual(&c.braid, &flip(2, 2)))? == 0.0, "braiding is not the flip");
    let sr = ok(semidirect(&b, TOL))?;
    let direct = ok(leg_product(
        &[2, 2, 2, 2],
        &[(b.w().matrix(), &[1, 3]), (b.f(), &[2, 4])],
    ))?;
    ensure!(ok(residual(sr.wc.matrix(), &direct))? == 0.0, "WC is not W13 F24");
    ensure!(sr.wc.check(TOL).passed, "WC pentagon fails");
    let p = ok(projection_check(&sr, TOL))?;
    ensure!(p.passed, "projection check residual {:e}", p.residual);
    let full = sr.wc.dim() * sr.wc.dim();
    ensure!(full == 16, "full-space dimension {full}");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.3} s");
    Ok(format!(
        "dimension 16, {} projection identities, {secs:.3} s",
        p.subs.len()
    ))
}

fn c7_functor_round_trip() -> Outcome {
    let b = product_example();
    let sr = ok(semidirect(&b, TOL))?;
    let l = BraidedRep::l_object(&b);
    let objects = [
        ("unit", BraidedRep::unit(&b, 1)),
        ("L", l.clone()),
        ("L*L", ok(braided_tensor(&l, &l, TOL))?),
        ("rho", ok(BraidedRep::rho(&b))?),
    ];
    let mut worst: f64 = 0.0;
    for (name, r) in &objects {
        let a = ok(phi(&sr, r))?;
        let rec = ok(reconstruct(&sr, &a, RT_TOL))?;
        let d = rec.rep.distance(r);
        ensure!(d <= RT_TOL, "{name}: reconstruct(Phi(r)) off by {d:e}");
        ensure!(
            rec.s_extraction_residual <= RT_TOL && rec.t_extraction_residual <= RT_TOL,
            "{name}: extraction residuals {:e}, {:e}",
            rec.s_extraction_residual,
            rec.t_extraction_residual
        );
        worst = worst.max(d);
    }
    let cdim = sr.wc.dim();
    let a = ok(Representation::new(
        Side::Right,
        cdim,
        sr.wc.clone(),
        sr.wc.matrix().clone(),
        TOL,
    ))?;
    let rec = ok(reconstruct(&sr, &a, RT_TOL))?;
    let back = ok(phi(&sr, &rec.rep))?;
    let d = ok(residual(back.op(), a.op()))?;
    ensure!(d <= RT_TOL, "Phi(reconstruct(WC)) off by {d:e}");
    Ok(format!("max round-trip residual {:.1e}", worst.max(d)))
}

fn c8_braided_associativity() -> Outcome {
    let b = product_example();
    let l = BraidedRep::l_object(&b);
    let objs = [BraidedRep::unit(&b, 1), l.clone(), ok(braided_tensor(&l, &l, TOL))?];
    let mut triples = 0;
    for x in &objs {
        for y in &objs {
            let z = ok(z_multiplicativity(x, y, TOL))?;
            ensure!(z.passed, "Z multiplicativity residual {:e}", z.residual);
            for w in &objs {
                let r = ok(triple_tensor_check(x, y, w, TOL))?;
                ensure!(r.passed, "triple tensor residual {:e}", r.residual);
                triples += 1;
            }
        }
    }
    Ok(format!("{triples} triples, 9 pairs"))
}

/// Rank of a dense complex matrix by Gaussian elimination with partial
/// pivoting; independent of the library's SVD-based solver.
fn rref_rank(rows: usize, cols: usize, mut m: Vec<C64>, rel_tol: f64) -> usize {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let thr = rel_tol * scale;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let (piv, best) = (rank..rows)
            .map(|r| (r, m[r * cols + col].norm()))
            .fold((rank, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if best <= thr {
            continue;
        }
        for j in 0..cols {
            m.swap(rank * cols + j, piv * cols + j);
        }
        let p = m[rank * cols + col];
        for r in rank + 1..rows {
            let f = m[r * cols + col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for j in col..cols {
                let v = m[rank * cols + j];
                m[r * cols + j] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// `dim Hom(a, b)` for right representations `a` on `K¹⊗H`, `b` on `K²⊗H`:
/// unknowns `t ∈ B(K¹, K²)`, conditions `b(t⊗1) = (t⊗1)a` entrywise.
fn oracle_hom_dim(a: &ComplexMatrix, k1: usize, b: &ComplexMatrix, k2: usize, d: usize) -> usize {
    let (n1, n2) = (k1 * d, k2 * d);
    let (ae, be) = (a.entries(), b.entries());
    let unknowns = k2 * k1;
    let eqs = n2 * n1;
    let mut m = vec![C64::new(0.0, 0.0); eqs * unknowns];
    for p in 0..k2 {
        for q in 0..k1 {
            let col = p * k1 + q;
            for h in 0..d {
                // b (E_pq ⊗ 1): column (q,h) of the result is column (p,h) of b.
                for r in 0..n2 {
                    m[(r * n1 + q * d + h) * unknowns + col] += be[r * n2 + p * d + h];
                }
                // (E_pq ⊗ 1) a: row (p,h) of the result is row (q,h) of a.
                for c in 0..n1 {
                    m[((p * d + h) * n1 + c) * unknowns + col] -= ae[(q * d + h) * n1 + c];
                }
            }
        }
    }
    unknowns - rref_rank(eqs, unknowns, m, 1e-8)
}

fn c9_intertwiner_oracle() -> Outcome {
    let mut pairs = 0;
    let mut min_gap = f64::INFINITY;
    for (file, g) in [
        ("absorber_z3.json", "Z/3"),
        ("stabilized_z3.json", "Z/3"),
        ("mixed_z2.json", "Z/2"),
    ] {
        let w = group(g);
        let d = w.dim();
        let c = ok(load(file)?.absorbers[0].to_candidate())?;
        ensure!(
            c.side == Side::Right && c.entries[c.rho].name == "W",
            "{file}: first absorber is not canonical"
        );
        let reps: Vec<Representation> = c
            .entries
            .iter()
            .map(|e| {
                ok(Representation::new(
                    Side::Right,
                    e.carrier_dim,
                    w.clone(),
                    e.absorbing.clone(),
                    TOL,
                ))
            })
            .collect::<Result<_, _>>()?;
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let basis = ok(intertwiner_basis(a, b, 1e-8))?;
                let oracle = oracle_hom_dim(a.op(), a.carrier_dim(), b.op(), b.carrier_dim(), d);
                ensure!(
                    basis.dim() == oracle,
                    "{file}: Hom({}, {}) solver {} vs oracle {oracle}",
                    c.entries[i].name,
                    c.entries[j].name,
                    basis.dim()
                );
                if let Some(&frozen) = c.hom_dims.get(&(i, j)) {
                    ensure!(frozen == oracle, "{file}: frozen Hom dim {frozen} vs oracle {oracle}");
                }
                ensure!(basis.gap() >= 1e4, "{file}: singular-value gap {:e}", basis.gap());
                min_gap = min_gap.min(basis.gap());
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs agree, min gap {min_gap:.1e}"))
}

fn c10_leg_dsl() -> Outcome {
    for name in ["product_bmu_z2.json", "trivial_bmu_z3.json", "oracle_bmu_z2.json"] {
        let set = load(name)?;
        let b = ok(set.bmu())?;
        let (dh, dl) = (b.dh(), b.dl());
        let table = ok(multunit::cli::symbol_table(&set, TOL))?;
        let sig = ok(SpaceSignature::new(vec![dh, dl, dh, dl]))?;
        let m = ok(eval_str("W[1,3] U[2,3] V*[3,4] F[2,4] V[3,4]", &table, &sig))?;
        let sr = ok(semidirect(&b, TOL))?;
        let r = ok(residual(&m, sr.wc.matrix()))?;
        ensure!(r == 0.0, "{name}: DSL and constructor differ by {r:e}");
    }
    let mut total = 0;
    for file in ["equations_product.json", "equations_oracle.json"] {
        let set = load(file)?;
        ensure!(
            set.equations.len() >= 15,
            "{file}: only {} equations",
            set.equations.len()
        );
        let table = ok(multunit::cli::symbol_table(&set, TOL))?;
        for e in &set.equations {
            let sig = ok(SpaceSignature::new(e.signature.clone()))?;
            for text in [&e.lhs, &e.rhs] {
                let printed = ok(parse(text, &table, &sig))?.to_string();
                ensure!(&printed == text, "{file}: `{text}` prints as `{printed}`");
            }
        }
        let r = ok(multunit::cli::check_corpus(&set, TOL))?;
        ensure!(r.passed, "{file}: corpus check residual {:e}", r.residual);
        total += set.equations.len();
    }
    Ok(format!("3 quadruples exact; {total} equations round-trip"))
}

/// Adds `1e-3` to the first entry of magnitude above one half.
fn perturb(entries: &mut [[f64; 2]]) {
    let e = entries
        .iter_mut()
        .find(|e| e[0].hypot(e[1]) > 0.5)
        .expect("operator has a large entry");
    e[0] += 1e-3;
}

fn corrupt_operator(set: &mut FixtureSet, name: &str) {
    let op = set
        .operators
        .iter_mut()
        .find(|o| o.name == name)
        .expect("operator present");
    perturb(&mut op.entries);
}

fn corrupt_absorber(set: &mut FixtureSet, which: usize) {
    let a = &mut set.absorbers[which];
    let rho = a.rho.clone();
    let e = a.entries.iter_mut().find(|e| e.name == rho).expect("rho entry present");
    perturb(&mut e.absorbing.entries);
}

fn run_cli(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_multunit"))
        .args(args)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn c11_negative_tests() -> Outcome {
    type Corrupt = fn(&mut FixtureSet);
    let cases: [(&str, &str, &[&str], Corrupt); 10] = [
        ("pentagon", "group_s3.json", &[], |s| corrupt_operator(s, "W")),
        ("rep-check", "rep_z2.json", &[], |s| corrupt_operator(s, "S")),
        ("braided-check", "braided_rep_oracle.json", &[], |s| {
            corrupt_operator(s, "T")
        }),
        ("semidirect", "oracle_bmu_z2.json", &[], |s| corrupt_operator(s, "F")),
        ("projection", "oracle_bmu_z2.json", &[], |s| corrupt_operator(s, "U")),
        ("reconstruct", "phi_image_oracle.json", &[], |s| {
            corrupt_operator(s, "A")
        }),
        ("absorber-verify", "absorber_z3.json", &[], |s| corrupt_absorber(s, 0)),
        ("compare-absorbers", "stabilized_z3.json", &[], |s| {
            corrupt_absorber(s, 1)
        }),
        ("mixed-system", "mixed_z2.json", &[], |s| corrupt_absorber(s, 1)),
        ("check-eq", "equations_oracle.json", &[], |s| corrupt_operator(s, "W")),
    ];
    let dir = ok(tempfile::tempdir())?;
    for (cmd, file, extra, corrupt) in cases {
        let good = fixtures().join(file);
        let good = good.to_str().unwrap();
        let mut args = vec![cmd, good];
        args.extend_from_slice(extra);
        let code = run_cli(&args);
        ensure!(code == 0, "{cmd} on intact {file} exited {code}");
        let mut set = load(file)?;
        corrupt(&mut set);
        let bad = dir.path().join(format!("corrupt_{file}"));
        ok(set.write(&bad))?;
        let bad = bad.to_str().unwrap();
        let mut args = vec![cmd, bad];
        args.extend_from_slice(extra);
        let code = run_cli(&args);
        ensure!(code == 1, "{cmd} on corrupted {file} exited {code}");
    }
    Ok("10 checkers: intact exit 0, corrupted exit 1".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("pentagon anchors", c1_pentagon_anchors),
        ("dual involution", c2_dual_involution),
        ("canonical absorber", c3_canonical_absorber),
        ("absorber comparison", c4_absorber_comparison),
        ("trivial braided collapse", c5_trivial_collapse),
        ("product braided example", c6_product_example),
        ("functor round trip", c7_functor_round_trip),
        ("braided associativity", c8_braided_associativity),
        ("intertwiner solver oracle", c9_intertwiner_oracle),
        ("leg DSL cross-validation", c10_leg_dsl),
        ("negative tests", c11_negative_tests),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {title}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
