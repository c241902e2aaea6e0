//! Command-line driver: example generators and checkers over JSON fixtures.
//!
//! Exit codes: `0` every check passed, `1` a check failed, `2` malformed
//! input or usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::absorber::{
    canonical_candidate, compare_absorbers, compare_left_absorbers, mixed_system_check, stabilized_candidate,
    verify_left_absorber, verify_right_absorber,
};
use crate::braided::{
    bmu_validity_check, braided_absorber_check, braided_rep_check, dual_braiding, phi, projection_check, reconstruct,
    semidirect_unchecked, BraidedMU, BraidedRep,
};
use crate::error::{Error, Result};
use crate::fixture::{AbsorberFixture, EquationFixture, FixtureSet};
use crate::leg_expr::{check_str, eval_str, SymbolTable};
use crate::multunit::{pentagon_check, GroupTable, MultiplicativeUnitary};
use crate::oracle::{left_absorber_oracle, oracle_bmu, OracleConfig};
use crate::repcat::{left_rep_check, right_rep_check, trivial_rep, Representation, Side};
use crate::report::{CheckReport, DEFAULT_TOL, ROUND_TRIP_TOL};
use crate::tensor::{leg_product, SpaceSignature};

#[derive(Parser, Debug)]
#[command(
    name = "multunit",
    version,
    about = "Checks multiplicative unitaries and their representation categories"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Residual tolerance (default 1e-10; 1e-9 for `reconstruct`).
    #[arg(long, env = "MULTUNIT_TOL", global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// `W` of a finite group.
    Group,
    /// The dual `ΣW*Σ` of a group unitary.
    Dual,
    /// Braided quadruple with `dL = 1`.
    TrivialBmu,
    /// Braided quadruple with `U = V = 1`.
    ProductBmu,
    /// Braided quadruple found by brute-force search.
    OracleBmu,
    /// The canonical right absorber `ρ = W`.
    Absorber,
    /// The canonical absorber and its stabilization by `τ(ℂ^y)`.
    Stabilized,
    /// A right absorber with a left absorber found by search.
    Mixed,
    /// `W` with the right representation `W` itself as `S`.
    Representation,
    /// A braided quadruple with the representation `(L, U, 𝔽)` as `S`, `T`.
    BraidedRep,
    /// A braided quadruple with `A = Φ(L, U, 𝔽)`.
    PhiImage,
    /// The leg-equation corpus for a braided quadruple.
    Equations,
}

#[derive(clap::Args, Debug)]
pub struct GenerateArgs {
    #[arg(value_enum)]
    pub kind: Kind,
    /// Group of `W`: `trivial`, `z<n>`, or `s3`.
    #[arg(long, default_value = "z2")]
    pub group: String,
    /// Group of `𝔽` for `product-bmu`.
    #[arg(long, default_value = "z2")]
    pub f_group: String,
    /// Dimension of the trivial object used by `stabilized`.
    #[arg(long, default_value_t = 2)]
    pub y_dim: usize,
    /// Search budget for `oracle-bmu` and `mixed`.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
    /// Braided-quadruple fixture to build `braided-rep`, `phi-image` or
    /// `equations` from (default: the product example).
    #[arg(long)]
    pub from: Option<PathBuf>,
    /// Output path (default: standard output).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write an example fixture.
    Generate(GenerateArgs),
    /// Pentagon equation for `W`.
    Pentagon { fixture: PathBuf },
    /// Representation equation for an operator against `W`.
    RepCheck {
        fixture: PathBuf,
        #[arg(long, default_value = "S")]
        name: String,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
    /// Braided-representation check if `S`, `T` are present, else the
    /// validity check of the braided quadruple.
    BraidedCheck { fixture: PathBuf },
    /// Semidirect product: validity, pentagon, and the absorber cross-check.
    Semidirect {
        fixture: PathBuf,
        #[arg(long)]
        skip_absorber: bool,
    },
    /// The projection equations for the semidirect product.
    Projection { fixture: PathBuf },
    /// Recovers `(S, T)` from a representation `A` of the semidirect product.
    Reconstruct {
        fixture: PathBuf,
        #[arg(long, default_value = "A")]
        name: String,
    },
    /// Verifies the first absorber of a fixture.
    AbsorberVerify { fixture: PathBuf },
    /// The six comparison equations between the first two absorbers.
    CompareAbsorbers { fixture: PathBuf },
    /// The mixed system of a right and a left absorber.
    MixedSystem { fixture: PathBuf },
    /// Evaluates a leg expression over the fixture's operators.
    Eval {
        fixture: PathBuf,
        expr: String,
        /// Leg dimensions, comma separated.
        #[arg(long)]
        signature: String,
    },
    /// Checks `lhs = rhs`, or every equation in the fixture when omitted.
    CheckEq {
        fixture: PathBuf,
        #[arg(long, requires_all = ["rhs", "signature"])]
        lhs: Option<String>,
        #[arg(long)]
        rhs: Option<String>,
        #[arg(long)]
        signature: Option<String>,
    },
}

/// Parses `trivial`, `z<n>`/`c<n>` and `s3`.
pub fn parse_group(s: &str) -> Result<GroupTable> {
    let t = s.trim().to_ascii_lowercase();
    if t == "trivial" || t == "1" {
        return Ok(GroupTable::trivial());
    }
    if t == "s3" {
        return Ok(GroupTable::s3());
    }
    if let Some(n) = t.strip_prefix('z').or_else(|| t.strip_prefix('c')) {
        if let Ok(n) = n.parse::<usize>() {
            if n > 0 {
                return Ok(GroupTable::cyclic(n));
            }
        }
    }
    Err(Error::InvalidGroupTable(format!("unknown group `{s}`")))
}

fn parse_signature(s: &str) -> Result<SpaceSignature> {
    let dims = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidSignature(format!("`{s}` is not a comma-separated list of dimensions")))
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceSignature::new(dims)
}

fn group_mu(name: &str) -> Result<Arc<MultiplicativeUnitary>> {
    Ok(Arc::new(MultiplicativeUnitary::from_group(&parse_group(name)?)))
}

fn product_example() -> Arc<BraidedMU> {
    let w = Arc::new(MultiplicativeUnitary::from_group(&GroupTable::cyclic(2)));
    Arc::new(BraidedMU::product(
        w,
        &MultiplicativeUnitary::from_group(&GroupTable::cyclic(2)),
    ))
}

fn source_bmu(from: &Option<PathBuf>) -> Result<Arc<BraidedMU>> {
    match from {
        Some(p) => FixtureSet::read(p)?.bmu(),
        None => Ok(product_example()),
    }
}

/// The leg-equation corpus for `bmu`: the defining identities of every
/// structure in the braided construction, with the operators they need.
pub fn equation_corpus(bmu: &Arc<BraidedMU>, tol: f64) -> Result<FixtureSet> {
    let (dh, dl) = (bmu.dh(), bmu.dl());
    let c = dh * dl;
    let sr = semidirect_unchecked(bmu)?;
    let cll = bmu.braiding_l(tol)?;
    let a = phi(&sr, &BraidedRep::l_object(bmu))?;
    let x = leg_product(&[dh, dl, dh], &[(bmu.w().matrix(), &[1, 3]), (bmu.u(), &[2, 3])])?;
    let mut set = FixtureSet::new("equations")
        .with_description("defining identities of a braided multiplicative unitary and its semidirect product");
    set.push_bmu(bmu)?;
    set.push("Wh", &[dh, dh], bmu.w().dual().matrix())?;
    set.push("C", &[dl, dl], &cll.braid)?;
    set.push("Cb", &[dl, dl], &dual_braiding(&cll))?;
    set.push("Z", &[dl, dl], &cll.z)?;
    set.push("WC4", &[dh, dl, dh, dl], sr.wc.matrix())?;
    set.push("WC", &[c, c], sr.wc.matrix())?;
    set.push("P4", &[dh, dl, dh, dl], &sr.p)?;
    set.push("P", &[c, c], &sr.p)?;
    set.push("X", &[c, dh], &x)?;
    set.push("A", &[dl, dh, dl], a.op())?;
    let eqs: [(&str, Vec<usize>, &str, &str); 18] = [
        ("pentagon", vec![dh, dh, dh], "W[2,3] W[1,2]", "W[1,2] W[1,3] W[2,3]"),
        (
            "dual pentagon",
            vec![dh, dh, dh],
            "Wh[2,3] Wh[1,2]",
            "Wh[1,2] Wh[1,3] Wh[2,3]",
        ),
        (
            "adjoint antipentagon",
            vec![dh, dh, dh],
            "W*[1,2] W*[2,3]",
            "W*[2,3] W*[1,3] W*[1,2]",
        ),
        (
            "U right representation",
            vec![dl, dh, dh],
            "W[2,3] U[1,2]",
            "U[1,2] U[1,3] W[2,3]",
        ),
        (
            "V left representation",
            vec![dh, dh, dl],
            "V[2,3] W[1,2]",
            "W[1,2] V[1,3] V[2,3]",
        ),
        (
            "braiding on L",
            vec![dl, dh, dl],
            "Z[1,3]",
            "V[2,3] U*[1,2] V*[2,3] U[1,2]",
        ),
        ("dual braiding", vec![dl, dl], "C[1,2] Cb[1,2]", "W[1,2] W*[1,2]"),
        (
            "L is U F invariant",
            vec![dl, dl, dh],
            "U[1,3] U[2,3] F[1,2]",
            "F[1,2] U[1,3] U[2,3]",
        ),
        (
            "top-braided pentagon",
            vec![dl, dl, dl],
            "F[2,3] F[1,2]",
            "F[1,2] C[2,3] F[1,2] Cb[2,3] F[2,3]",
        ),
        (
            "semidirect product",
            vec![dh, dl, dh, dl],
            "WC4[1,2,3,4]",
            "W[1,3] U[2,3] V*[3,4] F[2,4] V[3,4]",
        ),
        (
            "semidirect pentagon",
            vec![c, c, c],
            "WC[2,3] WC[1,2]",
            "WC[1,2] WC[1,3] WC[2,3]",
        ),
        ("projection", vec![dh, dl, dh, dl], "P4[1,2,3,4]", "W[1,3] U[2,3]"),
        ("projection 1", vec![c, c, c], "P[2,3] WC[1,2]", "WC[1,2] P[1,3] P[2,3]"),
        ("projection 2", vec![c, c, c], "WC[2,3] P[1,2]", "P[1,2] P[1,3] WC[2,3]"),
        ("projection 3", vec![c, c, c], "P[2,3] P[1,2]", "P[1,2] P[1,3] P[2,3]"),
        (
            "bicharacter to W",
            vec![c, dh, dh],
            "W[2,3] X[1,2]",
            "X[1,2] X[1,3] W[2,3]",
        ),
        (
            "composition identity",
            vec![dh, dl, dh, dh],
            "W[3,4] W[1,3] U[2,3]",
            "W[1,3] U[2,3] W[1,4] U[2,4] W[3,4]",
        ),
        (
            "induced representation",
            vec![dl, dh, dl, dh],
            "W[2,4] U[3,4] A[1,2,3]",
            "A[1,2,3] U[1,4] W[2,4] U[3,4]",
        ),
    ];
    // The dual braiding check needs the identity on (dL,dL); `W W*` only
    // has that shape when dL = dH, so use `F F*` instead.
    for (name, signature, lhs, rhs) in eqs {
        let rhs = if name == "dual braiding" { "F[1,2] F*[1,2]" } else { rhs };
        set.equations.push(EquationFixture {
            name: name.to_string(),
            signature,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
    }
    Ok(set)
}

/// Every fixture operator as a symbol with its signature as arity.
pub fn symbol_table(set: &FixtureSet, tol: f64) -> Result<SymbolTable> {
    let mut t = SymbolTable::new(tol);
    for op in &set.operators {
        t.insert(&op.name, op.matrix()?, &op.signature)?;
    }
    Ok(t)
}

/// Checks every equation of the fixture's corpus.
pub fn check_corpus(set: &FixtureSet, tol: f64) -> Result<CheckReport> {
    let table = symbol_table(set, tol)?;
    let subs = set
        .equations
        .iter()
        .map(|e| {
            let sig = SpaceSignature::new(e.signature.clone())?;
            Ok(check_str(&e.lhs, &e.rhs, &table, &sig, tol)?.renamed(format!("{}: {} = {}", e.name, e.lhs, e.rhs)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CheckReport::group("equations", tol, subs))
}

/// Builds the fixture for `generate`.
pub fn generate(args: &GenerateArgs, tol: f64) -> Result<FixtureSet> {
    let set = match args.kind {
        Kind::Group => {
            let mut s =
                FixtureSet::new("multiplicative_unitary").with_description(format!("group unitary of {}", args.group));
            s.push_mu(&*group_mu(&args.group)?)?;
            s
        }
        Kind::Dual => {
            let mut s = FixtureSet::new("multiplicative_unitary")
                .with_description(format!("dual group unitary of {}", args.group));
            s.push_mu(&group_mu(&args.group)?.dual())?;
            s
        }
        Kind::Representation => {
            let m = group_mu(&args.group)?;
            let mut s = FixtureSet::new("representation").with_description("W as a right representation of itself");
            s.push_mu(&m)?;
            s.push("S", &[m.dim(), m.dim()], m.matrix())?;
            s
        }
        Kind::TrivialBmu => {
            let mut s = FixtureSet::new("braided_mu")
                .with_description(format!("trivial braided quadruple over {}", args.group));
            s.push_bmu(&BraidedMU::trivial(group_mu(&args.group)?))?;
            s
        }
        Kind::ProductBmu => {
            let f = MultiplicativeUnitary::from_group(&parse_group(&args.f_group)?);
            let mut s = FixtureSet::new("braided_mu")
                .with_description(format!("product quadruple {} x {}", args.group, args.f_group));
            s.push_bmu(&BraidedMU::product(group_mu(&args.group)?, &f))?;
            s
        }
        Kind::OracleBmu => {
            let cfg = OracleConfig {
                budget: args.budget,
                tol,
                ..OracleConfig::default()
            };
            let hit = oracle_bmu(&group_mu(&args.group)?, &cfg)?;
            let mut s = FixtureSet::new("braided_mu").with_description(format!(
                "found by search over {} after {} candidates",
                args.group, hit.examined
            ));
            s.push_bmu(&hit.bmu)?;
            s
        }
        Kind::Absorber => {
            let c = canonical_candidate(&group_mu(&args.group)?, Vec::new(), tol)?;
            let mut s = FixtureSet::new("absorber").with_description("canonical right absorber");
            s.absorbers.push(AbsorberFixture::from_candidate(&c)?);
            s
        }
        Kind::Stabilized => {
            let m = group_mu(&args.group)?;
            let y = trivial_rep(&m, args.y_dim);
            let name = format!("tau{}", args.y_dim);
            let extra = vec![(format!("W*{name}"), crate::repcat::tensor(&m.as_right_rep(), &y)?)];
            let c1 = canonical_candidate(&m, extra, tol)?;
            let (c2, _) = stabilized_candidate(&m, &name, &y, Vec::new(), tol)?;
            let mut s = FixtureSet::new("absorber_pair").with_description("canonical absorber and its stabilization");
            s.absorbers.push(AbsorberFixture::from_candidate(&c1)?);
            s.absorbers.push(AbsorberFixture::from_candidate(&c2)?);
            s
        }
        Kind::Mixed => {
            let hit = left_absorber_oracle(&group_mu(&args.group)?, args.budget, tol)?;
            let mut s = FixtureSet::new("absorber_pair").with_description(format!(
                "right absorber and a left absorber found after {} candidates",
                hit.examined
            ));
            s.absorbers.push(AbsorberFixture::from_candidate(&hit.rho)?);
            s.absorbers.push(AbsorberFixture::from_candidate(&hit.lam)?);
            s
        }
        Kind::BraidedRep => {
            let b = source_bmu(&args.from)?;
            let l = BraidedRep::l_object(&b);
            let mut s = FixtureSet::new("braided_rep").with_description("(L, U, F)");
            s.push_bmu(&b)?;
            s.push("S", &[l.carrier_dim(), b.dh()], l.s())?;
            s.push("T", &[l.carrier_dim(), b.dl()], l.t())?;
            s
        }
        Kind::PhiImage => {
            let b = source_bmu(&args.from)?;
            let sr = semidirect_unchecked(&b)?;
            let a = phi(&sr, &BraidedRep::l_object(&b))?;
            let mut s = FixtureSet::new("semidirect_representation").with_description("Phi(L, U, F)");
            s.push_bmu(&b)?;
            s.push("A", &[a.carrier_dim(), b.dh(), b.dl()], a.op())?;
            s
        }
        Kind::Equations => equation_corpus(&source_bmu(&args.from)?, tol)?,
    };
    Ok(set)
}

fn semidirect_report(set: &FixtureSet, tol: f64, absorber: bool) -> Result<CheckReport> {
    let b = set.bmu()?;
    let validity = bmu_validity_check(&b, tol);
    if !validity.passed {
        return Ok(CheckReport::group("semidirect", tol, vec![validity]));
    }
    let sr = semidirect_unchecked(&b)?;
    let mut subs = vec![validity, sr.wc.check(tol).renamed("WC pentagon")];
    if absorber {
        subs.push(braided_absorber_check(&sr, tol)?);
    }
    Ok(CheckReport::group("semidirect", tol, subs))
}

fn reconstruct_report(set: &FixtureSet, name: &str, tol: f64) -> Result<CheckReport> {
    let b = set.bmu()?;
    let sr = semidirect_unchecked(&b)?;
    let op = set.get(name)?;
    let (dh, dl) = (b.dh(), b.dl());
    if op.signature.len() != 3 || op.signature[1] != dh || op.signature[2] != dl {
        return Err(Error::Fixture(format!("`{name}` must live on (k,{dh},{dl})")));
    }
    let a = Representation::new_unchecked(Side::Right, op.signature[0], sr.wc.clone(), op.matrix()?)?;
    let rep = right_rep_check(a.op(), a.carrier_dim(), &sr.wc, tol)?.renamed(format!("{name} representation of WC"));
    let rec = reconstruct(&sr, &a, tol)?;
    Ok(CheckReport::group(
        "reconstruct",
        tol,
        vec![bmu_validity_check(&b, tol), rep, rec.report],
    ))
}

fn absorbers(set: &FixtureSet, n: usize) -> Result<Vec<crate::absorber::AbsorberCandidate>> {
    if set.absorbers.len() < n {
        return Err(Error::Fixture(format!(
            "expected {n} absorber(s), found {}",
            set.absorbers.len()
        )));
    }
    set.absorbers
        .iter()
        .take(n)
        .map(AbsorberFixture::to_candidate)
        .collect()
}

/// What a command produced: a report or a document to print verbatim.
enum Outcome {
    Report(CheckReport),
    Text(String),
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol.unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidSignature(format!(
            "tolerance must be a non-negative number, got {tol}"
        )));
    }
    let load = |p: &Path| FixtureSet::read(p);
    let report = match &cli.command {
        Command::Generate(args) => {
            let set = generate(args, tol)?;
            return Ok(match &args.out {
                Some(p) => {
                    set.write(p)?;
                    Outcome::Text(format!("wrote {} fixture to {}", set.kind, p.display()))
                }
                None => Outcome::Text(set.to_json()?),
            });
        }
        Command::Pentagon { fixture } => {
            let m = load(fixture)?.mu()?;
            pentagon_check(m.matrix(), m.dim(), tol)?.renamed("pentagon")
        }
        Command::RepCheck { fixture, name, side } => {
            let set = load(fixture)?;
            let m = set.mu()?;
            let op = set.get(name)?;
            let k = op.side() / m.dim();
            match side {
                SideArg::Right => right_rep_check(&op.matrix()?, k, &m, tol)?,
                SideArg::Left => left_rep_check(&op.matrix()?, k, &m, tol)?,
            }
        }
        Command::BraidedCheck { fixture } => {
            let set = load(fixture)?;
            let b = set.bmu()?;
            if set.get("S").is_ok() && set.get("T").is_ok() {
                braided_rep_check(&set.braided_rep(&b)?, tol)?
            } else {
                bmu_validity_check(&b, tol)
            }
        }
        Command::Semidirect { fixture, skip_absorber } => semidirect_report(&load(fixture)?, tol, !skip_absorber)?,
        Command::Projection { fixture } => projection_check(&semidirect_unchecked(&load(fixture)?.bmu()?)?, tol)?,
        Command::Reconstruct { fixture, name } => {
            reconstruct_report(&load(fixture)?, name, cli.tol.unwrap_or(ROUND_TRIP_TOL))?
        }
        Command::AbsorberVerify { fixture } => {
            let c = absorbers(&load(fixture)?, 1)?.remove(0);
            match c.side {
                Side::Right => verify_right_absorber(&c, tol)?,
                Side::Left => verify_left_absorber(&c, tol)?,
            }
        }
        Command::CompareAbsorbers { fixture } => {
            let cs = absorbers(&load(fixture)?, 2)?;
            match (cs[0].side, cs[1].side) {
                (Side::Right, Side::Right) => compare_absorbers(&cs[0], &cs[1], tol)?,
                (Side::Left, Side::Left) => compare_left_absorbers(&cs[0], &cs[1], tol)?,
                _ => {
                    return Err(Error::SideMismatch(
                        "compared absorbers must be on the same side".into(),
                    ))
                }
            }
        }
        Command::MixedSystem { fixture } => {
            let cs = absorbers(&load(fixture)?, 2)?;
            let rho = cs.iter().find(|c| c.side == Side::Right);
            let lam = cs.iter().find(|c| c.side == Side::Left);
            match (rho, lam) {
                (Some(r), Some(l)) => mixed_system_check(r, l, tol)?,
                _ => return Err(Error::SideMismatch("need one right and one left absorber".into())),
            }
        }
        Command::Eval {
            fixture,
            expr,
            signature,
        } => {
            let set = load(fixture)?;
            let sig = parse_signature(signature)?;
            let m = eval_str(expr, &symbol_table(&set, tol)?, &sig)?;
            return Ok(Outcome::Text(match cli.format {
                Format::Text => format!("{m:?}"),
                Format::Json => {
                    serde_json::to_string_pretty(&crate::fixture::OperatorFixture::new(expr.clone(), sig.dims(), &m)?)?
                }
            }));
        }
        Command::CheckEq {
            fixture,
            lhs,
            rhs,
            signature,
        } => {
            let set = load(fixture)?;
            match (lhs, rhs, signature) {
                (Some(l), Some(r), Some(s)) => check_str(l, r, &symbol_table(&set, tol)?, &parse_signature(s)?, tol)?,
                _ => check_corpus(&set, tol)?,
            }
        }
    };
    Ok(Outcome::Report(report))
}

fn print_report(r: &CheckReport, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Text => write!(out, "{r}"),
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(r).map_err(std::io::Error::other)?
        ),
    }
}

/// Runs the command line `args` (including the program name), writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    let result = execute(&cli);
    let io = match result {
        Ok(Outcome::Text(t)) => writeln!(out, "{t}").map(|_| 0),
        Ok(Outcome::Report(r)) => {
            let r = r.sorted();
            print_report(&r, cli.format, out).map(|_| if r.passed { 0 } else { 1 })
        }
        Err(Error::CheckFailed(r)) => {
            let r = r.sorted();
            print_report(&r, cli.format, out).map(|_| 1)
        }
        Err(e) if e.is_check_failure() => writeln!(err, "check failed: {e}").map(|_| 1),
        Err(e) => writeln!(err, "error: {e}").map(|_| 2),
    };
    io.unwrap_or(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_names() {
        assert_eq!(parse_group("Z3").unwrap().order(), 3);
        assert_eq!(parse_group("c4").unwrap().order(), 4);
        assert_eq!(parse_group("s3").unwrap().order(), 6);
        assert_eq!(parse_group("trivial").unwrap().order(), 1);
        assert!(parse_group("z0").is_err());
        assert!(parse_group("q8").is_err());
    }

    #[test]
    fn signatures() {
        assert_eq!(parse_signature("2, 3,2").unwrap().dims(), &[2, 3, 2]);
        assert!(parse_signature("2,,3").is_err());
        assert!(parse_signature("0").is_err());
    }

    #[test]
    fn product_corpus_holds() {
        let set = equation_corpus(&product_example(), DEFAULT_TOL).unwrap();
        assert!(set.equations.len() >= 15);
        let r = check_corpus(&set, DEFAULT_TOL).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn generate_kinds_produce_valid_fixtures() {
        let args = |kind| GenerateArgs {
            kind,
            group: "z2".into(),
            f_group: "z3".into(),
            y_dim: 1,
            budget: 1_000_000,
            from: None,
            out: None,
        };
        let p = generate(&args(Kind::ProductBmu), DEFAULT_TOL).unwrap().bmu().unwrap();
        assert_eq!((p.dh(), p.dl()), (2, 3));
        assert!(bmu_validity_check(&p, DEFAULT_TOL).passed);
        let s = generate(&args(Kind::Stabilized), DEFAULT_TOL).unwrap();
        assert_eq!(s.absorbers.len(), 2);
        let d = generate(&args(Kind::Dual), DEFAULT_TOL).unwrap().mu().unwrap();
        assert!(d.check(DEFAULT_TOL).passed);
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["multunit"], &mut out, &mut err), 2);
        assert_eq!(run(["multunit", "pentagon"], &mut out, &mut err), 2);
        assert_eq!(
            run(
                ["multunit", "--format", "yaml", "pentagon", "x.json"],
                &mut out,
                &mut err
            ),
            2
        );
    }
}
