use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cotorsion_core::heartcat::{
    BadSquare, Heart, NonAbelianCertificate, NonIntegralCertificate, TriangleKind,
};
use cotorsion_core::pairs::{
    verify_twin_from_classes, CotorsionFailure, CotorsionPair, TwinFailure, TwinPair,
};
use cotorsion_core::repcore::{DecomposeOptions, QuiverPresentation};
use cotorsion_core::serialcat::CategoryCtx;
use cotorsion_core::subcat::{subcat_in_star, SearchBounds, Subcategory, Verdict};
use cotorsion_core::{FiniteField, Gf2, Gf3, Gf5, Gf7};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::files::{write_json, CategoryFile, PairsFile};
use crate::report::{Check, Outcome, Report};

/// Runs `$body` with the type alias `$F` bound to the prime field of
/// characteristic `$p`.
macro_rules! with_field {
    ($p:expr, $F:ident => $body:expr) => {
        match $p {
            2 => {
                type $F = Gf2;
                $body
            }
            3 => {
                type $F = Gf3;
                $body
            }
            5 => {
                type $F = Gf5;
                $body
            }
            7 => {
                type $F = Gf7;
                $body
            }
            p => Err(CliError::Usage(format!(
                "unsupported field characteristic {p} (supported: 2, 3, 5, 7)"
            ))),
        }
    };
}

#[derive(Parser, Debug)]
#[command(
    name = "cotorsion-lab",
    version,
    about = "Twin cotorsion pairs and their hearts over linear Nakayama algebras"
)]
pub struct Cli {
    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for the randomized attempts of the decomposition fallback.
    #[arg(long, global = true, env = "COTORSION_LAB_SEED", default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a category file and print the indecomposables.
    Generate {
        #[arg(long)]
        n: usize,
        /// Zero relations as `a-b` pairs, comma separated, e.g. `1-5,2-6`.
        #[arg(long, default_value = "")]
        relations: String,
        #[arg(long = "char", default_value_t = 2)]
        field_char: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify that the pairs file describes a twin cotorsion pair.
    CheckTwin(CheckArgs),
    /// Compute the heart and the hearts of the two constituent pairs.
    Heart {
        #[command(flatten)]
        args: CheckArgs,
        /// Include the witness conflations of every surviving indecomposable.
        #[arg(long)]
        witnesses: bool,
    },
    /// Decide whether the heart is integral.
    CheckIntegral(CheckArgs),
    /// Decide whether the heart is abelian.
    CheckAbelian(CheckArgs),
    /// Search pullback squares directly for an epimorphism whose pullback is not epic.
    Probe(CheckArgs),
    /// Decide whether every indecomposable of CLASS lies in LEFT ★ RIGHT.
    InStar {
        #[command(flatten)]
        args: CheckArgs,
        #[arg(long)]
        class: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Revalidate the verdict stored in a report.
    Replay {
        #[command(flatten)]
        args: CheckArgs,
        /// The report to revalidate.
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    #[arg(long)]
    pub category: PathBuf,
    #[arg(long)]
    pub pairs: PathBuf,
    /// Largest multiplicity of an indecomposable in searched objects.
    #[arg(long, default_value_t = 2)]
    pub bound_mult: usize,
    /// Largest total dimension of a searched module.
    #[arg(long, default_value_t = 24)]
    pub dim_cap: usize,
    /// Also write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

impl CheckArgs {
    fn bounds(&self) -> CliResult<SearchBounds> {
        SearchBounds::new(self.bound_mult, self.dim_cap).map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// Executes a command and returns its report; the exit code is `report.exit_code()`.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let start = Instant::now();
    let (mut report, out) = match &cli.command {
        Command::Generate {
            n,
            relations,
            field_char,
            out,
        } => (
            generate(*n, relations, *field_char, out.as_ref(), cli.seed)?,
            None,
        ),
        Command::CheckTwin(a) => (
            run_check(Check::Twin, a, cli.seed, &Extra::None)?,
            a.report.clone(),
        ),
        Command::Heart { args, witnesses } => (
            run_check(Check::Heart, args, cli.seed, &Extra::Witnesses(*witnesses))?,
            args.report.clone(),
        ),
        Command::CheckIntegral(a) => (
            run_check(Check::Integral, a, cli.seed, &Extra::None)?,
            a.report.clone(),
        ),
        Command::CheckAbelian(a) => (
            run_check(Check::Abelian, a, cli.seed, &Extra::None)?,
            a.report.clone(),
        ),
        Command::Probe(a) => (
            run_check(Check::Probe, a, cli.seed, &Extra::None)?,
            a.report.clone(),
        ),
        Command::InStar {
            args,
            class,
            left,
            right,
        } => {
            let extra = Extra::Star(class.clone(), left.clone(), right.clone());
            (
                run_check(Check::InStar, args, cli.seed, &extra)?,
                args.report.clone(),
            )
        }
        Command::Replay { args, certificate } => {
            let stored: Report = crate::files::read_json(certificate)?;
            (replay(args, cli.seed, &stored)?, args.report.clone())
        }
    };
    report.timing_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = out {
        write_json(&path, &report)?;
    }
    Ok(report)
}

fn parse_relations(s: &str) -> CliResult<Vec<(usize, usize)>> {
    s.split(',')
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            let (a, b) = r
                .split_once('-')
                .ok_or_else(|| CliError::Usage(format!("relation '{r}' is not of the form a-b")))?;
            let num = |x: &str| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad vertex '{x}' in relation '{r}'")))
            };
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn generate(
    n: usize,
    relations: &str,
    field_char: u32,
    out: Option<&PathBuf>,
    seed: u64,
) -> CliResult<Report> {
    let pres = QuiverPresentation::new(n, parse_relations(relations)?)?;
    let file = CategoryFile::new(&pres, field_char);
    let ids: Vec<String> = with_field!(field_char, F => {
        let ctx = CategoryCtx::<F>::generate(pres.clone())?;
        ctx.validate_tables()?;
        Ok::<_, CliError>(ctx.indecomposables().iter().map(|x| x.to_string()).collect())
    })?;
    if let Some(path) = out {
        write_json(path, &file)?;
    }
    let mut report = Report::new(Check::Generate, SearchBounds::default(), field_char, seed);
    report.verdict = Outcome::Holds;
    report.data_insert("presentation", json!(pres.to_string()));
    report.data_insert("category", serde_json::to_value(&file)?);
    report.data_insert("indecomposable_count", json!(ids.len()));
    report.data_insert("indecomposables", json!(ids));
    Ok(report)
}

enum Extra {
    None,
    Witnesses(bool),
    Star(String, String, String),
}

fn open<F: FiniteField>(file: &CategoryFile, seed: u64) -> CliResult<CategoryCtx<F>> {
    let opts = DecomposeOptions {
        seed,
        ..DecomposeOptions::default()
    };
    Ok(CategoryCtx::generate(file.presentation()?)?.with_decompose_options(opts))
}

fn run_check(check: Check, args: &CheckArgs, seed: u64, extra: &Extra) -> CliResult<Report> {
    let cat = CategoryFile::load(&args.category)?;
    let pairs = PairsFile::load(&args.pairs)?;
    let bounds = args.bounds()?;
    with_field!(cat.field_char, F => {
        let ctx = open::<F>(&cat, seed)?;
        let mut report = Report::new(check, bounds, cat.field_char, seed);
        check_in::<F>(&ctx, &pairs, check, &bounds, extra, &mut report)?;
        Ok(report)
    })
}

fn ids(s: &Subcategory) -> Value {
    json!(s.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

/// Verifies the twin pair; on anything but Holds the report is filled in and None returned.
fn twin_or_report<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    pairs: &PairsFile,
    bounds: &SearchBounds,
    report: &mut Report,
) -> CliResult<Option<TwinPair<F>>> {
    let c = pairs.resolve(ctx)?;
    let v = verify_twin_from_classes(ctx, &c.s, &c.t, &c.u, &c.v, bounds)?;
    match v {
        Verdict::Holds(tp) => Ok(Some(tp)),
        other => {
            let v: Verdict<(), TwinFailure<F>> = match other {
                Verdict::Fails(f) => {
                    report.detail = Some(describe_twin_failure(&f));
                    Verdict::Fails(f)
                }
                Verdict::UnknownWithinBound(u) => Verdict::UnknownWithinBound(u),
                Verdict::Holds(_) => unreachable!(),
            };
            let detail = report.detail.take();
            report.set_verdict(&v)?;
            if report.check != Check::Twin {
                report
                    .notes
                    .push("the pairs do not form a verified twin cotorsion pair".into());
            }
            report.detail = detail.or(report.detail.take());
            Ok(None)
        }
    }
}

fn describe_cotorsion_failure<F>(which: &str, f: &CotorsionFailure<F>) -> String {
    match f {
        CotorsionFailure::Orthogonality { u, v, .. } => {
            format!("{which}: Ext¹({u}, {v}) is nonzero")
        }
        CotorsionFailure::NoLeftApproximation(n) => {
            format!("{which}: {} has no left approximation", n.target)
        }
        CotorsionFailure::NoRightApproximation(n) => {
            format!("{which}: {} has no right approximation", n.target)
        }
    }
}

fn describe_twin_failure<F>(f: &TwinFailure<F>) -> String {
    match f {
        TwinFailure::FirstPair(c) => describe_cotorsion_failure("(S, T)", c),
        TwinFailure::SecondPair(c) => describe_cotorsion_failure("(U, V)", c),
        TwinFailure::NotNested(x) => format!("{x} lies in S but not in U"),
    }
}

#[derive(Serialize)]
#[serde(bound(serialize = "F: FiniteField"))]
struct Approximations<'a, F> {
    left: &'a [(
        cotorsion_core::serialcat::Interval,
        cotorsion_core::serialcat::Conflation<F>,
    )],
    right: &'a [(
        cotorsion_core::serialcat::Interval,
        cotorsion_core::serialcat::Conflation<F>,
    )],
}

fn approximations<F: FiniteField>(p: &CotorsionPair<F>) -> CliResult<Value> {
    Ok(serde_json::to_value(Approximations {
        left: &p.left,
        right: &p.right,
    })?)
}

fn check_in<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    pairs: &PairsFile,
    check: Check,
    bounds: &SearchBounds,
    extra: &Extra,
    report: &mut Report,
) -> CliResult<()> {
    let Some(tp) = twin_or_report(ctx, pairs, bounds, report)? else {
        return Ok(());
    };
    match check {
        Check::Twin => {
            report.verdict = Outcome::Holds;
            for (name, s) in [
                ("S", tp.s()),
                ("T", tp.t()),
                ("U", tp.u()),
                ("V", tp.v()),
                ("W", &tp.w),
            ] {
                report.data_insert(name, ids(s));
            }
            let (wu, wt) = (tp.w.ids() == tp.u().ids(), tp.w.ids() == tp.t().ids());
            match (wu, wt) {
                (true, true) => report.notes.push("W = U = T".into()),
                (true, false) => report.notes.push("W = U".into()),
                (false, true) => report.notes.push("W = T".into()),
                _ => {}
            }
            report.data_insert(
                "approximations",
                json!({ "S,T": approximations(&tp.st)?, "U,V": approximations(&tp.uv)? }),
            );
        }
        Check::Heart => {
            let heart = Heart::new(ctx, &tp, bounds)?;
            let c = heart.classes();
            let unresolved = c.unresolved();
            if unresolved.is_empty() {
                report.verdict = Outcome::Holds;
            } else {
                report.verdict = Outcome::Unknown;
                let names: Vec<String> = unresolved
                    .iter()
                    .map(|(k, x)| format!("{x} in {k}"))
                    .collect();
                report.detail = Some(format!("undecided memberships: {}", names.join(", ")));
            }
            if heart.is_zero_heart() {
                report.notes.push("the heart is zero".into());
            }
            for (name, s) in [
                ("W", &c.w),
                ("B+", &Subcategory::new(ctx, "B+", c.bplus.members())?),
                ("B-", &Subcategory::new(ctx, "B-", c.bminus.members())?),
                ("H", &c.h),
                ("H minus W", &c.heart_minus_w()),
                ("S∩T", &c.core1),
                ("H1", &c.h1),
                ("H1 minus S∩T", &c.h1_minus_core()),
                ("U∩V", &c.core2),
                ("H2", &c.h2),
                ("H2 minus U∩V", &c.h2_minus_core()),
            ] {
                report.data_insert(name, ids(s));
            }
            if matches!(extra, Extra::Witnesses(true)) {
                let o: cotorsion_core::serialcat::Obj = heart.survivors().iter().collect();
                report.data_insert("witnesses", serde_json::to_value(heart.witnesses_for(&o)?)?);
            }
        }
        Check::Integral => {
            let heart = Heart::new(ctx, &tp, bounds)?;
            report.set_verdict(&heart.check_integral()?)?;
        }
        Check::Abelian => {
            let heart = Heart::new(ctx, &tp, bounds)?;
            let v = heart.check_abelian()?;
            report.set_verdict(&v)?;
            if let Verdict::Fails(NonAbelianCertificate::HeartsDiffer { entries }) = &v {
                let ids: Vec<String> = entries.iter().map(|e| e.id.to_string()).collect();
                report.detail = Some(format!("H differs from H1 ∩ H2 at {}", ids.join(", ")));
            }
            if !heart.is_zero_heart() {
                report.data_insert("hearts_agree", json!(heart.hearts_difference().is_empty()));
                for (key, kind) in [
                    ("epi_triangles", TriangleKind::Epi),
                    ("mono_triangles", TriangleKind::Mono),
                ] {
                    let c = heart.triangle_condition(kind)?;
                    let mut entry = json!({ "verdict": c.label() });
                    match &c {
                        Verdict::Fails(cert) => entry["certificate"] = serde_json::to_value(cert)?,
                        Verdict::UnknownWithinBound(u) => entry["detail"] = json!(u.detail),
                        Verdict::Holds(()) => {}
                    }
                    report.data_insert(key, entry);
                }
            }
        }
        Check::Probe => {
            let heart = Heart::new(ctx, &tp, bounds)?;
            report.set_verdict(&heart.probe_integral_direct()?)?;
        }
        Check::InStar => {
            let Extra::Star(class, left, right) = extra else {
                return Err(CliError::Usage(
                    "in-star needs --class, --left and --right".into(),
                ));
            };
            let mut env = pairs.env(ctx)?;
            let mut eval = |s: &str| -> CliResult<Subcategory> {
                Ok(env.eval(&crate::expr::parse(s)?)?.named(s))
            };
            let (a, x, y) = (eval(class)?, eval(left)?, eval(right)?);
            report.set_verdict(&subcat_in_star(ctx, &a, &x, &y, bounds)?)?;
            report.data_insert("class", ids(&a));
        }
        Check::Generate | Check::Replay => {
            return Err(CliError::Usage("not a check".into()));
        }
    }
    Ok(())
}

/// Revalidates a stored report. Certificates are replayed on their own;
/// other verdicts are recomputed under the stored bounds and compared.
fn replay(args: &CheckArgs, seed: u64, stored: &Report) -> CliResult<Report> {
    let cat = CategoryFile::load(&args.category)?;
    let pairs = PairsFile::load(&args.pairs)?;
    if stored.field_char != cat.field_char {
        return Err(CliError::Replay(format!(
            "report is over F_{}, the category over F_{}",
            stored.field_char, cat.field_char
        )));
    }
    if matches!(stored.check, Check::Generate | Check::Replay) {
        return Err(CliError::Usage("nothing to replay in this report".into()));
    }
    let bounds = stored.bounds;
    with_field!(cat.field_char, F => {
        let ctx = open::<F>(&cat, seed)?;
        let mut report = Report::new(Check::Replay, bounds, cat.field_char, seed);
        match (&stored.certificate, stored.verdict) {
            (Some(cert), Outcome::Fails) if matches!(stored.check, Check::Integral | Check::Abelian | Check::Probe) => {
                replay_certificate::<F>(&ctx, &pairs, stored.check, cert, &bounds)?;
                report.notes.push("certificate replayed".into());
            }
            _ => {
                let mut fresh = Report::new(stored.check, bounds, cat.field_char, seed);
                let extra = match stored.check {
                    Check::Heart => Extra::Witnesses(stored.data.get("witnesses").is_some()),
                    Check::InStar => return Err(CliError::Usage("in-star reports are replayed by rerunning in-star".into())),
                    _ => Extra::None,
                };
                check_in::<F>(&ctx, &pairs, stored.check, &bounds, &extra, &mut fresh)?;
                let same = fresh.verdict == stored.verdict
                    && fresh.route == stored.route
                    && fresh.certificate == stored.certificate
                    && fresh.data == stored.data;
                if !same {
                    return Err(CliError::Replay(format!(
                        "recomputed {} verdict differs from the stored one",
                        serde_json::to_value(stored.check)?.as_str().unwrap_or_default()
                    )));
                }
                report.notes.push("verdict recomputed and matched".into());
            }
        }
        report.verdict = Outcome::Holds;
        report.data_insert("replayed", serde_json::to_value(stored.check)?);
        report.data_insert("stored_verdict", serde_json::to_value(stored.verdict)?);
        Ok(report)
    })
}

/// Deserializes a certificate, insists that it is in canonical form, and replays it.
fn replay_certificate<F: FiniteField>(
    ctx: &CategoryCtx<F>,
    pairs: &PairsFile,
    check: Check,
    cert: &Value,
    bounds: &SearchBounds,
) -> CliResult<()> {
    fn canonical<T: Serialize + for<'de> serde::Deserialize<'de>>(v: &Value) -> CliResult<T> {
        let t: T = serde_json::from_value(v.clone())
            .map_err(|e| CliError::Replay(format!("certificate does not parse: {e}")))?;
        if &serde_json::to_value(&t)? != v {
            return Err(CliError::Replay(
                "certificate is not in canonical form".into(),
            ));
        }
        Ok(t)
    }
    let c = pairs.resolve(ctx)?;
    let tp = match verify_twin_from_classes(ctx, &c.s, &c.t, &c.u, &c.v, bounds)? {
        Verdict::Holds(tp) => tp,
        _ => {
            return Err(CliError::Replay(
                "the pairs do not form a verified twin cotorsion pair".into(),
            ))
        }
    };
    let replayed = match check {
        Check::Integral => canonical::<NonIntegralCertificate<F>>(cert)?.replay(ctx, &tp),
        Check::Abelian => canonical::<NonAbelianCertificate<F>>(cert)?.replay(ctx, &tp, bounds),
        Check::Probe => {
            let sq = canonical::<BadSquare<F>>(cert)?;
            sq.replay(&Heart::new(ctx, &tp, bounds)?)
        }
        _ => unreachable!("only failing checks carry certificates"),
    };
    replayed.map_err(|e| match e {
        cotorsion_core::Error::ReplayMismatch(m) => CliError::Replay(m),
        other => CliError::Replay(other.to_string()),
    })
}
