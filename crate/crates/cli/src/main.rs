//! Command-line front end: parses datum files, dispatches computations, and
//! emits deterministic JSON (DOT for posets). Exit codes: 0 success or true
//! verdict, 1 false verdict, 2 input error, 3 resource limit.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use std::process::ExitCode;
use zipcox::cones::{dominant_cone, eff_cone, gs_cone, pha_cone, RationalCone};
use zipcox::ff;
use zipcox::linalg::{Lattice, Q, Z};
use zipcox::root_datum::DatumFile;
use zipcox::sections::{self, TrivialityOracle, Trool};
use zipcox::u3;
use zipcox::weyl::{strata_poset, WeylGroup};
use zipcox::zip::{build_zip_datum, ZipDatum};
use zipcox::{Error, Limits};

#[derive(Parser)]
#[command(
    name = "zipcox",
    version,
    about = "Combinatorial invariants of stacks of G-zips"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize the derived zip datum: I, Delta^P, d, m, delta, lattices.
    Describe(FileArg),
    /// The stratification poset with dimensions and the closure order.
    Strata {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, value_enum, default_value_t = StrataFormat::Json)]
        format: StrataFormat,
    },
    /// The effective cone in X*(L).
    EffCone(ConeArgs),
    /// The Griffiths-Schmid cone in X*(T).
    GsCone(ConeArgs),
    /// The partial-Hasse cone: the image of the dominant cone.
    PhaCone(ConeArgs),
    /// The dominant cone X*_+(T).
    DominantCone(ConeArgs),
    /// Hilbert basis of the cone spanned by explicit rays in Z^n.
    HilbertBasis {
        /// Rays as semicolon-separated comma vectors, e.g. "1,0;1,2".
        #[arg(long)]
        rays: String,
    },
    /// Section-existence verdicts for a weight lambda in X*(L).
    HasseCheck {
        #[command(flatten)]
        file: FileArg,
        #[arg(long, value_parser = parse_ivec)]
        lambda: std::vec::Vec<i64>,
        /// Triviality oracle for the exact criterion.
        #[arg(long, value_enum, default_value_t = OracleKind::Auto)]
        oracle: OracleKind,
    },
    /// The rank-3 worked example.
    #[command(subcommand)]
    U3(U3Command),
    /// Seeded equivariance checks of the explicit sections over F_{p^degree}.
    VerifyEquivariance {
        #[arg(long)]
        case: ff::Case,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        degree: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct FileArg {
    /// Root-datum JSON file (fields p, rank, simple_roots, simple_coroots,
    /// sigma_char, mu, optional triviality_sublattice).
    file: String,
}

#[derive(Args)]
struct ConeArgs {
    #[command(flatten)]
    file: FileArg,
    /// Also compute the Hilbert basis of the cone's lattice points.
    #[arg(long)]
    hilbert: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrataFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    /// Sublattice from the datum file when present, otherwise only 0 is known.
    Auto,
    /// Only the zero character is known trivial.
    None,
    /// Exact congruences for split GL_3 of type (2,1).
    Gl3Split,
    /// Exact criterion for inert U(3) via the dimension formula.
    U3Inert,
}

#[derive(Subcommand)]
enum U3Command {
    /// dim H^0 for a weight, with the qualifying integers i.
    Dim {
        #[arg(long)]
        p: i64,
        #[arg(long, value_parser = parse_ivec)]
        lambda: std::vec::Vec<i64>,
    },
    /// Decompose a weight over ha_1, ha_2, ha_mu, lambda_det.
    Decompose {
        #[arg(long)]
        p: i64,
        #[arg(long, value_parser = parse_ivec)]
        lambda: std::vec::Vec<i64>,
    },
    /// Double-inclusion scan of the zip monoid on a box.
    CzipScan {
        #[arg(long)]
        p: i64,
        #[arg(long = "box")]
        box_bound: i64,
    },
}

fn parse_ivec(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad integer {t:?}: {e}"))
        })
        .collect()
}

fn limits_from_env() -> Limits {
    let mut limits = Limits::default();
    if let Ok(v) = std::env::var("ZIPCOX_LIMIT") {
        if let Ok(n) = v.parse::<usize>() {
            limits.enumeration = n;
            limits.lattice_points = n;
        }
    }
    limits
}

fn load(file: &FileArg) -> zipcox::Result<(ZipDatum, Option<Lattice>)> {
    let text = std::fs::read_to_string(&file.file)
        .map_err(|e| Error::input(format!("{}: {e}", file.file)))?;
    let parsed = DatumFile::parse(&text)?;
    let datum = parsed.to_datum()?;
    let zip = build_zip_datum(&datum, &parsed.mu)?;
    let sublattice = match &parsed.triviality_sublattice {
        None => None,
        Some(rows) => {
            let rows: Vec<Vec<Z>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            Some(Lattice::from_rows(parsed.rank, rows)?)
        }
    };
    Ok((zip, sublattice))
}

fn q_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn zvec_json(v: &[Z]) -> Value {
    Value::Array(
        v.iter()
            .map(|x| {
                i64::try_from(x.clone())
                    .map(Value::from)
                    .unwrap_or_else(|_| Value::from(x.to_string()))
            })
            .collect(),
    )
}

fn cone_json(cone: &RationalCone, hilbert: bool, limits: &Limits) -> zipcox::Result<Value> {
    let mut obj = serde_json::Map::new();
    obj.insert(
        "halfspaces".into(),
        Value::Array(cone.halfspaces.iter().map(|f| zvec_json(f)).collect()),
    );
    obj.insert(
        "rays".into(),
        Value::Array(cone.rays.iter().map(|r| zvec_json(r)).collect()),
    );
    obj.insert(
        "lineality".into(),
        Value::Array(cone.lineality.iter().map(|l| zvec_json(l)).collect()),
    );
    if hilbert {
        let hb = cone.hilbert_basis(limits)?;
        obj.insert(
            "hilbert_basis".into(),
            Value::Array(hb.iter().map(|h| zvec_json(h)).collect()),
        );
    }
    Ok(Value::Object(obj))
}

fn run() -> zipcox::Result<i32> {
    let cli = Cli::parse();
    let limits = limits_from_env();
    match cli.command {
        Command::Describe(file) => {
            let (zip, _) = load(&file)?;
            let name = |i: usize| format!("alpha{}", i + 1);
            let mut d = serde_json::Map::new();
            let mut m = serde_json::Map::new();
            let mut delta = serde_json::Map::new();
            for &a in &zip.delta_p {
                d.insert(name(a), json!(zip.d_alpha(a)?));
                m.insert(name(a), json!(zip.m_alpha(a)?));
                delta.insert(
                    name(a),
                    Value::Array(
                        zip.delta_alpha(a)?
                            .iter()
                            .map(|q| Value::from(q_string(q)))
                            .collect(),
                    ),
                );
            }
            let out = json!({
                "I": zip.i_set.iter().map(|&i| name(i)).collect::<Vec<_>>(),
                "d": d,
                "delta": delta,
                "delta_p": zip.delta_p.iter().map(|&i| name(i)).collect::<Vec<_>>(),
                "m": m,
                "mu": zip.mu,
                "p": zip.datum.p,
                "rank": zip.datum.rank,
                "xg_basis": zip.xg.basis().iter().map(|b| zvec_json(b)).collect::<Vec<_>>(),
                "xg_rank": zip.xg.rank(),
                "xl_basis": zip.xl.basis().iter().map(|b| zvec_json(b)).collect::<Vec<_>>(),
                "xl_rank": zip.xl.rank(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(0)
        }
        Command::Strata { file, format } => {
            let (zip, _) = load(&file)?;
            let group = WeylGroup::new(&zip.datum, &limits)?;
            let poset = strata_poset(&group, &zip)?;
            match format {
                StrataFormat::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&poset.to_json(&group)).expect("serializable")
                    )
                }
                StrataFormat::Dot => print!("{}", poset.to_dot(&group)),
            }
            Ok(0)
        }
        Command::EffCone(args) => {
            let (zip, _) = load(&args.file)?;
            let cone = eff_cone(&zip)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&cone_json(&cone, args.hilbert, &limits)?)
                    .expect("serializable")
            );
            Ok(0)
        }
        Command::GsCone(args) => {
            let (zip, _) = load(&args.file)?;
            let cone = gs_cone(&zip, &limits)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&cone_json(&cone, args.hilbert, &limits)?)
                    .expect("serializable")
            );
            Ok(0)
        }
        Command::PhaCone(args) => {
            let (zip, _) = load(&args.file)?;
            let pha = pha_cone(&zip, &limits)?;
            let mut value = cone_json(&pha.cone, args.hilbert, &limits)?;
            value
                .as_object_mut()
                .expect("object")
                .insert("generator_images".into(), json!(pha.generator_images));
            println!(
                "{}",
                serde_json::to_string_pretty(&value).expect("serializable")
            );
            Ok(0)
        }
        Command::DominantCone(args) => {
            let (zip, _) = load(&args.file)?;
            let cone = dominant_cone(&zip.datum)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&cone_json(&cone, args.hilbert, &limits)?)
                    .expect("serializable")
            );
            Ok(0)
        }
        Command::HilbertBasis { rays } => {
            let parsed: Vec<Vec<i64>> = rays
                .split(';')
                .map(parse_ivec)
                .collect::<Result<_, _>>()
                .map_err(Error::Input)?;
            let n = parsed.first().map(|r| r.len()).unwrap_or(0);
            if parsed.iter().any(|r| r.len() != n) || n == 0 {
                return Err(Error::input(
                    "rays must be nonempty vectors of equal length",
                ));
            }
            let rays_z: Vec<Vec<Z>> = parsed
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let cone = RationalCone::from_rays(Lattice::full(n), rays_z)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&cone_json(&cone, true, &limits)?)
                    .expect("serializable")
            );
            Ok(0)
        }
        Command::HasseCheck {
            file,
            lambda,
            oracle,
        } => {
            let (zip, sublattice) = load(&file)?;
            if lambda.len() != zip.datum.rank {
                return Err(Error::input("lambda has the wrong length"));
            }
            let oracle = match oracle {
                OracleKind::None => TrivialityOracle::Default,
                OracleKind::Gl3Split => TrivialityOracle::Gl3Split,
                OracleKind::U3Inert => TrivialityOracle::U3Inert,
                OracleKind::Auto => match sublattice {
                    Some(lat) => TrivialityOracle::Sublattice(lat),
                    None => TrivialityOracle::Default,
                },
            };
            let mu_ord = sections::has_mu_ordinary_hasse(&zip, &lambda)?;
            let up = sections::h0_nonzero_up_to_power(&zip, &lambda)?;
            let exact = sections::h0_nonzero_exact(&zip, &lambda, &oracle)?;
            let kw = sections::kw_condition(&zip, &lambda);
            let gs = gs_cone(&zip, &limits)?;
            let pha = pha_cone(&zip, &limits)?;
            let out = json!({
                "h0_dimension": match exact { Trool::True => json!(1), Trool::False => json!(0), Trool::Unknown => Value::Null },
                "h0_exact": match exact { Trool::True => "true", Trool::False => "false", Trool::Unknown => "unknown" },
                "h0_up_to_power": up,
                "in_gs_cone": gs.contains_i(&lambda),
                "in_pha_cone": pha.cone.contains_i(&lambda),
                "kw_condition": kw,
                "mu_ordinary_hasse": mu_ord,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(if mu_ord { 0 } else { 1 })
        }
        Command::U3(cmd) => run_u3(cmd),
        Command::VerifyEquivariance {
            case,
            p,
            degree,
            trials,
            seed,
        } => {
            let ctx = ff::make_field(p, degree)?;
            let sections = [
                ff::Section::Ha1,
                ff::Section::Ha2,
                ff::Section::HaMu,
                ff::Section::Det,
            ];
            let mut reports = Vec::new();
            let mut all_passed = true;
            for section in sections {
                let Some(weight) = section.weight(case, p as i64) else {
                    continue;
                };
                let report = ff::check_equivariance(&ctx, case, section, &weight, trials, seed)?;
                let torus = ff::check_torus_weight(&ctx, case, section, &weight, trials, seed)?;
                all_passed &= report.passed && torus;
                reports.push(json!({
                    "counterexample": report.counterexample,
                    "passed": report.passed,
                    "section": section.name(),
                    "torus_weight_consistent": torus,
                    "trials": report.trials,
                    "weight": report.weight,
                }));
            }
            let out = json!({
                "case": match case { ff::Case::Split => "split", ff::Case::Inert => "inert" },
                "degree": degree,
                "modulus": ctx.modulus,
                "p": p,
                "reports": reports,
                "seed": seed,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn run_u3(cmd: U3Command) -> zipcox::Result<i32> {
    match cmd {
        U3Command::Dim { p, lambda } => {
            let lam = weight3(&lambda)?;
            let qi = u3::qualifying_i(&lam, p);
            let out = json!({
                "dim": qi.len(),
                "f_lambda": q_string(&u3::f_lambda(&lam, p)),
                "in_czip": u3::czip_u3_contains(&lam, p),
                "lambda": lam,
                "p": p,
                "qualifying_i": qi,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(if qi.is_empty() { 1 } else { 0 })
        }
        U3Command::Decompose { p, lambda } => {
            let lam = weight3(&lambda)?;
            let mut decs = Vec::new();
            for i in u3::qualifying_i(&lam, p) {
                let d = u3::decompose_generators(&lam, p, i)?;
                decs.push(json!({
                    "i": i,
                    "k1": d.k1,
                    "k2": d.k2,
                    "k_det": d.k_det,
                    "k_mu": d.k_mu,
                    "nu": d.nu,
                }));
            }
            if decs.is_empty() {
                return Err(Error::input(format!(
                    "{lam:?} has no qualifying i (dim H^0 = 0)"
                )));
            }
            let out = json!({
                "decompositions": decs,
                "generators": {
                    "ha1": u3::ha1(p),
                    "ha2": u3::ha2(p),
                    "ha_mu": u3::ha_mu(p),
                    "lambda_det": u3::lambda_det(p, u3::U3Case::Inert),
                },
                "lambda": lam,
                "p": p,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(0)
        }
        U3Command::CzipScan { p, box_bound } => {
            let report = u3::czip_scan(p, box_bound);
            let ok = report.sets_equal && report.decompositions_ok && report.dim_implies_halfspaces;
            let out = json!({
                "box": report.box_bound,
                "decompositions_ok": report.decompositions_ok,
                "dim_implies_halfspaces": report.dim_implies_halfspaces,
                "dim_points": report.dim_points,
                "double_inclusion": report.sets_equal,
                "monoid_points": report.monoid_points,
                "p": report.p,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serializable")
            );
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn weight3(v: &[i64]) -> zipcox::Result<u3::Weight> {
    if v.len() != 3 {
        return Err(Error::input("lambda must have exactly three coordinates"));
    }
    Ok([v[0], v[1], v[2]])
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Input(_) | Error::Defect(_) => ExitCode::from(2),
                Error::Resource(_) => ExitCode::from(3),
            }
        }
    }
}
