//! `fusionkit` — analyze, check, transform and generate fusion systems.
//!
//! Exit codes: 0 success (or property holds), 1 property fails or domain
//! error, 2 usage error, 3 malformed input file, 4 internal-consistency
//! failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fusionkit::basis::{f_dual, is_f_basis, DEFAULT_BASIS_CONSTANT_CAP};
use fusionkit::frame::{
    frame_bounds, is_complete, is_exact, is_minimal, predict_transformed_bounds,
    transform_system,
};
use fusionkit::generate;
use fusionkit::io::{self, SystemFile};
use fusionkit::perturb::{
    paley_wiener_global, paley_wiener_subsetwise, DEFAULT_SUBSET_CAP,
};
use fusionkit::report::{analyze_with_cap, PerturbationReportJson};
use fusionkit::riesz::{orthonormal_classify, riesz_analyze, OrthonormalClass};
use fusionkit::{FusionError, FusionSystem, OperatorMatrix, Subspace, Tolerances};

#[derive(Debug, Parser)]
#[command(name = "fusionkit", version, about = "fusion frame and fusion basis analyzer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    Complete,
    Minimal,
    Exact,
    #[value(name = "f-basis")]
    FBasis,
    Orthonormal,
    Riesz,
    Frame,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every applicable check and emit an analysis report.
    Analyze {
        file: PathBuf,
        /// Override the equality tolerance eq_tol.
        #[arg(long)]
        tol: Option<f64>,
        /// Override the orthonormality tolerance ortho_tol.
        #[arg(long)]
        ortho_tol: Option<f64>,
        /// Override the rank tolerance rank_tol.
        #[arg(long)]
        rank_tol: Option<f64>,
        /// Emit the JSON report instead of the plain-text summary.
        #[arg(long)]
        json: bool,
        /// Member cap for the exhaustive basis-constant enumeration.
        #[arg(long, default_value_t = DEFAULT_BASIS_CONSTANT_CAP)]
        max_members: usize,
    },
    /// Exit 0 when the system has the property, 1 otherwise.
    Check {
        property: Property,
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Emit the dual f-basis system of an f-basis.
    Dual { file: PathBuf },
    /// Apply an invertible operator to every member and emit the image
    /// system; checks the transformed bounds against the predicted interval.
    Transform {
        file: PathBuf,
        #[arg(long)]
        operator: PathBuf,
    },
    /// Perturbation certificate: either against a second system file, or
    /// against a seeded rotation of the input by --theta.
    Perturb {
        file_w: PathBuf,
        file_v: Option<PathBuf>,
        /// Exhaustive subsetwise certificate instead of the global operator.
        #[arg(long)]
        subsetwise: bool,
        /// Rotation angle for the seeded-rotation mode.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        max_members: usize,
    },
    /// Emit a generated system file on standard output.
    Generate {
        kind: String,
        /// Ambient dimension (example-2-2, random-riesz, random-orthonormal).
        #[arg(long)]
        n: Option<usize>,
        /// Member count (example-2-3, example-3-2i).
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated member dimensions (random-riesz, random-orthonormal).
        #[arg(long)]
        dims: Option<String>,
        /// Target condition number (random-riesz).
        #[arg(long)]
        cond: Option<f64>,
        /// Rotation angle (rotate).
        #[arg(long)]
        theta: Option<f64>,
        /// Input system (rotate).
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn exit_code_for(err: &FusionError) -> u8 {
    match err {
        FusionError::MalformedFile(_) => 3,
        FusionError::InternalCheck(_) => 4,
        FusionError::BadParams(_) => 2,
        _ => 1,
    }
}

fn read_to_string(path: &Path) -> Result<String, FusionError> {
    std::fs::read_to_string(path)
        .map_err(|e| FusionError::BadParams(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path, tol: &Tolerances) -> Result<FusionSystem, FusionError> {
    io::parse_system(&read_to_string(path)?, tol)
}

fn tolerances(eq: Option<f64>, ortho: Option<f64>, rank: Option<f64>) -> Result<Tolerances, FusionError> {
    let mut tol = Tolerances::default();
    if let Some(x) = eq {
        tol.eq_tol = x;
    }
    if let Some(x) = ortho {
        tol.ortho_tol = x;
    }
    if let Some(x) = rank {
        tol.rank_tol = x;
    }
    tol.validate()?;
    Ok(tol)
}

fn parse_dims(dims: &Option<String>) -> Result<Vec<usize>, FusionError> {
    let text = dims
        .as_ref()
        .ok_or_else(|| FusionError::BadParams("--dims is required for this kind".into()))?;
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| FusionError::BadParams(format!("bad dimension entry {p:?}")))
        })
        .collect()
}

fn flag(name: &str, value: bool) -> String {
    format!("  {name:<20} {value}")
}

fn run(cli: Cli) -> Result<bool, FusionError> {
    match cli.command {
        Command::Analyze {
            file,
            tol,
            ortho_tol,
            rank_tol,
            json,
            max_members,
        } => {
            let tol = tolerances(tol, ortho_tol, rank_tol)?;
            let sys = load_system(&file, &tol)?;
            let report = analyze_with_cap(&sys, &tol, None, max_members)?;
            if json {
                print!("{}", report.to_json());
            } else {
                println!(
                    "system: ambient_dim {}, {} member(s), dims {:?}",
                    report.ambient_dim, report.members, report.member_dims
                );
                println!("{}", flag("frame", report.flags.frame));
                println!("{}", flag("tight", report.flags.tight));
                println!("{}", flag("parseval", report.flags.parseval));
                println!("{}", flag("uniform_weight", report.flags.uniform_weight));
                println!("{}", flag("complete", report.flags.complete));
                println!("{}", flag("minimal", report.flags.minimal));
                match report.flags.exact {
                    Some(v) => println!("{}", flag("exact", v)),
                    None => println!("  {:<20} n/a (not a frame)", "exact"),
                }
                println!("{}", flag("f_basis", report.flags.f_basis));
                println!("{}", flag("orthonormal_system", report.flags.orthonormal_system));
                println!("{}", flag("orthonormal_basis", report.flags.orthonormal_basis));
                println!("{}", flag("riesz", report.flags.riesz));
                let fmt = |e: &Option<fusionkit::report::ConstantEntry>| match e {
                    Some(c) => format!("{:.12} ({})", c.value, c.operation),
                    None => "null".into(),
                };
                println!("  C  = {}", fmt(&report.constants.c));
                println!("  D  = {}", fmt(&report.constants.d));
                println!("  A  = {}", fmt(&report.constants.a));
                println!("  B  = {}", fmt(&report.constants.b));
                println!("  M  = {}", fmt(&report.constants.m));
            }
            Ok(true)
        }
        Command::Check { property, file, tol } => {
            let tol = tolerances(tol, None, None)?;
            let sys = load_system(&file, &tol)?;
            let verdict = match property {
                Property::Complete => is_complete(&sys, &tol),
                Property::Minimal => is_minimal(&sys, &tol).minimal,
                Property::Exact => match is_exact(&sys, &tol) {
                    Ok(v) => v,
                    Err(FusionError::NotAFrame) => false,
                    Err(e) => return Err(e),
                },
                Property::FBasis => is_f_basis(&sys, &tol).verdict,
                Property::Orthonormal => orthonormal_classify(&sys, &tol) != OrthonormalClass::None,
                Property::Riesz => riesz_analyze(&sys, &tol).is_riesz,
                Property::Frame => frame_bounds(&sys, &tol).is_frame,
            };
            println!("{verdict}");
            Ok(verdict)
        }
        Command::Dual { file } => {
            let tol = Tolerances::default();
            let sys = load_system(&file, &tol)?;
            let fd = f_dual(&sys, &tol)?;
            let dual = fusionkit::basis::dual_system(&fd, &tol)?;
            print!("{}", io::serialize_system(dual.system()));
            Ok(true)
        }
        Command::Transform { file, operator } => {
            let tol = Tolerances::default();
            let sys = load_system(&file, &tol)?;
            let t_matrix = io::parse_operator(&read_to_string(&operator)?)?;
            let t = OperatorMatrix::invertible(t_matrix, &tol)?;
            let before = frame_bounds(&sys, &tol);
            let (lo, hi) = predict_transformed_bounds(&before, &t)?;
            let moved = transform_system(&sys, &t, &tol)?;
            let after = frame_bounds(&moved, &tol);
            if before.is_frame && (after.lower < lo - tol.eq_tol || after.upper > hi + tol.eq_tol) {
                return Err(FusionError::InternalCheck(format!(
                    "transformed bounds [{:.6e}, {:.6e}] escape the predicted interval [{lo:.6e}, {hi:.6e}]",
                    after.lower, after.upper
                )));
            }
            let mut file_out = SystemFile::from_system(&moved);
            let mut meta = serde_json::Map::new();
            meta.insert("predicted_lower".into(), lo.into());
            meta.insert("predicted_upper".into(), hi.into());
            meta.insert("actual_lower".into(), after.lower.into());
            meta.insert("actual_upper".into(), after.upper.into());
            file_out.metadata = Some(meta);
            print!("{}", file_out.to_json());
            Ok(true)
        }
        Command::Perturb {
            file_w,
            file_v,
            subsetwise,
            theta,
            seed,
            max_members,
        } => {
            let tol = Tolerances::default();
            let sys_w = load_system(&file_w, &tol)?;
            let fd = f_dual(&sys_w, &tol)?;
            let (candidate, theta_used) = match (file_v, theta) {
                (Some(p), None) => (load_system(&p, &tol)?, None),
                (None, Some(th)) => {
                    let seed_used = seed.unwrap_or(0);
                    (generate::rotate(&sys_w, th, seed_used, &tol)?, Some(th))
                }
                _ => {
                    return Err(FusionError::BadParams(
                        "provide either a second system file or --theta".into(),
                    ))
                }
            };
            let v: Vec<Subspace> = candidate
                .members()
                .iter()
                .map(|m| m.subspace().clone())
                .collect();
            let report = if subsetwise {
                paley_wiener_subsetwise(&fd, &v, max_members, &tol)?
            } else {
                paley_wiener_global(&fd, &v, &tol)?
            };
            let json = PerturbationReportJson::new(&report, &tol, theta_used, seed);
            print!("{}", json.to_json());
            Ok(true)
        }
        Command::Generate {
            kind,
            n,
            m,
            dims,
            cond,
            theta,
            input,
            seed,
        } => {
            let tol = Tolerances::default();
            let need = |v: Option<usize>, what: &str| {
                v.ok_or_else(|| FusionError::BadParams(format!("--{what} is required for this kind")))
            };
            let sys = match kind.as_str() {
                "example-2-2" => generate::example_2_2(need(n, "n")?, &tol)?,
                "example-2-3" => generate::example_2_3(need(m, "m")?, &tol)?,
                "example-3-2i" => generate::example_3_2i(need(m, "m")?, &tol)?,
                "exact-not-riesz" => generate::exact_not_riesz(&tol)?,
                "random-riesz" => generate::random_riesz(
                    need(n, "n")?,
                    &parse_dims(&dims)?,
                    cond.unwrap_or(4.0),
                    seed.unwrap_or(0),
                    &tol,
                )?,
                "random-orthonormal" => generate::random_orthonormal(
                    need(n, "n")?,
                    &parse_dims(&dims)?,
                    seed.unwrap_or(0),
                    &tol,
                )?,
                "rotate" => {
                    let path = input.ok_or_else(|| {
                        FusionError::BadParams("--input is required for rotate".into())
                    })?;
                    let base = load_system(&path, &tol)?;
                    let th = theta.ok_or_else(|| {
                        FusionError::BadParams("--theta is required for rotate".into())
                    })?;
                    generate::rotate(&base, th, seed.unwrap_or(0), &tol)?
                }
                other => {
                    return Err(FusionError::BadParams(format!(
                        "unknown kind {other:?}; expected one of example-2-2, example-2-3, \
                         example-3-2i, exact-not-riesz, random-riesz, random-orthonormal, rotate"
                    )))
                }
            };
            let mut file_out = SystemFile::from_system(&sys);
            let mut meta = serde_json::Map::new();
            meta.insert("kind".into(), kind.clone().into());
            if let Some(s) = seed {
                meta.insert("seed".into(), s.into());
            }
            meta.insert("generator".into(), generate::GENERATOR_NAME.into());
            file_out.metadata = Some(meta);
            print!("{}", file_out.to_json());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
