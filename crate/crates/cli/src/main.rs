//! Command-line surface for the valuation calculus: multiplier tables,
//! representation conversions, operator application, body queries, the
//! verification suite, and ball-volume constants.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sphereval_core::bodies::{area_measure, projection_volume, ConvexBody};
use sphereval_core::lefschetz::{fourier_op, l_op, l_op_berg, lambda_op};
use sphereval_core::mval::{to_crofton, to_generating, to_klain, Rep, ValuationRep};
use sphereval_core::profiles::{GrassProfile, Parity, ZonalProfile};
use sphereval_core::specfun::{kappa, omega};
use sphereval_core::transforms::{multiplier_seq, TransformTag};
use sphereval_core::verify::run_all;
use sphereval_core::Config;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "sphereval", version, about = "Spectral calculus for even Minkowski valuations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformName {
    Cosine,
    RadonUp,
    RadonDown,
    Box,
    Bergconv,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepName {
    Generating,
    Crofton,
    Klain,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    Lambda,
    Lop,
    LopBerg,
    Fourier,
}

#[derive(Subcommand)]
enum Command {
    /// Print the diagonal multipliers of a transform as (k, value) rows
    Multipliers(MultipliersArgs),
    /// Convert a valuation between generating, Crofton, and Klain forms
    Convert(ConvertArgs),
    /// Apply a Hard Lefschetz or Fourier-type operator to a valuation
    Apply(ApplyArgs),
    /// Evaluate support functions, shadows, or area-measure masses of a body
    Body(BodyArgs),
    /// Run the acceptance verification suite and print a JSON report
    Verify(VerifyArgs),
    /// Print the unit-ball volume kappa_i (and sphere area omega_{i-1})
    Kappa { i: usize },
}

#[derive(Args)]
struct MultipliersArgs {
    #[arg(long, value_enum)]
    transform: TransformName,
    #[arg(long)]
    n: usize,
    /// subspace index for cosine / lower index for Radon
    #[arg(long)]
    i: Option<usize>,
    /// upper index for Radon, elliptic/Berg dimension for box and bergconv
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, default_value_t = 16)]
    kmax: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    from: RepName,
    #[arg(long, value_enum)]
    to: RepName,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    i: usize,
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(long, value_enum)]
    op: OpName,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    i: usize,
    #[arg(long, value_enum)]
    rep: RepName,
    #[arg(long, value_name = "FILE")]
    r#in: PathBuf,
    /// apply the operator this many times
    #[arg(long, default_value_t = 1)]
    power: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BodyArgs {
    #[arg(long, value_name = "FILE")]
    file: PathBuf,
    /// support | projvol | mass
    #[arg(long)]
    op: String,
    /// direction as comma-separated coordinates (support, projvol)
    #[arg(long)]
    dir: Option<String>,
    /// area-measure order (mass)
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mc_samples: Option<usize>,
}

/// JSON shape of a profile on disk:
/// { n, i (null for sphere profiles), space, parity, coeffs }.
#[derive(Serialize, Deserialize)]
struct ProfileFile {
    n: usize,
    i: Option<usize>,
    space: String,
    parity: Parity,
    coeffs: Vec<f64>,
}

/// JSON shape of a convex body on disk.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum BodyFile {
    Polytope { vertices: Vec<Vec<f64>> },
    Ball { n: usize, radius: f64 },
    SubspaceCube { n: usize, i: usize },
    BallSum { base: Box<BodyFile>, t: f64 },
}

impl BodyFile {
    fn into_body(self) -> ConvexBody {
        match self {
            BodyFile::Polytope { vertices } => ConvexBody::Polytope { vertices },
            BodyFile::Ball { n, radius } => ConvexBody::Ball { n, radius },
            BodyFile::SubspaceCube { n, i } => ConvexBody::SubspaceCube { n, i },
            BodyFile::BallSum { base, t } => ConvexBody::BallSum {
                base: Box::new(base.into_body()),
                t,
            },
        }
    }
}

fn read_valuation(path: &PathBuf, rep: RepName, n: usize, i: usize) -> Result<ValuationRep> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let file: ProfileFile = serde_json::from_str(&text).context("malformed profile JSON")?;
    if file.n != n {
        bail!("profile dimension {} does not match --n {}", file.n, n);
    }
    Ok(match rep {
        RepName::Generating => {
            if file.space != "sphere" {
                bail!("generating profiles live on the sphere, got space={}", file.space);
            }
            ValuationRep::generating(n, i, ZonalProfile::new(n, file.coeffs)?)?
        }
        RepName::Crofton => {
            let idx = file.i.ok_or_else(|| anyhow!("crofton profile needs an index i"))?;
            ValuationRep::crofton(n, i, GrassProfile::new(n, idx, file.coeffs)?)?
        }
        RepName::Klain => {
            let idx = file.i.ok_or_else(|| anyhow!("klain profile needs an index i"))?;
            ValuationRep::klain(n, i, GrassProfile::new(n, idx, file.coeffs)?)?
        }
    })
}

fn write_valuation(v: &ValuationRep, out: Option<&PathBuf>) -> Result<()> {
    let file = match &v.rep {
        Rep::Generating { profile, .. } => ProfileFile {
            n: v.n,
            i: None,
            space: "sphere".into(),
            parity: profile.parity,
            coeffs: profile.coeffs.clone(),
        },
        Rep::Crofton(p) | Rep::Klain(p) => ProfileFile {
            n: v.n,
            i: Some(p.i),
            space: "grassmannian".into(),
            parity: Parity::Even,
            coeffs: p.coeffs.clone(),
        },
    };
    let text = serde_json::to_string_pretty(&file)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_multipliers(a: &MultipliersArgs) -> Result<()> {
    let need = |v: Option<usize>, what: &str| v.ok_or_else(|| anyhow!("--{what} is required"));
    let tag = match a.transform {
        TransformName::Cosine => TransformTag::Cosine(need(a.i, "i")?),
        TransformName::RadonUp => TransformTag::RadonUp(need(a.i, "i")?, need(a.j, "j")?),
        TransformName::RadonDown => TransformTag::RadonDown(need(a.j, "j")?, need(a.i, "i")?),
        TransformName::Box => TransformTag::Box(need(a.j, "j")?),
        TransformName::Bergconv => TransformTag::BergConv(need(a.j, "j")?),
    };
    let seq = multiplier_seq(&tag, a.n, a.kmax)?;
    match a.format {
        Format::Csv => {
            println!("k,value");
            for (k, v) in seq.values.iter().enumerate() {
                println!("{k},{v:.17e}");
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = seq
                .values
                .iter()
                .enumerate()
                .map(|(k, v)| serde_json::json!({"k": k, "value": v}))
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows)?);
        }
    }
    Ok(())
}

fn cmd_convert(a: &ConvertArgs) -> Result<()> {
    let v = read_valuation(&a.r#in, a.from, a.n, a.i)?;
    let out = match a.to {
        RepName::Generating => to_generating(&v)?,
        RepName::Crofton => to_crofton(&v)?,
        RepName::Klain => to_klain(&v)?,
    };
    write_valuation(&out, a.out.as_ref())
}

fn cmd_apply(a: &ApplyArgs) -> Result<()> {
    let mut v = read_valuation(&a.r#in, a.rep, a.n, a.i)?;
    for _ in 0..a.power {
        v = match a.op {
            OpName::Lambda => lambda_op(&v)?.0,
            OpName::Lop => l_op(&v)?.0,
            OpName::LopBerg => l_op_berg(&v)?.0,
            OpName::Fourier => fourier_op(&v)?.0,
        };
    }
    write_valuation(&v, a.out.as_ref())
}

fn parse_dir(s: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .context("direction must be comma-separated numbers")?;
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-12 {
        bail!("direction must be nonzero");
    }
    Ok(v.into_iter().map(|x| x / norm).collect())
}

fn cmd_body(a: &BodyArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.file)
        .with_context(|| format!("cannot read {}", a.file.display()))?;
    let body: BodyFile = serde_json::from_str(&text).context("malformed body JSON")?;
    let body = body.into_body();
    match a.op.as_str() {
        "support" => {
            let u = parse_dir(a.dir.as_deref().ok_or_else(|| anyhow!("--dir is required"))?)?;
            println!("{:.17e}", body.support(&u)?);
        }
        "projvol" => {
            let u = parse_dir(a.dir.as_deref().ok_or_else(|| anyhow!("--dir is required"))?)?;
            let ConvexBody::Polytope { vertices } = &body else {
                bail!("projvol is implemented for polytopes");
            };
            println!("{:.17e}", projection_volume(vertices, &u)?);
        }
        "mass" => {
            let order = a.order.ok_or_else(|| anyhow!("--order is required"))?;
            let m = area_measure(&body, order)?;
            println!("{:.17e}", m.total_mass());
        }
        other => bail!("unknown body op '{other}' (support | projvol | mass)"),
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let mut cfg = Config::from_env();
    if let Some(k) = a.kmax {
        cfg.kmax = k;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(m) = a.mc_samples {
        cfg.mc_samples = m;
    }
    let results = run_all(&cfg);
    println!("{}", serde_json::to_string_pretty(&results)?);
    Ok(if results.iter().all(|r| r.passed()) { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Multipliers(a) => cmd_multipliers(a).map(|()| 0),
        Command::Convert(a) => cmd_convert(a).map(|()| 0),
        Command::Apply(a) => cmd_apply(a).map(|()| 0),
        Command::Body(a) => cmd_body(a).map(|()| 0),
        Command::Verify(a) => cmd_verify(a),
        Command::Kappa { i } => {
            println!("kappa_{i} = {:.17e}", kappa(*i));
            if *i >= 1 {
                println!("omega_{} = {:.17e}", i - 1, omega(i - 1));
            }
            Ok(0)
        }
    }
}

fn main() {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
