//! `hardylab` — build test functions or ingest sampled data, check the
//! Hardy-type inequalities on them, run sharp-constant sweeps and
//! rearrangements, and emit machine-readable reports.
//!
//! Exit codes: 0 all verdicts pass (unbounded branches count as documented
//! behavior), 1 at least one inequality failed, 2 usage or ingestion error.

mod config;

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hardylab_core::battery::{
    default_battery, evaluate_functional, report_item, run_battery, seeded_radial_profile,
    seeded_tensor_function, BatteryJob, FunctionalId, GridSpec,
};
use hardylab_core::io::{read_profile_csv, read_profile_csv_step, read_tensor_csv};
use hardylab_core::rearrange::{decreasing_rearrangement, DEFAULT_REARRANGEMENT_CELLS};
use hardylab_core::verify::{sharpness_sweep, InequalityReport, TolerancePolicy, Verdict};
use hardylab_core::*;

use config::ConfigFile;

#[derive(Parser)]
#[command(name = "hardylab", version, about = "Numerical verification of supercritical Hardy-type inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Check one inequality on a family, on ingested samples, or across the
    /// default battery, and write a JSON report.
    Verify(VerifyArgs),
    /// Sweep the improved-Hardy quotient along the near-extremal family.
    Sweep(SweepArgs),
    /// Decreasing rearrangement of a sampled profile.
    Rearrange(RearrangeArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// classical | kernel | weighted1d | improved-radial | improved |
    /// radialise-contraction | sup-exchange | uncertainty-radial | uncertainty
    #[arg(long)]
    theorem: Option<String>,
    /// tent | bump | hardy-extremal | angular-mix | seeded
    /// (defaults to tent when --N and --p are given; omit together with
    /// --input to run the whole battery for the theorem)
    #[arg(long)]
    family: Option<String>,
    /// CSV input: header `r,value`, or `r,node_index,value` for tensor
    /// theorems (node_index against the quadrature built from --N and
    /// --angular-res)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Space dimension N >= 1
    #[arg(long = "N")]
    dim: Option<u32>,
    /// Integrability exponent p
    #[arg(long)]
    p: Option<f64>,
    /// Tent support start
    #[arg(long)]
    a: Option<f64>,
    /// Tent support end
    #[arg(long)]
    b: Option<f64>,
    /// Bump center
    #[arg(long)]
    center: Option<f64>,
    /// Bump half-width
    #[arg(long)]
    width: Option<f64>,
    /// Exponent offset of the near-extremal family, in (0, (p-N)/p)
    #[arg(long)]
    eps: Option<f64>,
    /// Harmonic index of the angular modulation
    #[arg(long)]
    harmonic: Option<u32>,
    /// Radial part of angular-mix: tent | bump
    #[arg(long)]
    mix_radial: Option<String>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    /// Radial nodes
    #[arg(long)]
    grid_n: Option<usize>,
    /// Angular resolution (defaults to 1, 32, 8 for N = 1, 2, 3)
    #[arg(long)]
    angular_res: Option<usize>,
    /// Relative slack of the verdict
    #[arg(long)]
    tol_rel: Option<f64>,
    /// Absolute slack of the verdict
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Re-evaluate at doubled radial resolution and require stable margins
    #[arg(long)]
    refine: bool,
    /// Seed for the seeded random smooth family (required by it)
    #[arg(long)]
    seed: Option<u64>,
    /// Report path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// key = value file mirroring the long flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long = "N")]
    dim: Option<u32>,
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated epsilon list, e.g. 0.2,0.1,0.05
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    r_min: Option<f64>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    tol_rel: Option<f64>,
    /// CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RearrangeArgs {
    /// Profile CSV with header `r,value`
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output resolution (equal-width cells)
    #[arg(long)]
    cells: Option<usize>,
    /// Exponent for the reported norms
    #[arg(long)]
    p: Option<f64>,
    /// linear | constant
    #[arg(long)]
    interp: Option<String>,
    /// CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunReport<'a> {
    tool: &'static str,
    version: &'static str,
    theorem: &'a str,
    policy: TolerancePolicy,
    reports: Vec<InequalityReport>,
    summary: Summary,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    pass: usize,
    fail: usize,
    unbounded: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Rearrange(args) => cmd_rearrange(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigFile> {
    match path {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

fn default_angular_res(dim: u32) -> usize {
    match dim {
        1 => 1,
        2 => 32,
        _ => 8,
    }
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("cannot write {path:?}"))
        }
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .context("cannot write to stdout")
        }
    }
}

fn family_spec(args: &VerifyArgs, cfg: &ConfigFile, name: &str, dim: u32, p: f64) -> Result<FamilySpec> {
    let a = args.a.map_or_else(|| cfg.get("a"), |v| Ok(Some(v)))?.unwrap_or(1.0);
    let b = args.b.map_or_else(|| cfg.get("b"), |v| Ok(Some(v)))?.unwrap_or(3.0);
    let center = args
        .center
        .map_or_else(|| cfg.get("center"), |v| Ok(Some(v)))?
        .unwrap_or(2.0);
    let width = args
        .width
        .map_or_else(|| cfg.get("width"), |v| Ok(Some(v)))?
        .unwrap_or(0.75);
    let harmonic = args
        .harmonic
        .map_or_else(|| cfg.get("harmonic"), |v| Ok(Some(v)))?
        .unwrap_or(1);
    let base = |name: &str| -> Result<FamilyKind> {
        match name {
            "tent" => Ok(FamilyKind::Tent { a, b }),
            "bump" => Ok(FamilyKind::SmoothBump { center, width }),
            "hardy-extremal" => {
                let eps = args
                    .eps
                    .map_or_else(|| cfg.get("eps"), |v| Ok(Some(v)))?
                    .ok_or_else(|| anyhow!("--eps is required for hardy-extremal"))?;
                Ok(FamilyKind::HardyExtremal { eps })
            }
            other => bail!("unknown family '{other}' (tent | bump | hardy-extremal | angular-mix | seeded)"),
        }
    };
    let kind = if name == "angular-mix" {
        let radial_name = args
            .mix_radial
            .clone()
            .map_or_else(|| cfg.get("mix-radial"), |v| Ok(Some(v)))?
            .unwrap_or_else(|| "tent".to_string());
        FamilyKind::AngularMix {
            radial: Box::new(base(&radial_name)?),
            harmonic,
        }
    } else {
        base(name)?
    };
    Ok(FamilySpec::new(kind, dim, p)?)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let cfg = load_config(&args.config)?;
    let theorem_name: String = args
        .theorem
        .clone()
        .map_or_else(|| cfg.get("theorem"), |v| Ok(Some(v)))?
        .ok_or_else(|| anyhow!("--theorem is required"))?;
    let functional = FunctionalId::parse(&theorem_name)?;
    let policy = TolerancePolicy {
        rel: args.tol_rel.map_or_else(|| cfg.get("tol-rel"), |v| Ok(Some(v)))?.unwrap_or(1e-3),
        abs: args.tol_abs.map_or_else(|| cfg.get("tol-abs"), |v| Ok(Some(v)))?.unwrap_or(1e-12),
        refinement_check: args.refine || cfg.get("refine")?.unwrap_or(false),
    };
    policy.validate()?;

    let dim: Option<u32> = args.dim.map_or_else(|| cfg.get("N"), |v| Ok(Some(v)))?;
    let p: Option<f64> = args.p.map_or_else(|| cfg.get("p"), |v| Ok(Some(v)))?;
    let grid = GridSpec {
        r_min: args.r_min.map_or_else(|| cfg.get("r-min"), |v| Ok(Some(v)))?.unwrap_or(1e-4),
        r_max: args.r_max.map_or_else(|| cfg.get("r-max"), |v| Ok(Some(v)))?.unwrap_or(1e4),
        n: args.grid_n.map_or_else(|| cfg.get("grid-n"), |v| Ok(Some(v)))?.unwrap_or(4096),
    };
    let family: Option<String> = args.family.clone().map_or_else(|| cfg.get("family"), |v| Ok(Some(v)))?;
    let input: Option<PathBuf> = args.input.clone().map_or_else(|| cfg.get("input"), |v| Ok(Some(v)))?;

    if family.is_some() && input.is_some() {
        bail!("--family and --input are mutually exclusive");
    }

    // N and p without an explicit function select the tent family
    let family = match (&family, &input, dim, p) {
        (None, None, Some(_), Some(_)) => Some("tent".to_string()),
        _ => family,
    };

    let reports: Vec<InequalityReport> = if let Some(path) = &input {
        let dim = dim.ok_or_else(|| anyhow!("--N is required with --input"))?;
        let p = p.ok_or_else(|| anyhow!("--p is required with --input"))?;
        if args.refine {
            bail!("--refine needs a rebuildable family, not ingested samples");
        }
        let u = ingest(path, functional, dim, p, &args, &cfg)?;
        let items = evaluate_functional(functional, &u, dim, p, functional.as_str())?;
        let provenance = path.display().to_string();
        items
            .iter()
            .map(|item| Ok(report_item(item, &policy, &provenance)?))
            .collect::<Result<_>>()?
    } else if let Some(name) = &family {
        let dim = dim.ok_or_else(|| anyhow!("--N is required with --family"))?;
        let p = p.ok_or_else(|| anyhow!("--p is required with --family"))?;
        let angular = args
            .angular_res
            .map_or_else(|| cfg.get("angular-res"), |v| Ok(Some(v)))?
            .unwrap_or_else(|| default_angular_res(dim));
        if name == "seeded" {
            let seed = args
                .seed
                .map_or_else(|| cfg.get("seed"), |v| Ok(Some(v)))?
                .ok_or_else(|| anyhow!("the seeded family requires an explicit --seed"))?;
            if args.refine {
                bail!("--refine is not available for the seeded family");
            }
            let radial_grid = RadialGrid::log_spaced(grid.r_min, grid.r_max, grid.n)?;
            let u = if functional.needs_tensor() {
                let quad = build_angular_quadrature(dim, angular)?;
                TestFunction::Tensor(seeded_tensor_function(seed, &radial_grid, &quad, p))
            } else {
                TestFunction::Separable(SeparableFunction::radial(
                    seeded_radial_profile(seed, &radial_grid),
                    dim,
                )?)
            };
            let items = evaluate_functional(functional, &u, dim, p, functional.as_str())?;
            let provenance = format!("seeded({seed})");
            items
                .iter()
                .map(|item| Ok(report_item(item, &policy, &provenance)?))
                .collect::<Result<_>>()?
        } else {
            let spec = family_spec(&args, &cfg, name, dim, p)?;
            let job = BatteryJob::new(functional, spec, grid, angular);
            run_battery(&[job], &policy, None)?
        }
    } else {
        let jobs: Vec<BatteryJob> = default_battery()
            .into_iter()
            .filter(|j| j.functional == functional)
            .collect();
        run_battery(&jobs, &policy, None)?
    };

    let summary = Summary {
        total: reports.len(),
        pass: reports.iter().filter(|r| r.verdict == Verdict::Pass).count(),
        fail: reports.iter().filter(|r| r.verdict == Verdict::Fail).count(),
        unbounded: reports
            .iter()
            .filter(|r| r.verdict == Verdict::UnboundedBranch)
            .count(),
    };
    let exit = if summary.fail > 0 { 1 } else { 0 };
    let run = RunReport {
        tool: "hardylab",
        version: env!("CARGO_PKG_VERSION"),
        theorem: functional.as_str(),
        policy,
        reports,
        summary,
    };
    let mut text = serde_json::to_string_pretty(&run)?;
    text.push('\n');
    write_text(&args.out, &text)?;
    eprintln!(
        "{}: {} pass, {} fail, {} unbounded",
        functional.as_str(),
        run.summary.pass,
        run.summary.fail,
        run.summary.unbounded
    );
    Ok(exit)
}

fn ingest(
    path: &Path,
    functional: FunctionalId,
    dim: u32,
    p: f64,
    args: &VerifyArgs,
    cfg: &ConfigFile,
) -> Result<TestFunction> {
    let file = File::open(path).with_context(|| format!("cannot open {path:?}"))?;
    let reader = BufReader::new(file);
    if functional.needs_tensor() {
        let angular = args
            .angular_res
            .map_or_else(|| cfg.get("angular-res"), |v| Ok(Some(v)))?
            .unwrap_or_else(|| default_angular_res(dim));
        let quad = build_angular_quadrature(dim, angular)?;
        Ok(TestFunction::Tensor(read_tensor_csv(reader, &quad, p)?))
    } else {
        let profile = read_profile_csv(reader)?;
        Ok(TestFunction::Separable(SeparableFunction::radial(profile, dim)?))
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<u8> {
    let cfg = load_config(&args.config)?;
    let dim: u32 = args
        .dim
        .map_or_else(|| cfg.get("N"), |v| Ok(Some(v)))?
        .ok_or_else(|| anyhow!("--N is required"))?;
    let p: f64 = args
        .p
        .map_or_else(|| cfg.get("p"), |v| Ok(Some(v)))?
        .ok_or_else(|| anyhow!("--p is required"))?;
    let eps_raw: String = args
        .eps
        .clone()
        .map_or_else(|| cfg.get("eps"), |v| Ok(Some(v)))?
        .ok_or_else(|| anyhow!("--eps is required (comma-separated list)"))?;
    let eps: Vec<f64> = eps_raw
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("cannot parse eps value '{}'", s.trim()))
        })
        .collect::<Result<_>>()?;
    if eps.is_empty() {
        bail!("--eps list is empty");
    }
    let tol_rel: f64 = args
        .tol_rel
        .map_or_else(|| cfg.get("tol-rel"), |v| Ok(Some(v)))?
        .unwrap_or(1e-3);
    let grid = RadialGrid::log_spaced(
        args.r_min.map_or_else(|| cfg.get("r-min"), |v| Ok(Some(v)))?.unwrap_or(1e-4),
        args.r_max.map_or_else(|| cfg.get("r-max"), |v| Ok(Some(v)))?.unwrap_or(1e4),
        args.grid_n.map_or_else(|| cfg.get("grid-n"), |v| Ok(Some(v)))?.unwrap_or(4096),
    )?;

    let sweep = sharpness_sweep(dim, p, &eps, &grid)?;
    let mut csv = String::from("eps,quotient,constant,margin\n");
    let mut all_below = true;
    for point in &sweep.points {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            point.eps, point.quotient, sweep.constant, point.margin
        ));
        if point.quotient > sweep.constant * (1.0 + tol_rel) {
            all_below = false;
        }
    }
    write_text(&args.out, &csv)?;
    eprintln!(
        "sweep N={dim} p={p}: sup quotient {:.6} against the sharp constant {:.6}",
        sweep.sup_quotient, sweep.constant
    );
    Ok(if all_below { 0 } else { 1 })
}

fn cmd_rearrange(args: RearrangeArgs) -> Result<u8> {
    let cfg = load_config(&args.config)?;
    let input: PathBuf = args
        .input
        .clone()
        .map_or_else(|| cfg.get("input"), |v| Ok(Some(v)))?
        .ok_or_else(|| anyhow!("--input is required"))?;
    let cells: usize = args
        .cells
        .map_or_else(|| cfg.get("cells"), |v| Ok(Some(v)))?
        .unwrap_or(DEFAULT_REARRANGEMENT_CELLS);
    let p: f64 = args.p.map_or_else(|| cfg.get("p"), |v| Ok(Some(v)))?.unwrap_or(2.0);
    let interp: String = args
        .interp
        .clone()
        .map_or_else(|| cfg.get("interp"), |v| Ok(Some(v)))?
        .unwrap_or_else(|| "linear".to_string());

    let file = File::open(&input).with_context(|| format!("cannot open {input:?}"))?;
    let reader = BufReader::new(file);
    let profile = match interp.as_str() {
        "linear" => read_profile_csv(reader)?,
        "constant" => read_profile_csv_step(reader)?,
        other => bail!("unknown interpolation '{other}' (linear | constant)"),
    };
    let rearranged = decreasing_rearrangement(&profile, cells)?;

    let mut csv = String::from("s,value\n");
    for (s, v) in rearranged.grid().nodes().iter().zip(rearranged.values()) {
        csv.push_str(&format!("{s},{v}\n"));
    }
    write_text(&args.out, &csv)?;

    let norm_in = profile.p_norm(p)?;
    let norm_out = rearranged.p_norm(p)?;
    let rel = (norm_in - norm_out).abs() / norm_in.abs().max(1e-300);
    eprintln!("input {p}-norm {norm_in:.9}, rearranged {p}-norm {norm_out:.9}, relative difference {rel:.3e}");
    Ok(0)
}
