use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use sbp_interface::builder::{build_interp, standard_setup};
use sbp_interface::config::{
    load_json, output_path, BuildInterpConfig, SpectrumConfig, VerifyOpsConfig, VortexConfig, OUTPUT_DIR_ENV,
};
use sbp_interface::euler::{refinement_study_with_fields, OrderSpec, VortexParams};
use sbp_interface::interp::{StencilShape, check_inter2, load_interp_pair, verify_accuracy, verify_sbp_preserving, InterpKind};
use sbp_interface::sat::CouplingMode;
use sbp_interface::sbp::{make_sbp_operator, verify_sbp_property};
use sbp_interface::spectrum::{
    assemble_model_operator, compute_spectrum, energy_report, CoarseSide, EnergyReport, ModelConfig, SpectrumReport,
    Verdict,
};
use sbp_interface::{Error, Result, VerificationReport};

#[derive(Parser)]
#[command(name = "sbp-interface", version, about = "SBP operators, interface interpolation and SAT coupling experiments")]
#[command(after_help = "Exit codes: 0 pass, 2 verification failure, 1 error.\nRelative output paths are placed under $SBP_OUTPUT_DIR when it is set.")]
struct Cli {
    /// Worker threads for independent sweep entries.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check SBP operators and tabulated interpolation pairs.
    VerifyOps(VerifyArgs),
    /// Construct an interpolation pair for a given accuracy.
    BuildInterp(BuildArgs),
    /// Eigenvalues of the two-block model problem.
    Spectrum(SpectrumArgs),
    /// Vortex convergence study with the Euler solver.
    Vortex(VortexArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Interpolation kind; repeatable.
    #[arg(long = "kind")]
    kinds: Vec<InterpKind>,
    /// SBP order; repeatable.
    #[arg(long = "order")]
    orders: Vec<usize>,
    #[arg(long)]
    mc: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    mc: Option<usize>,
    /// Closure shape `q,r,s`.
    #[arg(long, value_parser = parse_shape)]
    shape: Option<StencilShape>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_shape(s: &str) -> std::result::Result<StencilShape, String> {
    let v: Vec<usize> = s.split(',').map(|x| x.trim().parse::<usize>()).collect::<std::result::Result<_, _>>().map_err(|e| e.to_string())?;
    match v[..] {
        [q, r, s] => StencilShape::new(q, r, s).map_err(|e| e.to_string()),
        _ => Err("expected q,r,s".into()),
    }
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kind: Option<InterpKind>,
    #[arg(long)]
    coupling: Option<CouplingMode>,
    #[arg(long)]
    coarse_points: Option<usize>,
    #[arg(long)]
    coarse_right: bool,
    #[arg(long)]
    tol: Option<f64>,
    /// Also evaluate the energy matrix.
    #[arg(long)]
    energy: bool,
    /// Eigenvalue CSV (`re_scaled,im_scaled`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON; printed to stdout when absent.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct VortexArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// `p` or `coarse:fine`, e.g. `8:4`.
    #[arg(long)]
    order: Option<OrderSpec>,
    /// Coarse points per side; repeatable.
    #[arg(long = "M", alias = "m")]
    m: Vec<usize>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long)]
    coupling: Option<CouplingMode>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    strength: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    /// Report JSON; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-run errors as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Final fields of the finest run as CSV.
    #[arg(long)]
    fields: Option<PathBuf>,
}

enum Outcome {
    Pass,
    Fail,
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => {
            let p = output_path(p);
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, text + "\n")?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn create(p: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    let p = output_path(p);
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(std::io::BufWriter::new(std::fs::File::create(p)?))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| Error::Invalid(e.to_string()))
}

#[derive(Serialize)]
struct PairCheck {
    kind: InterpKind,
    mc: usize,
    sbp_preserving: VerificationReport,
    accuracy: VerificationReport,
    inter2_min_eigenvalue: Option<f64>,
}

#[derive(Serialize)]
struct VerifyOutput {
    operators: Vec<VerificationReport>,
    pairs: Vec<PairCheck>,
    pass: bool,
}

fn verify_ops(a: VerifyArgs) -> Result<Outcome> {
    let mut cfg: VerifyOpsConfig = match &a.config {
        Some(p) => load_json(p)?,
        None => VerifyOpsConfig::default(),
    };
    if !a.kinds.is_empty() {
        cfg.kinds = a.kinds;
        if a.orders.is_empty() {
            cfg.orders.clear();
        }
    }
    if !a.orders.is_empty() {
        cfg.orders = a.orders;
    }
    cfg.mc = a.mc.or(cfg.mc);
    cfg.n = a.n.unwrap_or(cfg.n);

    let mut operators = Vec::new();
    for &p in &cfg.orders {
        operators.push(verify_sbp_property(&make_sbp_operator(p, cfg.n, 1.0 / cfg.n as f64)?));
    }
    let mut pairs = Vec::new();
    for &kind in &cfg.kinds {
        let mc = cfg.mc.unwrap_or(32);
        let pair = load_interp_pair(kind, mc, 1.0 / mc as f64)?;
        pairs.push(PairCheck {
            kind,
            mc,
            sbp_preserving: verify_sbp_preserving(&pair),
            accuracy: verify_accuracy(&pair),
            inter2_min_eigenvalue: check_inter2(&pair)?.psd_min_eigenvalue,
        });
    }
    let pass = operators.iter().all(|r| r.pass) && pairs.iter().all(|p| p.sbp_preserving.pass && p.accuracy.pass);
    emit(&VerifyOutput { operators, pairs, pass }, a.out.as_deref())?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct BuildOutput {
    summary: sbp_interface::builder::BuildSummary,
    pair: sbp_interface::interp::PairDump,
    sbp_preserving: VerificationReport,
    accuracy: VerificationReport,
}

fn build(a: BuildArgs) -> Result<Outcome> {
    let mut cfg = match (&a.config, a.p) {
        (Some(p), _) => load_json::<BuildInterpConfig>(p)?,
        (None, Some(p)) => BuildInterpConfig { p, mc: a.mc.unwrap_or(8 * p), shape: None },
        (None, None) => return Err(Error::Invalid("build-interp needs --p or --config".into())),
    };
    cfg.p = a.p.unwrap_or(cfg.p);
    cfg.mc = a.mc.unwrap_or(cfg.mc);
    cfg.shape = a.shape.or(cfg.shape);
    let (coarse, fine, default_shape) = standard_setup(cfg.p, cfg.mc)?;
    let shape = cfg.shape.unwrap_or(default_shape);
    let res = build_interp(cfg.p, &coarse, &fine, shape)?;
    let sbp_preserving = verify_sbp_preserving(&res.pair);
    let accuracy = verify_accuracy(&res.pair);
    let pass = sbp_preserving.pass && accuracy.pass;
    emit(&BuildOutput { summary: res.summary(shape), pair: res.pair.dump(), sbp_preserving, accuracy }, a.out.as_deref())?;
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Serialize)]
struct SpectrumEntry {
    model: ModelConfig,
    spectrum: SpectrumReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    energy: Option<EnergyReport>,
}

fn spectrum(a: SpectrumArgs, jobs: usize) -> Result<Outcome> {
    let mut cfg = match &a.config {
        Some(p) => load_json::<SpectrumConfig>(p)?,
        None => {
            let kind = a.kind.ok_or_else(|| Error::Invalid("spectrum needs --config or --kind".into()))?;
            let mut m = ModelConfig::new(kind, a.coupling.unwrap_or(CouplingMode::NonDissipative), a.coarse_points.unwrap_or(15));
            if a.coarse_right {
                m.coarse_side = CoarseSide::Right;
            }
            SpectrumConfig::single(m)
        }
    };
    if let Some(t) = a.tol {
        cfg.tolerance = t;
    }
    let energy = cfg.energy || a.energy;
    let models = cfg.models()?;
    let run = |m: &ModelConfig| -> Result<SpectrumEntry> {
        let sys = assemble_model_operator(m)?;
        let spectrum = compute_spectrum(&sys, sys.h_right())?.with_tolerance(cfg.tolerance);
        let energy = if energy { Some(energy_report(&sys)?) } else { None };
        Ok(SpectrumEntry { model: m.clone(), spectrum, energy })
    };
    let entries: Vec<SpectrumEntry> = pool(jobs)?.install(|| models.par_iter().map(run).collect::<Result<_>>())?;
    if let Some(out) = &a.out {
        for (i, e) in entries.iter().enumerate() {
            let path = if entries.len() == 1 {
                out.clone()
            } else {
                let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("spectrum");
                out.with_file_name(format!("{stem}_{i}.csv"))
            };
            e.spectrum.write_csv(&output_path(&path))?;
        }
    }
    let stable = entries.iter().all(|e| e.spectrum.verdict == Verdict::Stable);
    if entries.len() == 1 {
        emit(&entries[0], a.summary.as_deref())?;
    } else {
        emit(&entries, a.summary.as_deref())?;
    }
    Ok(if stable { Outcome::Pass } else { Outcome::Fail })
}

fn vortex(a: VortexArgs, jobs: usize) -> Result<Outcome> {
    let mut cfg = match &a.config {
        Some(p) => load_json::<VortexConfig>(p)?,
        None => VortexConfig {
            order: a.order.ok_or_else(|| Error::Invalid("vortex needs --order or --config".into()))?,
            m: Vec::new(),
            coupling: None,
            cfl: None,
            t_end: 1.0,
            vortex: VortexParams::default(),
        },
    };
    if let Some(o) = a.order {
        cfg.order = o;
    }
    if !a.m.is_empty() {
        cfg.m = a.m;
    }
    if cfg.m.is_empty() {
        return Err(Error::Invalid("vortex needs at least one --M".into()));
    }
    cfg.t_end = a.tend.unwrap_or(cfg.t_end);
    cfg.coupling = a.coupling.or(cfg.coupling);
    cfg.cfl = a.cfl.or(cfg.cfl);
    cfg.vortex.strength = a.strength.unwrap_or(cfg.vortex.strength);
    cfg.vortex.radius = a.radius.unwrap_or(cfg.vortex.radius);

    let report = refinement_study_with_fields(&cfg.base(), &cfg.m, jobs, a.fields.is_some())?;
    if let Some(p) = &a.csv {
        let mut f = create(p)?;
        writeln!(f, "m,t,steps,rho,u,v,p")?;
        for r in &report.rows {
            let e = r.log10_errors.map(|x| 10f64.powf(x));
            writeln!(f, "{},{},{},{:.10e},{:.10e},{:.10e},{:.10e}", r.m, report.t_end, r.steps, e[0], e[1], e[2], e[3])?;
        }
        f.flush()?;
    }
    if let (Some(p), Some(rows)) = (&a.fields, &report.fields) {
        let mut f = create(p)?;
        writeln!(f, "x,y,rho,u,v,p")?;
        for r in rows {
            writeln!(f, "{:.6},{:.6},{:.12e},{:.12e},{:.12e},{:.12e}", r[0], r[1], r[2], r[3], r[4], r[5])?;
        }
        f.flush()?;
    }
    emit(&report, a.out.as_deref())?;
    Ok(Outcome::Pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let jobs = cli.jobs;
    let res = match cli.cmd {
        Cmd::VerifyOps(a) => verify_ops(a),
        Cmd::BuildInterp(a) => build(a),
        Cmd::Spectrum(a) => spectrum(a, jobs),
        Cmd::Vortex(a) => vortex(a, jobs),
    };
    match res {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Io(_)) {
                eprintln!("(output directory override: ${OUTPUT_DIR_ENV})");
            }
            ExitCode::from(1)
        }
    }
}
