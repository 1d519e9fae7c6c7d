//! The `shimura-lab` batch front-end.
//!
//! Every subcommand reads a [`RunConfig`] (file, then the output-directory
//! environment override, then flags), writes its outputs under `out` and
//! prints a short summary. Outputs depend only on the config, never on the
//! clock or on the worker count.
//!
//! Exit codes: 0 success, 1 failed check or runtime error, 2 malformed
//! config or input file, 3 search budget exhausted (partial output written
//! and flagged), 4 reference oracle error above `oracle_max_error`.

mod config;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rug::Rational;
use serde::Serialize;

pub use config::{CaseSelection, CurveSelection, RunConfig, CONFIG_SCHEMA_VERSION, OUT_DIR_ENV};

use crate::cohomology::{self, CohomologyError, CohomologyModel, PeriodVector};
use crate::equidist::{
    default_radius, discrepancy_report, estimate_volume, reference_family, sample_curve, substream, FoldGenerators,
    SampleBatch, SampleOptions, TestFunction, VolumeOptions,
};
use crate::linalg::Matrix;
use crate::liegen::{self, supergroup_check, LieAlgebraModel};
use crate::real::{Cx, Hp, Precision, Real};
use crate::registry::{
    build_registry, rational_line_from_element, read_registry, write_registry, CurveRegistry, GammaGenerators,
    ShimuraCurveRecord,
};
use crate::symspace::{self, fiber_average, phi_alpha_dir, OneOneForm, TangentDirection};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Budget(String),
    Oracle(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Oracle(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Budget(m) | CliError::Oracle(m) | CliError::Failed(m) => m,
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "shimura-lab", version, about = "Shimura curve laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Enumerate curves up to a height and write registry.json
    Enumerate,
    /// Sample and fold every selected curve, one CSV per curve
    Sample,
    /// Discrepancy and volume report over the selected curves
    Equidist,
    /// Self-intersection ratios C²/vol² for a model and period sequence
    Selfint,
    /// Random supergroup trials in both Lie algebra models
    Liecheck,
    /// Fiber averages of random (1,1)-forms against half the trace
    Fiberavg,
    /// Run every property suite; exit 0 iff all pass
    Verify,
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// key = value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    height: Option<u32>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Sampling radius, or `auto` for 4 + ln(1 + height)
    #[arg(long, global = true)]
    radius: Option<String>,
    /// Working precision in decimal digits
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Registry file to read instead of enumerating
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Any other config key, as key=value; repeatable
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn resolve_config(flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
        cfg.out = PathBuf::from(dir);
    }
    let mut pairs: Vec<(String, String)> = Vec::new();
    for s in &flags.set {
        let (k, v) = s.split_once('=').ok_or_else(|| CliError::Config(format!("--set expects key=value, got {s:?}")))?;
        if k.trim() == "schema_version" {
            return Err(CliError::Config("schema_version cannot be set from the command line".into()));
        }
        pairs.push((k.trim().into(), v.trim().into()));
    }
    let direct = [
        ("seed", flags.seed.map(|v| v.to_string())),
        ("height", flags.height.map(|v| v.to_string())),
        ("n", flags.n.map(|v| v.to_string())),
        ("radius", flags.radius.clone()),
        ("precision", flags.precision.map(|v| v.to_string())),
        ("out", flags.out.as_ref().map(|p| p.display().to_string())),
        ("workers", flags.workers.map(|v| v.to_string())),
        ("registry", flags.registry.as_ref().map(|p| p.display().to_string())),
    ];
    pairs.extend(direct.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
    for (k, v) in pairs {
        cfg.set(&k, &v).map_err(CliError::Config)?;
    }
    Ok(cfg)
}

/// Parses arguments, runs one subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = resolve_config(&cli.flags).and_then(|cfg| match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(failed)?
            .install(|| dispatch(cli.command, &cfg)),
        None => dispatch(cli.command, &cfg),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<(), CliError> {
    match cmd {
        Command::Enumerate => cmd_enumerate(cfg),
        Command::Sample => cmd_sample(cfg),
        Command::Equidist => cmd_equidist(cfg),
        Command::Selfint => cmd_selfint(cfg),
        Command::Liecheck => cmd_liecheck(cfg),
        Command::Fiberavg => cmd_fiberavg(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

fn write_output(cfg: &RunConfig, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| failed(format!("{}: {e}", cfg.out.display())))?;
    let path = cfg.out.join(name);
    std::fs::write(&path, contents).map_err(|e| failed(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn generators(cfg: &RunConfig) -> Result<GammaGenerators, CliError> {
    match &cfg.generators {
        Some(p) => GammaGenerators::from_json(&read_input(p)?).map_err(|e| CliError::Config(e.to_string())),
        None => Ok(GammaGenerators::default_set()),
    }
}

fn load_or_build_registry(cfg: &RunConfig) -> Result<CurveRegistry, CliError> {
    match &cfg.registry {
        Some(p) => read_registry(&read_input(p)?).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
        None => build_registry(&generators(cfg)?, &cfg.budget()).map_err(failed),
    }
}

fn select_curves<'a>(cfg: &RunConfig, reg: &'a CurveRegistry) -> Result<Vec<&'a ShimuraCurveRecord>, CliError> {
    match &cfg.curves {
        CurveSelection::All => Ok(reg.curves.iter().collect()),
        CurveSelection::Hyperbolic => Ok(reg.curves.iter().filter(|c| c.has_hyperbolic).collect()),
        CurveSelection::Ids(ids) => ids
            .iter()
            .map(|id| {
                reg.curves.iter().find(|c| &c.id == id).ok_or_else(|| CliError::Config(format!("unknown curve {id}")))
            })
            .collect(),
    }
}

fn sample_options(cfg: &RunConfig) -> SampleOptions {
    SampleOptions {
        fold: FoldGenerators::catalogue(cfg.fold_corner_bound),
        word_bound: cfg.fold_word_bound,
        ..SampleOptions::default()
    }
}

fn radius_for(cfg: &RunConfig, c: &ShimuraCurveRecord) -> f64 {
    cfg.radius.unwrap_or_else(|| default_radius(c.height))
}

fn cmd_enumerate(cfg: &RunConfig) -> Result<(), CliError> {
    let reg = build_registry(&generators(cfg)?, &cfg.budget()).map_err(failed)?;
    let path = write_output(cfg, "registry.json", &write_registry(&reg))?;
    let mut classes: BTreeMap<String, usize> = BTreeMap::new();
    for c in &reg.curves {
        *classes.entry(c.residue_class.to_string()).or_default() += 1;
    }
    let summary: Vec<String> = classes.iter().map(|(k, v)| format!("class {k}: {v}")).collect();
    println!(
        "{} curves up to height {} ({} vectors merged); {}; wrote {}",
        reg.curves.len(),
        cfg.height,
        reg.dedup_policy.merged,
        summary.join(", "),
        path.display()
    );
    let exhausted: Vec<&str> =
        reg.curves.iter().filter(|c| c.stabilizer_budget_exceeded).map(|c| c.id.as_str()).collect();
    if !exhausted.is_empty() {
        return Err(CliError::Budget(format!(
            "stabilizer search budget exhausted for {}; records are flagged",
            exhausted.join(",")
        )));
    }
    Ok(())
}

fn sample_csv(batch: &SampleBatch<f64>) -> String {
    let mut s = String::from(
        "index,disk_re,disk_im,raw_z1_re,raw_z1_im,raw_z2_re,raw_z2_im,z1_re,z1_im,z2_re,z2_im,word_len,word,budget_exceeded\n",
    );
    for k in 0..batch.len() {
        let (d, r, p) = (&batch.disk[k], &batch.raw[k], &batch.points[k]);
        let word: Vec<String> = batch.fold_words[k].iter().map(u16::to_string).collect();
        writeln!(
            s,
            "{k},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{}",
            d.re,
            d.im,
            r.z1.re,
            r.z1.im,
            r.z2.re,
            r.z2.im,
            p.z1.re,
            p.z1.im,
            p.z2.re,
            p.z2.im,
            word.len(),
            word.join("-"),
            batch.budget_exceeded[k]
        )
        .unwrap();
    }
    s
}

fn cmd_sample(cfg: &RunConfig) -> Result<(), CliError> {
    let reg = load_or_build_registry(cfg)?;
    let opts = sample_options(cfg);
    for c in select_curves(cfg, &reg)? {
        let batch = sample_curve::<f64>(c, cfg.n, radius_for(cfg, c), cfg.seed, &opts).map_err(failed)?;
        let path = write_output(cfg, &format!("samples_{}.csv", c.id), &sample_csv(&batch))?;
        println!(
            "{}: {} points at radius {:.4}, {} over fold budget; wrote {}",
            c.id,
            batch.len(),
            batch.radius,
            batch.exceeded_count(),
            path.display()
        );
    }
    Ok(())
}

fn cmd_equidist(cfg: &RunConfig) -> Result<(), CliError> {
    let reg = load_or_build_registry(cfg)?;
    let curves = select_curves(cfg, &reg)?;
    let opts = sample_options(cfg);
    let family = reference_family(&opts.fold, &TestFunction::ALL, &cfg.oracle());
    let worst = family.reference.iter().map(|r| r.std_error).fold(0.0, f64::max);
    if worst > cfg.oracle_max_error {
        return Err(CliError::Oracle(format!(
            "reference integral error {worst:e} exceeds oracle_max_error {:e}",
            cfg.oracle_max_error
        )));
    }
    let vol_opts = VolumeOptions { samples: cfg.volume_samples, ..VolumeOptions::default() };
    let mut batches = Vec::with_capacity(curves.len());
    for c in curves {
        let mut rec = c.clone();
        rec.volume_estimate = match estimate_volume(c, cfg.volume_radius, cfg.seed, &vol_opts) {
            Ok(v) => Some(v.estimate()),
            Err(crate::equidist::EquidistError::NoStabilizer) => None,
            Err(e) => return Err(failed(e)),
        };
        batches.push(sample_curve::<f64>(&rec, cfg.n, radius_for(cfg, c), cfg.seed, &opts).map_err(failed)?);
    }
    let report = discrepancy_report(&batches, &family).map_err(failed)?;
    write_output(cfg, "equidist.csv", &report.to_csv())?;
    let path = write_output(cfg, "equidist.json", &report.to_json())?;
    let (first, last) = (report.rows.first().unwrap(), report.rows.last().unwrap());
    println!(
        "{} curves, n = {}: D {:.3e} -> {:.3e}, trend {}; wrote {}",
        report.rows.len(),
        cfg.n,
        first.d,
        last.d,
        report.trend.map_or("undefined".to_string(), |t| format!("{t:.4}")),
        path.display()
    );
    Ok(())
}

fn cohomology_input(e: CohomologyError) -> CliError {
    match e {
        CohomologyError::Parse(_) => CliError::Config(e.to_string()),
        other => CliError::Failed(format!("{other:?}: {other}")),
    }
}

/// Default selfint input: gram diag(2, −1, −3) and p_n = (n², n, 1).
fn demo_selfint() -> (CohomologyModel<Rational>, Vec<PeriodVector<Rational>>) {
    let g = [2, -1, -3];
    let gram = Matrix::from_fn(3, 3, |i, j| if i == j { Rational::from(g[i]) } else { Rational::new() });
    let model = CohomologyModel::new(gram).expect("demo model is valid");
    let seq = (1..=12i64).map(|n| PeriodVector::new(vec![Rational::from(n * n), Rational::from(n), Rational::from(1)])).collect();
    (model, seq)
}

fn cmd_selfint(cfg: &RunConfig) -> Result<(), CliError> {
    let (demo_model, demo_seq) = demo_selfint();
    let model = match &cfg.model {
        Some(p) => cohomology::model_from_json::<Rational>(&read_input(p)?).map_err(cohomology_input)?,
        None => demo_model,
    };
    let seq = match &cfg.periods {
        Some(p) => cohomology::periods_from_json::<Rational>(&read_input(p)?).map_err(cohomology_input)?,
        None => demo_seq,
    };
    let csv = cohomology::ratios_csv(&model, &seq).map_err(cohomology_input)?;
    let path = write_output(cfg, "selfint.csv", &csv)?;
    let ratios = model.asymptotic_ratio(&seq).map_err(cohomology_input)?;
    let last = ratios.last().unwrap();
    println!(
        "{} terms, limit 1/lambda = {}, last ratio {:.12e}; wrote {}",
        seq.len(),
        model.limit_ratio(),
        last.to_f64(),
        path.display()
    );
    Ok(())
}

fn lie_cases(sel: CaseSelection) -> Vec<liegen::Case> {
    match sel {
        CaseSelection::One => vec![liegen::Case::One],
        CaseSelection::Two => vec![liegen::Case::Two],
        CaseSelection::Both => vec![liegen::Case::One, liegen::Case::Two],
    }
}

fn cmd_liecheck(cfg: &RunConfig) -> Result<(), CliError> {
    let mut reports = Vec::new();
    for case in lie_cases(cfg.case) {
        let r = supergroup_check(&LieAlgebraModel::new(case), cfg.trials, cfg.seed).map_err(failed)?;
        println!("case {:?}: {}/{} trials generate dimension {}", case, r.passes, cfg.trials, r.dim_g);
        reports.push(r);
    }
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n";
    let path = write_output(cfg, "liecheck.json", &json)?;
    println!("wrote {}", path.display());
    let failures: usize = reports.iter().map(|r| r.failures).sum();
    if failures > 0 {
        return Err(CliError::Failed(format!("{failures} trials generated a proper subalgebra")));
    }
    Ok(())
}

fn sym_cases(sel: CaseSelection) -> Vec<symspace::Case> {
    match sel {
        CaseSelection::One => vec![symspace::Case::One],
        CaseSelection::Two => vec![symspace::Case::Two],
        CaseSelection::Both => vec![symspace::Case::One, symspace::Case::Two],
    }
}

/// Random Hermitian coefficients in [-5, 5], one substream per form.
fn random_form(seed: u64, k: usize) -> OneOneForm<f64> {
    let mut rng = substream(seed, k as u64);
    let mut u = || rng.gen_range(-5.0..5.0);
    OneOneForm::new(u(), u(), (u(), u()))
}

/// Worst |fiber_average − trace/2| over `forms` random forms.
fn fiber_errors(seed: u64, forms: usize, case: symspace::Case, order: usize) -> Vec<(OneOneForm<f64>, f64, f64)> {
    (0..forms)
        .map(|k| {
            let a = random_form(seed, k);
            let avg = fiber_average(&a, case, order);
            let half = a.trace() / 2.0;
            (a, avg, half)
        })
        .collect()
}

fn fiber_tolerance(order: usize) -> f64 {
    match order {
        o if o >= 32 => 1e-12,
        o if o >= 16 => 1e-9,
        _ => f64::INFINITY,
    }
}

fn cmd_fiberavg(cfg: &RunConfig) -> Result<(), CliError> {
    let mut s = String::from("case,k,a11,a22,a12_re,a12_im,average,half_trace,error\n");
    let tol = fiber_tolerance(cfg.order);
    let mut worst = 0.0f64;
    for case in sym_cases(cfg.case) {
        for (k, (a, avg, half)) in fiber_errors(cfg.seed, cfg.forms, case, cfg.order).iter().enumerate() {
            let err = (avg - half).abs();
            worst = worst.max(err);
            writeln!(
                s,
                "{case:?},{k},{:.17e},{:.17e},{:.17e},{:.17e},{avg:.17e},{half:.17e},{err:.3e}",
                a.a11, a.a22, a.a12.re, a.a12.im
            )
            .unwrap();
        }
    }
    let path = write_output(cfg, "fiberavg.csv", &s)?;
    println!("order {}: max |average - trace/2| = {worst:.3e} (tolerance {tol:e}); wrote {}", cfg.order, path.display());
    if worst > tol {
        return Err(CliError::Failed(format!("fiber average error {worst:e} exceeds {tol:e}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct SuiteResult {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReport {
    passed: bool,
    failures: Vec<&'static str>,
    suites: Vec<SuiteResult>,
}

fn suite_fiber(cfg: &RunConfig) -> (bool, String) {
    let mut worst = BTreeMap::new();
    for order in [16, 32] {
        for case in [symspace::Case::One, symspace::Case::Two] {
            let e = fiber_errors(cfg.seed, 100, case, order)
                .iter()
                .map(|(_, avg, half)| (avg - half).abs())
                .fold(0.0, f64::max);
            worst.insert(format!("{case:?}@{order}"), (e, fiber_tolerance(order)));
        }
    }
    let ok = worst.values().all(|(e, t)| e <= t);
    let detail = worst.iter().map(|(k, (e, t))| format!("{k} {e:.2e}<={t:e}")).collect::<Vec<_>>().join(" ");
    (ok, detail)
}

/// φ_ω ≡ 1 on 10⁴ random directions at the configured precision.
fn suite_phi(cfg: &RunConfig) -> (bool, String) {
    let prec = Precision::digits(cfg.precision);
    let omega = OneOneForm::<Hp>::kahler(prec);
    let mut rng = substream(cfg.seed, 1 << 32);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let mut c = || Cx::<Hp>::from_f64(prec, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (v1, v2) = (c(), c());
        if let Ok(dir) = TangentDirection::new(v1, v2) {
            let phi = phi_alpha_dir(&omega, &dir);
            worst = worst.max((phi - Hp::from_f64(prec, 1.0)).abs().to_f64());
        }
    }
    (worst <= cfg.tolerance, format!("max |phi - 1| = {worst:.3e} at {} digits, tolerance {:e}", cfg.precision, cfg.tolerance))
}

fn suite_lie(cfg: &RunConfig) -> (bool, String) {
    let mut parts = Vec::new();
    let mut ok = true;
    for case in [liegen::Case::One, liegen::Case::Two] {
        match supergroup_check(&LieAlgebraModel::new(case), cfg.trials, cfg.seed) {
            Ok(r) => {
                ok &= r.failures == 0;
                parts.push(format!("{case:?} {}/{} -> dim {}", r.passes, cfg.trials, r.dim_g));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{case:?} {e}"));
            }
        }
    }
    (ok, parts.join(", "))
}

fn random_rational_model(rng: &mut impl Rng) -> (CohomologyModel<Rational>, Vec<usize>) {
    let dim = rng.gen_range(2..=5usize);
    let split = rng.gen_range(1..dim);
    let mut gram = Matrix::<Rational>::zeros(dim, dim);
    gram[(0, 0)] = Rational::from((rng.gen_range(1..10), rng.gen_range(1..5)));
    for i in 1..split {
        gram[(i, i)] = Rational::from(rng.gen_range(-4..=4i64) * 2 + 1);
    }
    // negative-definite block -(AᵀA + I) on split..dim
    let b = dim - split;
    let a: Vec<Vec<i64>> = (0..b).map(|_| (0..b).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    for i in 0..b {
        for j in 0..b {
            let s: i64 = (0..b).map(|k| a[k][i] * a[k][j]).sum::<i64>() + i64::from(i == j);
            gram[(split + i, split + j)] = Rational::from(-s);
        }
    }
    let block: Vec<usize> = (split..dim).collect();
    (CohomologyModel::new(gram).expect("random model is valid"), block)
}

fn suite_cohomology(cfg: &RunConfig) -> (bool, String) {
    let mut rng = substream(cfg.seed, 2 << 32);
    let mut bad = Vec::new();
    for k in 0..200 {
        let (model, block) = random_rational_model(&mut rng);
        let d = model.dim();
        let mut r = || Rational::from((rng.gen_range(-20..=20i64), rng.gen_range(1..=6i64)));
        let p = PeriodVector::new((0..d).map(|_| r()).collect());
        let c: Vec<Rational> = (0..d).map(|_| r()).collect();
        if model.self_intersection(&p).ok() != model.self_intersection_direct(&p).ok() {
            bad.push(format!("model {k}: expansion differs"));
        }
        let model = model.with_cusp_block(block).expect("block is orthogonal");
        let pc = model.cusp_projection(&c).expect("block is negative definite");
        let ppc = model.cusp_projection(&pc).expect("block is negative definite");
        let gain = Rational::from(&model.square(&pc) - &model.square(&c));
        let self_adjoint = model.pairing(&pc, &c) == model.pairing(&c, &pc);
        if ppc != pc || !self_adjoint || gain < 0 {
            bad.push(format!("model {k}: projection property"));
        }
    }
    if let Some(p) = &cfg.model {
        match read_input(p).map(|t| cohomology::model_from_json::<Rational>(&t)) {
            Ok(Ok(_)) => {}
            Ok(Err(e)) => bad.push(format!("{}: {e:?}", p.display())),
            Err(e) => bad.push(e.message().to_string()),
        }
    }
    let ok = bad.is_empty();
    (ok, if ok { "200 random rational models".into() } else { bad.join("; ") })
}

fn verify_registry(cfg: &RunConfig) -> Result<CurveRegistry, String> {
    let budget = crate::registry::RegistryBudget { height: 1, ..cfg.budget() };
    build_registry(&GammaGenerators::default_set(), &budget).map_err(|e| e.to_string())
}

fn suite_roundtrip(reg: &CurveRegistry) -> (bool, String) {
    let text = write_registry(reg);
    let stable = read_registry(&text).map(|r| write_registry(&r) == text).unwrap_or(false);
    let mut checked = 0;
    let mut misses = Vec::new();
    for c in &reg.curves {
        if let Some(g) = c.hyperbolic_witness() {
            checked += 1;
            match rational_line_from_element(&reg.form, g) {
                Ok(v) if v.canonical() == c.defining_vector.canonical() => {}
                _ => misses.push(c.id.clone()),
            }
        }
    }
    let ok = stable && misses.is_empty() && checked > 0;
    (ok, format!("registry json stable: {stable}; lines recovered {}/{checked}", checked - misses.len()))
}

/// Conjugator residuals at the configured precision against `tolerance`.
fn suite_conjugator(cfg: &RunConfig, reg: &CurveRegistry) -> (bool, String) {
    let worst = reg.curves.iter().map(|c| c.conjugator.residual).fold(0.0, f64::max);
    (
        worst <= cfg.tolerance,
        format!("max residual {worst:.3e} at {} digits, tolerance {:e}", cfg.precision, cfg.tolerance),
    )
}

fn cmd_verify(cfg: &RunConfig) -> Result<(), CliError> {
    let reg = verify_registry(cfg);
    let with_reg = |f: fn(&CurveRegistry) -> (bool, String), reg: &Result<CurveRegistry, String>| match reg {
        Ok(r) => f(r),
        Err(e) => (false, e.clone()),
    };
    let suites: Vec<(&'static str, Box<dyn Fn() -> (bool, String) + '_>)> = vec![
        ("fiberavg", Box::new(|| suite_fiber(cfg))),
        ("phi_omega", Box::new(|| suite_phi(cfg))),
        ("conjugator", Box::new(|| match &reg {
            Ok(r) => suite_conjugator(cfg, r),
            Err(e) => (false, e.clone()),
        })),
        ("liegen", Box::new(|| suite_lie(cfg))),
        ("cohomology", Box::new(|| suite_cohomology(cfg))),
        ("roundtrip", Box::new(|| with_reg(suite_roundtrip, &reg))),
    ];
    let mut results = Vec::new();
    for (name, f) in suites {
        let (passed, detail) = f();
        println!("{name}: {} ({detail})", if passed { "PASS" } else { "FAIL" });
        results.push(SuiteResult { name, passed, detail });
    }
    let failures: Vec<&'static str> = results.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    let report = VerifyReport { passed: failures.is_empty(), failures: failures.clone(), suites: results };
    write_output(cfg, "verify.json", &(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"))?;
    if !failures.is_empty() {
        return Err(CliError::Failed(format!("failed suites: {}", failures.join(","))));
    }
    Ok(())
}
