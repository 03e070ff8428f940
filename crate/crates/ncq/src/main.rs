//! Command-line driver: catalog inspection, quantization runs, the
//! invariant suite, covariant spectra, symmetry functions, and the
//! scalar nilpotent calculus. Exit code 0 means every requested check
//! passed, 1 means a check failed, 2 means the input was unusable.

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use ncq::suite::{self, DEFAULT_SEED};
use ncq_core::crossed::{omega_symbol_from_json, spectrum, system_from_json, DynamicalSystem, OmegaSymbol};
use ncq_core::groups::{
    make_group, schur_orthogonality_residual, validate_dual, validate_group, FiniteGroup, TauMap,
    UnitaryDual, CATALOG_SPECS,
};
use ncq_core::harmonic::{symbol_from_json, Symbol};
use ncq_core::la::{hausdorff, op_norm, spectral_radius, CMat, C64};
use ncq_core::nilpotent::{
    cocycle_report, function_from_json, function_to_json, rn_consistency, scalar_kernel,
    scalar_op, CoordinateTau, NilpotentAlgebra, ScalarSymbol,
};
use ncq_core::quantize::{op_from_symbol, Side};
use ncq_core::symbolalg::{
    is_symmetry_function, symmetry_central_extension, symmetry_odd_power, symmetry_product,
    symmetry_search,
};
use ncq_core::CoreError;

#[derive(Parser)]
#[command(name = "ncq", version, about = "Quantization calculus on finite and nilpotent groups")]
struct Cli {
    #[command(subcommand)]
    noun: Noun,
}

#[derive(Subcommand)]
enum Noun {
    /// Inspect the built-in group catalog.
    #[command(subcommand)]
    Catalog(CatalogVerb),
    /// Turn symbols into operators.
    #[command(subcommand)]
    Quantize(QuantizeVerb),
    /// Run the invariant battery.
    #[command(subcommand)]
    Suite(SuiteVerb),
    /// Spectra of covariant operator families along orbits.
    #[command(subcommand)]
    Spectra(SpectraVerb),
    /// Search for or construct symmetry functions.
    #[command(subcommand)]
    Symmetry(SymmetryVerb),
    /// Check a covariant family against its point action.
    #[command(subcommand)]
    Covariant(CovariantVerb),
    /// The scalar calculus on nilpotent groups.
    #[command(subcommand)]
    Nilpotent(NilpotentVerb),
}

#[derive(Subcommand)]
enum CatalogVerb {
    /// List the catalog group specifications.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Show one group: order, structure, dual summary, validation.
    Show {
        #[command(flatten)]
        target: GroupArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum QuantizeVerb {
    /// Quantize one symbol and report operator metrics.
    Run(QuantizeArgs),
}

#[derive(Args)]
struct QuantizeArgs {
    #[command(flatten)]
    target: GroupArg,
    /// Ordering map: e, id, inv, sigma, or random:<seed>.
    #[arg(long, default_value = "e")]
    tau: String,
    /// Translation side of the calculus.
    #[arg(long, default_value = "right")]
    side: String,
    /// Symbol file in the library's interchange format.
    #[arg(long)]
    symbol: Option<String>,
    /// Seed for a random symbol when no file is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the operator document here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum SuiteVerb {
    /// Run the batteries and report one line per check.
    Run(SuiteArgs),
}

#[derive(Args)]
struct SuiteArgs {
    /// Run every catalog group plus the cross-cutting and nilpotent
    /// batteries.
    #[arg(long, conflicts_with = "group")]
    all: bool,
    /// Run the per-group battery for one group.
    #[arg(long)]
    group: Option<String>,
    /// Override the tolerance of every upper-bound check.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum SpectraVerb {
    /// Report per-orbit spectra and their pairwise Hausdorff spread.
    Report(SpectraArgs),
}

#[derive(Args)]
struct SpectraArgs {
    #[command(flatten)]
    target: GroupArg,
    /// Dynamical system: translation, quotient:<i,j,...>,
    /// conjugation:<seed>, or a system file.
    #[arg(long)]
    system: String,
    /// Point-indexed symbol file; a seeded random one if absent.
    #[arg(long)]
    symbol: Option<String>,
    /// Ordering map: e, id, inv, sigma, or random:<seed>.
    #[arg(long, default_value = "e")]
    tau: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Pass threshold for the within-orbit Hausdorff spread.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum SymmetryVerb {
    /// Search for symmetry functions or construct one.
    Find(SymmetryArgs),
}

#[derive(Args)]
struct SymmetryArgs {
    #[command(flatten)]
    target: GroupArg,
    #[arg(long, default_value = "right")]
    side: String,
    /// search enumerates, construct builds one explicitly.
    #[arg(long, default_value = "search")]
    mode: String,
    /// Construction: odd-power, product, or central-extension.
    #[arg(long, default_value = "odd-power")]
    strategy: String,
    /// Cap on the number of reported witnesses when searching.
    #[arg(long, default_value_t = 10)]
    limit: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum CovariantVerb {
    /// Verify the covariance law, optionally with orbit spectra.
    Check(CovariantArgs),
}

#[derive(Args)]
struct CovariantArgs {
    #[command(flatten)]
    target: GroupArg,
    /// Dynamical system: translation, quotient:<i,j,...>,
    /// conjugation:<seed>, or a system file.
    #[arg(long)]
    system: String,
    /// Point-indexed symbol file; a seeded random one if absent.
    #[arg(long)]
    symbol: Option<String>,
    /// Ordering map: e, id, inv, sigma, or random:<seed>.
    #[arg(long, default_value = "e")]
    tau: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Pass threshold for the covariance residual.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Also require within-orbit spectral agreement at 1e-8.
    #[arg(long)]
    check_spectra: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum NilpotentVerb {
    /// Materialize the integral kernel of one scalar symbol.
    Kernel(NilpotentKernelArgs),
    /// Apply the operator of a scalar symbol to a sampled function.
    Op(NilpotentOpArgs),
    /// Verify the phase cocycle identity on seeded samples.
    CocycleCheck(CocycleArgs),
    /// Verify the flat-space specialization on a grid.
    RnCheck(RnArgs),
}

#[derive(Args)]
struct NilpotentKernelArgs {
    /// Algebra: heisenberg:<dim>, engel, filiform:<dim>, abelian:<dim>,
    /// or a table file.
    #[arg(long)]
    algebra: String,
    /// Coordinate ordering map: zero, id, or half.
    #[arg(long, default_value = "zero")]
    tau: String,
    #[arg(long, default_value = "left")]
    side: String,
    /// Scalar symbol file with grid metadata.
    #[arg(long)]
    symbol: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct NilpotentOpArgs {
    #[arg(long)]
    algebra: String,
    #[arg(long, default_value = "zero")]
    tau: String,
    #[arg(long, default_value = "left")]
    side: String,
    #[arg(long)]
    symbol: String,
    /// Sampled input function on the same grid.
    #[arg(long)]
    input: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct CocycleArgs {
    #[arg(long, default_value = "heisenberg:3")]
    algebra: String,
    #[arg(long, default_value = "half")]
    tau: String,
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    /// Composition points sampled per pair.
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RnArgs {
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value = "zero")]
    tau: String,
    #[arg(long, default_value_t = 32)]
    points: usize,
    #[arg(long, default_value_t = 6.0)]
    half_width: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

/// The group argument shared by most commands: a catalog family
/// string or file:<path>.
#[derive(Args)]
struct GroupArg {
    #[arg(long)]
    group: String,
}

fn main() {
    // Pipelines may close stdout early; dying quietly on SIGPIPE is
    // the conventional behavior for line-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let doc = serde_json::json!({ "error": err.to_string() });
            eprintln!("{doc}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32, CoreError> {
    let _threads = thread_width()?;
    match cli.noun {
        Noun::Catalog(verb) => match verb {
            CatalogVerb::List { json } => catalog_list(json),
            CatalogVerb::Show { target, json } => catalog_show(&target.group, json),
        },
        Noun::Quantize(QuantizeVerb::Run(args)) => quantize_run(args),
        Noun::Suite(SuiteVerb::Run(args)) => suite_run(args),
        Noun::Spectra(SpectraVerb::Report(args)) => spectra_report(args),
        Noun::Symmetry(SymmetryVerb::Find(args)) => symmetry_find(args),
        Noun::Covariant(CovariantVerb::Check(args)) => covariant_check(args),
        Noun::Nilpotent(verb) => match verb {
            NilpotentVerb::Kernel(args) => nilpotent_kernel(args),
            NilpotentVerb::Op(args) => nilpotent_op(args),
            NilpotentVerb::CocycleCheck(args) => nilpotent_cocycle(args),
            NilpotentVerb::RnCheck(args) => nilpotent_rn(args),
        },
    }
}

/// Optional parallelism width from the environment. Validated and
/// recorded; the orchestration itself is sequential, so any width
/// produces identical artifacts.
fn thread_width() -> Result<usize, CoreError> {
    match std::env::var("NCQ_THREADS") {
        Ok(text) => {
            let width: usize = text
                .parse()
                .map_err(|_| CoreError::BadInput(format!("NCQ_THREADS={text} is not a positive integer")))?;
            if width == 0 {
                return Err(CoreError::BadInput("NCQ_THREADS must be at least 1".into()));
            }
            Ok(width)
        }
        Err(_) => Ok(1),
    }
}

fn parse_tau(group: &FiniteGroup, text: &str) -> Result<TauMap, CoreError> {
    match text {
        "e" => Ok(TauMap::constant_e(group)),
        "id" => Ok(TauMap::identity(group)),
        "inv" => Ok(TauMap::inverse(group)),
        "sigma" => symmetry_odd_power(group),
        _ => {
            if let Some(seed) = text.strip_prefix("random:") {
                let seed: u64 = seed
                    .parse()
                    .map_err(|_| CoreError::BadInput(format!("bad ordering-map seed in {text}")))?;
                Ok(TauMap::random(group, seed))
            } else {
                Err(CoreError::BadInput(format!(
                    "unknown ordering map {text}; use e, id, inv, sigma, or random:<seed>"
                )))
            }
        }
    }
}

fn parse_side(text: &str) -> Result<Side, CoreError> {
    match text {
        "right" => Ok(Side::Right),
        "left" => Ok(Side::Left),
        _ => Err(CoreError::BadInput(format!(
            "unknown side {text}; use left or right"
        ))),
    }
}

fn parse_system(group: &FiniteGroup, text: &str) -> Result<DynamicalSystem, CoreError> {
    if text == "translation" {
        return Ok(DynamicalSystem::translation(group));
    }
    if let Some(indices) = text.strip_prefix("quotient:") {
        let subgroup: Vec<usize> = indices
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|_| CoreError::BadInput(format!("bad subgroup index {part}")))
            })
            .collect::<Result<_, _>>()?;
        return DynamicalSystem::quotient(group, &subgroup);
    }
    if let Some(seed) = text.strip_prefix("conjugation:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| CoreError::BadInput(format!("bad conjugation seed in {text}")))?;
        return Ok(DynamicalSystem::seeded_conjugation(group, seed));
    }
    let body = std::fs::read_to_string(text)?;
    system_from_json(group, &body)
}

fn parse_algebra(text: &str) -> Result<NilpotentAlgebra, CoreError> {
    if text == "engel" {
        return Ok(NilpotentAlgebra::engel());
    }
    if let Some(dim) = text.strip_prefix("heisenberg:") {
        let dim: usize = dim
            .parse()
            .map_err(|_| CoreError::BadInput(format!("bad algebra dimension in {text}")))?;
        if dim < 3 || dim % 2 == 0 {
            return Err(CoreError::BadInput(format!(
                "a Heisenberg table needs an odd dimension of at least 3, got {dim}"
            )));
        }
        return Ok(NilpotentAlgebra::heisenberg((dim - 1) / 2));
    }
    if let Some(dim) = text.strip_prefix("filiform:") {
        let dim: usize = dim
            .parse()
            .map_err(|_| CoreError::BadInput(format!("bad algebra dimension in {text}")))?;
        if dim < 2 {
            return Err(CoreError::BadInput(format!(
                "a filiform table needs dimension at least 2, got {dim}"
            )));
        }
        return NilpotentAlgebra::filiform(dim - 1);
    }
    if let Some(dim) = text.strip_prefix("abelian:") {
        let dim: usize = dim
            .parse()
            .map_err(|_| CoreError::BadInput(format!("bad algebra dimension in {text}")))?;
        return Ok(NilpotentAlgebra::abelian(dim));
    }
    let body = std::fs::read_to_string(text)?;
    NilpotentAlgebra::from_json(&body)
}

fn parse_coordinate_tau(text: &str) -> Result<CoordinateTau, CoreError> {
    CoordinateTau::parse(text)
}

fn c64_value(z: C64) -> Value {
    Value::Array(vec![Value::from(z.re), Value::from(z.im)])
}

fn matrix_value(m: &CMat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::Array((0..m.ncols()).map(|j| c64_value(m[(i, j)])).collect()))
        .collect();
    Value::Array(rows)
}

fn emit(doc: &Value, out: Option<&str>, to_stdout: bool) -> Result<(), CoreError> {
    let text = serde_json::to_string_pretty(doc)?;
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n"))?;
        if !to_stdout {
            println!("wrote {path}");
        }
    }
    if to_stdout || out.is_none() {
        println!("{text}");
    }
    Ok(())
}

fn catalog_list(json: bool) -> Result<i32, CoreError> {
    let mut rows = Vec::new();
    for spec in CATALOG_SPECS {
        let (group, dual) = make_group(spec)?;
        rows.push((spec, group.order(), group.is_abelian(), dual.len()));
    }
    if json {
        let doc = Value::Array(
            rows.iter()
                .map(|(spec, order, abelian, irreps)| {
                    let mut row = Map::new();
                    row.insert("spec".into(), Value::from(**spec));
                    row.insert("order".into(), Value::from(*order));
                    row.insert("abelian".into(), Value::from(*abelian));
                    row.insert("irreps".into(), Value::from(*irreps));
                    Value::Object(row)
                })
                .collect(),
        );
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for (spec, order, abelian, irreps) in rows {
            println!(
                "{spec:<30} order {order:>3}  {}  {irreps:>2} irreps",
                if abelian { "abelian   " } else { "nonabelian" }
            );
        }
    }
    Ok(0)
}

fn catalog_show(spec: &str, json: bool) -> Result<i32, CoreError> {
    let (group, dual) = suite::resolve_group(spec)?;
    let group_report = validate_group(&group);
    let dual_report = validate_dual(&group, &dual);
    let schur = schur_orthogonality_residual(&group, &dual);
    let pass = group_report.all_passed() && dual_report.all_passed();
    let dims: Vec<usize> = dual.dims().collect();
    if json {
        let mut doc = Map::new();
        doc.insert("spec".into(), Value::from(spec));
        doc.insert("order".into(), Value::from(group.order()));
        doc.insert("abelian".into(), Value::from(group.is_abelian()));
        doc.insert(
            "irrep_dims".into(),
            Value::Array(dims.iter().map(|&d| Value::from(d)).collect()),
        );
        doc.insert("schur_residual".into(), Value::from(schur));
        doc.insert("pass".into(), Value::from(pass));
        let checks: Vec<Value> = group_report
            .checks
            .iter()
            .chain(&dual_report.checks)
            .map(|item| {
                let mut row = Map::new();
                row.insert("name".into(), Value::from(item.name.as_str()));
                row.insert("residual".into(), Value::from(item.residual));
                row.insert("tolerance".into(), Value::from(item.tolerance));
                row.insert("passed".into(), Value::from(item.passed));
                Value::Object(row)
            })
            .collect();
        doc.insert("checks".into(), Value::Array(checks));
        println!("{}", serde_json::to_string_pretty(&Value::Object(doc))?);
    } else {
        println!("group {spec}: order {}, {}", group.order(), if group.is_abelian() { "abelian" } else { "nonabelian" });
        println!("irrep dimensions: {dims:?}");
        println!("Schur orthogonality residual: {schur:.2e}");
        for item in group_report.checks.iter().chain(&dual_report.checks) {
            println!(
                "  {:<28} {:>10.2e} <= {:>8.1e}  {}",
                item.name,
                item.residual,
                item.tolerance,
                if item.passed { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(if pass { 0 } else { 1 })
}

fn quantize_run(args: QuantizeArgs) -> Result<i32, CoreError> {
    let (group, dual) = suite::resolve_group(&args.target.group)?;
    let tau = parse_tau(&group, &args.tau)?;
    let side = parse_side(&args.side)?;
    let (symbol, source) = match (&args.symbol, args.seed) {
        (Some(path), None) => {
            let body = std::fs::read_to_string(path)?;
            (symbol_from_json(&group, &dual, &body)?, format!("file:{path}"))
        }
        (None, Some(seed)) => (Symbol::random(&group, &dual, seed), format!("seed:{seed}")),
        (None, None) => {
            return Err(CoreError::BadInput(
                "provide a symbol via --symbol <file> or --seed <u64>".into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(CoreError::BadInput(
                "--symbol and --seed are mutually exclusive".into(),
            ))
        }
    };
    let op = op_from_symbol(&group, &dual, side, &tau, &symbol)?;

    let mut metrics = Map::new();
    metrics.insert("hs_norm".into(), Value::from(op.hs_norm()));
    metrics.insert("op_norm".into(), Value::from(op_norm(&op.mat)?));
    metrics.insert(
        "spectral_radius".into(),
        Value::from(spectral_radius(&op.mat)?),
    );

    let mut operator = Map::new();
    operator.insert("order".into(), Value::from(op.order()));
    operator.insert("matrix".into(), matrix_value(&op.mat));

    let mut doc = Map::new();
    doc.insert("group".into(), Value::from(args.target.group.as_str()));
    doc.insert("tau".into(), Value::from(args.tau.as_str()));
    doc.insert("side".into(), Value::from(args.side.as_str()));
    doc.insert("symbol".into(), Value::from(source));
    doc.insert("operator".into(), Value::Object(operator));
    doc.insert("metrics".into(), Value::Object(metrics));

    emit(&Value::Object(doc), args.out.as_deref(), false)?;
    Ok(0)
}

fn suite_run(args: SuiteArgs) -> Result<i32, CoreError> {
    let report = if args.all {
        suite::run_all(args.seed, args.tol)?
    } else if let Some(spec) = &args.group {
        suite::run_group(spec, args.seed, args.tol)?
    } else {
        return Err(CoreError::BadInput(
            "select a scope with --all or --group <spec>".into(),
        ));
    };
    if let Some(path) = &args.out {
        std::fs::write(path, report.to_json()?)?;
    }
    if args.json {
        println!("{}", report.to_json()?);
    } else {
        print!("{}", report.render_table());
    }
    Ok(if report.pass() { 0 } else { 1 })
}

fn load_omega_symbol(
    dual: &UnitaryDual,
    system: &DynamicalSystem,
    path: Option<&str>,
    seed: u64,
) -> Result<OmegaSymbol, CoreError> {
    match path {
        Some(path) => {
            let body = std::fs::read_to_string(path)?;
            omega_symbol_from_json(dual, system.omega_size(), &body)
        }
        None => Ok(OmegaSymbol::random(system.omega_size(), dual, seed)),
    }
}

fn spectra_report(args: SpectraArgs) -> Result<i32, CoreError> {
    let (group, dual) = suite::resolve_group(&args.target.group)?;
    let system = parse_system(&group, &args.system)?;
    let tau = parse_tau(&group, &args.tau)?;
    let h = load_omega_symbol(&dual, &system, args.symbol.as_deref(), args.seed)?;

    let mut orbits_doc = Vec::new();
    let mut pass = true;
    let mut lines = Vec::new();
    for orbit in system.orbits() {
        let spectra: Vec<Vec<C64>> = orbit
            .iter()
            .map(|&w| {
                spectrum(&ncq_core::crossed::op_omega(
                    &group, &dual, &tau, &system, w, &h,
                )?)
            })
            .collect::<Result<_, _>>()?;
        let mut spread = 0.0f64;
        for i in 0..spectra.len() {
            for j in (i + 1)..spectra.len() {
                spread = spread.max(hausdorff(&spectra[i], &spectra[j]));
            }
        }
        pass = pass && spread <= args.tol;
        lines.push(format!(
            "orbit {:?}: max pairwise Hausdorff {:.2e} (tolerance {:.1e})",
            orbit, spread, args.tol
        ));
        let mut row = Map::new();
        row.insert(
            "points".into(),
            Value::Array(orbit.iter().map(|&w| Value::from(w)).collect()),
        );
        row.insert("max_hausdorff".into(), Value::from(spread));
        row.insert(
            "spectra".into(),
            Value::Array(
                spectra
                    .iter()
                    .map(|values| {
                        Value::Array(values.iter().map(|&z| c64_value(z)).collect())
                    })
                    .collect(),
            ),
        );
        orbits_doc.push(Value::Object(row));
    }

    let mut doc = Map::new();
    doc.insert("group".into(), Value::from(args.target.group.as_str()));
    doc.insert("system".into(), Value::from(args.system.as_str()));
    doc.insert("tolerance".into(), Value::from(args.tol));
    doc.insert("pass".into(), Value::from(pass));
    doc.insert("orbits".into(), Value::Array(orbits_doc));
    let doc = Value::Object(doc);

    if let Some(path) = &args.out {
        std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&doc)?))?;
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for line in lines {
            println!("{line}");
        }
        println!("spectra: {}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass { 0 } else { 1 })
}

fn symmetry_find(args: SymmetryArgs) -> Result<i32, CoreError> {
    let (group, _) = suite::resolve_group(&args.target.group)?;
    let side = parse_side(&args.side)?;
    match args.mode.as_str() {
        "search" => {
            let found = symmetry_search(&group, side, args.limit)?;
            let mut doc = Map::new();
            doc.insert("group".into(), Value::from(args.target.group.as_str()));
            doc.insert("side".into(), Value::from(args.side.as_str()));
            doc.insert("mode".into(), Value::from("search"));
            doc.insert("exists".into(), Value::from(found.exists));
            doc.insert("count".into(), Value::from(found.count as u64));
            doc.insert("truncated".into(), Value::from(found.truncated));
            doc.insert(
                "witnesses".into(),
                Value::Array(
                    found
                        .witnesses
                        .iter()
                        .map(|w| {
                            Value::Array(w.values().iter().map(|&v| Value::from(v)).collect())
                        })
                        .collect(),
                ),
            );
            let doc = Value::Object(doc);
            if args.json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else if found.exists {
                println!(
                    "{} symmetry functions on {} ({} listed{})",
                    found.count,
                    args.target.group,
                    found.witnesses.len(),
                    if found.truncated { ", truncated" } else { "" }
                );
                for w in &found.witnesses {
                    println!("  {:?}", w.values());
                }
            } else {
                println!("no symmetry function exists on {}", args.target.group);
            }
            Ok(0)
        }
        "construct" => {
            let sigma = match args.strategy.as_str() {
                "odd-power" => symmetry_odd_power(&group)?,
                "product" => {
                    let body = args
                        .target
                        .group
                        .strip_prefix("product:")
                        .ok_or_else(|| {
                            CoreError::BadInput(
                                "the product strategy needs a product:<a>,<b> group".into(),
                            )
                        })?;
                    let (left, right) = body.split_once(',').ok_or_else(|| {
                        CoreError::BadInput("the product strategy needs two factors".into())
                    })?;
                    let (g1, _) = make_group(left)?;
                    let (g2, _) = make_group(right)?;
                    let s1 = symmetry_odd_power(&g1)?;
                    let s2 = symmetry_odd_power(&g2)?;
                    symmetry_product(&group, &g1, &s1, &g2, &s2, side)?
                }
                "central-extension" => {
                    let p: usize = args
                        .target
                        .group
                        .strip_prefix("heisenberg:")
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| {
                            CoreError::BadInput(
                                "the central-extension strategy needs a heisenberg:<p> group"
                                    .into(),
                            )
                        })?;
                    let (base, _) = make_group(&format!("product:cyclic:{p},cyclic:{p}"))?;
                    let (fiber, _) = make_group(&format!("cyclic:{p}"))?;
                    let pairing = move |h1: usize, h2: usize| (h1 / p) * (h2 % p) % p;
                    let sb = symmetry_odd_power(&base)?;
                    let sf = symmetry_odd_power(&fiber)?;
                    symmetry_central_extension(&group, &base, &fiber, &pairing, &sb, &sf, side)?
                }
                other => {
                    return Err(CoreError::BadInput(format!(
                        "unknown strategy {other}; use odd-power, product, or central-extension"
                    )))
                }
            };
            let verified = is_symmetry_function(&group, side, &sigma);
            let mut doc = Map::new();
            doc.insert("group".into(), Value::from(args.target.group.as_str()));
            doc.insert("side".into(), Value::from(args.side.as_str()));
            doc.insert("mode".into(), Value::from("construct"));
            doc.insert("strategy".into(), Value::from(args.strategy.as_str()));
            doc.insert(
                "values".into(),
                Value::Array(sigma.values().iter().map(|&v| Value::from(v)).collect()),
            );
            doc.insert("verified".into(), Value::from(verified));
            let doc = Value::Object(doc);
            if args.json {
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!(
                    "constructed {:?} ({}, {})",
                    sigma.values(),
                    args.strategy,
                    if verified { "verified" } else { "FAILED verification" }
                );
            }
            Ok(if verified { 0 } else { 1 })
        }
        other => Err(CoreError::BadInput(format!(
            "unknown mode {other}; use search or construct"
        ))),
    }
}

fn covariant_check(args: CovariantArgs) -> Result<i32, CoreError> {
    let (group, dual) = suite::resolve_group(&args.target.group)?;
    let system = parse_system(&group, &args.system)?;
    let tau = parse_tau(&group, &args.tau)?;
    let h = load_omega_symbol(&dual, &system, args.symbol.as_deref(), args.seed)?;

    let mut residual = 0.0f64;
    for w in 0..system.omega_size() {
        let at_w = ncq_core::crossed::op_omega(&group, &dual, &tau, &system, w, &h)?;
        for z in group.elements() {
            let r = ncq_core::quantize::right_translation(&group, z);
            let conjugated = r.compose(&at_w).compose(&r.adjoint());
            let moved = ncq_core::crossed::op_omega(
                &group,
                &dual,
                &tau,
                &system,
                system.apply(z, w),
                &h,
            )?;
            residual = residual.max(ncq_core::la::max_abs_diff(&conjugated.mat, &moved.mat));
        }
    }
    let mut pass = residual <= args.tol;

    let mut doc = Map::new();
    doc.insert("group".into(), Value::from(args.target.group.as_str()));
    doc.insert("system".into(), Value::from(args.system.as_str()));
    doc.insert("covariance_residual".into(), Value::from(residual));
    doc.insert("tolerance".into(), Value::from(args.tol));

    if args.check_spectra {
        let mut spread = 0.0f64;
        for orbit in system.orbits() {
            let reference = spectrum(&ncq_core::crossed::op_omega(
                &group, &dual, &tau, &system, orbit[0], &h,
            )?)?;
            for &w in &orbit[1..] {
                let other = spectrum(&ncq_core::crossed::op_omega(
                    &group, &dual, &tau, &system, w, &h,
                )?)?;
                spread = spread.max(hausdorff(&reference, &other));
            }
        }
        pass = pass && spread <= 1e-8;
        doc.insert("orbit_spectra_residual".into(), Value::from(spread));
        doc.insert("orbit_spectra_tolerance".into(), Value::from(1e-8));
    }
    doc.insert("pass".into(), Value::from(pass));
    let doc = Value::Object(doc);

    if args.json {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!(
            "covariance residual {residual:.2e} (tolerance {:.1e}): {}",
            args.tol,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if pass { 0 } else { 1 })
}

fn nilpotent_kernel(args: NilpotentKernelArgs) -> Result<i32, CoreError> {
    let algebra = parse_algebra(&args.algebra)?;
    let tau = parse_coordinate_tau(&args.tau)?;
    let side = parse_side(&args.side)?;
    let body = std::fs::read_to_string(&args.symbol)?;
    let symbol = ScalarSymbol::from_json(&body)?;
    let kernel = scalar_kernel(&algebra, tau, side, &symbol)?;

    let grid = symbol.grid();
    let mut grid_doc = Map::new();
    grid_doc.insert("dim".into(), Value::from(grid.dim()));
    grid_doc.insert("points".into(), Value::from(grid.points()));
    grid_doc.insert("half_width".into(), Value::from(grid.half_width()));

    let mut doc = Map::new();
    doc.insert("algebra".into(), Value::from(args.algebra.as_str()));
    doc.insert("tau".into(), Value::from(tau.label()));
    doc.insert("side".into(), Value::from(args.side.as_str()));
    doc.insert("grid".into(), Value::Object(grid_doc));
    doc.insert("order".into(), Value::from(kernel.nrows()));
    doc.insert("matrix".into(), matrix_value(&kernel));
    emit(&Value::Object(doc), args.out.as_deref(), false)?;
    Ok(0)
}

fn nilpotent_op(args: NilpotentOpArgs) -> Result<i32, CoreError> {
    let algebra = parse_algebra(&args.algebra)?;
    let tau = parse_coordinate_tau(&args.tau)?;
    let side = parse_side(&args.side)?;
    let symbol = ScalarSymbol::from_json(&std::fs::read_to_string(&args.symbol)?)?;
    let (grid, u) = function_from_json(&std::fs::read_to_string(&args.input)?)?;
    if grid != *symbol.grid() {
        return Err(CoreError::Shape(
            "the input function and the symbol live on different grids".into(),
        ));
    }
    let result = scalar_op(&algebra, tau, side, &symbol, &u)?;
    let text = function_to_json(&grid, &result)?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n"))?;
            println!("wrote {path}");
        }
        None => println!("{text}"),
    }
    Ok(0)
}

fn nilpotent_cocycle(args: CocycleArgs) -> Result<i32, CoreError> {
    let algebra = parse_algebra(&args.algebra)?;
    let tau = parse_coordinate_tau(&args.tau)?;
    let report = cocycle_report(&algebra, tau, args.pairs, args.samples, args.seed, args.tol);
    if args.json {
        println!("{}", report.to_json()?);
    } else {
        println!(
            "cocycle identity on {} (tau {}): modulus {:.2e}, composition {:.2e}, normalization {:.2e} (tolerance {:.1e}): {}",
            args.algebra,
            tau.label(),
            report.max_modulus_residual,
            report.max_composition_residual,
            report.max_normalization_residual,
            args.tol,
            if report.pass { "PASS" } else { "FAIL" }
        );
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn nilpotent_rn(args: RnArgs) -> Result<i32, CoreError> {
    let tau = parse_coordinate_tau(&args.tau)?;
    let report = rn_consistency(args.dim, tau, args.points, args.half_width, args.tol)?;
    if args.json {
        println!("{}", report.to_json()?);
    } else {
        for check in &report.checks {
            println!(
                "  {:<26} {:>10.2e} <= {:>8.1e}  {}",
                check.name,
                check.residual,
                check.tolerance,
                if check.pass { "pass" } else { "FAIL" }
            );
        }
        println!("flat-space consistency: {}", if report.pass { "PASS" } else { "FAIL" });
    }
    Ok(if report.pass { 0 } else { 1 })
}
