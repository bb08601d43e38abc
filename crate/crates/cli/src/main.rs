#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod fspec;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use krzyz_core::nonvan::{
    asymptotic_slope_report, distance_report, homotopy, metric_scan, metric_scan_csv, polar_grid,
    DEFAULT_DECK_RANGE,
};
use krzyz_core::optimize::{coefficient_table, maximize_cn, OptimizeConfig, TableKind};
use krzyz_core::verify::{run_suite, Suite, VerifyOptions};
use krzyz_core::{Complex64, TWO_OVER_E};

use config::{pick, FileConfig, Format, Header};

/// Failure classes, mapped to exit codes 1, 2 and 3.
#[derive(Debug)]
pub enum Fail {
    Verification(String),
    Usage(String),
    Input(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Verification(_) => 1,
            Fail::Usage(_) => 2,
            Fail::Input(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Fail::Verification(m) | Fail::Usage(m) | Fail::Input(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "krzyz", version, about = "Coefficient experiments for nonvanishing bounded analytic functions")]
struct Cli {
    /// Master seed for all randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncation order of constructed series.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON file with defaults for any of the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficient table of κ₀ or of the optimizer's best values.
    Coeffs(CoeffsArgs),
    /// Multistart maximization of |c_n| over Herglotz measures.
    Optimize(OptimizeArgs),
    /// Run an invariant suite: series, geometry, metric, factorization, green or all.
    Verify(VerifyArgs),
    /// λ_J against λ_hyp on the homotopy disk of a function.
    MetricScan(MetricArgs),
    /// Distance from a function to its constant term.
    Distance(DistanceArgs),
    /// Limit of d(f_t, c₀)/t^m as t -> 0.
    Slope(SlopeArgs),
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[arg(long)]
    nmax: Option<usize>,
    /// `kappa` or `best`.
    #[arg(long)]
    kind: Option<String>,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    atoms: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: Option<String>,
    /// Random functions per population check.
    #[arg(long)]
    population: Option<usize>,
}

#[derive(Args, Debug)]
struct MetricArgs {
    /// `kappa:n`, a series JSON file or a measure JSON file.
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Normalization M_n (default 2/e).
    #[arg(long)]
    mn: Option<f64>,
    #[arg(long)]
    rings: Option<usize>,
    #[arg(long)]
    spokes: Option<usize>,
    #[arg(long)]
    max_radius: Option<f64>,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    #[arg(long)]
    f: Option<String>,
    /// Deck indices -kmax..=kmax are enumerated.
    #[arg(long)]
    kmax: Option<usize>,
    /// Evaluate at the dilation f_t instead of f.
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args, Debug)]
struct SlopeArgs {
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    /// Decreasing extrapolation grid in (0, 1).
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<f64>>,
}

struct Ctx {
    seed: u64,
    order: usize,
    out: Option<PathBuf>,
    format: Option<Format>,
}

struct Artifact {
    header: Header,
    json: serde_json::Value,
    csv: String,
    default_format: Format,
}

impl Artifact {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let doc = json!({ "header": self.header, "result": self.json });
                serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
            }
            Format::Csv => self.header.csv_lines() + &self.csv,
        }
    }
}

fn emit(ctx: &Ctx, text: &str) -> Result<(), Fail> {
    match &ctx.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Fail::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require<T>(v: Option<T>, name: &str) -> Result<T, Fail> {
    v.ok_or_else(|| Fail::Usage(format!("missing --{name}")))
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn coeffs(ctx: &Ctx, a: &CoeffsArgs, file: &FileConfig) -> Result<Artifact, Fail> {
    let nmax = pick(&a.nmax, &file.nmax).unwrap_or(10);
    let kind_name = pick(&a.kind, &file.kind).unwrap_or_else(|| "kappa".into());
    let kind = match kind_name.as_str() {
        "kappa" => TableKind::KappaN,
        "best" => TableKind::BestForN,
        other => return Err(Fail::Usage(format!("unknown table kind '{other}' (kappa|best)"))),
    };
    if kind == TableKind::BestForN && nmax == 0 {
        return Err(Fail::Usage("best-value tables need --nmax >= 1".into()));
    }
    let table = coefficient_table(kind, nmax, ctx.seed);
    Ok(Artifact {
        header: Header::new("coeffs", ctx.seed, json!({ "nmax": nmax, "kind": kind_name })),
        json: to_json(&table),
        csv: table.to_csv(),
        default_format: Format::Csv,
    })
}

fn optimize(ctx: &Ctx, a: &OptimizeArgs, file: &FileConfig) -> Result<Artifact, Fail> {
    let n = require(pick(&a.n, &file.n), "n")?;
    if n == 0 {
        return Err(Fail::Usage("--n must be >= 1".into()));
    }
    let d = OptimizeConfig::for_index(n);
    let cfg = OptimizeConfig {
        restarts: pick(&a.restarts, &file.restarts).unwrap_or(d.restarts),
        atom_count: pick(&a.atoms, &file.atoms).unwrap_or(d.atom_count),
        seed: ctx.seed,
        tol: pick(&a.tol, &file.tol).unwrap_or(d.tol),
        max_iters: pick(&a.max_iters, &file.max_iters).unwrap_or(d.max_iters),
    };
    if cfg.restarts == 0 || cfg.atom_count == 0 {
        return Err(Fail::Usage("restarts and atoms must be positive".into()));
    }
    let r = maximize_cn(n, &cfg);
    eprintln!(
        "n = {n}: best |c_n| = {:.12}, gap to 2/e = {:.3e}, extremal shape: {} ({} atoms)",
        r.best_value,
        r.gap_to_conjecture,
        if r.shape.matches_extremal { "yes" } else { "no" },
        r.shape.clusters.len()
    );
    let mut csv = String::from("index,seed,value,iterations,converged\n");
    for p in &r.per_restart {
        let _ = writeln!(csv, "{},{},{},{},{}", p.index, p.seed, p.value, p.iterations, p.converged);
    }
    Ok(Artifact {
        header: Header::new("optimize", ctx.seed, json!({ "n": n, "config": cfg })),
        json: to_json(&r),
        csv,
        default_format: Format::Json,
    })
}

fn verify(ctx: &Ctx, a: &VerifyArgs, file: &FileConfig) -> Result<(), Fail> {
    let name = require(pick(&a.suite, &file.suite), "suite")?;
    let suite: Suite = name.parse().map_err(|e: krzyz_core::Error| Fail::Usage(e.to_string()))?;
    let opts = VerifyOptions {
        seed: ctx.seed,
        population: pick(&a.population, &file.population).unwrap_or(VerifyOptions::default().population),
        order: ctx.order,
    };
    let report = run_suite(suite, &opts);
    let header = Header::new("verify", ctx.seed, json!({ "suite": name, "options": opts }));
    let summary = json!({
        "suite": suite,
        "passed": report.passed,
        "failed": report.failed,
        "caveat": report.caveat,
    });
    let text = match ctx.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut s = serde_json::to_string(&json!({ "header": header })).expect("serializable") + "\n";
            s += &report.json_lines();
            s + &serde_json::to_string(&json!({ "summary": summary })).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = header.csv_lines() + "suite,check,pass,value,tolerance\n";
            for c in &report.checks {
                let _ = writeln!(s, "{},{},{},{},{}", c.suite, c.check, c.pass, c.value, c.tolerance);
            }
            s
        }
    };
    emit(ctx, &text)?;
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAIL {}/{}: value {} (tolerance {})", c.suite, c.check, c.value, c.tolerance);
    }
    eprintln!("verify {name}: {} passed, {} failed", report.passed, report.failed);
    if let Some(caveat) = &report.caveat {
        eprintln!("note: {caveat}");
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Fail::Verification(format!("{} check(s) failed", report.failed)))
    }
}

fn metric(ctx: &Ctx, a: &MetricArgs, file: &FileConfig) -> Result<(Artifact, usize), Fail> {
    let spec = require(pick(&a.f, &file.f), "f")?;
    let n = pick(&a.n, &file.n).unwrap_or(1);
    let mn = pick(&a.mn, &file.mn).unwrap_or(TWO_OVER_E);
    let rings = pick(&a.rings, &file.rings).unwrap_or(8);
    let spokes = pick(&a.spokes, &file.spokes).unwrap_or(12);
    let max_radius = pick(&a.max_radius, &file.max_radius).unwrap_or(0.95);
    if n == 0 || !(mn > 0.0) || !(max_radius > 0.0 && max_radius < 1.0) || spokes == 0 {
        return Err(Fail::Usage("need n >= 1, mn > 0, 0 < max-radius < 1, spokes >= 1".into()));
    }
    let f = fspec::load(&spec, ctx.order)?;
    let rows = metric_scan(&f, n, mn, &polar_grid(max_radius, rings, spokes))
        .map_err(|e| Fail::Input(e.to_string()))?;
    let violations = rows.iter().filter(|r| !r.dominated).count();
    let params = json!({
        "f": spec, "n": n, "mn": mn, "rings": rings, "spokes": spokes,
        "max_radius": max_radius, "order": ctx.order,
    });
    Ok((
        Artifact {
            header: Header::new("metric-scan", ctx.seed, params),
            json: to_json(&rows),
            csv: metric_scan_csv(&rows),
            default_format: Format::Csv,
        },
        violations,
    ))
}

fn distance(ctx: &Ctx, a: &DistanceArgs, file: &FileConfig) -> Result<Artifact, Fail> {
    let spec = require(pick(&a.f, &file.f), "f")?;
    let kmax = pick(&a.kmax, &file.kmax).unwrap_or(DEFAULT_DECK_RANGE);
    let t = pick(&a.t, &file.t);
    let mut f = fspec::load(&spec, ctx.order)?;
    if let Some(t) = t {
        if !(t.abs() <= 1.0) {
            return Err(Fail::Usage("--t must lie in [-1, 1]".into()));
        }
        f = homotopy(&f, Complex64::new(t, 0.0)).map_err(|e| Fail::Input(e.to_string()))?;
    }
    let report = distance_report(&f, kmax).map_err(|e| Fail::Input(e.to_string()))?;
    eprintln!("distance to constant: {} (deck {})", report.distance, report.best_deck);
    let mut csv = String::from("deck_index,distance\n");
    for (k, d) in &report.per_deck {
        let _ = writeln!(csv, "{k},{d}");
    }
    Ok(Artifact {
        header: Header::new("distance", ctx.seed, json!({ "f": spec, "kmax": kmax, "t": t, "order": ctx.order })),
        json: to_json(&report),
        csv,
        default_format: Format::Json,
    })
}

fn slope(ctx: &Ctx, a: &SlopeArgs, file: &FileConfig) -> Result<Artifact, Fail> {
    let spec = require(pick(&a.f, &file.f), "f")?;
    let m = require(pick(&a.m, &file.m), "m")?;
    if m == 0 {
        return Err(Fail::Usage("--m must be >= 1".into()));
    }
    let grid = pick(&a.grid, &file.grid).unwrap_or_else(|| vec![0.2, 0.1, 0.05, 0.025]);
    let f = fspec::load(&spec, ctx.order)?;
    let est = asymptotic_slope_report(&f, m, &grid).map_err(|e| Fail::Input(e.to_string()))?;
    eprintln!("slope: {} (error estimate {:.1e})", est.slope, est.error_estimate);
    let mut csv = String::from("t,ratio\n");
    for (t, r) in &est.ratios {
        let _ = writeln!(csv, "{t},{r}");
    }
    let _ = writeln!(csv, "# slope={},error_estimate={}", est.slope, est.error_estimate);
    Ok(Artifact {
        header: Header::new("slope", ctx.seed, json!({ "f": spec, "m": m, "grid": grid, "order": ctx.order })),
        json: to_json(&est),
        csv,
        default_format: Format::Json,
    })
}

fn run(cli: Cli) -> Result<(), Fail> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let ctx = Ctx {
        seed: pick(&cli.seed, &file.seed).unwrap_or(0),
        order: pick(&cli.order, &file.order).unwrap_or(krzyz_core::series::DEFAULT_ORDER),
        out: pick(&cli.out, &file.out),
        format: pick(&cli.format, &file.format),
    };
    if ctx.order == 0 {
        return Err(Fail::Usage("--order must be >= 1".into()));
    }
    let (artifact, violations) = match &cli.command {
        Command::Verify(a) => return verify(&ctx, a, &file),
        Command::Coeffs(a) => (coeffs(&ctx, a, &file)?, 0),
        Command::Optimize(a) => (optimize(&ctx, a, &file)?, 0),
        Command::MetricScan(a) => metric(&ctx, a, &file)?,
        Command::Distance(a) => (distance(&ctx, a, &file)?, 0),
        Command::Slope(a) => (slope(&ctx, a, &file)?, 0),
    };
    emit(&ctx, &artifact.render(ctx.format.unwrap_or(artifact.default_format)))?;
    if violations > 0 {
        return Err(Fail::Verification(format!("{violations} grid point(s) where λ_J exceeds λ_hyp")));
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
