//! Command-line front end. Every command prints one JSON report on stdout;
//! figures and tilings go to the files named by `--svg` / `--json`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 domain or
//! parse error, 3 I/O error.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::grossnum::{
    classify_order, eval_delta_asymptotic_to, eval_one_minus_d2, rho, tile_count, GrossNumber,
    TileCount, TruncationOrder,
};
use crate::metrics::{PolygonMetrics, PolygonSpec};
use crate::sequence::{
    build_sequence, carrier_diameter, classify_carrier, CarrierKind, SequenceSpec,
};
use crate::svg::{sequence_svg, tiling_svg, FigureKind, FigureSpec};
use crate::tiler::{
    check_tiling, generate_bfs, generate_sector_tree, generation_counts, TilingRecord,
    MAX_SECTOR_GENERATIONS,
};
use crate::verify::{self, Check, Suite};

/// Largest number of sector-tree tiles materialized for `--svg`/`--json`.
const MAX_RENDERED_TILES: usize = 200_000;

#[derive(Debug, Parser)]
#[command(
    name = "infinigon",
    version,
    about = "Infinigons, regular polygon metrics and {p,q} tilings in the Poincaré disc"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the carrier of the sequence x_n (circle, horocycle, equidistant).
    Classify(ClassifyArgs),
    /// Closed-form metrics of P_{p,q} with a vertex at O.
    Metrics(MetricsArgs),
    /// Evaluate a grossone expansion.
    Gross(GrossArgs),
    /// Generate a tiling patch or a sector-tree census.
    Tile(TileArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
pub struct ClassifyArgs {
    /// Vertex angle in radians.
    #[arg(long, conflicts_with = "q", required_unless_present = "q")]
    pub alpha: Option<f64>,
    /// Valence; sets alpha = 2π/q.
    #[arg(long)]
    pub q: Option<u32>,
    /// Abscissa of x_1.
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    /// Points built on each side of x_0, x_1.
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    pub canvas: u32,
}

#[derive(Debug, clap::Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GrossExpr {
    OneMinusD2,
    Delta,
    Rho,
    TileCount,
}

#[derive(Debug, clap::Args)]
pub struct GrossArgs {
    #[arg(long, value_enum)]
    pub expr: GrossExpr,
    /// Side count, e.g. "go" or "2*go".
    #[arg(long, default_value = "go")]
    pub lambda: String,
    /// Valence, finite or infinite.
    #[arg(
        long,
        visible_alias = "valence",
        visible_alias = "mu",
        default_value = "3"
    )]
    pub q: String,
    /// Recursion depth for tile-count.
    #[arg(long, default_value = "1")]
    pub nu: String,
    /// Lowest power of go kept in series expansions.
    #[arg(long, default_value_t = -4, allow_negative_numbers = true)]
    pub order: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TileMode {
    Bfs,
    Sector,
}

#[derive(Debug, clap::Args)]
pub struct TileArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    /// BFS word length, or sector generations.
    #[arg(long)]
    pub depth: usize,
    #[arg(long, value_enum, default_value_t = TileMode::Bfs)]
    pub mode: TileMode,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    pub canvas: u32,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(Suite), default_value = "all")]
    pub suite: Suite,
}

impl clap::builder::ValueParserFactory for Suite {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Suite>())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            checks: Vec::new(),
            runtime_ms: 0,
        }
    }

    fn input(&mut self, k: &str, v: impl Serialize) {
        self.inputs.insert(k.into(), json!(v));
    }

    fn output(&mut self, k: &str, v: impl Serialize) {
        self.outputs.insert(k.into(), json!(v));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// JSON-safe number: non-finite values become null.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn run(cli: Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut report = match cli.command {
        Command::Classify(a) => classify(a)?,
        Command::Metrics(a) => metrics(a)?,
        Command::Gross(a) => gross(a)?,
        Command::Tile(a) => tile(a)?,
        Command::Verify(a) => verify_cmd(a),
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn classify(a: ClassifyArgs) -> Result<Report, CliError> {
    let mut r = Report::new("classify");
    let alpha = match (a.alpha, a.q) {
        (Some(alpha), _) => alpha,
        (None, Some(q)) if q >= 3 => 2.0 * PI / q as f64,
        (None, q) => return Err(CliError::Domain(format!("q = {q:?} must be at least 3"))),
    };
    if let Some(q) = a.q {
        r.input("q", q);
    }
    r.input("alpha", alpha);
    r.input("x", a.x);
    r.input("steps", a.steps);
    if !(a.x > 0.0 && a.x < 1.0) {
        return Err(CliError::Domain(format!(
            "x out of range: {} is not in (0, 1)",
            a.x
        )));
    }
    let kind = classify_carrier(alpha, a.x).map_err(domain)?;
    let res = build_sequence(&SequenceSpec::new(alpha, a.x, a.steps, a.steps).map_err(domain)?)
        .map_err(domain)?;
    let c = &res.carrier;
    let diameter = carrier_diameter(alpha, a.x).map_err(domain)?;
    r.output("kind", kind.as_str());
    r.output("threshold", (alpha / 2.0).cos());
    r.output("euclid_center", c.euclid_center);
    r.output("euclid_radius", c.euclid_radius);
    r.output("diameter", diameter);
    r.output(
        "ideal_points",
        c.ideal_points
            .iter()
            .map(|p| [p.ux, p.uy])
            .collect::<Vec<_>>(),
    );
    match kind {
        CarrierKind::Circle => {
            r.output("hyperbolic_radius", num(c.hyperbolic_radius()));
            r.output("circumference", res.circumference.map(num));
        }
        CarrierKind::Horocycle => r.output(
            "tangency_point",
            c.ideal_points.first().map(|p| [p.ux, p.uy]),
        ),
        CarrierKind::Equidistant => r.output("axis_distance", num(c.axis_distance())),
    }
    r.output(
        "points",
        res.points.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
    );
    r.checks
        .push(Check::holds("fitted_kind_agrees", c.kind == kind));
    r.checks.push(Check::within(
        "diameter_vs_fit",
        (2.0 * c.euclid_radius - diameter).abs(),
        1e-10,
    ));
    let on_carrier = res
        .points
        .iter()
        .map(|&p| c.residual(p))
        .fold(0.0, f64::max);
    r.checks
        .push(Check::within("points_on_carrier", on_carrier, 1e-9));
    if kind == CarrierKind::Horocycle {
        r.checks.push(Check::within(
            "horocycle_tangency",
            c.tangency_residual(),
            1e-9,
        ));
    }
    if let Some(path) = &a.svg {
        let spec = FigureSpec::new(FigureKind::Construction, a.canvas);
        write_file(
            path,
            &sequence_svg(&res, &spec, &format!("carrier: {}", kind.as_str())),
        )?;
        r.output("svg", path.display().to_string());
    }
    Ok(r)
}

fn metrics(a: MetricsArgs) -> Result<Report, CliError> {
    let mut r = Report::new("metrics");
    r.input("p", a.p);
    r.input("q", a.q);
    let spec = PolygonSpec::new(a.p, a.q).map_err(domain)?;
    let m = PolygonMetrics::compute(&spec);
    let res = m.identity_residuals(&spec);
    for (k, v) in [
        ("omega", m.omega),
        ("r", m.r),
        ("h", m.h),
        ("e", m.e),
        ("s", m.s),
        ("delta", m.delta),
    ] {
        r.output(k, num(v));
    }
    r.output("a", m.a);
    r.output("b", m.b);
    r.output("one_minus_s2", crate::metrics::one_minus_s2(&spec));
    r.output("h_minus_one", (m.h - 1.0).abs());
    r.output("residuals", res);
    // The circumradius route cancels as h → 1; allow for its conditioning.
    let tol = 1e-12f64.max(f64::EPSILON / (1.0 - m.h));
    r.output("residual_tolerance", tol);
    r.checks
        .push(Check::within("identity_residuals", res.max(), tol));
    Ok(r)
}

fn parse_gross(name: &str, s: &str) -> Result<GrossNumber, CliError> {
    s.parse::<GrossNumber>()
        .map_err(|e| CliError::Domain(format!("--{name} {s:?}: {e}")))
}

fn gross(a: GrossArgs) -> Result<Report, CliError> {
    let mut r = Report::new("gross");
    let expr = a
        .expr
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    r.input("expr", &expr);
    r.input("lambda", &a.lambda);
    r.input("q", &a.q);
    r.input("order", a.order);
    let lambda = parse_gross("lambda", &a.lambda)?;
    let q = parse_gross("q", &a.q)?;
    let ord = TruncationOrder::at(a.order);
    let value = match a.expr {
        GrossExpr::OneMinusD2 => eval_one_minus_d2(&q, &lambda, ord),
        GrossExpr::Delta => eval_delta_asymptotic_to(&q, &lambda, ord),
        GrossExpr::Rho => rho(&lambda, &q, ord),
        GrossExpr::TileCount => {
            r.input("nu", &a.nu);
            let nu = parse_gross("nu", &a.nu)?;
            match tile_count(&lambda, &q, &nu).map_err(domain)? {
                TileCount::Expanded(x) => Ok(x),
                TileCount::Power { base, exponent } => {
                    r.output("base", base.to_string());
                    r.output("exponent", exponent.to_string());
                    r.output("value", format!("({base})^({exponent})"));
                    return Ok(r);
                }
            }
        }
    }
    .map_err(domain)?;
    if a.expr != GrossExpr::TileCount {
        r.output(
            "order_class",
            classify_order(&lambda, &q).map_err(domain)?.as_str(),
        );
    }
    let terms: Vec<Value> = value
        .terms()
        .iter()
        .map(|t| {
            json!({
                "coeff": GrossNumber::constant(t.coeff.clone()).to_string(),
                "coeff_f64": num(t.coeff.to_f64()),
                "gexp": t.gexp.to_string(),
                "logpow": t.logpow,
            })
        })
        .collect();
    r.output("value", value.to_string());
    r.output("terms", terms);
    let round_trip = value.to_string().parse::<GrossNumber>().ok() == Some(value.clone());
    r.checks
        .push(Check::holds("print_parse_round_trip", round_trip));
    Ok(r)
}

fn tile(a: TileArgs) -> Result<Report, CliError> {
    let mut r = Report::new("tile");
    r.input("p", a.p);
    r.input("q", a.q);
    r.input("depth", a.depth);
    r.input(
        "mode",
        if a.mode == TileMode::Bfs {
            "bfs"
        } else {
            "sector"
        },
    );
    let spec = PolygonSpec::new(a.p, a.q).map_err(domain)?;
    let title = format!("{{{},{}}}", a.p, a.q);
    let figure = FigureSpec::new(FigureKind::Tiling, a.canvas);
    match a.mode {
        TileMode::Bfs => {
            let tiling = generate_bfs(spec, a.depth).map_err(domain)?;
            let report = check_tiling(&tiling);
            r.output("tiles", tiling.tiles.len());
            r.output("dedupe_log", tiling.dedupe_log);
            r.output("generations", &report.generations);
            r.output("saturated_vertices", report.saturated_vertices);
            r.checks.push(Check::within(
                "duplicate_centers",
                report.duplicate_violations as f64,
                0.0,
            ));
            r.checks.push(Check::within(
                "incidence_violations",
                report.incidence_violations.len() as f64,
                0.0,
            ));
            r.checks.push(Check::within(
                "interior_angles",
                report.max_interior_angle_residual,
                1e-8,
            ));
            if let Some(path) = &a.json {
                let s = serde_json::to_string_pretty(&TilingRecord::from(&tiling))
                    .expect("serializable");
                write_file(path, &s)?;
            }
            if let Some(path) = &a.svg {
                write_file(path, &tiling_svg(&tiling.tiles, &figure, &title))?;
            }
        }
        TileMode::Sector => {
            if a.depth > MAX_SECTOR_GENERATIONS {
                return Err(domain(format!(
                    "depth {} exceeds the cap of {MAX_SECTOR_GENERATIONS}",
                    a.depth
                )));
            }
            let tree = generate_sector_tree(spec, a.depth).map_err(domain)?;
            let counts = generation_counts(&tree);
            let closed: Vec<Option<u64>> = (0..=a.depth)
                .map(|k| verify::closed_form_census(a.p, a.q, k))
                .collect();
            r.output("counts", &counts);
            r.output("closed_form", &closed);
            r.output("parity_mode", tree.parity_mode);
            r.checks.push(Check::holds(
                "census_matches_closed_form",
                counts.iter().map(|&c| Some(c)).collect::<Vec<_>>() == closed,
            ));
            if a.svg.is_some() || a.json.is_some() {
                // Materialize as many whole generations as fit the budget.
                let p = a.p as usize;
                let mut shown = 0;
                let mut total = 1usize;
                for (k, &n) in counts.iter().enumerate().skip(1) {
                    total += counts[k - 1] as usize * (p - 2) + n as usize;
                    if total > MAX_RENDERED_TILES {
                        break;
                    }
                    shown = k;
                }
                let tiles = tree.tiles(shown);
                let sound = tree.soundness(shown).map_err(domain)?;
                r.output("rendered_generations", shown);
                r.output("rendered_tiles", tiles.len());
                r.checks.push(Check::within(
                    "sector_duplicates",
                    sound.duplicate_violations as f64,
                    0.0,
                ));
                r.checks.push(Check::within(
                    "sector_outside",
                    sound.outside_sector as f64,
                    0.0,
                ));
                if let Some(path) = &a.json {
                    let rec = TilingRecord::new(a.p, a.q, shown, &tiles, 0);
                    write_file(
                        path,
                        &serde_json::to_string_pretty(&rec).expect("serializable"),
                    )?;
                }
                if let Some(path) = &a.svg {
                    write_file(path, &tiling_svg(&tiles, &figure, &title))?;
                }
            }
        }
    }
    if let Some(path) = &a.json {
        r.output("json", path.display().to_string());
    }
    if let Some(path) = &a.svg {
        r.output("svg", path.display().to_string());
    }
    Ok(r)
}

fn verify_cmd(a: VerifyArgs) -> Report {
    let mut r = Report::new("verify");
    r.input("suite", format!("{:?}", a.suite).to_lowercase());
    r.checks = verify::run(a.suite);
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    r.output("checks", r.checks.len());
    r.output("failed", failed);
    r.output("pass", failed == 0);
    r
}

/// Parses `args`, runs the command, prints the report; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let is_verify = matches!(cli.command, Command::Verify(_));
    match run(cli) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
            if is_verify && !report.passed() {
                for c in report.checks.iter().filter(|c| !c.pass) {
                    eprintln!("FAIL {} (residual {:e})", c.name, c.residual);
                }
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("infinigon").chain(args.iter().copied())).unwrap()
    }

    fn run_ok(args: &[&str]) -> Report {
        run(parse(args)).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            run_ok(&["classify", "--q", "4", "--x", "0.5"]).outputs["kind"],
            "circle"
        );
        let r = run_ok(&["classify", "--q", "4", "--x", "0.7071067811865476"]);
        assert_eq!(r.outputs["kind"], "horocycle");
        assert!(r.outputs.contains_key("tangency_point"));
        assert!(r.passed());
        let err = run(parse(&["classify", "--q", "4", "--x", "1.5"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("x out of range"));
    }

    #[test]
    fn metrics_examples() {
        let r = run_ok(&["metrics", "--p", "5", "--q", "4"]);
        assert!((r.outputs["h"].as_f64().unwrap() - 0.39798).abs() < 1e-4);
        assert!((r.outputs["e"].as_f64().unwrap() - 0.34356).abs() < 1e-4);
        assert!(r.passed());
        assert_eq!(
            run(parse(&["metrics", "--p", "4", "--q", "4"]))
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn gross_examples() {
        let r = run_ok(&[
            "gross",
            "--expr",
            "tile-count",
            "--lambda",
            "go",
            "--valence",
            "5",
            "--nu",
            "2",
        ]);
        assert_eq!(r.outputs["value"], "go^2 - 4*go + 4");
        let r = run_ok(&[
            "gross",
            "--expr",
            "one-minus-d2",
            "--q",
            "3",
            "--lambda",
            "go",
        ]);
        assert!(r.outputs["value"]
            .as_str()
            .unwrap()
            .starts_with("29.6088132"));
        let r = run_ok(&["gross", "--expr", "delta", "--q", "3", "--lambda", "go"]);
        assert!(r.outputs["value"].as_str().unwrap().starts_with("2*ln(go)"));
        assert_eq!(
            run(parse(&["gross", "--expr", "rho", "--lambda", "go +"]))
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn tile_examples() {
        let r = run_ok(&["tile", "--p", "5", "--q", "4", "--depth", "2"]);
        assert_eq!(r.outputs["tiles"], 21);
        let r = run_ok(&[
            "tile", "--p", "8", "--q", "6", "--depth", "2", "--mode", "sector",
        ]);
        assert_eq!(r.outputs["counts"], json!([1, 17, 289]));
        assert!(r.passed());
        let err = run(parse(&["tile", "--p", "5", "--q", "4", "--depth", "40"])).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("cap"));
    }

    #[test]
    fn bad_suite_is_a_usage_error() {
        let e = Cli::try_parse_from(["infinigon", "verify", "--suite", "bogus"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
