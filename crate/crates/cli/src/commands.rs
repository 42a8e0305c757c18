use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bisym_core::dsl::{compile_source, DslError};
use bisym_core::dyadic::{DensityReport, DyadicError};
use bisym_core::expr::{tree_count, ExprError, TREE_DEPTH_CAP};
use bisym_core::{
    build_dyadic_table, check_bisymmetry, check_cancellative, check_codomain, check_mean_bounds,
    check_partial_strict_increasing, check_reflexive, check_symmetry, check_table_monotone,
    density_report, dichotomy_verdict, enumerate_exprs, evaluate_value_set, BinaryMap, Builtin,
    DichotomyVerdict, Interval, MapError, PropertyReport, SampleGrid, ValueLength, VerdictKind,
    Witness,
};
use serde::Serialize;

use crate::args::{
    Axiom, CheckArgs, Common, DichotomyArgs, EnumerateArgs, EvalArgs, ExtractArgs, MapSource,
};
use crate::exit;

/// Why a run stopped before producing a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Parse { path: String, error: Box<DslError> },
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => exit::USAGE,
            Failure::Parse { .. } => exit::PARSE,
            Failure::Runtime(_) => exit::FAILURE,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Parse { path, error } => format!("{path}: {error}"),
            Failure::Runtime(m) => format!("error: {m}"),
        }
    }
}

impl From<MapError> for Failure {
    fn from(e: MapError) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Validated settings of one run, echoed in JSON output. Fields that do
/// not apply to the subcommand are omitted.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub map: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dsl_file: Option<String>,
    pub interval: [f64; 2],
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    tool_version: &'static str,
    config: &'a RunConfig,
    result: &'a T,
}

/// A finished run: both renderings of the result and the exit code.
pub struct Outcome {
    pub json: String,
    pub table: String,
    pub exit: u8,
}

impl Outcome {
    fn new<T: Serialize>(config: RunConfig, result: &T, table: String, exit: u8) -> Self {
        let envelope = Envelope {
            tool_version: env!("CARGO_PKG_VERSION"),
            config: &config,
            result,
        };
        Outcome {
            json: serde_json::to_string_pretty(&envelope).expect("reports serialize"),
            table,
            exit,
        }
    }
}

struct LoadedMap {
    map: BinaryMap,
    label: String,
    dsl_file: Option<String>,
}

impl LoadedMap {
    fn config(&self, command: &'static str) -> RunConfig {
        let d = self.map.domain();
        RunConfig {
            command,
            map: self.label.clone(),
            dsl_file: self.dsl_file.clone(),
            interval: [d.lo(), d.hi()],
            tolerance: self.map.tolerance(),
            ..RunConfig::default()
        }
    }
}

/// Resolves the map source. `fallback` is the domain used when neither
/// `--interval` nor a built-in's natural domain applies.
fn load_map(
    source: &MapSource,
    common: &Common,
    fallback: Option<Interval>,
    default_builtin: Option<&str>,
) -> Result<LoadedMap, Failure> {
    let explicit = match common.interval.as_deref() {
        Some([lo, hi]) => Some(Interval::new(*lo, *hi).map_err(usage)?),
        Some(_) => return Err(usage("--interval takes LO and HI")),
        None => None,
    };
    let mut loaded = match (&source.map, &source.dsl_file) {
        (Some(name), _) => builtin_map(name, explicit.or(fallback))?,
        (None, Some(path)) => dsl_map(path, explicit.or(fallback).unwrap_or(Interval::UNIT))?,
        (None, None) => match default_builtin {
            Some(name) => builtin_map(name, explicit.or(fallback))?,
            None => return Err(usage("one of --map or --dsl-file is required")),
        },
    };
    if let Some(t) = common.tolerance {
        if !(t.is_finite() && t > 0.0) {
            return Err(usage(format!("--tolerance must be positive, got {t}")));
        }
        loaded.map = loaded.map.with_tolerance(t);
    }
    Ok(loaded)
}

fn builtin_map(name: &str, domain: Option<Interval>) -> Result<LoadedMap, Failure> {
    let b: Builtin = name.parse().map_err(usage)?;
    let domain = domain.unwrap_or_else(|| b.default_domain());
    Ok(LoadedMap {
        map: b.into_map(domain).map_err(usage)?,
        label: b.to_string(),
        dsl_file: None,
    })
}

fn dsl_map(path: &Path, domain: Interval) -> Result<LoadedMap, Failure> {
    let shown = path.display().to_string();
    let source = fs::read_to_string(path).map_err(|e| usage(format!("{shown}: {e}")))?;
    let map = compile_source(&source, domain).map_err(|error| Failure::Parse {
        path: shown.clone(),
        error: Box::new(error),
    })?;
    Ok(LoadedMap {
        map,
        label: "dsl".into(),
        dsl_file: Some(shown),
    })
}

fn grid(domain: Interval, n: usize, seed: u64, flag: &str) -> Result<SampleGrid, Failure> {
    SampleGrid::new(domain, n, seed).map_err(|e| usage(format!("--{flag}: {e}")))
}

// ---- check ----------------------------------------------------------------

#[derive(Serialize)]
struct CheckResult {
    all_hold: bool,
    reports: Vec<PropertyReport>,
}

pub fn check(args: &CheckArgs) -> Result<Outcome, Failure> {
    let loaded = load_map(&args.source, &args.common, None, None)?;
    let map = &loaded.map;
    let pairs = grid(map.domain(), args.n, args.seed, "n")?;
    let quads = grid(map.domain(), args.quad_n, args.seed, "quad-n")?;
    let axioms: Vec<Axiom> = if args.axioms.is_empty() {
        Axiom::DEFAULT.to_vec()
    } else {
        args.axioms.clone()
    };

    let mut reports = Vec::with_capacity(axioms.len());
    for axiom in &axioms {
        reports.push(match axiom {
            Axiom::Reflexive => check_reflexive(map, &pairs)?,
            Axiom::PartiallyStrictlyIncreasing => check_partial_strict_increasing(map, &pairs)?,
            Axiom::Symmetric => check_symmetry(map, &pairs)?,
            Axiom::Bisymmetric => check_bisymmetry(map, &quads)?,
            Axiom::Cancellative => check_cancellative(map, &pairs)?,
            Axiom::Mean => check_mean_bounds(map, &pairs, args.strict_mean)?,
            Axiom::Codomain => check_codomain(map, &pairs)?,
        });
    }
    let all_hold = reports.iter().all(PropertyReport::holds);

    let mut config = loaded.config("check");
    config.n = Some(args.n);
    config.quad_n = Some(args.quad_n);
    config.seed = Some(args.seed);
    config.axioms = Some(reports.iter().map(|r| r.property.to_string()).collect());

    let mut t = header(&config);
    let _ = writeln!(
        t,
        "{:<32} {:<8} {:>10} {:>10}  first witness",
        "property", "verdict", "checked", "violations"
    );
    for r in &reports {
        let _ = writeln!(
            t,
            "{:<32} {:<8} {:>10} {:>10}  {}",
            r.property.name(),
            if r.holds() { "✓" } else { "✗" },
            r.samples_checked,
            r.violation_count(),
            r.witnesses.first().map(witness_text).unwrap_or_default()
        );
    }
    let exit = if all_hold { exit::OK } else { exit::FAILURE };
    let result = CheckResult { all_hold, reports };
    Ok(Outcome::new(config, &result, t, exit))
}

// ---- dichotomy ------------------------------------------------------------

pub fn dichotomy(args: &DichotomyArgs) -> Result<Outcome, Failure> {
    let loaded = load_map(&args.source, &args.common, None, None)?;
    let pairs = grid(loaded.map.domain(), args.n, args.seed, "n")?;
    let verdict = dichotomy_verdict(&loaded.map, &pairs)?;

    let mut config = loaded.config("dichotomy");
    config.n = Some(args.n);
    config.seed = Some(args.seed);

    let exit = match verdict.verdict {
        VerdictKind::SymmetricEverywhere | VerdictKind::NowhereSymmetric => exit::OK,
        VerdictKind::HypothesisViolated => exit::HYPOTHESIS_VIOLATED,
        VerdictKind::Inconclusive => exit::INCONCLUSIVE,
    };
    let table = dichotomy_table(&config, &verdict);
    Ok(Outcome::new(config, &verdict, table, exit))
}

fn dichotomy_table(config: &RunConfig, v: &DichotomyVerdict) -> String {
    let p = &v.evidence.partition;
    let mut t = header(config);
    let _ = writeln!(t, "verdict: {}", v.verdict.name());
    if !v.failed_hypotheses.is_empty() {
        let names: Vec<String> = v
            .failed_hypotheses
            .iter()
            .map(|h| {
                serde_json::to_value(h)
                    .unwrap()
                    .as_str()
                    .unwrap()
                    .to_string()
            })
            .collect();
        let _ = writeln!(t, "failed hypotheses: {}", names.join(", "));
    }
    let _ = writeln!(
        t,
        "pairs: {} symmetric, {} asymmetric, {} near threshold; classes: {}; transitivity failures: {}",
        p.symmetric_pairs,
        p.asymmetric_pairs,
        p.near_threshold_count,
        p.classes.len(),
        p.clique_violation_count
    );
    const SHOWN: usize = 8;
    for c in p.classes.iter().take(SHOWN) {
        let _ = writeln!(
            t,
            "  class [{}, {}]  {} point(s)",
            c.hull[0],
            c.hull[1],
            c.members.len()
        );
    }
    if p.classes.len() > SHOWN {
        let _ = writeln!(t, "  ... {} more", p.classes.len() - SHOWN);
    }
    for r in &v.evidence.reports {
        let _ = writeln!(
            t,
            "{:<32} {:<8} {}",
            r.property.name(),
            if r.holds() { "✓" } else { "✗" },
            r.witnesses.first().map(witness_text).unwrap_or_default()
        );
    }
    t
}

// ---- extract --------------------------------------------------------------

/// Tables up to this many cells are embedded in the JSON result.
const INLINE_TABLE_CELLS: usize = 64;

#[derive(Serialize)]
struct Residual {
    max: f64,
    argmax: [f64; 2],
    grid_size: usize,
}

#[derive(Serialize)]
struct TableRow {
    index: usize,
    dyadic: f64,
    value: f64,
}

#[derive(Serialize)]
struct ExtractResult {
    u: f64,
    v: f64,
    table_depth: u32,
    cells: usize,
    monotone: bool,
    monotonicity: PropertyReport,
    max_gap: Option<f64>,
    density: Option<DensityReport>,
    residual: Option<Residual>,
    symmetric_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<TableRow>>,
}

pub fn extract(args: &ExtractArgs) -> Result<Outcome, Failure> {
    let seeds = match (args.u, args.v) {
        (Some(u), Some(v)) => Some(
            Interval::new(u, v)
                .map_err(|_| usage(format!("--u {u} must be smaller than --v {v}")))?,
        ),
        _ => None,
    };
    // an explicit seed pair is the natural domain when none is given
    let loaded = if let (None, Some(s)) = (&args.common.interval, seeds) {
        let mut common = args.common.clone();
        common.interval = Some(vec![s.lo(), s.hi()]);
        load_map(&args.source, &common, None, None)?
    } else {
        load_map(&args.source, &args.common, None, None)?
    };
    let map = &loaded.map;
    let d = map.domain();
    let (u, v) = (args.u.unwrap_or(d.lo()), args.v.unwrap_or(d.hi()));

    let table = build_dyadic_table(map, u, v, args.depth).map_err(|e| match e {
        DyadicError::DepthCap(_) | DyadicError::InvalidSeeds { .. } => usage(e),
        other => Failure::Runtime(other.to_string()),
    })?;
    if let Some(path) = &args.csv {
        write_table_csv(path, &table.values, table.cells())
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    }
    let monotonicity = check_table_monotone(&table);
    let monotone = monotonicity.holds();
    let (density, residual, symmetric_defect) = if monotone {
        let density = density_report(&table).map_err(|e| Failure::Runtime(e.to_string()))?;
        let residual_grid = grid(Interval::new(u, v).map_err(usage)?, args.grid, 0, "grid")?;
        let r = bisym_core::dyadic::residual_against(map, &table, &residual_grid)
            .map_err(|e| Failure::Runtime(e.to_string()))?;
        (
            Some(density),
            Some(Residual {
                max: r.max_abs_residual,
                argmax: [r.argmax.0, r.argmax.1],
                grid_size: r.grid_size,
            }),
            Some(r.symmetric_defect),
        )
    } else {
        (None, None, None)
    };

    let inline = (table.cells() <= INLINE_TABLE_CELLS).then(|| {
        table
            .values
            .iter()
            .enumerate()
            .map(|(index, &value)| TableRow {
                index,
                dyadic: table.dyadic(index),
                value,
            })
            .collect()
    });
    let result = ExtractResult {
        u,
        v,
        table_depth: table.depth,
        cells: table.cells(),
        monotone,
        monotonicity,
        max_gap: density.as_ref().map(|d| d.max_gap),
        density,
        residual,
        symmetric_defect,
        table: inline,
    };

    let mut config = loaded.config("extract");
    config.u = Some(u);
    config.v = Some(v);
    config.depth = Some(args.depth as u64);
    config.grid = Some(args.grid);

    let mut t = header(&config);
    let _ = writeln!(
        t,
        "table depth {} ({} cells), monotone: {}",
        result.table_depth,
        result.cells,
        if monotone { "✓" } else { "✗" }
    );
    if let Some(w) = result.monotonicity.witnesses.first() {
        let _ = writeln!(t, "first non-increasing step: {}", witness_text(w));
    }
    if let (Some(r), Some(g), Some(s)) = (&result.residual, result.max_gap, result.symmetric_defect)
    {
        let _ = writeln!(t, "max gap {g}");
        let _ = writeln!(
            t,
            "residual max {} at ({}, {}) on a {}x{} grid; symmetric defect {}",
            r.max, r.argmax[0], r.argmax[1], r.grid_size, r.grid_size, s
        );
    }
    if let Some(rows) = &result.table {
        let _ = writeln!(t, "{:>6}  {:<22} value", "index", "dyadic");
        for row in rows {
            let _ = writeln!(t, "{:>6}  {:<22} {}", row.index, row.dyadic, row.value);
        }
    }
    let exit = if monotone { exit::OK } else { exit::FAILURE };
    Ok(Outcome::new(config, &result, t, exit))
}

fn write_table_csv(path: &Path, values: &[f64], cells: usize) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "dyadic", "value"])?;
    for (k, v) in values.iter().enumerate() {
        w.write_record([
            k.to_string(),
            (k as f64 / cells as f64).to_string(),
            v.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

// ---- enumerate ------------------------------------------------------------

#[derive(Serialize)]
struct TreeValue {
    tree: String,
    value: f64,
}

#[derive(Serialize)]
struct EnumerateResult {
    depth: usize,
    u: f64,
    v: f64,
    /// Trees of depth at most `depth`; exceeds 64 bits from depth 6.
    tree_count: u128,
    value_count: usize,
    values: Vec<ValueLength>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trees: Option<Vec<TreeValue>>,
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Outcome, Failure> {
    let loaded = load_map(&args.source, &args.common, None, Some("arithmetic"))?;
    let map = &loaded.map;
    let d = map.domain();
    let (u, v) = (args.u.unwrap_or(d.lo()), args.v.unwrap_or(d.hi()));
    let set = evaluate_value_set(map, u, v, args.depth).map_err(|e| match e {
        ExprError::Map(m) if !matches!(m, MapError::DomainViolation { .. }) => {
            Failure::Runtime(m.to_string())
        }
        other => usage(other),
    })?;
    let trees = if args.list_trees {
        if args.depth > TREE_DEPTH_CAP {
            return Err(usage(format!(
                "--list-trees supports depth up to {TREE_DEPTH_CAP}"
            )));
        }
        let mut out = Vec::new();
        for tree in enumerate_exprs(args.depth).map_err(usage)? {
            out.push(TreeValue {
                tree: tree.to_string(),
                value: tree.evaluate(map, u, v)?,
            });
        }
        Some(out)
    } else {
        None
    };
    let result = EnumerateResult {
        depth: args.depth,
        u,
        v,
        tree_count: tree_count(args.depth).expect("depth is capped"),
        value_count: set.len(),
        values: set.values().to_vec(),
        trees,
    };

    let mut config = loaded.config("enumerate");
    config.depth = Some(args.depth as u64);
    config.u = Some(u);
    config.v = Some(v);

    let mut t = header(&config);
    let _ = writeln!(
        t,
        "depth {}: {} trees, {} distinct values",
        result.depth, result.tree_count, result.value_count
    );
    let _ = writeln!(t, "{:<24} length", "value");
    for vl in &result.values {
        let _ = writeln!(t, "{:<24} {}", vl.value, vl.length);
    }
    if let Some(trees) = &result.trees {
        for tv in trees {
            let _ = writeln!(t, "{} = {}", tv.tree, tv.value);
        }
    }
    Ok(Outcome::new(config, &result, t, exit::OK))
}

// ---- eval -----------------------------------------------------------------

#[derive(Serialize)]
struct EvalResult {
    x: f64,
    y: f64,
    value: f64,
}

pub fn eval(args: &EvalArgs) -> Result<Outcome, Failure> {
    let loaded = load_map(&args.source, &args.common, None, None)?;
    let value = loaded.map.eval(args.x, args.y).map_err(|e| match e {
        MapError::DomainViolation { .. } => usage(e),
        other => Failure::Runtime(other.to_string()),
    })?;
    let mut config = loaded.config("eval");
    config.x = Some(args.x);
    config.y = Some(args.y);
    let mut t = header(&config);
    let _ = writeln!(t, "F({}, {}) = {}", args.x, args.y, value);
    let result = EvalResult {
        x: args.x,
        y: args.y,
        value,
    };
    Ok(Outcome::new(config, &result, t, exit::OK))
}

// ---- shared rendering -----------------------------------------------------

fn header(c: &RunConfig) -> String {
    let source = match &c.dsl_file {
        Some(path) => format!("map file {path}"),
        None => c.map.clone(),
    };
    format!(
        "{} on [{}, {}], tolerance {:e}\n",
        source, c.interval[0], c.interval[1], c.tolerance
    )
}

fn witness_text(w: &Witness) -> String {
    let inputs: Vec<String> = w.inputs.iter().map(|x| x.to_string()).collect();
    format!(
        "({}): {} vs {} (diff {})",
        inputs.join(", "),
        w.lhs,
        w.rhs,
        w.diff
    )
}
