//! The `verlinde` command-line tool.

pub mod cache;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use verlinde_core::affine::{AffineWord, StarContext};
use verlinde_core::chain::{
    differential, homology_of, parse_terms, reduce_cycle_with, verify_witness, ChainElement, Limits, ReduceOptions,
    TruncatedComplex, Truncation,
};
use verlinde_core::combinatorics::alcove_weights;
use verlinde_core::fusion::{build_fusion_table, fusion_product, FusionLabel, SpecialPoints, PRODUCT_TOLERANCE};
use verlinde_core::{Error, LieType, RootSystem, Weight};

use cache::{Cache, CacheKey, CACHE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "verlinde", version, about = "Verlinde rings and the level-k Weyl chain complex")]
pub struct Cli {
    /// Output format. CSV is only available for fusion tables.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Cache directory.
    #[arg(long, env = CACHE_ENV, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cartan matrix, ρ, θ, comarks, dual Coxeter number and Weyl group order.
    Info { lie_type: String },
    /// Fusion product of two level-k labels.
    Fusion { lie_type: String, level: u32, lambda: String, mu: String },
    /// All fusion coefficients at level k.
    FusionTable {
        lie_type: String,
        level: u32,
        /// Cross-check against characters at the special points.
        #[arg(long)]
        verify: bool,
        /// Tolerance for `--verify`.
        #[arg(long, default_value_t = PRODUCT_TOLERANCE)]
        tolerance: f64,
    },
    /// Homology of the truncated complex, checked against the expected pattern.
    Homology {
        lie_type: String,
        level: u32,
        /// Truncation length L.
        #[arg(long = "trunc")]
        length: usize,
        /// Override the truncation margin.
        #[arg(long)]
        margin: Option<usize>,
        /// Maximum number of basis elements.
        #[arg(long, default_value_t = Limits::default().max_basis)]
        max_basis: usize,
    },
    /// Reduce a cycle to the target alcoves and print a witness.
    Reduce {
        lie_type: String,
        level: u32,
        /// Terms `COEF*FACE/WEIGHT` separated by spaces or `;`, e.g. `"1*0/4"` or `"-2*0,1/1,0; 1*1/0,0"`.
        #[arg(allow_hyphen_values = true)]
        terms: String,
        /// Target alcove as a word in the generators, `e` for the fundamental alcove. Repeatable.
        #[arg(long = "target")]
        targets: Vec<String>,
        /// Print every elimination step.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::Resource { .. } | Error::GroupTooLarge(_)) => EXIT_RESOURCE,
            CliError::Core(Error::Stalled(_) | Error::SingularPoint) => EXIT_MISMATCH,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

/// Text for stdout and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cache = if cli.no_cache { Cache::disabled() } else { Cache::new(Cache::locate(cli.cache_dir.clone())) };
    let format = cli.format;
    if format == Format::Csv && !matches!(cli.command, Command::FusionTable { .. }) {
        return Err(CliError::Usage("CSV output is only available for fusion-table".into()));
    }
    match cli.command {
        Command::Info { lie_type } => info(&lie_type, format),
        Command::Fusion { lie_type, level, lambda, mu } => fusion(&lie_type, level, &lambda, &mu, format),
        Command::FusionTable { lie_type, level, verify, tolerance } => {
            fusion_table(&lie_type, level, verify, tolerance, format, &cache)
        }
        Command::Homology { lie_type, level, length, margin, max_basis } => {
            homology(&lie_type, level, length, margin, max_basis, format, &cache)
        }
        Command::Reduce { lie_type, level, terms, targets, trace } => {
            reduce(&lie_type, level, &terms, &targets, trace, format)
        }
    }
}

fn root_system(s: &str) -> Result<RootSystem, CliError> {
    let ty: LieType = s.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    Ok(RootSystem::new(ty))
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn labels(w: &Weight) -> Value {
    Value::from(w.labels().to_vec())
}

fn info(lie_type: &str, format: Format) -> Result<Outcome, CliError> {
    let rs = root_system(lie_type)?;
    let order = u64::try_from(rs.weyl_order()).map_err(|_| Error::GroupTooLarge(rs.weyl_order()))?;
    if format == Format::Json {
        let v = json!({
            "type": rs.lie_type().to_string(),
            "rank": rs.rank(),
            "cartan": rs.cartan(),
            "rho": labels(rs.rho()),
            "theta": labels(rs.highest_root()),
            "comarks": rs.comarks(),
            "dual_coxeter": rs.dual_coxeter(),
            "weyl_order": order,
        });
        return Ok(Outcome::ok(to_json(&v)));
    }
    let mut s = format!("type: {}\nrank: {}\ncartan matrix:\n", rs.lie_type(), rs.rank());
    for row in rs.cartan() {
        s.push_str("  ");
        s.push_str(&row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" "));
        s.push('\n');
    }
    let comarks: Vec<String> = rs.comarks().iter().map(ToString::to_string).collect();
    s.push_str(&format!(
        "rho: {}\ntheta: {}\ncomarks: {}\nh^v = {}\n|W| = {order}\n",
        rs.rho(),
        rs.highest_root(),
        comarks.join(","),
        rs.dual_coxeter()
    ));
    Ok(Outcome::ok(s))
}

fn label(ctx: &StarContext<'_>, s: &str) -> Result<FusionLabel, CliError> {
    let w: Weight = s.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    FusionLabel::new(ctx, w).map_err(|e| match e {
        Error::OutsideAlcove { .. } => {
            let valid: Vec<String> = sorted_alcove(ctx).iter().map(ToString::to_string).collect();
            CliError::Usage(format!("{e}; valid labels: {}", valid.join(" ")))
        }
        other => CliError::Usage(other.to_string()),
    })
}

fn sorted_alcove(ctx: &StarContext<'_>) -> Vec<Weight> {
    let mut v = alcove_weights(ctx.rs(), ctx.level());
    v.sort();
    v
}

fn fusion(lie_type: &str, level: u32, a: &str, b: &str, format: Format) -> Result<Outcome, CliError> {
    let rs = root_system(lie_type)?;
    let ctx = StarContext::new(&rs, level);
    let (x, y) = (label(&ctx, a)?, label(&ctx, b)?);
    let product = fusion_product(&ctx, &x, &y)?;
    if format == Format::Json {
        let products: Map<String, Value> = product.iter().map(|(n, c)| (n.weight().to_string(), Value::from(*c))).collect();
        let v = json!({
            "type": rs.lie_type().to_string(),
            "rank": rs.rank(),
            "level": level,
            "lambda": x.weight().to_string(),
            "mu": y.weight().to_string(),
            "product": products,
        });
        return Ok(Outcome::ok(to_json(&v)));
    }
    let line: Vec<String> = product.iter().map(|(n, c)| format!("{}:{c}", n.weight())).collect();
    Ok(Outcome::ok(format!("{}\n", line.join(" "))))
}

/// `{"type","rank","level","labels","products":{"λ|μ":{"ν":N}}}` with labels
/// in lexicographic order.
pub fn fusion_table_json(rs: &RootSystem, level: u32) -> Result<Value, CliError> {
    let ctx = StarContext::new(rs, level);
    let table = build_fusion_table(&ctx)?;
    let mut order: Vec<usize> = (0..table.labels().len()).collect();
    order.sort_by(|&i, &j| table.labels()[i].cmp(&table.labels()[j]));
    let name = |i: usize| table.labels()[i].to_string();
    let mut products = Map::new();
    for &i in &order {
        for &j in &order {
            let mut entry = Map::new();
            for &n in &order {
                let c = table.coefficient(i, j, n);
                if c != 0 {
                    entry.insert(name(n), Value::from(c));
                }
            }
            products.insert(format!("{}|{}", name(i), name(j)), Value::Object(entry));
        }
    }
    Ok(json!({
        "type": rs.lie_type().to_string(),
        "rank": rs.rank(),
        "level": level,
        "labels": order.iter().map(|&i| name(i)).collect::<Vec<_>>(),
        "products": products,
    }))
}

fn valid_fusion_table(v: &Value) -> bool {
    v.get("labels").is_some_and(Value::is_array) && v.get("products").is_some_and(Value::is_object)
}

fn fusion_table(lie_type: &str, level: u32, verify: bool, tolerance: f64, format: Format, cache: &Cache) -> Result<Outcome, CliError> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(CliError::Usage("tolerance must be positive".into()));
    }
    let rs = root_system(lie_type)?;
    let key = CacheKey { kind: "fusion-table", lie_type: rs.lie_type().to_string(), level, length: None, margin: None };
    let (text, doc) = match cache.load(&key, valid_fusion_table) {
        Some(hit) => hit,
        None => {
            let doc = fusion_table_json(&rs, level)?;
            let text = to_json(&doc);
            cache.store(&key, &text);
            (text, doc)
        }
    };
    let mut code = EXIT_OK;
    if verify {
        let deviation = verlinde_deviation(&rs, level, &doc)?;
        let ok = deviation <= tolerance;
        eprintln!("special-point check: max deviation {deviation:.3e}, tolerance {tolerance:e}: {}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            code = EXIT_MISMATCH;
        }
    }
    let stdout = match format {
        Format::Json => text,
        Format::Csv => table_csv(&doc),
        Format::Plain => table_plain(&doc),
    };
    Ok(Outcome { stdout, code })
}

fn table_entries(doc: &Value) -> impl Iterator<Item = (&str, &str, &str, u64)> {
    doc["products"].as_object().into_iter().flatten().flat_map(|(pair, entry)| {
        let (a, b) = pair.split_once('|').unwrap_or((pair, ""));
        entry.as_object().into_iter().flatten().map(move |(n, c)| (a, b, n.as_str(), c.as_u64().unwrap_or(0)))
    })
}

fn table_plain(doc: &Value) -> String {
    let mut s = String::new();
    for (pair, entry) in doc["products"].as_object().into_iter().flatten() {
        let (a, b) = pair.split_once('|').unwrap_or((pair, ""));
        let terms: Vec<String> = entry.as_object().into_iter().flatten().map(|(n, c)| format!("{n}:{c}")).collect();
        s.push_str(&format!("({a}) x ({b}) = {}\n", terms.join(" ")));
    }
    s
}

fn table_csv(doc: &Value) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lambda", "mu", "nu", "N"]).expect("writing to memory");
    for (a, b, n, c) in table_entries(doc) {
        w.write_record([a, b, n, &c.to_string()]).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("CSV of UTF-8 fields")
}

/// Largest `|Σ_ν N χ_ν(t) − χ_λ(t) χ_μ(t)|` over all special points `t`.
fn verlinde_deviation(rs: &RootSystem, level: u32, doc: &Value) -> Result<f64, CliError> {
    let ctx = StarContext::new(rs, level);
    let points = SpecialPoints::new(&ctx)?;
    let mut values: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for w in alcove_weights(rs, level) {
        values.insert(w.to_string(), points.values(&w)?);
    }
    let corrupt = || CliError::Usage("fusion table does not match the level".into());
    let mut worst = 0f64;
    for (pair, entry) in doc["products"].as_object().ok_or_else(corrupt)? {
        let (a, b) = pair.split_once('|').ok_or_else(corrupt)?;
        let (va, vb) = (values.get(a).ok_or_else(corrupt)?, values.get(b).ok_or_else(corrupt)?);
        for s in 0..va.len() {
            let mut lhs = Complex64::new(0.0, 0.0);
            for (n, c) in entry.as_object().ok_or_else(corrupt)? {
                lhs += values.get(n).ok_or_else(corrupt)?[s] * c.as_u64().ok_or_else(corrupt)? as f64;
            }
            worst = worst.max((lhs - va[s] * vb[s]).norm());
        }
    }
    Ok(worst)
}

fn valid_homology(v: &Value) -> bool {
    v.get("degrees").is_some_and(Value::is_array) && v.get("expected").is_some_and(Value::is_string)
}

fn homology(
    lie_type: &str,
    level: u32,
    length: usize,
    margin: Option<usize>,
    max_basis: usize,
    format: Format,
    cache: &Cache,
) -> Result<Outcome, CliError> {
    let rs = root_system(lie_type)?;
    let ctx = StarContext::new(&rs, level);
    let mut trunc = Truncation::new(&ctx, length);
    if let Some(m) = margin {
        trunc.margin = m;
    }
    let key = CacheKey { kind: "homology", lie_type: rs.lie_type().to_string(), level, length: Some(length), margin };
    let (text, doc) = match cache.load(&key, valid_homology) {
        Some(hit) => hit,
        None => {
            let complex = TruncatedComplex::build(&ctx, &trunc, &Limits { max_basis })?;
            let report = homology_of(&ctx, &complex, &trunc);
            let degrees: Vec<Value> = report
                .degrees
                .iter()
                .map(|d| {
                    json!({
                        "degree": d.degree,
                        "chains": d.chain_rank,
                        "rank": d.free_rank,
                        "torsion": d.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({
                "type": rs.lie_type().to_string(),
                "rank": rs.rank(),
                "level": level,
                "truncation": trunc.length,
                "margin": trunc.margin,
                "alcove_size": report.alcove_size,
                "degrees": degrees,
                "expected": if report.matches_expected() { "PASS" } else { "FAIL" },
            });
            let text = to_json(&doc);
            cache.store(&key, &text);
            (text, doc)
        }
    };
    let code = if doc["expected"] == "PASS" { EXIT_OK } else { EXIT_MISMATCH };
    let stdout = match format {
        Format::Json => text,
        _ => {
            let mut s = format!(
                "{} level {} truncation {} (margin {}), {} alcove labels\n",
                doc["type"].as_str().unwrap_or("?"),
                doc["level"],
                doc["truncation"],
                doc["margin"],
                doc["alcove_size"]
            );
            for d in doc["degrees"].as_array().into_iter().flatten() {
                let torsion: Vec<&str> = d["torsion"].as_array().into_iter().flatten().filter_map(Value::as_str).collect();
                s.push_str(&format!("degree {}: chains {}, rank {}, torsion [{}]\n", d["degree"], d["chains"], d["rank"], torsion.join(",")));
            }
            s.push_str(&format!("{}\n", doc["expected"].as_str().unwrap_or("FAIL")));
            s
        }
    };
    Ok(Outcome { stdout, code })
}

fn chain_terms(x: &ChainElement) -> Vec<String> {
    x.terms().iter().map(ToString::to_string).collect()
}

fn reduce(lie_type: &str, level: u32, input: &str, targets: &[String], trace: bool, format: Format) -> Result<Outcome, CliError> {
    let rs = root_system(lie_type)?;
    let ctx = StarContext::new(&rs, level);
    let usage = |e: Error| CliError::Usage(e.to_string());
    let x = ChainElement::from_terms(&ctx, &parse_terms(input).map_err(usage)?).map_err(usage)?;
    let words = targets
        .iter()
        .map(|t| {
            let w: AffineWord = t.parse()?;
            w.check(rs.rank())?;
            Ok(w)
        })
        .collect::<Result<Vec<_>, Error>>()
        .map_err(usage)?;
    let boundary = differential(&ctx, &x);
    if !boundary.is_zero() {
        return Err(CliError::Usage(format!("input is not a cycle; its boundary is {boundary}")));
    }
    let opts = ReduceOptions { targets: words, trace, ..ReduceOptions::default() };
    let red = reduce_cycle_with(&ctx, &x, &opts)?;
    let verified = verify_witness(&ctx, &red.witness);
    let code = if verified { EXIT_OK } else { EXIT_MISMATCH };
    if format == Format::Json {
        let clusters: Vec<Value> = red
            .clusters
            .iter()
            .map(|c| {
                json!({
                    "target": c.target.to_string(),
                    "input": chain_terms(&c.input),
                    "canonical": chain_terms(&c.canonical),
                    "z": chain_terms(&c.z),
                })
            })
            .collect();
        let steps: Vec<Value> = red
            .trace
            .iter()
            .map(|p| {
                json!({
                    "distance": p.distance,
                    "face": p.face.to_string(),
                    "enlarged": p.enlarged.to_string(),
                    "generator": p.generator,
                    "weight": p.weight.to_string(),
                    "coefficient": p.coefficient,
                })
            })
            .collect();
        let v = json!({
            "type": rs.lie_type().to_string(),
            "rank": rs.rank(),
            "level": level,
            "input": chain_terms(&x),
            "canonical": chain_terms(&red.canonical),
            "witness": { "z": chain_terms(&red.witness.z), "verified": verified },
            "clusters": clusters,
            "trace": steps,
        });
        return Ok(Outcome { stdout: to_json(&v), code });
    }
    let mut s = format!("input: {x}\ncanonical: {}\nwitness z: {}\nwitness verified: {}\n", red.canonical, red.witness.z, if verified { "yes" } else { "NO" });
    if red.clusters.len() > 1 {
        for c in &red.clusters {
            s.push_str(&format!("cluster {}: input {} -> canonical {}, z {}\n", c.target, c.input, c.canonical, c.z));
        }
    }
    if trace {
        s.push_str(&format!("trace ({} steps):\n", red.trace.len()));
        for p in &red.trace {
            s.push_str(&format!("  {p}\n"));
        }
    }
    Ok(Outcome { stdout: s, code })
}
