use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use haarint::entanglement::{mc_average_entropy, page_entropy_approx, page_entropy_exact_rational};
use haarint::haar_sampler::{mc_expectation, sample as draw, McEstimate, RngStream};
use haarint::irrep_engine::{IrrepCaps, IrrepEngine, RepMatrixElementSpec, DEFAULT_MAX_N, DEFAULT_MAX_WEIGHT};
use haarint::scalar::{self, ExactValue};
use haarint::su2_wigner::{
    equal_spin_scan, su2_integral_binomial, su2_integral_exact, su2_integral_quadrature_complex, Su2Factor,
    Su2MonomialSpec, DEFAULT_QUADRATURE_NODES,
};
use haarint::tableaux::{
    count_standard_tableaux, enumerate_gl_tableaux, enumerate_o_tableaux, enumerate_sp_tableaux, GroupTag, Partition,
};
use haarint::weingarten_engine::{
    asymptotic_leading, exact_integral_with, parse_factors, Commutant, CostCaps, MonomialSpec, WeingartenEngine,
    DEFAULT_MAX_DEGREE,
};
use haarint::{Error, Group};

use crate::output::Report;
use crate::Stochastic;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_COST_GATE: u8 = 3;
pub const EXIT_ASSERTION: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CostGate { .. } => EXIT_COST_GATE,
            Error::Assertion(_) => EXIT_ASSERTION,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn require_seed(s: &Stochastic) -> CliResult<u64> {
    s.seed.ok_or_else(|| CliError::usage("stochastic output needs a seed: pass --seed or set HAARINT_SEED"))
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableauGroup {
    #[value(name = "GL", alias = "gl")]
    Gl,
    #[value(name = "O", alias = "o")]
    O,
    #[value(name = "SO", alias = "so")]
    So,
    #[value(name = "Sp", alias = "sp", alias = "SP")]
    Sp,
}

#[derive(Args, Debug)]
pub struct TableauxArgs {
    /// Shape as comma-separated parts, e.g. `2,1`.
    #[arg(long)]
    shape: String,
    /// Matrix size (rank for Sp).
    #[arg(long = "N")]
    n: usize,
    #[arg(long, value_enum)]
    group: TableauGroup,
}

pub fn tableaux(a: TableauxArgs) -> CliResult<Report> {
    let shape: Partition = a.shape.parse()?;
    if a.n == 0 {
        return Err(CliError::usage("N must be positive"));
    }
    let (tag, list) = match a.group {
        TableauGroup::Gl => (GroupTag::GL, enumerate_gl_tableaux(&shape, a.n)),
        TableauGroup::O => (GroupTag::O, enumerate_o_tableaux(&shape, a.n)?),
        TableauGroup::So => (GroupTag::SO, enumerate_o_tableaux(&shape, a.n)?),
        TableauGroup::Sp => (GroupTag::Sp, enumerate_sp_tableaux(&shape, a.n)),
    };
    let rows: Vec<Value> = list
        .iter()
        .enumerate()
        .map(|(i, t)| json!({"index": i + 1, "tableau": t.to_json(), "display": t.to_string()}))
        .collect();
    let document = json!({
        "group": tag,
        "N": a.n,
        "shape": shape,
        "count": list.len(),
        "standard_fillings": count_standard_tableaux(&shape).to_string(),
        "tableaux": list.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
    });
    Ok(Report { document, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Leading,
    Mc,
    All,
}

impl Mode {
    fn exact(self) -> bool {
        matches!(self, Mode::Exact | Mode::All)
    }
    fn leading(self) -> bool {
        matches!(self, Mode::Leading | Mode::All)
    }
    fn mc(self) -> bool {
        matches!(self, Mode::Mc | Mode::All)
    }
}

#[derive(Args, Debug)]
pub struct IntegralArgs {
    #[arg(long, required_unless_present = "spec")]
    group: Option<Group>,
    /// Matrix size (rank for Sp).
    #[arg(long = "N", required_unless_present = "spec")]
    n: Option<usize>,
    /// Factors `i,j[,±]` separated by `;`; `-` marks a conjugated entry.
    #[arg(long, required_unless_present = "spec", allow_hyphen_values = true)]
    factors: Option<String>,
    /// JSON spec file: a matrix-entry monomial, or irrep factors carrying `lambda`.
    #[arg(long, conflicts_with_all = ["group", "n", "factors"])]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::All)]
    mode: Mode,
    #[command(flatten)]
    stochastic: Stochastic,
    /// Largest Weingarten degree for exact integrals.
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: usize,
    /// Largest total irrep weight for exact irrep integrals.
    #[arg(long, default_value_t = DEFAULT_MAX_WEIGHT)]
    max_irrep_weight: usize,
    /// Largest N for exact irrep integrals.
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    max_irrep_n: usize,
}

/// Runs one path; in `all` mode, refusals become `null` with a note instead of failing.
fn gated<T>(
    all: bool,
    key: &str,
    doc: &mut serde_json::Map<String, Value>,
    r: haarint::Result<T>,
    show: impl Fn(T) -> Value,
) -> CliResult<()> {
    match r {
        Ok(v) => {
            doc.insert(key.into(), show(v));
            Ok(())
        }
        Err(e @ (Error::CostGate { .. } | Error::Unsupported(_))) if all => {
            doc.insert(key.into(), Value::Null);
            doc.insert(format!("{key}_refused"), Value::String(e.to_string()));
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

pub fn integral(a: IntegralArgs) -> CliResult<Report> {
    let all = a.mode == Mode::All;
    // `all` skips Monte Carlo when no seed is given; `mc` insists on one
    let seed = if a.mode == Mode::Mc { Some(require_seed(&a.stochastic)?) } else { a.stochastic.seed };
    if a.mode.mc() && seed.is_some() && a.stochastic.samples < 2 {
        return Err(CliError::usage("need at least two samples"));
    }
    let config = json!({
        "seed": seed,
        "samples": a.stochastic.samples,
        "max_degree": a.max_degree,
        "max_irrep_weight": a.max_irrep_weight,
        "max_irrep_n": a.max_irrep_n,
    });
    let mut doc = serde_json::Map::new();
    match &a.spec {
        Some(path) => {
            let text = read_file(path)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad spec JSON: {e}")))?;
            let is_irrep = value["factors"].as_array().is_some_and(|fs| fs.iter().any(|f| f.get("lambda").is_some()));
            if is_irrep {
                let spec = RepMatrixElementSpec::from_json(&text)?;
                irrep_integral(&spec, &a, seed, all, &mut doc)?;
            } else {
                vector_integral(&MonomialSpec::from_json(&text)?, &a, seed, all, &mut doc)?;
            }
        }
        None => {
            let (group, n, factors) = (a.group.unwrap(), a.n.unwrap(), a.factors.as_deref().unwrap());
            let spec = MonomialSpec::new(group, n, parse_factors(factors)?)?;
            vector_integral(&spec, &a, seed, all, &mut doc)?;
        }
    }
    if a.mode.mc() && seed.is_none() {
        doc.insert("mc".into(), Value::Null);
        doc.insert("mc_skipped".into(), json!("no seed given"));
    }
    doc.insert("config".into(), config);
    Ok(Report::single(Value::Object(doc)))
}

fn vector_integral(
    spec: &MonomialSpec,
    a: &IntegralArgs,
    seed: Option<u64>,
    all: bool,
    doc: &mut serde_json::Map<String, Value>,
) -> CliResult<()> {
    doc.insert("group".into(), json!(spec.group));
    doc.insert("N".into(), json!(spec.n));
    doc.insert("factors".into(), json!(spec.factors));
    if a.mode.exact() {
        let engine = WeingartenEngine::with_caps(Commutant::for_group(spec.group, spec.n), CostCaps { max_degree: a.max_degree });
        gated(all, "exact", doc, exact_integral_with(&engine, spec), |v| json!(scalar::format(&v)))?;
    }
    if a.mode.leading() {
        gated(all, "leading", doc, asymptotic_leading(spec), |v| json!(scalar::format(&v)))?;
    }
    if let (true, Some(seed)) = (a.mode.mc(), seed) {
        let factors = spec.factors.clone();
        let est = mc_expectation(
            spec.group,
            spec.n,
            move |u| {
                factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| {
                    let z = u.entry(f.i - 1, f.j - 1);
                    acc * if f.conj { z.conj() } else { z }
                })
            },
            a.stochastic.samples,
            seed,
        );
        doc.insert("mc".into(), est.to_json());
    }
    Ok(())
}

fn irrep_integral(
    spec: &RepMatrixElementSpec,
    a: &IntegralArgs,
    seed: Option<u64>,
    all: bool,
    doc: &mut serde_json::Map<String, Value>,
) -> CliResult<()> {
    let engine = IrrepEngine::with_caps(spec.group, spec.n, IrrepCaps { max_weight: a.max_irrep_weight, max_n: a.max_irrep_n });
    doc.insert("group".into(), json!(spec.group));
    doc.insert("N".into(), json!(spec.n));
    doc.insert("factors".into(), json!(spec.factors));
    let show = |v: ExactValue| json!(v.to_string());
    if a.mode.exact() {
        gated(all, "exact", doc, engine.integrate_exact(spec), show)?;
    }
    if a.mode.leading() {
        gated(all, "leading", doc, engine.asymptotic(spec), show)?;
    }
    if let (true, Some(seed)) = (a.mode.mc(), seed) {
        let est: McEstimate = engine.integrate_mc(spec, a.stochastic.samples, seed)?;
        doc.insert("mc".into(), est.to_json());
    }
    doc.insert("dropped_basis_vectors".into(), json!(engine.dropped_basis_vectors(spec)?));
    Ok(())
}

#[derive(Args, Debug)]
pub struct Su2Args {
    /// JSON spec file `{"factors":[{"twice_j","twice_mp","twice_m","conj"}]}`.
    #[arg(long, required_unless_present = "factors")]
    spec: Option<PathBuf>,
    /// Inline factors `2J,2m′,2m[,±]` separated by `;`.
    #[arg(long, conflicts_with = "spec", allow_hyphen_values = true)]
    factors: Option<String>,
    /// Gauss–Legendre nodes per Euler angle.
    #[arg(long, default_value_t = DEFAULT_QUADRATURE_NODES)]
    nodes: usize,
}

fn parse_su2_factors(text: &str) -> CliResult<Vec<Su2Factor>> {
    let mut out = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(',').map(str::trim).collect();
        let bad = || CliError::usage(format!("bad SU(2) factor {item:?}; expected 2J,2m′,2m[,±]"));
        if parts.len() < 3 || parts.len() > 4 {
            return Err(bad());
        }
        let conj = match parts.get(3).copied().unwrap_or("+") {
            "+" | "" => false,
            "-" | "*" => true,
            _ => return Err(bad()),
        };
        out.push(Su2Factor {
            twice_j: parts[0].parse().map_err(|_| bad())?,
            twice_mp: parts[1].parse().map_err(|_| bad())?,
            twice_m: parts[2].parse().map_err(|_| bad())?,
            conj,
        });
    }
    Ok(out)
}

pub fn su2(a: Su2Args) -> CliResult<Report> {
    let spec = match (&a.spec, &a.factors) {
        (Some(p), _) => Su2MonomialSpec::from_json(&read_file(p)?)?,
        (None, Some(f)) => Su2MonomialSpec::new(parse_su2_factors(f)?)?,
        (None, None) => return Err(CliError::usage("pass --spec or --factors")),
    };
    let exact = su2_integral_exact(&spec)?;
    let binomial = su2_integral_binomial(&spec)?;
    let closed = exact.to_f64();
    let quad = su2_integral_quadrature_complex(&spec, a.nodes)?;
    Ok(Report::single(json!({
        "factors": spec.factors,
        "closed": closed,
        "closed_exact": exact.to_string(),
        "binomial_exact": binomial.to_string(),
        "routes_agree": exact == binomial,
        "quadrature": quad.re,
        "quadrature_im": quad.im,
        "abs_diff": (quad.re - closed).abs(),
        "nodes": a.nodes,
    })))
}

#[derive(Args, Debug)]
pub struct Su2ScanArgs {
    /// Number of plain (and of conjugated) factors.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Largest 2J in the table.
    #[arg(long, default_value_t = 20)]
    max_twice_j: u32,
}

pub fn su2_scan(a: Su2ScanArgs) -> CliResult<Report> {
    let js: Vec<u32> = (0..=a.max_twice_j).collect();
    let rows: Vec<Value> = equal_spin_scan(a.k, &js)?.into_iter().map(|r| json!(r)).collect();
    Ok(Report { document: json!({"k": a.k, "rows": rows}), rows })
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[arg(long, required_unless_present = "grid", requires = "n")]
    m: Option<usize>,
    #[arg(long, required_unless_present = "grid", requires = "m")]
    n: Option<usize>,
    /// Several sizes at once, e.g. `2x2,2x3,3x3`.
    #[arg(long, conflicts_with_all = ["m", "n"])]
    grid: Option<String>,
    #[command(flatten)]
    stochastic: Stochastic,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

fn parse_grid(text: &str) -> CliResult<Vec<(usize, usize)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let bad = || CliError::usage(format!("bad grid entry {item:?}; expected MxN"));
            let (m, n) = item.split_once(['x', 'X']).ok_or_else(bad)?;
            Ok((m.trim().parse().map_err(|_| bad())?, n.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn entropy(a: EntropyArgs) -> CliResult<Report> {
    let seed = require_seed(&a.stochastic)?;
    let sizes = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => vec![(a.m.unwrap(), a.n.unwrap())],
    };
    let scale = if a.bits { 1.0 / std::f64::consts::LN_2 } else { 1.0 };
    let mut rows = Vec::new();
    for (m, n) in sizes {
        if m == 0 || n == 0 {
            return Err(CliError::usage("dimensions must be positive"));
        }
        // the average is symmetric in the two factors
        let (small, large) = (m.min(n), m.max(n));
        let exact = page_entropy_exact_rational(small, large)?;
        let mut mc = mc_average_entropy(m, n, a.stochastic.samples, seed)?;
        mc.mean *= scale;
        mc.stderr *= scale;
        rows.push(json!({
            "m": m,
            "n": n,
            "exact": scalar::to_f64(&exact) * scale,
            "exact_rational_nats": scalar::format(&exact),
            "approx": page_entropy_approx(small, large) * scale,
            "mc": mc.to_json(),
            "units": if a.bits { "bits" } else { "nats" },
            "seed": seed,
            "samples": a.stochastic.samples,
        }));
    }
    let document = if rows.len() == 1 { rows[0].clone() } else { json!({"rows": rows}) };
    Ok(Report { document, rows })
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    group: Group,
    /// Matrix size (rank for Sp).
    #[arg(long = "N")]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, env = "HAARINT_SEED")]
    seed: Option<u64>,
}

pub fn sample(a: SampleArgs) -> CliResult<Report> {
    let seed = a.seed.ok_or_else(|| CliError::usage("sampling needs a seed: pass --seed or set HAARINT_SEED"))?;
    if a.n == 0 {
        return Err(CliError::usage("N must be positive"));
    }
    let rows: Vec<Value> = (0..a.count as u64)
        .map(|i| {
            let u = draw(a.group, a.n, RngStream::new(seed, i));
            let d = u.dim();
            let matrix: Vec<Vec<Value>> = (0..d).map(|r| (0..d).map(|c| complex_json(u.entry(r, c))).collect()).collect();
            json!({
                "index": i,
                "group": a.group,
                "N": a.n,
                "seed": seed,
                "det": complex_json(u.determinant()),
                "unitarity_residual": u.unitarity_residual(),
                "matrix": matrix,
            })
        })
        .collect();
    Ok(Report { document: json!({"group": a.group, "N": a.n, "seed": seed, "count": a.count, "samples": rows}), rows })
}
