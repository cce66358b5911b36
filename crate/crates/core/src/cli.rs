//! Command-line surface. [`run`] parses arguments and returns the exit code
//! and output; the `graphon` binary only prints them.
//!
//! Exit codes: 0 success, 1 input error, 2 size-guard refusal.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::density::{write_csv, DensityOptions, DensityRow, DensityValue, RouteRegistry};
use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::groebner::MonomialOrder;
use crate::hadamard::{audit, symmetric_hadamards, HadamardMatrix};
use crate::hom::{hom_poly_with, HomRegistry};
use crate::kernel::Kernel;
use crate::poly::{BasisExport, IdealHandle, SymPolynomial};
use crate::quantum::QuantumGraph;
use crate::rational::format_rational;
use crate::variety::{
    closure_check, hnak_audit_with_ideal, in_variety, intersection_constraint, union_constraint, Bound,
    VarietyConstraint,
};

/// Directory for cached Gröbner bases; unset disables the cache.
pub const CACHE_ENV: &str = "GRAPHON_CACHE_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "graphon",
    version,
    about = "Homomorphism densities, quantum graphs and kernel varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homomorphism density t(g, W).
    Density(DensityArgs),
    /// Homomorphism polynomial hom(g, X).
    Hompoly(HompolyArgs),
    /// Gröbner basis of an ideal and membership tests.
    Ideal(IdealArgs),
    /// Kernel variety membership.
    Variety(VarietyArgs),
    /// Pre-ideal closure check t(g F, W) = 0 over small multigraphs F.
    Closure(ClosureArgs),
    /// Hadamard graphon densities.
    Hadamard(HadamardArgs),
    /// Radical membership against vanishing on test kernels.
    Hnak(HnakArgs),
}

#[derive(Args, Debug)]
struct DensityArgs {
    /// Graph or quantum-graph expression.
    #[arg(long, alias = "expr")]
    graph: String,
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long, default_value = RouteRegistry::DEFAULT)]
    route: String,
    #[arg(long, default_value_t = crate::density::DEFAULT_SAMPLES)]
    samples: u64,
}

#[derive(Args, Debug)]
struct HompolyArgs {
    #[arg(long)]
    expr: String,
    #[arg(long)]
    q: usize,
    #[arg(long, default_value = HomRegistry::DEFAULT)]
    counter: String,
}

#[derive(Args, Debug)]
struct IdealSource {
    #[arg(long)]
    q: usize,
    /// One expression per line; `poly:` lines are polynomials.
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Generator expression, repeatable.
    #[arg(long = "gen")]
    gens: Vec<String>,
    #[arg(long, default_value = "grevlex")]
    order: String,
    /// Maximum S-polynomial reductions.
    #[arg(long, default_value_t = crate::groebner::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args, Debug)]
struct IdealArgs {
    #[command(flatten)]
    source: IdealSource,
    /// Expression or `poly:` polynomial to test, repeatable.
    #[arg(long = "member")]
    members: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Combine {
    Union,
    Intersection,
}

#[derive(Args, Debug)]
struct VarietyArgs {
    #[arg(long)]
    kernel: PathBuf,
    /// Defining quantum graph, repeatable.
    #[arg(long = "expr", required = true)]
    exprs: Vec<String>,
    #[arg(long, value_enum, default_value_t = Combine::Intersection)]
    combine: Combine,
}

#[derive(Args, Debug)]
struct ClosureArgs {
    #[arg(long)]
    kernel: PathBuf,
    #[arg(long)]
    expr: String,
    #[arg(long, default_value_t = 4)]
    vertices: usize,
    #[arg(long, default_value_t = 4)]
    edges: usize,
}

#[derive(Args, Debug)]
struct HadamardArgs {
    /// Audit every symmetric Hadamard matrix of this order.
    #[arg(long, conflicts_with = "matrix")]
    order: Option<usize>,
    /// JSON integer matrix.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    graph: String,
    #[arg(long)]
    compare_closed_form: bool,
}

#[derive(Args, Debug)]
struct HnakArgs {
    #[command(flatten)]
    source: IdealSource,
    #[arg(long = "candidate", required = true)]
    candidates: Vec<String>,
    /// Kernel file (one kernel or an array), repeatable.
    #[arg(long = "kernels", required = true)]
    kernels: Vec<PathBuf>,
}

/// Exit code and rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli).and_then(|text| emit(&cli, text)) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: if e.is_size_refusal() { 2 } else { 1 },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn emit(cli: &Cli, text: String) -> Result<String> {
    match &cli.out {
        Some(path) => {
            fs::write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Density(a) => density(a, cli.seed, csv),
        Command::Hompoly(a) => hompoly(a, csv),
        Command::Ideal(a) => ideal(a, csv),
        Command::Variety(a) => variety(a, csv),
        Command::Closure(a) => closure(a, csv),
        Command::Hadamard(a) => hadamard(a, csv),
        Command::Hnak(a) => hnak(a, csv),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn to_csv<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_kernel(path: &Path) -> Result<Kernel> {
    Kernel::from_json(&read(path)?).map_err(|e| match e {
        Error::Io(m) => Error::Io(m),
        other => Error::InvalidKernel(format!("{}: {other}", path.display())),
    })
}

/// Kernels from a file holding one kernel object or an array of them.
fn read_kernels(path: &Path) -> Result<Vec<(String, Kernel)>> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let name = path.display().to_string();
    match value {
        serde_json::Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(k, v)| Ok((format!("{name}#{k}"), Kernel::from_json(&v.to_string())?)))
            .collect(),
        _ => Ok(vec![(name, Kernel::from_json(&text)?)]),
    }
}

fn density(a: &DensityArgs, seed: u64, csv: bool) -> Result<String> {
    let g = parse_expr(&a.graph)?;
    let w = read_kernel(&a.kernel)?;
    let route = RouteRegistry::default().get(&a.route)?;
    let opts = DensityOptions {
        samples: a.samples,
        seed,
    };
    let result = route.evaluate(&g, &w, &opts)?;
    if csv {
        let mut out = Vec::new();
        write_csv(
            &[DensityRow::new(&a.graph, a.kernel.display().to_string(), &result)],
            &mut out,
        )?;
        return String::from_utf8(out).map_err(|e| Error::Io(e.to_string()));
    }
    match &result.value {
        DensityValue::Exact(r) => to_json(&json!({ "value": format_rational(r) })),
        DensityValue::Estimate {
            mean,
            std_error,
            samples,
        } => to_json(&json!({
            "value": mean,
            "std_error": std_error,
            "samples": samples,
            "seed": seed,
        })),
    }
}

fn hompoly(a: &HompolyArgs, csv: bool) -> Result<String> {
    let g = parse_expr(&a.expr)?;
    let counter = HomRegistry::default().get(&a.counter)?;
    let p = hom_poly_with(&g, a.q, counter.as_ref())?;
    #[derive(Serialize)]
    struct Row<'a> {
        expr: &'a str,
        q: usize,
        polynomial: String,
        compact: String,
    }
    let row = Row {
        expr: &a.expr,
        q: a.q,
        polynomial: p.to_string(),
        compact: p.to_compact_string(),
    };
    if csv {
        to_csv(&[row])
    } else {
        to_json(&row)
    }
}

struct Generators {
    graphs: Vec<QuantumGraph>,
    polys: Vec<SymPolynomial>,
}

/// `poly:` lines are polynomials; blank lines and `#` comments are skipped.
fn parse_generator_lines(text: &str, q: usize, gens: &mut Generators) -> Result<()> {
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let located = |e: Error| Error::InvalidInput(format!("generator line {}: {e}", k + 1));
        parse_generator(line, q, gens).map_err(located)?;
    }
    Ok(())
}

fn parse_generator(text: &str, q: usize, gens: &mut Generators) -> Result<()> {
    match text.strip_prefix("poly:") {
        Some(p) => gens.polys.push(SymPolynomial::parse(p, q)?),
        None => gens.graphs.push(parse_expr(text)?.unlabel()?),
    }
    Ok(())
}

fn load_generators(src: &IdealSource) -> Result<Generators> {
    let mut gens = Generators {
        graphs: Vec::new(),
        polys: Vec::new(),
    };
    if let Some(path) = &src.generators {
        parse_generator_lines(&read(path)?, src.q, &mut gens)?;
    }
    for g in &src.gens {
        parse_generator(g, src.q, &mut gens)?;
    }
    if gens.graphs.is_empty() && gens.polys.is_empty() {
        return Err(Error::InvalidInput("no generators given".into()));
    }
    Ok(gens)
}

fn build_ideal(src: &IdealSource, gens: &Generators) -> Result<IdealHandle> {
    let order = MonomialOrder::from_name(&src.order)?;
    let mut polys = Vec::new();
    for g in &gens.graphs {
        polys.push(crate::hom::hom_poly(g, src.q)?);
    }
    polys.extend(gens.polys.iter().cloned());
    let handle = IdealHandle::new(src.q, polys)?
        .with_order(order)
        .with_budget(src.budget);
    cached_basis(handle)
}

/// Content digest of `(q, order, generators)`.
pub fn cache_key(ideal: &IdealHandle) -> String {
    let mut text = format!("q={}\norder={}\n", ideal.q(), ideal.order().name());
    for g in ideal.generators() {
        let _ = writeln!(text, "{g}");
    }
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Loads a verified basis from the cache directory, or computes and stores
/// one. Unreadable or unverifiable entries are recomputed.
fn cached_basis(ideal: IdealHandle) -> Result<IdealHandle> {
    let Some(dir) = std::env::var_os(CACHE_ENV) else {
        ideal.groebner_basis()?;
        return Ok(ideal);
    };
    let path = PathBuf::from(dir).join(format!("{}.json", cache_key(&ideal)));
    if let Some(basis) = fs::read_to_string(&path)
        .ok()
        .and_then(|t| serde_json::from_str::<BasisExport>(&t).ok())
        .and_then(|e| {
            e.basis
                .iter()
                .map(|b| SymPolynomial::parse(b, ideal.q()))
                .collect::<Result<Vec<_>>>()
                .ok()
        })
    {
        let fresh = IdealHandle::new(ideal.q(), ideal.generators().to_vec())?.with_order(ideal.order());
        if let Ok(h) = fresh.with_cached_basis(basis) {
            return Ok(h);
        }
    }
    ideal.groebner_basis()?;
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(&path, to_json(&ideal.export()?)?)?;
    Ok(ideal)
}

fn ideal(a: &IdealArgs, csv: bool) -> Result<String> {
    let gens = load_generators(&a.source)?;
    let handle = build_ideal(&a.source, &gens)?;
    #[derive(Serialize)]
    struct Member {
        element: String,
        polynomial: String,
        ideal_member: bool,
        radical_member: bool,
    }
    let mut members = Vec::new();
    for m in &a.members {
        let p = match m.strip_prefix("poly:") {
            Some(p) => SymPolynomial::parse(p, a.source.q)?,
            None => crate::hom::hom_poly(&parse_expr(m)?.unlabel()?, a.source.q)?,
        };
        members.push(Member {
            element: m.clone(),
            polynomial: p.to_compact_string(),
            ideal_member: handle.ideal_member(&p)?,
            radical_member: handle.radical_member(&p)?,
        });
    }
    let export = handle.export()?;
    if csv {
        #[derive(Serialize)]
        struct Row<'a> {
            kind: &'a str,
            index: usize,
            polynomial: &'a str,
        }
        let rows: Vec<Row> = export
            .basis
            .iter()
            .enumerate()
            .map(|(index, p)| Row {
                kind: "basis",
                index,
                polynomial: p,
            })
            .collect();
        return to_csv(&rows);
    }
    to_json(&json!({
        "q": export.q,
        "order": export.order,
        "generators": export.generators,
        "basis": export.basis,
        "members": members,
    }))
}

fn variety(a: &VarietyArgs, csv: bool) -> Result<String> {
    let w = read_kernel(&a.kernel)?;
    let cs = a
        .exprs
        .iter()
        .map(|e| {
            let g = parse_expr(e)?;
            if g.is_zero() {
                Ok(VarietyConstraint::trivial())
            } else {
                VarietyConstraint::new(g)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let c = match a.combine {
        Combine::Intersection => intersection_constraint(&cs)?,
        Combine::Union => cs[1..]
            .iter()
            .try_fold(cs[0].clone(), |acc, c| union_constraint(&acc, c))?,
    };
    let c = if cs.len() == 1 { cs[0].clone() } else { c };
    let density = crate::density::t_quantum(c.defining_graph(), &w)?;
    #[derive(Serialize)]
    struct Row {
        kernel: String,
        constraint: String,
        provenance: crate::variety::Provenance,
        density: String,
        member: bool,
    }
    let row = Row {
        kernel: a.kernel.display().to_string(),
        constraint: c.defining_graph().to_string(),
        provenance: c.provenance(),
        density: format_rational(&density),
        member: in_variety(&w, &c)?,
    };
    if csv {
        to_csv(&[row])
    } else {
        to_json(&row)
    }
}

fn closure(a: &ClosureArgs, csv: bool) -> Result<String> {
    let w = read_kernel(&a.kernel)?;
    let g = parse_expr(&a.expr)?;
    let bound = Bound {
        vertices: a.vertices,
        edges: a.edges,
    };
    let report = closure_check(&w, &a.kernel.display().to_string(), &g, bound)?;
    if csv {
        return to_csv(&report.violations);
    }
    to_json(&report)
}

fn hadamard(a: &HadamardArgs, csv: bool) -> Result<String> {
    let g = parse_expr(&a.graph)?;
    let matrices = match (&a.order, &a.matrix) {
        (Some(n), _) => symmetric_hadamards(*n)?,
        (None, Some(path)) => {
            let m: HadamardMatrix =
                serde_json::from_str(&read(path)?).map_err(|e| Error::InvalidMatrix(e.to_string()))?;
            vec![m]
        }
        (None, None) => {
            return Err(Error::InvalidInput("give --order or --matrix".into()));
        }
    };
    let audits = matrices
        .iter()
        .map(|b| audit(&g, b, a.compare_closed_form))
        .collect::<Result<Vec<_>>>()?;
    if csv {
        #[derive(Serialize)]
        struct Row {
            matrix: String,
            graph: String,
            density: String,
            map_probability: String,
            closed_form: String,
        }
        let rows: Vec<Row> = audits
            .iter()
            .map(|x| Row {
                matrix: serde_json::to_string(&x.matrix).unwrap_or_default(),
                graph: x.graph.clone(),
                density: format_rational(&x.density),
                map_probability: format_rational(&x.map_probability),
                closed_form: x.closed_form.as_ref().map(format_rational).unwrap_or_default(),
            })
            .collect();
        return to_csv(&rows);
    }
    to_json(&audits)
}

fn hnak(a: &HnakArgs, csv: bool) -> Result<String> {
    let gens = load_generators(&a.source)?;
    let ideal = build_ideal(&a.source, &gens)?;
    let candidates = a.candidates.iter().map(|c| parse_expr(c)).collect::<Result<Vec<_>>>()?;
    let mut kernels = Vec::new();
    for path in &a.kernels {
        kernels.extend(read_kernels(path)?);
    }
    let report = hnak_audit_with_ideal(&ideal, &gens.graphs, &candidates, &kernels)?;
    if csv {
        #[derive(Serialize)]
        struct Row<'a> {
            candidate: &'a str,
            kernel: &'a str,
            radical_member: bool,
            density: &'a str,
            finding: crate::variety::Finding,
        }
        let rows: Vec<Row> = report
            .candidates
            .iter()
            .flat_map(|c| {
                c.outcomes.iter().map(move |o| Row {
                    candidate: &c.candidate,
                    kernel: &o.kernel,
                    radical_member: c.radical_member,
                    density: &o.density,
                    finding: o.finding,
                })
            })
            .collect();
        return to_csv(&rows);
    }
    to_json(&report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> String {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    #[test]
    fn density_half_c4() {
        let dir = tempfile::tempdir().unwrap();
        let k = write(dir.path(), "half.json", r#"{"steps":["1"],"values":[["1/2"]]}"#);
        let out = run(["graphon", "density", "--graph", "C4", "--kernel", &k]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v, json!({"value": "1/16"}));
    }

    #[test]
    fn hompoly_k2() {
        let out = run(["graphon", "hompoly", "--expr", "K2", "--q", "2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["compact"], "x11 + 2 x12 + x22");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(["graphon", "hompoly", "--expr", "K2^", "--q", "2"]).code, 1);
        assert_eq!(run(["graphon", "bogus"]).code, 1);
        assert_eq!(run(["graphon", "--help"]).code, 0);
        assert_eq!(run(["graphon", "hadamard", "--order", "8", "--graph", "K2"]).code, 2);
        assert_eq!(
            run(["graphon", "hompoly", "--expr", "K12", "--q", "40", "--counter", "brute"]).code,
            2
        );
    }

    #[test]
    fn csv_density() {
        let dir = tempfile::tempdir().unwrap();
        let k = write(dir.path(), "half.json", r#"{"steps":["1"],"values":[["1/2"]]}"#);
        let out = run(["graphon", "density", "--graph", "C4", "--kernel", &k, "--format", "csv"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.starts_with("graph,kernel,route,value,error\nC4,"));
        assert!(out.stdout.ends_with(",step,1/16,\n"));
    }

    #[test]
    fn cache_key_is_stable() {
        let x = |i, j| SymPolynomial::var(2, i, j).unwrap();
        let a = IdealHandle::new(2, vec![x(1, 1), x(1, 2)]).unwrap();
        let b = IdealHandle::new(2, vec![x(1, 1), x(1, 2)]).unwrap();
        assert_eq!(cache_key(&a), cache_key(&b));
        let c = IdealHandle::new(2, vec![x(1, 2), x(1, 1)]).unwrap();
        assert_ne!(cache_key(&a), cache_key(&c));
    }
}
