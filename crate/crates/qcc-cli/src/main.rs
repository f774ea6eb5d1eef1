//! Command-line front end for the quantum cluster variable engines:
//! seed mutation, subrepresentation-count expansion, count tables,
//! two-vertex series, polygon path sums, root labeling, and the
//! cross-engine verification driver.
//!
//! Exit codes: 0 success, 2 invalid input, 3 internal exactness
//! violation (a division that should be exact failed).

mod render;
mod verify;

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use qcc::catalog::{family_of_quiver, family_quiver, rep_label_sequence, rank2_variable_walk, FAMILIES};
use qcc::cc::cc_expand;
use qcc::count::{enumerate_subreps, kronecker_table, recursion_counts, CountMode, CountTable, KroneckerSide};
use qcc::linalg::IMat;
use qcc::quiver::{rank2_root, RootContext, ValuedQuiver};
use qcc::rep::{build_example_rep, ValuedRep};
use qcc::seed::{variable_by_label, CompatiblePair};
use qcc::torus::SkewForm;
use qcc::tpath::{enumerate_tpaths, tpath_expand, Frozen, Triangulation};

use render::{pretty, render_element, render_specialized, Format};
use verify::{run_suite, Suite};

#[derive(Parser)]
#[command(name = "qcc", version, about = "Exact quantum cluster variables: mutation, counting, and path-sum engines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutate a seed along a sequence and print one cluster variable
    Mutate {
        /// Seed JSON file, or a family name (a2, c2, g2, kronecker, rank4)
        seed: String,
        /// Mutation directions, 1-based, comma separated (may be empty)
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        seq: Vec<String>,
        /// Which variable of the final cluster to print, 1-based
        #[arg(long)]
        var: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Expand a module's cluster character over a seed's quiver
    Cc {
        /// Seed JSON file, or a family name
        seed: String,
        /// Module: a catalog name (s1, i2, p3, m23, ...) or a
        /// representation JSON file (counted over its finite field)
        #[arg(long, conflicts_with = "sequence")]
        rep: Option<String>,
        /// Reflection label sequence, 1-based, instead of a named module
        #[arg(long, value_delimiter = ',')]
        sequence: Option<Vec<String>>,
        /// Specialize the quantum parameter at this integer (accepts p^m)
        #[arg(long, conflicts_with = "generic")]
        field: Option<String>,
        /// Keep the quantum parameter formal
        #[arg(long)]
        generic: bool,
        /// Enumeration work bound for representation files
        #[arg(long, default_value_t = 1u128 << 28)]
        budget: u128,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the subrepresentation count table of a representation file
    Gr {
        /// Representation JSON file
        rep: String,
        /// Counting engine
        #[arg(long, value_enum)]
        mode: GrMode,
        /// Reflection label sequence (1-based), required for --mode recursion
        #[arg(long, value_delimiter = ',')]
        sequence: Option<Vec<String>>,
        /// Enumeration work bound
        #[arg(long, default_value_t = 1u128 << 28)]
        budget: u128,
        /// Evaluate polynomial counts at this field size
        #[arg(long)]
        at_q: Option<i64>,
    },
    /// Print the m-th variable of the two-vertex exchange sequence
    Rank2 {
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        /// Variable label (1 and 2 are the initial cluster; other
        /// integers walk the exchange sequence)
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Expand the variable of a polygon diagonal as a path sum
    Tpath {
        /// Triangulation JSON file: {"n": int, "diagonals": [[a,b]]}
        triangulation: String,
        /// Target diagonal as two vertices a,b (numbered 0..n+2 as in the file)
        #[arg(long, value_delimiter = ',')]
        diag: Vec<usize>,
        /// Boundary coordinates: keep them or set them to 1
        #[arg(long, value_enum, default_value = "one")]
        frozen: FrozenOpt,
        /// Also list the admissible paths, one per line
        #[arg(long)]
        list_paths: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the dimension vector of a labeled two-vertex root
    Roots {
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a cross-engine verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Number of random trials for the properties suite
        #[arg(long, default_value_t = 40)]
        budget: u64,
        /// Include wall-clock timings (off by default so output is
        /// byte-identical across runs)
        #[arg(long)]
        timings: bool,
        /// Output report as JSON instead of text lines
        #[arg(long)]
        json: bool,
    },
    /// Print the JSON of a bundled example representation
    ExampleRep {
        /// Family: a2, c2, g2, or kronecker
        #[arg(long)]
        family: String,
        /// Module name within the family
        #[arg(long)]
        name: String,
        /// Base field characteristic
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum GrMode {
    Enum,
    Recursion,
    Kronecker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FrozenOpt {
    Keep,
    One,
}

/// An error carrying its exit code: 2 for invalid input, 3 for an
/// internal exactness violation.
pub struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn invalid(msg: impl Into<String>) -> Self {
        CliError { code: 2, msg: msg.into() }
    }
}

impl From<qcc::Error> for CliError {
    fn from(e: qcc::Error) -> Self {
        let code = match &e {
            qcc::Error::NonExactDivision(_) | qcc::Error::FractionalPower(_) => 3,
            _ => 2,
        };
        CliError { code, msg: e.to_string() }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `qcc ... | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mutate { seed, seq, var, format } => {
            let pair = load_pair(&seed)?;
            let seq = parse_indices(&seq, pair.mutable(), "mutation direction")?;
            if var == 0 || var > pair.m() {
                return Err(CliError::invalid(format!(
                    "variable label must be between 1 and {}",
                    pair.m()
                )));
            }
            let x = variable_by_label(&pair, var - 1, &seq)?;
            println!("{}", render_element(&x, format));
            Ok(())
        }
        Command::Cc { seed, rep, sequence, field, generic, budget, format } => {
            let pair = load_pair(&seed)?;
            let field = field.map(|f| parse_field(&f)).transpose()?;
            if field.is_none() && !generic {
                return Err(CliError::invalid("choose --generic or --field <q>"));
            }
            let counts = match (rep, sequence) {
                (Some(r), None) => rep_counts(&pair, &r, field, budget)?,
                (None, Some(s)) => {
                    let seq = parse_indices(&s, pair.quiver().n(), "sequence entry")?;
                    recursion_counts(pair.quiver(), &seq)?
                }
                _ => {
                    return Err(CliError::invalid("choose exactly one of --rep / --sequence"))
                }
            };
            let ctx = RootContext::new(pair.quiver());
            let x = cc_expand(&ctx, pair.form(), &counts)?;
            match field {
                None => println!("{}", render_element(&x, format)),
                Some(q0) => println!("{}", render_specialized(&x, q0, format)?),
            }
            Ok(())
        }
        Command::Gr { rep, mode, sequence, budget, at_q } => {
            let rep = load_rep(&rep)?;
            let mut table = match mode {
                GrMode::Enum => enumerate_subreps(&rep, budget)?,
                GrMode::Recursion => {
                    let s = sequence.ok_or_else(|| {
                        CliError::invalid("--mode recursion needs --sequence")
                    })?;
                    let seq = parse_indices(&s, rep.quiver().n(), "sequence entry")?;
                    let t = recursion_counts(rep.quiver(), &seq)?;
                    if t.class != rep.class() {
                        return Err(CliError::invalid(format!(
                            "sequence reaches class {:?} but the file has {:?}",
                            t.class,
                            rep.class()
                        )));
                    }
                    t
                }
                GrMode::Kronecker => kronecker_side_of(&rep)
                    .map(|(side, n)| kronecker_table(side, n))
                    .ok_or_else(|| {
                        CliError::invalid(
                            "--mode kronecker needs a module of the doubled-valuation \
                             two-vertex series",
                        )
                    })?,
            };
            if let Some(q0) = at_q {
                let ctx = RootContext::new(rep.quiver());
                table = match table.mode {
                    CountMode::Normalized => table.to_polynomial(&ctx)?.specialize(q0)?,
                    CountMode::Polynomial => table.specialize(q0)?,
                    CountMode::IntegerAt(p) => {
                        if q0 != p {
                            return Err(CliError::invalid(format!(
                                "table is already specialized at q = {p}"
                            )));
                        }
                        table
                    }
                };
            }
            println!("{}", pretty(&table.to_json()));
            Ok(())
        }
        Command::Rank2 { b, c, m, format } => {
            let pair = rank2_pair(b, c)?;
            let (walk, slot) = rank2_variable_walk(m);
            let x = variable_by_label(&pair, slot, &walk)?;
            println!("{}", render_element(&x, format));
            Ok(())
        }
        Command::Tpath { triangulation, diag, frozen, list_paths, format } => {
            let t = load_triangulation(&triangulation)?;
            if diag.len() != 2 {
                return Err(CliError::invalid("--diag takes exactly two vertices, e.g. --diag 1,3"));
            }
            let (a, b) = (diag[0], diag[1]);
            if list_paths {
                for p in enumerate_tpaths(&t, a, b)? {
                    let v: Vec<String> = p.vertices.iter().map(|x| x.to_string()).collect();
                    let l: Vec<String> = p.labels.iter().map(|x| x.to_string()).collect();
                    println!("({} : {})", v.join(","), l.join(","));
                }
            }
            let frozen = match frozen {
                FrozenOpt::Keep => Frozen::Keep,
                FrozenOpt::One => Frozen::One,
            };
            let x = tpath_expand(&t, a, b, frozen)?;
            println!("{}", render_element(&x, format));
            Ok(())
        }
        Command::Roots { b, c, m, format } => {
            let root = rank2_root(b, c, m)?;
            match format {
                Format::Json => println!("{}", Value::from(root.clone())),
                Format::Text | Format::Latex => {
                    let body: Vec<String> = root.iter().map(|x| x.to_string()).collect();
                    println!("({})", body.join(","));
                }
            }
            Ok(())
        }
        Command::Verify { suite, budget, timings, json } => {
            let results = run_suite(suite, budget);
            let mut failed = 0usize;
            if json {
                let rows: Vec<Value> = results
                    .iter()
                    .map(|r| {
                        let mut obj = Map::new();
                        obj.insert("name".into(), r.name.clone().into());
                        obj.insert("ok".into(), r.outcome.is_ok().into());
                        if let Err(e) = &r.outcome {
                            obj.insert("error".into(), e.clone().into());
                        }
                        if timings {
                            obj.insert("ms".into(), (r.millis as u64).into());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                println!("{}", pretty(&Value::Array(rows)));
                failed = results.iter().filter(|r| r.outcome.is_err()).count();
            } else {
                for r in &results {
                    let time = if timings { format!(" ({} ms)", r.millis) } else { String::new() };
                    match &r.outcome {
                        Ok(()) => println!("PASS {}{}", r.name, time),
                        Err(e) => {
                            failed += 1;
                            println!("FAIL {}{}: {}", r.name, time, e);
                        }
                    }
                }
                println!("{} checks, {} failed", results.len(), failed);
            }
            if failed > 0 {
                return Err(CliError { code: 1, msg: format!("{failed} checks failed") });
            }
            Ok(())
        }
        Command::ExampleRep { family, name, p } => {
            let rep = build_example_rep(&family, &name, p)?;
            println!("{}", pretty(&rep.to_json()));
            Ok(())
        }
    }
}

/// Parse 1-based indices from the command line into 0-based ones.
fn parse_indices(raw: &[String], n: usize, what: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::with_capacity(raw.len());
    for s in raw {
        if s.is_empty() {
            continue;
        }
        let v: i64 = s
            .parse()
            .map_err(|_| CliError::invalid(format!("{what} '{s}' is not an integer")))?;
        if v < 1 || v > n as i64 {
            return Err(CliError::invalid(format!(
                "{what} {v} is out of range (labels are 1..{n})"
            )));
        }
        out.push((v - 1) as usize);
    }
    Ok(out)
}

/// Parse a field size given as an integer or as p^m.
fn parse_field(s: &str) -> Result<i64, CliError> {
    let value = match s.split_once('^') {
        Some((p, m)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad_field(s))?;
            let m: u32 = m.trim().parse().map_err(|_| bad_field(s))?;
            p.checked_pow(m).ok_or_else(|| bad_field(s))?
        }
        None => s.trim().parse().map_err(|_| bad_field(s))?,
    };
    if value < 2 {
        return Err(bad_field(s));
    }
    Ok(value)
}

fn bad_field(s: &str) -> CliError {
    CliError::invalid(format!("'{s}' is not a field size (use an integer or p^m)"))
}

/// Resolve --rep for the cc command: a catalog module name expands via
/// the reflection recursion; a file path is counted over its own field.
fn rep_counts(
    pair: &CompatiblePair,
    rep: &str,
    field: Option<i64>,
    budget: u128,
) -> Result<CountTable, CliError> {
    if Path::new(rep).exists() {
        let loaded = load_rep(rep)?;
        if loaded.quiver() != pair.quiver() {
            return Err(CliError::invalid(
                "the representation file's quiver differs from the seed's",
            ));
        }
        let order = loaded.base_order() as i64;
        match field {
            Some(q0) if q0 == order => {}
            _ => {
                return Err(CliError::invalid(format!(
                    "an enumerated module is counted at its own field size; \
                     pass --field {order}"
                )))
            }
        }
        return Ok(enumerate_subreps(&loaded, budget)?);
    }
    let family = family_of_quiver(pair.quiver()).ok_or_else(|| {
        CliError::invalid(
            "named modules exist only for the catalog families; \
             pass a representation file instead",
        )
    })?;
    let seq = rep_label_sequence(family, &rep.to_lowercase())?;
    Ok(recursion_counts(pair.quiver(), &seq)?)
}

fn kronecker_side_of(rep: &ValuedRep) -> Option<(KroneckerSide, i64)> {
    if family_of_quiver(rep.quiver()) != Some("kronecker") {
        return None;
    }
    let class = rep.class();
    let (a, b) = (class[0], class[1]);
    if b == a + 1 {
        Some((KroneckerSide::Preprojective, a))
    } else if a == b + 1 {
        Some((KroneckerSide::Preinjective, b))
    } else {
        None
    }
}

fn rank2_pair(b: i64, c: i64) -> Result<CompatiblePair, CliError> {
    if b < 1 || c < 1 {
        return Err(CliError::invalid("edge weights must be positive"));
    }
    Ok(CompatiblePair::from_invertible(ValuedQuiver::rank2(b, c))?)
}

fn read_json(path: &str) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::invalid(format!("{path} is not valid JSON: {e}")))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<(), CliError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::invalid(format!(
                "unknown field '{key}' in {what} (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

/// Load a seed: a catalog family name, or a JSON file
/// {"n", "B", "D", "lambda"?, "coeffs"?} where lambda entries are
/// [numerator, denominator] pairs; without lambda, "coeffs" selects
/// "none" (form from the invertible exchange matrix) or "principal".
fn load_pair(spec: &str) -> Result<CompatiblePair, CliError> {
    if FAMILIES.contains(&spec) {
        return Ok(CompatiblePair::from_invertible(family_quiver(spec)?)?);
    }
    let v = read_json(spec)?;
    let obj = v
        .as_object()
        .ok_or_else(|| CliError::invalid("seed JSON must be an object"))?;
    check_keys(obj, &["n", "B", "D", "lambda", "coeffs"], "seed JSON")?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::invalid("seed JSON needs integer n"))? as usize;
    let b: IMat = parse_int_matrix(obj.get("B"), n, "B")?;
    let d: Vec<i64> = obj
        .get("D")
        .and_then(Value::as_array)
        .filter(|a| a.len() == n)
        .map(|a| a.iter().map(|x| x.as_i64().unwrap_or(0)).collect())
        .ok_or_else(|| CliError::invalid("seed JSON needs D as a length-n integer list"))?;
    let quiver = ValuedQuiver::new(b, d)?;
    if let Some(lam) = obj.get("lambda") {
        let form = parse_lambda(lam, n)?;
        return Ok(CompatiblePair::new(quiver, form, n)?);
    }
    match obj.get("coeffs").and_then(Value::as_str).unwrap_or("none") {
        "none" => Ok(CompatiblePair::from_invertible(quiver)?),
        "principal" => Ok(CompatiblePair::principal(&quiver)?),
        other => Err(CliError::invalid(format!(
            "coeffs must be \"none\" or \"principal\", got \"{other}\""
        ))),
    }
}

fn parse_int_matrix(v: Option<&Value>, n: usize, what: &str) -> Result<IMat, CliError> {
    let rows = v
        .and_then(Value::as_array)
        .filter(|a| a.len() == n)
        .ok_or_else(|| CliError::invalid(format!("seed JSON needs {what} as an n x n matrix")))?;
    let mut out = Vec::with_capacity(n);
    for row in rows {
        let r = row
            .as_array()
            .filter(|a| a.len() == n)
            .ok_or_else(|| CliError::invalid(format!("{what} rows must have length n")))?;
        let mut or = Vec::with_capacity(n);
        for x in r {
            or.push(
                x.as_i64()
                    .ok_or_else(|| CliError::invalid(format!("{what} entries must be integers")))?,
            );
        }
        out.push(or);
    }
    Ok(out)
}

/// Parse a lambda matrix of [num, den] pairs into a skew form: scale by
/// the common denominator so all entries are integers.
fn parse_lambda(v: &Value, n: usize) -> Result<SkewForm, CliError> {
    let rows = v
        .as_array()
        .filter(|a| a.len() == n)
        .ok_or_else(|| CliError::invalid("lambda must be an n x n matrix of [num,den]"))?;
    let mut num = vec![vec![0i64; n]; n];
    let mut den = vec![vec![1i64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        let r = row
            .as_array()
            .filter(|a| a.len() == n)
            .ok_or_else(|| CliError::invalid("lambda rows must have length n"))?;
        for (j, cell) in r.iter().enumerate() {
            let pair = cell
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| CliError::invalid("lambda entries must be [num, den]"))?;
            num[i][j] = pair[0]
                .as_i64()
                .ok_or_else(|| CliError::invalid("lambda numerators must be integers"))?;
            den[i][j] = pair[1]
                .as_i64()
                .filter(|&x| x > 0)
                .ok_or_else(|| CliError::invalid("lambda denominators must be positive"))?;
        }
    }
    let mut scale: i64 = 1;
    for row in &den {
        for &x in row {
            scale = num_integer::lcm(scale, x);
        }
    }
    let lamd: IMat = (0..n)
        .map(|i| (0..n).map(|j| num[i][j] * (scale / den[i][j])).collect())
        .collect();
    let scale: u32 = scale
        .try_into()
        .map_err(|_| CliError::invalid("lambda denominators are too large"))?;
    Ok(SkewForm::new(scale, lamd)?)
}

/// Load a representation JSON file with strict top-level keys.
fn load_rep(path: &str) -> Result<ValuedRep, CliError> {
    let v = read_json(path)?;
    if let Some(obj) = v.as_object() {
        check_keys(obj, &["field", "quiver", "dims", "arrows"], "representation JSON")?;
    }
    Ok(ValuedRep::from_json(&v)?)
}

fn load_triangulation(path: &str) -> Result<Triangulation, CliError> {
    let v = read_json(path)?;
    if let Some(obj) = v.as_object() {
        check_keys(obj, &["n", "diagonals"], "triangulation JSON")?;
    }
    Ok(Triangulation::from_json(&v)?)
}
