//! Thin command-line adapter over `binclone-core`.
//!
//! [`run`] parses arguments, dispatches to one library operation and
//! serializes the result. Reports are JSON objects carrying `"schema": 1`;
//! windows can also be written as CSV (row = x, column = y).
//!
//! Exit codes: 0 success, 1 usage error, 2 a FALSIFIED verdict or an empty
//! search result, 3 a violated contract (a witness that does not hold, a
//! report that fails validation, a window that does not verify).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use binclone_core::canonize::greedy_canonize;
use binclone_core::generation::{derive_from_non_t2, synthesize_t1_term, DEFAULT_DICHOTOMY_WINDOW, DEFAULT_SYNTH_WINDOW};
use binclone_core::membership::{self, check_t1_window, check_t2_search_with, classify, intersect, SeedFamily, SeedPlan, Witness};
use binclone_core::ops::{serde_nat, window_table};
use binclone_core::trees::{index_of, rank_finite, seq_of, tree_reduce, wf_check};
use binclone_core::{AlmostUnaryWitness, Axis, BinaryBuiltin, BinaryFn, CanonicalReport, Nat, SeqTree, Status, UnaryFn};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Largest accepted window size.
pub const MAX_N: u64 = 10_000;
/// Largest accepted search size.
pub const MAX_K: usize = 20;

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "binclone", version, about = "Binary operations on ℕ and the clones T1, T2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a function at one point
    Eval {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Print f on [0,n)²
    Table {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Look for a canonical witness pair of size k
    Canonize {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        seeds: SeedArgs,
    },
    /// Windowed evidence for membership in T1
    CheckT1 {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        n: u64,
        /// Larger window the maxima must stay stable on [default: 2n]
        #[arg(long)]
        probe: Option<u64>,
    },
    /// Canonical-block search for a counterexample to membership in T2
    CheckT2 {
        #[command(flatten)]
        f: FnArg,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        seeds: SeedArgs,
    },
    /// Decided verdicts for a builtin
    Classify {
        #[command(flatten)]
        f: FnArg,
    },
    /// Build a term over p_delta and unaries equal to an almost-unary function
    SynthT1 {
        #[command(flatten)]
        f: FnArg,
        /// Witness JSON file; defaults to the witness declared in the spec
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        axis: Option<AxisArg>,
        /// Unary spec for the bound, ("builtin:NAME" or a JSON file)
        #[arg(long)]
        bound: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SYNTH_WINDOW)]
        window: u64,
    },
    /// Extract p_delta, or a 1-1 function, from a function outside T2
    Dichotomy {
        #[command(flatten)]
        f: FnArg,
        /// Canonical report JSON; searched for when absent
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[command(flatten)]
        seeds: SeedArgs,
        #[arg(long, default_value_t = DEFAULT_DICHOTOMY_WINDOW)]
        window: u64,
    },
    /// Print the reduction f_T of a tree on [0,n)²
    TreeReduce {
        #[command(flatten)]
        tree: TreeArg,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Rank of a finite tree
    TreeRank {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Well-foundedness of a tree
    TreeWf {
        #[command(flatten)]
        tree: TreeArg,
    },
    /// Convert between an index and its finite sequence
    EnumSeq {
        #[arg(long, conflicts_with = "seq", required_unless_present = "seq")]
        index: Option<String>,
        /// Comma-separated entries; empty for the empty sequence
        #[arg(long)]
        seq: Option<String>,
    },
}

#[derive(Debug, Args)]
struct FnArg {
    /// "builtin:NAME" or a path to a function-spec JSON file
    #[arg(long = "fn", value_name = "SPEC")]
    spec: String,
}

#[derive(Debug, Args)]
struct TreeArg {
    /// Tree JSON file
    #[arg(long)]
    tree: PathBuf,
    /// Add missing prefixes instead of rejecting the tree
    #[arg(long)]
    close: bool,
}

#[derive(Debug, Args)]
struct SeedArgs {
    /// Seed values are drawn below this bound
    #[arg(long, default_value_t = 64)]
    seed_bound: u64,
    #[arg(long, default_value_t = 0)]
    seed_start: u64,
    /// Seed family; all families when absent
    #[arg(long, value_enum)]
    family: Option<Family>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Initial,
    PowersOfTwo,
    FactorialGaps,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Y,
}

enum Failure {
    Usage(String),
    Contract(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn contract(e: impl ToString) -> Failure {
    Failure::Contract(e.to_string())
}

/// Report text and exit code of a successful dispatch.
struct Report {
    code: i32,
    body: String,
}

impl Report {
    fn json(mut v: Value) -> Self {
        Self::json_with_code(0, &mut v)
    }

    fn json_with_code(code: i32, v: &mut Value) -> Self {
        if let Value::Object(m) = v {
            m.insert("schema".into(), SCHEMA.into());
        }
        Report {
            code,
            body: serde_json::to_string_pretty(v).expect("serializable report") + "\n",
        }
    }
}

/// Parse `argv` (including the program name), run and collect the output.
pub fn run<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 1, stdout: String::new(), stderr: text }
            } else {
                Output { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(r) => Output { code: r.code, stdout: r.body, stderr: String::new() },
        Err(Failure::Usage(m)) => Output { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Contract(m)) => Output { code: 3, stdout: String::new(), stderr: format!("contract violation: {m}\n") },
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_fn(spec: &str) -> Result<BinaryFn, Failure> {
    let f = match spec.strip_prefix("builtin:") {
        Some(name) => BinaryFn::builtin(name.parse::<BinaryBuiltin>().map_err(usage)?),
        None => BinaryFn::from_json(&read(Path::new(spec))?).map_err(usage)?,
    };
    Ok(f)
}

fn load_unary(spec: &str) -> Result<UnaryFn, Failure> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Ok(UnaryFn::builtin(name.parse().map_err(usage)?)),
        None => UnaryFn::from_json(&read(Path::new(spec))?).map_err(usage),
    }
}

fn load_tree(t: &TreeArg) -> Result<SeqTree, Failure> {
    SeqTree::from_json(&read(&t.tree)?, t.close).map_err(usage)
}

fn parse_nat(s: &str) -> Result<Nat, Failure> {
    serde_nat::parse_nat(s).ok_or_else(|| usage(format!("not a natural number: {s:?}")))
}

fn check_n(n: u64) -> Result<u64, Failure> {
    if n > MAX_N {
        return Err(usage(format!("window {n} exceeds the cap {MAX_N}")));
    }
    Ok(n)
}

fn check_k(k: usize) -> Result<usize, Failure> {
    if !(2..=MAX_K).contains(&k) {
        return Err(usage(format!("k = {k} is outside [2, {MAX_K}]")));
    }
    Ok(k)
}

impl SeedArgs {
    fn plan(&self) -> SeedPlan {
        let plan = SeedPlan::new(self.seed_bound).starting_at(self.seed_start);
        match self.family {
            Some(f) => plan.with_families(&[f.into()]),
            None => plan,
        }
    }
}

impl From<Family> for SeedFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Initial => SeedFamily::Initial,
            Family::PowersOfTwo => SeedFamily::PowersOfTwo,
            Family::FactorialGaps => SeedFamily::FactorialGaps,
        }
    }
}

impl From<AxisArg> for Axis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::X => Axis::X,
            AxisArg::Y => Axis::Y,
        }
    }
}

fn grid(rows: Vec<Vec<Nat>>, format: Format) -> Report {
    match format {
        Format::Csv => {
            let mut body = String::new();
            for r in &rows {
                let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(body, "{}", cells.join(","));
            }
            Report { code: 0, body }
        }
        Format::Json => {
            let rows: Vec<Vec<Value>> = rows.iter().map(|r| r.iter().map(serde_nat::to_json).collect()).collect();
            Report::json(json!({ "n": rows.len(), "rows": rows }))
        }
    }
}

fn verdict_code(statuses: &[Status]) -> i32 {
    if statuses.contains(&Status::Falsified) {
        2
    } else {
        0
    }
}

fn to_value(v: &impl serde::Serialize) -> Value {
    serde_json::to_value(v).expect("serializable value")
}

fn dispatch(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Eval { f, x, y } => {
            let f = load_fn(&f.spec)?;
            let v = f.eval(&parse_nat(&x)?, &parse_nat(&y)?).map_err(contract)?;
            Ok(Report::json(json!({ "x": x, "y": y, "value": serde_nat::to_json(&v) })))
        }
        Command::Table { f, n, format } => {
            let f = load_fn(&f.spec)?;
            let rows = window_table(&f, check_n(n)? as usize).map_err(contract)?;
            Ok(grid(rows, format))
        }
        Command::Canonize { f, k, seeds } => {
            let f = load_fn(&f.spec)?;
            let k = check_k(k)?;
            let plan = seeds.plan();
            for &family in &plan.families {
                let s = plan.seeds(family, k);
                if let Some(r) = greedy_canonize(&f, &s, &s, k).map_err(contract)? {
                    return Ok(Report::json(json!({ "family": family, "report": r })));
                }
            }
            Ok(Report::json_with_code(2, &mut json!({ "report": null })))
        }
        Command::CheckT1 { f, n, probe } => {
            let f = load_fn(&f.spec)?;
            let n = check_n(n)?;
            let probe = check_n(probe.unwrap_or(2 * n))?;
            let v = check_t1_window(&f, n, probe).map_err(contract)?;
            Ok(Report::json_with_code(verdict_code(&[v.status]), &mut to_value(&v)))
        }
        Command::CheckT2 { f, k, seeds } => {
            let f = load_fn(&f.spec)?;
            let v = check_t2_search_with(&f, &seeds.plan(), check_k(k)?).map_err(contract)?;
            Ok(Report::json_with_code(verdict_code(&[v.status]), &mut to_value(&v)))
        }
        Command::Classify { f } => {
            let f = load_fn(&f.spec)?;
            let b = f
                .as_builtin()
                .ok_or_else(|| usage("classify takes a builtin; use check-t1 / check-t2 for other functions"))?;
            let (t1, t2) = classify(b).map_err(|e| match e {
                membership::MembershipError::UnknownBuiltin(_) | membership::MembershipError::InvalidArgument(_) => usage(e),
                _ => contract(e),
            })?;
            let both = intersect(&t1, &t2);
            let code = verdict_code(&[t1.status, t2.status]);
            Ok(Report::json_with_code(
                code,
                &mut json!({ "function": b, "verdicts": [t1, t2, both] }),
            ))
        }
        Command::SynthT1 { f, witness, axis, bound, window } => {
            let f = load_fn(&f.spec)?;
            let w = match (witness, axis, bound) {
                (Some(path), None, None) => serde_json::from_str::<AlmostUnaryWitness>(&read(&path)?).map_err(usage)?,
                (None, Some(axis), Some(bound)) => AlmostUnaryWitness::new(axis.into(), load_unary(&bound)?),
                (None, None, None) => f
                    .witness
                    .clone()
                    .ok_or_else(|| usage("no witness: pass --witness, or --axis with --bound, or declare one in the spec"))?,
                _ => return Err(usage("use either --witness or both --axis and --bound")),
            };
            let s = synthesize_t1_term(&f, &w, check_n(window)?).map_err(contract)?;
            if let Some(m) = &s.mismatch {
                return Err(contract(format!("synthesized term differs from f: {}", to_value(m))));
            }
            Ok(Report::json(to_value(&s)))
        }
        Command::Dichotomy { f, report, k, seeds, window } => {
            let f = load_fn(&f.spec)?;
            let r: CanonicalReport = match report {
                Some(path) => serde_json::from_str(&read(&path)?).map_err(usage)?,
                None => {
                    let v = check_t2_search_with(&f, &seeds.plan(), check_k(k)?).map_err(contract)?;
                    match v.witness {
                        Some(Witness::Canonical { report, .. }) if v.status == Status::Falsified => report,
                        _ => return Ok(Report::json_with_code(2, &mut json!({ "search": v, "dichotomy": null }))),
                    }
                }
            };
            let d = derive_from_non_t2(&f, &r, check_n(window)?).map_err(contract)?;
            Ok(Report::json(json!({ "report": r, "dichotomy": d })))
        }
        Command::TreeReduce { tree, n, format } => {
            let t = load_tree(&tree)?;
            let rows = window_table(&tree_reduce(&t), check_n(n)? as usize).map_err(contract)?;
            Ok(grid(rows, format))
        }
        Command::TreeRank { tree } => {
            let t = load_tree(&tree)?;
            let rank = rank_finite(&t).map_err(usage)?;
            Ok(Report::json(json!({ "rank": rank })))
        }
        Command::TreeWf { tree } => {
            let t = load_tree(&tree)?;
            Ok(Report::json(to_value(&wf_check(&t).map_err(usage)?)))
        }
        Command::EnumSeq { index, seq } => {
            let (i, s) = match (index, seq) {
                (Some(i), _) => {
                    let i = parse_nat(&i)?;
                    let s = seq_of(&i);
                    (i, s)
                }
                (None, Some(s)) => {
                    let s: Vec<u64> = if s.trim().is_empty() {
                        Vec::new()
                    } else {
                        s.split(',')
                            .map(|e| e.trim().parse().map_err(|_| usage(format!("bad sequence entry {e:?}"))))
                            .collect::<Result<_, _>>()?
                    };
                    (index_of(&s), s)
                }
                (None, None) => unreachable!("clap requires one of --index, --seq"),
            };
            Ok(Report::json(json!({ "index": serde_nat::to_json(&i), "seq": s })))
        }
    }
}
