//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the text to print, so tests can drive it without a process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dichotomy::cells::decompose;
use dichotomy::classifier::{self, Verdict, VerifyConfig};
use dichotomy::formula::{parse, var, Formula, PredicateEnv, Var};
use dichotomy::groupsets::from_boolean_combination;
use dichotomy::oracle::{self, EvalConfig, IntBox, Truth};
use dichotomy::par::Execution;
use dichotomy::polyhedra::{Inradius, Polyhedron};
use dichotomy::qe::eliminate;
use dichotomy::suites::{self, SuiteConfig};
use dichotomy::{Error, Int};
use serde_json::{json, Value};

pub const SCHEMA: &str = "1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dichotomy", version, about = "Group-definable or order-defining: classify Presburger sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Box radius for brute-force checks.
    #[arg(long = "box", global = true)]
    radius: Option<u32>,
    /// Quantifier bound for bounded evaluation.
    #[arg(long, global = true)]
    qbound: Option<u32>,
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Input {
    /// Formula text.
    #[arg(short = 'f', long, conflicts_with = "file")]
    formula: Option<String>,
    /// File holding one formula.
    #[arg(long)]
    file: Option<String>,
    /// Comma-separated variable order; the last one is the fiber variable.
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print a formula in canonical form.
    Parse(Input),
    /// Evaluate at a point, or list the members in the box.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Comma-separated coordinates in variable order.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Eliminate quantifiers.
    Qe(Input),
    /// Cell decomposition of the eliminated formula.
    Cells(Input),
    /// Quasi-coset decomposition of an order-free formula.
    Decompose(Input),
    /// Rank of an order-free set.
    Rank(Input),
    /// Inradius of a polyhedron given by half-spaces.
    Inradius {
        #[arg(long)]
        dims: usize,
        /// Semicolon-separated linear constraints.
        #[arg(long)]
        halfspaces: String,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Classify and verify.
    Classify(Input),
    /// Check a given verdict and witness.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = ["group_definable", "defines_ordering"])]
        verdict: String,
        #[arg(long)]
        witness: String,
    },
    /// Run the property suites.
    Selftest {
        /// Run only these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Scale factor for the case counts.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Run every case on the calling thread.
        #[arg(long)]
        sequential: bool,
    },
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Core(e) => match e {
                Error::Parse { .. } => "parse",
                Error::Arity { .. } => "arity",
                Error::UnknownPredicate(_) => "unknown_predicate",
                Error::CyclicDefinition(_) => "cyclic_definition",
                Error::OpaquePredicate(_) => "opaque_predicate",
                Error::PredicatePresent(_) => "predicate_present",
                Error::FreeVariables(_) => "free_variables",
                Error::OrderAtom(_) => "order_atom",
                Error::Quantified => "quantified",
                Error::Domain(_) => "domain",
                Error::Unknown(_) => "unknown",
                Error::Overflow => "overflow",
                Error::Invalid(_) => "invalid",
                Error::Internal(_) => "internal",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// What a command produced: a JSON body, its text rendering, and whether
/// a verification failed.
struct Report {
    body: Value,
    text: String,
    verified: bool,
}

impl Report {
    fn ok(body: Value, text: impl Into<String>) -> Self {
        Report { body, text: text.into(), verified: true }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

/// Runs the command line `argv` (program name first).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: EXIT_OK, output: e.to_string() };
            }
            let text = argv.iter().zip(argv.iter().skip(1)).any(|(a, b)| a == "--format" && b == "text")
                || argv.iter().any(|a| a == "--format=text");
            return render_failure(&Failure::Usage(e.to_string()), !text);
        }
    };
    let json = cli.format == Format::Json;
    match execute(&cli) {
        Ok(r) => {
            let code = if r.verified { EXIT_OK } else { EXIT_VERIFY };
            let output = if json {
                let mut body = json!({ "schema": SCHEMA });
                if let (Value::Object(dst), Value::Object(src)) = (&mut body, r.body) {
                    dst.extend(src);
                }
                format!("{}\n", serde_json::to_string_pretty(&body).expect("JSON values serialize"))
            } else {
                let mut t = r.text;
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                t
            };
            Outcome { code, output }
        }
        Err(f) => render_failure(&f, json),
    }
}

fn render_failure(f: &Failure, json: bool) -> Outcome {
    let output = if json {
        let body = json!({
            "schema": SCHEMA,
            "error": { "kind": f.kind(), "message": f.message().trim_end() },
        });
        format!("{}\n", serde_json::to_string_pretty(&body).expect("JSON values serialize"))
    } else {
        format!("error ({}): {}\n", f.kind(), f.message().trim_end())
    };
    Outcome { code: EXIT_USAGE, output }
}

fn read_formula(input: &Input) -> Result<Formula, Failure> {
    let text = match (&input.formula, &input.file) {
        (Some(t), None) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?,
        (None, None) => return Err(Failure::Usage("one of --formula or --file is required".into())),
        (Some(_), Some(_)) => return Err(Failure::Usage("--formula and --file are exclusive".into())),
    };
    Ok(parse(text.trim())?)
}

fn parse_vars(list: &str) -> Result<Vec<Var>, Failure> {
    let vars: Vec<Var> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(var).collect();
    for v in &vars {
        let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Failure::Usage(format!("bad variable name `{v}`")));
        }
    }
    Ok(vars)
}

fn required_vars(input: &Input) -> Result<Vec<Var>, Failure> {
    let list = input.vars.as_deref().ok_or_else(|| Failure::Usage("--vars is required".into()))?;
    let vars = parse_vars(list)?;
    if vars.is_empty() {
        return Err(Failure::Usage("--vars is empty".into()));
    }
    Ok(vars)
}

/// Variables from `--vars`, checked to cover the free variables of `f`.
fn covering_vars(input: &Input, f: &Formula) -> Result<Vec<Var>, Failure> {
    let vars = required_vars(input)?;
    let missing: Vec<String> = f.free_vars().into_iter().filter(|v| !vars.contains(v)).map(|v| v.to_string()).collect();
    if !missing.is_empty() {
        return Err(Failure::Usage(format!("--vars does not cover {}", missing.join(", "))));
    }
    Ok(vars)
}

fn names(vars: &[Var]) -> Vec<String> {
    vars.iter().map(|v| v.to_string()).collect()
}

fn eval_config(cli: &Cli) -> EvalConfig {
    match cli.qbound {
        Some(q) => EvalConfig::with_bound(i64::from(q)),
        None => EvalConfig::default(),
    }
}

fn verify_config(cli: &Cli) -> VerifyConfig {
    let mut cfg = VerifyConfig { eval: eval_config(cli), ..VerifyConfig::default() };
    if let Some(r) = cli.radius {
        cfg.group_box = i64::from(r);
        cfg.order_box = i64::from(r);
    }
    cfg
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Parse(input) => {
            let f = read_formula(input)?;
            let text = f.to_string();
            let free = names(&f.free_vars().into_iter().collect::<Vec<_>>());
            Ok(Report::ok(
                json!({
                    "formula": text,
                    "free_vars": free,
                    "quantifier_depth": f.quantifier_depth(),
                    "order_free": !f.has_order_atoms(),
                }),
                text,
            ))
        }
        Command::Eval { input, point } => eval_command(cli, input, point.as_deref()),
        Command::Qe(input) => {
            let f = read_formula(input)?;
            let g = eliminate(&f)?;
            Ok(Report::ok(json!({ "input": f.to_string(), "output": g.to_string() }), g.to_string()))
        }
        Command::Cells(input) => {
            let f = read_formula(input)?;
            let vars = covering_vars(input, &f)?;
            let d = decompose(&eliminate(&f)?, &vars)?;
            let text = d.terms.iter().map(|t| format!("{}\n", t.to_formula(d.base_vars(), &dichotomy::Term::var(d.fiber_var())))).collect::<String>();
            Ok(Report::ok(json!({ "decomposition": d.to_json() }), text))
        }
        Command::Decompose(input) => {
            let f = read_formula(input)?;
            let vars = covering_vars(input, &f)?;
            let g = from_boolean_combination(&eliminate(&f)?, &vars)?;
            let text = format!("rank {}\n{}", g.rank(), g.to_formula(&vars));
            Ok(Report::ok(
                json!({
                    "vars": names(&vars),
                    "rank": g.rank(),
                    "parts": g.to_json(),
                    "formula": g.to_formula(&vars).to_string(),
                }),
                text,
            ))
        }
        Command::Rank(input) => {
            let f = read_formula(input)?;
            let vars = covering_vars(input, &f)?;
            let g = from_boolean_combination(&eliminate(&f)?, &vars)?;
            Ok(Report::ok(json!({ "vars": names(&vars), "rank": g.rank() }), g.rank().to_string()))
        }
        Command::Inradius { dims, halfspaces, vars } => inradius_command(*dims, halfspaces, vars.as_deref()),
        Command::Classify(input) => {
            let f = read_formula(input)?;
            let vars = required_vars(input)?;
            let c = classifier::classify_with(&f, &vars, &PredicateEnv::new(), &verify_config(cli))?;
            let mut body = c.to_json();
            body["input"] = json!(f.to_string());
            body["vars"] = json!(names(&vars));
            let text = format!(
                "verdict: {}\nwitness: {}\nverification: {}\n",
                c.verdict.name(),
                c.verdict.witness(),
                if c.report.passed() { "pass" } else { "fail" }
            );
            Ok(Report { body, text, verified: c.report.passed() })
        }
        Command::Verify { input, verdict, witness } => {
            let f = read_formula(input)?;
            let vars = required_vars(input)?;
            let w = parse(witness)?;
            let v = if verdict == "group_definable" { Verdict::GroupDefinable(w) } else { Verdict::DefinesOrdering(w) };
            let report = classifier::verify_with(&f, &vars, &v, &PredicateEnv::new(), &verify_config(cli))?;
            let text = match &report.failure {
                None => "pass".to_string(),
                Some(m) => format!("fail: {m}"),
            };
            Ok(Report {
                body: json!({ "verdict": v.name(), "witness": v.witness().to_string(), "verification": report.to_json() }),
                text,
                verified: report.passed(),
            })
        }
        Command::Selftest { suites: only, scale, sequential } => selftest_command(cli.seed, only, *scale, *sequential),
    }
}

fn parse_point(text: &str, n: usize) -> Result<Vec<Int>, Failure> {
    let p: Vec<Int> = text
        .split(',')
        .map(|s| s.trim().parse::<Int>().map_err(|_| Failure::Usage(format!("bad coordinate `{s}`"))))
        .collect::<Result<_, _>>()?;
    if p.len() != n {
        return Err(Failure::Usage(format!("point has {} coordinates, --vars has {n}", p.len())));
    }
    Ok(p)
}

fn eval_command(cli: &Cli, input: &Input, point: Option<&str>) -> Result<Report, Failure> {
    let f = read_formula(input)?;
    let vars = match &input.vars {
        Some(_) => covering_vars(input, &f)?,
        None if f.free_vars().is_empty() => Vec::new(),
        None => return Err(Failure::Usage("--vars is required".into())),
    };
    let cfg = eval_config(cli);
    let env = PredicateEnv::new();
    if let Some(p) = point {
        let p = parse_point(p, vars.len())?;
        let t = oracle::eval(&f, &vars, &p, &env, &cfg)?;
        let word = match t {
            Truth::True => "true",
            Truth::False => "false",
            Truth::Unknown => "unknown",
        };
        return Ok(Report::ok(json!({ "vars": names(&vars), "point": p.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "value": word }), word));
    }
    let r = i64::from(cli.radius.unwrap_or(5));
    let members = oracle::set_on_box(&f, &IntBox::cube(&vars, r), &env, &cfg)?;
    let rows: Vec<Vec<String>> = members.iter().map(|p| p.iter().map(|v| v.to_string()).collect()).collect();
    let text = rows.iter().map(|r| format!("{}\n", r.join(" "))).collect::<String>();
    Ok(Report::ok(
        json!({ "vars": names(&vars), "box": [-r, r], "count": rows.len(), "members": rows }),
        text,
    ))
}

/// `x`, `y`, `z`, `w`, then `x4`, `x5`, …
fn default_vars(n: usize) -> Vec<Var> {
    (0..n).map(|i| if i < 4 { var(["x", "y", "z", "w"][i]) } else { var(&format!("x{i}")) }).collect()
}

fn inradius_command(dims: usize, halfspaces: &str, vars: Option<&str>) -> Result<Report, Failure> {
    let vars = match vars {
        Some(list) => parse_vars(list)?,
        None => default_vars(dims),
    };
    if vars.len() != dims {
        return Err(Failure::Usage(format!("--dims {dims} but {} variables", vars.len())));
    }
    let parts: Vec<Formula> = halfspaces
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).map_err(Failure::from))
        .collect::<Result<_, _>>()?;
    let p = Polyhedron::from_formula(&Formula::conj(parts), &vars)?;
    let r = p.inradius();
    let text = match &r {
        Inradius::Empty => "empty".to_string(),
        Inradius::Infinite => "infinite".to_string(),
        Inradius::Bounds { lo, hi } => format!("{lo} <= r <= {hi}"),
    };
    let body = r.to_json();
    Ok(Report::ok(body, text))
}

fn selftest_command(seed: u64, only: &[String], scale: f64, sequential: bool) -> Result<Report, Failure> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Failure::Usage("--scale must be positive".into()));
    }
    let chosen: Vec<(&str, suites::SuiteFn)> = if only.is_empty() {
        suites::SUITES.to_vec()
    } else {
        only.iter()
            .map(|n| {
                suites::find_suite(n)
                    .map(|f| (n.as_str(), f))
                    .ok_or_else(|| Failure::Usage(format!("unknown suite `{n}`")))
            })
            .collect::<Result<_, _>>()?
    };
    let cfg = SuiteConfig {
        seed,
        scale,
        execution: if sequential { Execution::Sequential } else { Execution::Parallel },
    };
    let reports: Vec<_> = chosen.iter().map(|(_, f)| f(&cfg)).collect();
    let passed = reports.iter().all(|r| r.passed());
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!("{:<28} {:>5} cases  {}\n", r.name, r.cases, if r.passed() { "pass" } else { "FAIL" }));
        for m in &r.failures {
            text.push_str(&format!("    {m}\n"));
        }
    }
    Ok(Report {
        body: json!({
            "seed": seed,
            "passed": passed,
            "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }),
        text,
        verified: passed,
    })
}
