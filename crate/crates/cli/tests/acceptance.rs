//! Acceptance criteria 1–9. Prints one pass/fail line per criterion and
//! exits non-zero if any fails.

use dichotomy::classifier::{self, Classification, Verdict, INPUT, WITNESS_VAR};
use dichotomy::formula::{parse, var, Formula, PredicateEnv, Term, Var};
use dichotomy::oracle::{self, equiv_on_box, EvalConfig, Equivalence, IntBox, Truth};
use dichotomy::qe::{decide_equiv, eliminate};
use dichotomy::suites::{self, corpus, CorpusEntry, Expected, SuiteConfig};
use dichotomy::{Error, Int};
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(problems: Vec<String>, summary: String) -> Outcome {
    if problems.is_empty() {
        Outcome { ok: true, detail: summary }
    } else {
        let shown: Vec<&str> = problems.iter().take(3).map(String::as_str).collect();
        Outcome { ok: false, detail: format!("{summary}; {} problem(s): {}", problems.len(), shown.join(" | ")) }
    }
}

/// Classifications of the corpus, shared by criteria 1–3.
struct Classified {
    entry: CorpusEntry,
    input: Formula,
    result: Result<Classification, String>,
}

fn classify_corpus() -> (Vec<Classified>, Duration) {
    let start = Instant::now();
    let out = corpus()
        .into_iter()
        .map(|entry| {
            let input = parse(entry.formula).expect("corpus formulas parse");
            let result = classifier::classify(&input, &entry.vars(), &PredicateEnv::new()).map_err(|e| e.to_string());
            Classified { entry, input, result }
        })
        .collect();
    (out, start.elapsed())
}

const REQUIRED: &[&str] = &[
    "x >= 0",
    "x = 0 mod 2",
    "(0 <= x & x = 1 mod 2) | (x <= 0 & x = 0 mod 2)",
    "0 <= y & y <= x",
    "x <= y & y <= x + 6 & y = x mod 3",
    "y = 3*x",
    "y = 1 mod 2",
];

fn criterion_1(cases: &[Classified], elapsed: Duration) -> Outcome {
    let mut problems = Vec::new();
    if cases.len() < 25 {
        problems.push(format!("corpus has only {} formulas", cases.len()));
    }
    for r in REQUIRED {
        if !cases.iter().any(|c| c.entry.formula == *r) {
            problems.push(format!("required formula `{r}` missing"));
        }
    }
    let three: Vec<&Classified> = cases.iter().filter(|c| c.entry.vars.len() == 3).collect();
    if !three.iter().any(|c| c.entry.name.contains("cone")) || !three.iter().any(|c| c.entry.name.contains("slab")) {
        problems.push("3-variable cone or lattice slab missing".into());
    }
    for c in cases {
        match &c.result {
            Err(e) => problems.push(format!("{}: {e}", c.entry.name)),
            Ok(cl) => {
                let got = match cl.verdict {
                    Verdict::GroupDefinable(_) => Expected::Group,
                    Verdict::DefinesOrdering(_) => Expected::Ordering,
                };
                if got != c.entry.expected {
                    problems.push(format!("{}: expected {:?}, got {got:?}", c.entry.name, c.entry.expected));
                }
                if !(cl.report.qe_check && cl.report.box_check) {
                    problems.push(format!("{}: verification failed {:?}", c.entry.name, cl.report.failure));
                }
            }
        }
    }
    let ray = cases.iter().find(|c| c.entry.formula == REQUIRED[2]);
    if let Some(Ok(cl)) = ray.map(|c| &c.result) {
        let want = parse("A(1 + 2*x)").unwrap();
        if cl.verdict.witness() != &want {
            problems.push(format!("mixed-residue rays: witness `{}`, expected `{want}`", cl.verdict.witness()));
        }
    }
    if elapsed > Duration::from_secs(30) {
        problems.push(format!("took {elapsed:?}, limit 30 s"));
    }
    outcome(problems, format!("{} formulas in {:.2?}", cases.len(), elapsed))
}

/// Unfolds `A` in an ordering witness through a predicate environment.
fn unfold_witness(w: &Formula, vars: &[Var], input: &Formula) -> Result<Formula, String> {
    let env = PredicateEnv::single(INPUT, vars, input.clone());
    w.unfold_predicates(&env).map_err(|e| e.to_string())
}

fn criterion_2(cases: &[Classified]) -> Outcome {
    let x = var(WITNESS_VAR);
    let nonneg = Formula::le(Term::zero(), Term::var(&x));
    let mut problems = Vec::new();
    let mut checked = 0;
    let mut unresolved = 0;
    for c in cases {
        let Ok(Classification { verdict: Verdict::DefinesOrdering(w), .. }) = &c.result else { continue };
        checked += 1;
        let mut run = || -> Result<Option<String>, String> {
            let expanded = unfold_witness(w, &c.entry.vars(), &c.input)?;
            let q = eliminate(&expanded).map_err(|e| e.to_string())?;
            if !decide_equiv(&q, &nonneg).map_err(|e| e.to_string())? {
                return Ok(Some(format!("eliminated witness `{q}` is not 0 <= x")));
            }
            // Box check: bounded evaluation of the expanded witness where it
            // is conclusive, and the exact eliminated form everywhere.
            let cfg = EvalConfig::default();
            for t in -200i64..=200 {
                let p = [Int::from(t)];
                let exact = oracle::eval_qf(&q, &|_| Some(p[0].clone())).map_err(|e| e.to_string())?;
                if exact != (t >= 0) {
                    return Ok(Some(format!("eliminated witness wrong at {t}")));
                }
                match oracle::eval(&expanded, std::slice::from_ref(&x), &p, &PredicateEnv::new(), &cfg) {
                    Ok(Truth::True) if t < 0 => return Ok(Some(format!("bounded evaluation true at {t}"))),
                    Ok(Truth::False) if t >= 0 => return Ok(Some(format!("bounded evaluation false at {t}"))),
                    Ok(Truth::True | Truth::False) => {}
                    Ok(Truth::Unknown) | Err(Error::Unknown(_) | Error::Overflow) => unresolved += 1,
                    Err(e) => return Err(e.to_string()),
                }
            }
            Ok(None)
        };
        match run() {
            Ok(None) => {}
            Ok(Some(m)) => problems.push(format!("{}: {m}", c.entry.name)),
            Err(e) => problems.push(format!("{}: {e}", c.entry.name)),
        }
    }
    outcome(problems, format!("{checked} ordering witnesses; {unresolved} box points settled by the eliminated form only"))
}

fn criterion_3(cases: &[Classified]) -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    for c in cases {
        let Ok(Classification { verdict: Verdict::GroupDefinable(w), .. }) = &c.result else { continue };
        checked += 1;
        let name = c.entry.name;
        if w.has_order_atoms() || !w.is_quantifier_free() || w.has_predicates() {
            problems.push(format!("{name}: witness `{w}` is not order-free"));
            continue;
        }
        match decide_equiv(&c.input, w) {
            Ok(true) => {}
            Ok(false) => problems.push(format!("{name}: decide_equiv rejects `{w}`")),
            Err(e) => problems.push(format!("{name}: {e}")),
        }
        let bx = IntBox::cube(&c.entry.vars(), 40);
        match equiv_on_box(&c.input, w, &bx, &PredicateEnv::new(), &EvalConfig::default()) {
            Ok(Equivalence::Equivalent) => {}
            Ok(Equivalence::Counterexample(p)) => problems.push(format!("{name}: differs at {p:?}")),
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    outcome(problems, format!("{checked} group witnesses"))
}

/// Runs property suites at full size with a time limit.
fn suites_criterion(names: &[&str], limit: Option<Duration>) -> Outcome {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut parts = Vec::new();
    for n in names {
        let Some(suite) = suites::find_suite(n) else {
            problems.push(format!("suite {n} missing"));
            continue;
        };
        let r = suite(&cfg);
        parts.push(format!("{n} {}/{}", r.cases - r.failed, r.cases));
        problems.extend(r.failures.iter().map(|f| format!("{n}: {f}")));
        if r.failed > r.failures.len() {
            problems.push(format!("{n}: {} more failures", r.failed - r.failures.len()));
        }
    }
    let elapsed = start.elapsed();
    if let Some(l) = limit {
        if elapsed > l {
            problems.push(format!("took {elapsed:?}, limit {l:?}"));
        }
    }
    outcome(problems, format!("{} in {elapsed:.2?}", parts.join(", ")))
}

fn criterion_9() -> Outcome {
    let mut problems = Vec::new();
    let mut runs = 0;
    for e in corpus().iter().step_by(4) {
        let argv = ["dichotomy", "classify", "--vars", &e.vars.join(","), "--formula", e.formula, "--seed", "7"];
        let a = dichotomy_cli::run(argv);
        let b = dichotomy_cli::run(argv);
        runs += 2;
        if a != b {
            problems.push(format!("{}: outputs differ", e.name));
        }
        if a.code != 0 || !a.output.contains("\"schema\": \"1\"") {
            problems.push(format!("{}: exit {} output {}", e.name, a.code, a.output.lines().next().unwrap_or("")));
        }
    }
    outcome(problems, format!("{runs} classify runs compared pairwise"))
}

fn main() {
    let (cases, elapsed) = classify_corpus();
    let results = [
        ("1 dichotomy corpus", criterion_1(&cases, elapsed)),
        ("2 ordering witnesses", criterion_2(&cases)),
        ("3 group witnesses", criterion_3(&cases)),
        ("4 quantifier elimination", suites_criterion(&["qe.random"], Some(Duration::from_secs(60)))),
        ("5 quasi-coset decomposition", suites_criterion(&["groupsets.boolean", "groupsets.rank_union"], None)),
        ("6 normal forms", suites_criterion(&["arith.snf", "arith.hnf"], None)),
        ("7 polyhedra", suites_criterion(&["polyhedra.plank", "polyhedra.opposite", "polyhedra.kadets"], None)),
        ("8 cell decomposition", suites_criterion(&["cells.random"], None)),
        ("9 determinism", criterion_9()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
