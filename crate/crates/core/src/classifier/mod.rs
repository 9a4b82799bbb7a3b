//! The dichotomy as an algorithm.
//!
//! Every intermediate set carries two formulas: its semantics (a
//! quantifier-free Presburger formula, order allowed) and a definition over
//! `(Z,+,0,A)` where `A` is the input predicate. When a piece turns out to
//! define the ordering, its witness is written against the piece's
//! definition, so it is already a formula over `A`.

mod base;
mod pipeline;
mod windows;

pub use base::{classify_1d, compact_line};
pub use pipeline::{sort_congruences, CongruencePiece, SortedFibersWitness};
pub use windows::{constant_difference, fill_formula, slab_formula};

use crate::arith::{modulo, Int};
use crate::error::{Error, Result};
use crate::formula::{fresh_var, var, Formula, PredicateEnv, Term, Var};
use crate::oracle::{self, equiv_on_box, EvalConfig, Equivalence, IntBox, Truth};
use crate::qe::{self, decide_equiv, simplify};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

/// Name of the input predicate inside definitions and witnesses.
pub const INPUT: &str = "A";

/// Free variable of ordering-side witnesses.
pub const WITNESS_VAR: &str = "x";

/// Radius of the box check for group-side witnesses.
pub const GROUP_BOX: i64 = 40;

/// Radius of the box check for ordering-side witnesses.
pub const ORDER_BOX: i64 = 200;

/// A set together with how it is defined from the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedSet {
    vars: Vec<Var>,
    semantics: Formula,
    definition: Formula,
}

impl TrackedSet {
    /// The input set itself: its definition is `A(x̄)`.
    pub fn input(vars: Vec<Var>, semantics: Formula) -> Self {
        let definition = Formula::pred(INPUT, vars.iter().map(|v| Term::var(v)).collect());
        TrackedSet { vars, semantics, definition }
    }

    pub fn new(vars: Vec<Var>, semantics: Formula, definition: Formula) -> Self {
        TrackedSet { vars, semantics, definition }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn semantics(&self) -> &Formula {
        &self.semantics
    }

    pub fn definition(&self) -> &Formula {
        &self.definition
    }

    fn bind(&self, body: &Formula, args: &[Term]) -> Formula {
        let b: BTreeMap<Var, Term> = self.vars.iter().cloned().zip(args.iter().cloned()).collect();
        body.substitute(&b)
    }

    /// Membership of `args` according to the definition.
    pub fn def_at(&self, args: &[Term]) -> Formula {
        self.bind(&self.definition, args)
    }

    /// Membership of `args` according to the semantics.
    pub fn sem_at(&self, args: &[Term]) -> Formula {
        self.bind(&self.semantics, args)
    }

    /// A set built from this one by a formula template. The template is
    /// instantiated once against the definition and once against the
    /// semantics, so both stay in step.
    pub fn derive(&self, vars: Vec<Var>, build: impl Fn(&dyn Fn(&[Term]) -> Formula) -> Formula) -> Result<TrackedSet> {
        let definition = simplify(&build(&|a| self.def_at(a)));
        let semantics = tidy(&vars, qe::eliminate(&build(&|a| self.sem_at(a)))?)?;
        Ok(TrackedSet { vars, semantics, definition })
    }

    /// Intersection with (or union with) an order-free formula in the same
    /// variables; the formula enters both sides verbatim.
    pub fn combine(&self, extra: &Formula, union: bool) -> Result<TrackedSet> {
        let join = |a: Formula| {
            if union {
                Formula::disj([a, extra.clone()])
            } else {
                Formula::conj([a, extra.clone()])
            }
        };
        Ok(TrackedSet {
            vars: self.vars.clone(),
            semantics: tidy(&self.vars, simplify(&join(self.semantics.clone())))?,
            definition: simplify(&join(self.definition.clone())),
        })
    }

    pub fn var_terms(&self) -> Vec<Term> {
        self.vars.iter().map(|v| Term::var(v)).collect()
    }
}

/// The two poles of the dichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Order-free quantifier-free formula equivalent to `A`.
    GroupDefinable(Formula),
    /// Formula over `(Z,+,0,A)` in [`WITNESS_VAR`] defining `N`.
    DefinesOrdering(Formula),
}

impl Verdict {
    pub fn witness(&self) -> &Formula {
        match self {
            Verdict::GroupDefinable(w) | Verdict::DefinesOrdering(w) => w,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::GroupDefinable(_) => "group_definable",
            Verdict::DefinesOrdering(_) => "defines_ordering",
        }
    }
}

/// Outcome of checking a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub qe_check: bool,
    pub box_check: bool,
    pub box_radius: i64,
    /// Points where the box check fell back from the oracle to the
    /// eliminated witness (bounded evaluation was inconclusive).
    pub qe_fallback_points: usize,
    pub failure: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.qe_check && self.box_check
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "qe_check": self.qe_check,
            "box_check": self.box_check,
            "box": [-self.box_radius, self.box_radius],
        });
        if self.qe_fallback_points > 0 {
            v["qe_fallback_points"] = json!(self.qe_fallback_points);
        }
        if let Some(f) = &self.failure {
            v["failure"] = json!(f);
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub vars: Vec<Var>,
    pub verdict: Verdict,
    pub report: VerificationReport,
    pub trace: Vec<String>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.name(),
            "witness": self.verdict.witness().to_string(),
            "verification": self.report.to_json(),
            "trace": self.trace,
        })
    }
}

/// `(ρ_m(x), L_m(x), R_m(x), L⁻_m(x), R⁺_m(x))`: remainder, the multiples
/// of `m` at or below and at or above `x`, and the strict neighbours.
pub fn boundary_maps(m: &Int, x: &Int) -> (Int, Int, Int, Int, Int) {
    let rho = modulo(x, m);
    let l = x - &rho;
    let r = x + modulo(&-x.clone(), m);
    (rho, l.clone(), r.clone(), l - m, r + m)
}

/// Keeps semantics small: sets on a line are rewritten as maximal runs.
fn tidy(vars: &[Var], sem: Formula) -> Result<Formula> {
    if vars.len() == 1 && sem.is_quantifier_free() && !sem.has_predicates() {
        base::compact_line(&sem, &vars[0])
    } else {
        Ok(sem)
    }
}

fn fresh_in(base: &str, avoid: &[Var]) -> Var {
    let used: BTreeSet<Var> = avoid.iter().cloned().collect();
    if used.contains(&var(base)) {
        fresh_var(base, &used)
    } else {
        var(base)
    }
}

/// Box radii and evaluation settings for witness verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub group_box: i64,
    pub order_box: i64,
    pub eval: EvalConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { group_box: GROUP_BOX, order_box: ORDER_BOX, eval: EvalConfig::default() }
    }
}

/// Runs the classification of `A_formula` over `vars` (fiber variable
/// last) and verifies the resulting witness.
pub fn classify(f: &Formula, vars: &[Var], env: &PredicateEnv) -> Result<Classification> {
    classify_with(f, vars, env, &VerifyConfig::default())
}

pub fn classify_with(f: &Formula, vars: &[Var], env: &PredicateEnv, cfg: &VerifyConfig) -> Result<Classification> {
    let mut engine = pipeline::Engine::default();
    let (verdict, unfolded) = classify_unverified(f, vars, env, &mut engine)?;
    let report = verify_unfolded(f, &unfolded, vars, &verdict, env, cfg)?;
    Ok(Classification {
        vars: vars.to_vec(),
        verdict,
        report,
        trace: engine.trace,
    })
}

fn prepare(f: &Formula, vars: &[Var], env: &PredicateEnv) -> Result<Formula> {
    if vars.is_empty() {
        return Err(Error::Invalid("classification needs at least one variable".into()));
    }
    let distinct: BTreeSet<&Var> = vars.iter().collect();
    if distinct.len() != vars.len() {
        return Err(Error::Invalid("repeated variable".into()));
    }
    let unfolded = f.unfold_predicates(env)?;
    let extra: Vec<String> = unfolded
        .free_vars()
        .into_iter()
        .filter(|v| !vars.contains(v))
        .map(|v| v.to_string())
        .collect();
    if !extra.is_empty() {
        return Err(Error::FreeVariables(extra.join(", ")));
    }
    Ok(unfolded)
}

fn classify_unverified(
    f: &Formula,
    vars: &[Var],
    env: &PredicateEnv,
    engine: &mut pipeline::Engine,
) -> Result<(Verdict, Formula)> {
    let unfolded = prepare(f, vars, env)?;
    let sem = qe::eliminate(&unfolded)?;
    engine.note(format!("input over ({}): {} after elimination", join(vars), sem));
    let root = TrackedSet::input(vars.to_vec(), sem);
    let verdict = match engine.classify_set(&root)? {
        Verdict::GroupDefinable(w) => Verdict::GroupDefinable(simplify(&w)),
        other => other,
    };
    engine.note(format!("verdict: {}", verdict.name()));
    Ok((verdict, unfolded))
}

/// Classification without the verification step.
pub fn classify_only(f: &Formula, vars: &[Var], env: &PredicateEnv) -> Result<(Verdict, Vec<String>)> {
    let mut engine = pipeline::Engine::default();
    let (v, _) = classify_unverified(f, vars, env, &mut engine)?;
    Ok((v, engine.trace))
}

/// Checks a verdict against the input formula.
pub fn verify(f: &Formula, vars: &[Var], verdict: &Verdict, env: &PredicateEnv) -> Result<VerificationReport> {
    verify_with(f, vars, verdict, env, &VerifyConfig::default())
}

pub fn verify_with(
    f: &Formula,
    vars: &[Var],
    verdict: &Verdict,
    env: &PredicateEnv,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let unfolded = prepare(f, vars, env)?;
    verify_unfolded(f, &unfolded, vars, verdict, env, cfg)
}

fn verify_unfolded(
    f: &Formula,
    unfolded: &Formula,
    vars: &[Var],
    verdict: &Verdict,
    env: &PredicateEnv,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    match verdict {
        Verdict::GroupDefinable(w) => verify_group(f, unfolded, vars, w, env, cfg),
        Verdict::DefinesOrdering(w) => verify_ordering(unfolded, vars, w, cfg),
    }
}

fn fail(radius: i64, msg: String) -> VerificationReport {
    VerificationReport {
        qe_check: false,
        box_check: false,
        box_radius: radius,
        qe_fallback_points: 0,
        failure: Some(msg),
    }
}

fn verify_group(
    f: &Formula,
    unfolded: &Formula,
    vars: &[Var],
    w: &Formula,
    env: &PredicateEnv,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let radius = cfg.group_box;
    if w.has_order_atoms() || !w.is_quantifier_free() || w.has_predicates() {
        return Ok(fail(radius, "witness is not an order-free quantifier-free formula".into()));
    }
    if w.free_vars().iter().any(|v| !vars.contains(v)) {
        return Ok(fail(radius, "witness has foreign free variables".into()));
    }
    let qe_check = decide_equiv(unfolded, w)?;
    let bx = IntBox::cube(vars, radius);
    let outcome = equiv_on_box(f, w, &bx, env, &cfg.eval)?;
    let box_check = outcome == Equivalence::Equivalent;
    let failure = match (&outcome, qe_check) {
        (Equivalence::Counterexample(p), _) => Some(format!("box counterexample at {}", show_point(p))),
        (_, false) => Some("decision procedure found a difference".into()),
        _ => None,
    };
    Ok(VerificationReport {
        qe_check,
        box_check,
        box_radius: radius,
        qe_fallback_points: 0,
        failure,
    })
}

fn verify_ordering(unfolded: &Formula, vars: &[Var], w: &Formula, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let radius = cfg.order_box;
    let x = var(WITNESS_VAR);
    if w.has_order_atoms() {
        return Ok(fail(radius, "witness contains an order atom".into()));
    }
    if w.free_vars().iter().any(|v| *v != x) {
        return Ok(fail(radius, format!("witness must have only {WITNESS_VAR} free")));
    }
    if w.predicates().iter().any(|p| &**p != INPUT) {
        return Ok(fail(radius, "witness uses a predicate other than the input".into()));
    }
    let expanded = w.expand_predicate(INPUT, vars, unfolded);
    let q = qe::eliminate(&expanded)?;
    let nonneg = Formula::le(Term::zero(), Term::var(&x));
    let qe_check = decide_equiv(&q, &nonneg)?;
    let use_oracle = expanded.quantifier_depth() <= 2;
        let env = PredicateEnv::new();
    let mut fallback = 0;
    let mut box_check = true;
    let mut failure = None;
    for t in -radius..=radius {
        let point = [Int::from(t)];
        let got = if use_oracle {
            match oracle::eval(&expanded, std::slice::from_ref(&x), &point, &env, &cfg.eval) {
                Ok(Truth::True) => Some(true),
                Ok(Truth::False) => Some(false),
                Ok(Truth::Unknown) | Err(Error::Unknown(_)) | Err(Error::Overflow) => None,
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        let got = match got {
            Some(b) => b,
            None => {
                fallback += 1;
                oracle::eval_qf(&q, &|_| Some(point[0].clone()))?
            }
        };
        if got != (t >= 0) {
            box_check = false;
            failure = Some(format!("witness wrong at {WITNESS_VAR} = {t}"));
            break;
        }
    }
    if !qe_check && failure.is_none() {
        failure = Some("eliminated witness is not equivalent to 0 <= x".into());
    }
    Ok(VerificationReport {
        qe_check,
        box_check,
        box_radius: radius,
        qe_fallback_points: fallback,
        failure,
    })
}

fn show_point(p: &[Int]) -> String {
    format!("({})", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
}

fn join(vars: &[Var]) -> String {
    vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests;
