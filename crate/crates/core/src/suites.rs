//! Seeded property suites shared by the test harness and `selftest`.
//!
//! Every case draws from its own ChaCha stream derived from the suite
//! seed, the suite name and the case index, so reports are identical
//! whether cases run sequentially or on the rayon pool.

use crate::arith::{hnf, int, lp_status, rat_int, snf, IntMatrix, LinearSystem, LpStatus, Relation};
use crate::cells::{decompose, project, StandardZLinear, ZLinear};
use crate::classifier::{self, sort_congruences, TrackedSet, Verdict};
use crate::error::Result;
use crate::formula::{parse, var, Formula, PredicateEnv, Term, Var};
use crate::groupsets::{from_boolean_combination, phi_apply, phi_invert, Coset, GroupSet, Lattice};
use crate::oracle::{self, equiv_on_box, eval_qf, EvalConfig, Equivalence, IntBox, Truth};
use crate::par::{self, Execution};
use crate::polyhedra::{opposite_system, AffineFunctional, HalfSpace, Plank, Polyhedron, Sign};
use crate::qe::{decide_equiv, eliminate};
use crate::{Int, Rat};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Failure messages kept per suite; the count covers all of them.
const KEPT_FAILURES: usize = 5;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Multiplies the default case counts (at least one case always runs).
    pub scale: f64,
    pub execution: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0, scale: 1.0, execution: Execution::default() }
    }
}

impl SuiteConfig {
    fn count(&self, default: usize) -> usize {
        ((default as f64 * self.scale).round() as usize).max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "cases": self.cases,
            "failed": self.failed,
            "passed": self.passed(),
            "failures": self.failures,
        })
    }
}

pub type SuiteFn = fn(&SuiteConfig) -> SuiteReport;

/// Every suite, in a fixed order.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("arith.snf", snf_suite),
    ("arith.hnf", hnf_suite),
    ("arith.lp", lp_suite),
    ("formula.round_trip", round_trip_suite),
    ("formula.substitution", substitution_suite),
    ("oracle.qf_exact", qf_exact_suite),
    ("qe.random", qe_suite),
    ("qe.self_consistency", qe_self_suite),
    ("cells.random", cells_suite),
    ("cells.zlinear", zlinear_suite),
    ("groupsets.boolean", boolean_suite),
    ("groupsets.rank_union", rank_union_suite),
    ("groupsets.phi", phi_suite),
    ("groupsets.phi_rank", phi_rank_suite),
    ("polyhedra.plank", plank_suite),
    ("polyhedra.opposite", opposite_suite),
    ("polyhedra.kadets", kadets_suite),
    ("polyhedra.cover", cover_suite),
    ("polyhedra.uncovered", uncovered_suite),
    ("polyhedra.invariance", invariance_suite),
    ("classifier.corpus", corpus_suite),
    ("classifier.order_free", order_free_suite),
    ("classifier.conservation", conservation_suite),
    ("classifier.random", classifier_random_suite),
];

pub fn find_suite(name: &str) -> Option<SuiteFn> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, f)| f(cfg)).collect()
}

fn stream(seed: u64, name: &str, case: usize) -> ChaCha8Rng {
    // FNV-1a over the name keeps streams of different suites apart.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(case as u64);
    rng
}

/// Runs `n` cases; a case fails with a message or an error.
fn run_cases(name: &str, cfg: &SuiteConfig, n: usize, case: impl Fn(&mut ChaCha8Rng) -> Result<Option<String>> + Sync + Send) -> SuiteReport {
    run_indexed(name, cfg, n, |_, rng| case(rng))
}

fn run_indexed(
    name: &str,
    cfg: &SuiteConfig,
    n: usize,
    case: impl Fn(usize, &mut ChaCha8Rng) -> Result<Option<String>> + Sync + Send,
) -> SuiteReport {
    let outcomes = par::map(cfg.execution, &(0..n).collect::<Vec<_>>(), |&i| {
        let mut rng = stream(cfg.seed, name, i);
        match case(i, &mut rng) {
            Ok(None) => None,
            Ok(Some(msg)) => Some(format!("case {i}: {msg}")),
            Err(e) => Some(format!("case {i}: error: {e}")),
        }
    });
    let failures: Vec<String> = outcomes.into_iter().flatten().collect();
    SuiteReport {
        name: name.to_string(),
        cases: n,
        failed: failures.len(),
        failures: failures.into_iter().take(KEPT_FAILURES).collect(),
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Option<String> {
    (!ok).then(msg)
}

// ---------------------------------------------------------------------
// Generators

pub fn names(n: usize) -> Vec<Var> {
    ["x", "y", "z", "w"][..n].iter().map(|v| var(v)).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows).map(|_| (0..cols).map(|_| int(rng.gen_range(-bound..=bound))).collect()).collect();
    IntMatrix::from_rows(data, cols)
}

/// Product of random elementary row operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        if rng.gen_bool(0.5) {
            u.negate_row(0);
        }
        return u;
    }
    for _ in 0..rng.gen_range(1..=3 * n) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        match rng.gen_range(0..3) {
            0 => u.swap_rows(a, b),
            1 => u.negate_row(a),
            _ => u.add_row(a, b, &int(rng.gen_range(-3..=3))),
        }
    }
    u
}

pub fn random_term(rng: &mut impl Rng, vars: &[Var], coef: i64, konst: i64) -> Term {
    loop {
        let coeffs: Vec<(Var, Int)> = vars
            .iter()
            .filter_map(|v| rng.gen_bool(0.6).then(|| (v.clone(), int(rng.gen_range(-coef..=coef)))))
            .collect();
        let t = Term::from_parts(coeffs, int(rng.gen_range(-konst..=konst)));
        if !t.is_constant() || vars.is_empty() {
            return t;
        }
    }
}

/// Shape parameters for random formulas.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub coef: i64,
    pub konst: i64,
    pub max_modulus: i64,
    pub order: bool,
}

pub fn random_atom(rng: &mut impl Rng, vars: &[Var], s: Shape) -> Formula {
    let t = random_term(rng, vars, s.coef, 0);
    let k = Term::constant(rng.gen_range(-s.konst..=s.konst));
    let kinds = if s.order { 4 } else { 2 };
    match rng.gen_range(0..kinds) {
        0 => Formula::eq(t, k),
        1 => Formula::cong(t, k, int(rng.gen_range(2..=s.max_modulus.max(2)))),
        2 => Formula::le(t, k),
        _ => Formula::lt(t, k),
    }
}

/// A Boolean combination of `atoms` random atoms.
pub fn random_qf(rng: &mut impl Rng, vars: &[Var], atoms: usize, s: Shape) -> Formula {
    let f = if atoms <= 1 {
        random_atom(rng, vars, s)
    } else {
        let left = rng.gen_range(1..atoms);
        let a = random_qf(rng, vars, left, s);
        let b = random_qf(rng, vars, atoms - left, s);
        if rng.gen_bool(0.5) {
            Formula::conj([a, b])
        } else {
            Formula::disj([a, b])
        }
    };
    if rng.gen_bool(0.2) {
        Formula::not(f)
    } else {
        f
    }
}

/// A Boolean combination of between one and `max` atoms.
pub fn random_qf_upto(rng: &mut impl Rng, vars: &[Var], max: usize, s: Shape) -> Formula {
    let n = rng.gen_range(1..=max);
    random_qf(rng, vars, n, s)
}

/// A formula over `free` with the variables of `bound` quantified, one
/// nested inside the other.
pub fn random_quantified(rng: &mut impl Rng, free: &[Var], bound: &[Var], s: Shape) -> Formula {
    let Some((b, rest)) = bound.split_first() else {
        let n = rng.gen_range(1..=3);
        return random_qf(rng, free, n, s);
    };
    let mut scope = free.to_vec();
    scope.push(b.clone());
    let inner = random_quantified(rng, &scope, rest, s);
    let body = if rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=2);
        let side = random_qf(rng, &scope, n, s);
        if rng.gen_bool(0.5) {
            Formula::conj([side, inner])
        } else {
            Formula::disj([side, inner])
        }
    } else {
        inner
    };
    let q = if rng.gen_bool(0.5) { Formula::exists(b, body) } else { Formula::forall(b, body) };
    if rng.gen_bool(0.3) {
        let n = rng.gen_range(1..=2);
        Formula::conj([random_qf(rng, free, n, s), q])
    } else {
        q
    }
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

fn random_rat(rng: &mut impl Rng, bound: i64, den: i64) -> Rat {
    Rat::new(int(rng.gen_range(-bound * den..=bound * den)), int(rng.gen_range(1..=den)))
}

fn random_functional(rng: &mut impl Rng, n: usize, coef: i64) -> Vec<Rat> {
    loop {
        let a: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-coef..=coef))).collect();
        if a.iter().any(|v| !v.is_zero()) {
            return a;
        }
    }
}

fn closed(a: Vec<Rat>, u: Rat, sign: Sign) -> HalfSpace {
    HalfSpace::new(AffineFunctional::new(a, u), sign, true).expect("non-constant functional")
}

fn quadrant(n: usize) -> Polyhedron {
    let hs = (0..n)
        .map(|i| {
            let a = (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect();
            closed(a, rat(0), Sign::Plus)
        })
        .collect();
    Polyhedron::new(n, hs).expect("quadrant")
}

fn cube_box(lo: &[Rat], hi: &[Rat]) -> Polyhedron {
    let n = lo.len();
    let mut hs = Vec::new();
    for i in 0..n {
        let e: Vec<Rat> = (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect();
        hs.push(closed(e.clone(), -&lo[i], Sign::Plus));
        hs.push(closed(e, -&hi[i], Sign::Minus));
    }
    Polyhedron::new(n, hs).expect("box")
}

fn show_point(p: &[Int]) -> String {
    format!("({})", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
}

fn box_equal(f: &Formula, g: &Formula, vars: &[Var], r: i64) -> Result<Option<String>> {
    let bx = IntBox::cube(vars, r);
    Ok(match equiv_on_box(f, g, &bx, &PredicateEnv::new(), &EvalConfig::default())? {
        Equivalence::Equivalent => None,
        Equivalence::Counterexample(p) => Some(format!("`{f}` and `{g}` differ at {}", show_point(&p))),
    })
}

// ---------------------------------------------------------------------
// arith

fn snf_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("arith.snf", cfg, cfg.count(500), |rng| {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let m = random_matrix(rng, r, c, 50);
        let (d, u, v) = snf(&m);
        if u.mul(&m).mul(&v) != d {
            return Ok(Some(format!("D != U·M·V for {:?}", m.to_rows())));
        }
        if !u.is_unimodular() || !v.is_unimodular() {
            return Ok(Some(format!("transforms not unimodular for {:?}", m.to_rows())));
        }
        let diag: Vec<Int> = (0..r.min(c)).map(|i| d.row(i)[i].clone()).collect();
        let off_diagonal = (0..r).any(|i| (0..c).any(|j| i != j && !d.row(i)[j].is_zero()));
        let chain = diag.iter().all(|x| !x.is_negative())
            && diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        Ok(check(!off_diagonal && chain, || format!("bad diagonal {diag:?} for {:?}", m.to_rows())))
    })
}

fn hnf_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("arith.hnf", cfg, cfg.count(500), |rng| {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let m = random_matrix(rng, r, c, 50);
        let (h, u) = hnf(&m);
        if u.mul(&m) != h || !u.is_unimodular() {
            return Ok(Some(format!("H != U·M for {:?}", m.to_rows())));
        }
        let w = random_unimodular(rng, r);
        let (h2, _) = hnf(&w.mul(&m));
        Ok(check(h.without_zero_rows() == h2.without_zero_rows(), || {
            format!("HNF changed under unimodular reshuffle of {:?}", m.to_rows())
        }))
    })
}

/// Solves a square rational system by elimination; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let k = &a[i][col] / &a[col][col];
                for j in col..n {
                    let t = &k * &a[col][j];
                    a[i][j] -= t;
                }
                let t = &k * &b[col];
                b[i] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Maximum of `c·x` over a bounded system of weak inequalities, by trying
/// every vertex.
fn vertex_optimum(rows: &[(Vec<Rat>, Rat)], c: &[Rat]) -> Option<Rat> {
    let n = c.len();
    let mut best: Option<Rat> = None;
    let idx: Vec<usize> = (0..rows.len()).collect();
    for pick in combinations(&idx, n) {
        let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b = pick.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve_square(a, b) else { continue };
        let feasible = rows.iter().all(|(a, b)| a.iter().zip(&x).map(|(p, q)| p * q).sum::<Rat>() <= *b);
        if feasible {
            let v: Rat = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            if best.as_ref().is_none_or(|b| &v > b) {
                best = Some(v);
            }
        }
    }
    best
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn lp_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("arith.lp", cfg, cfg.count(200), |rng| {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=6);
        let mut rows: Vec<(Vec<Rat>, Rat)> =
            (0..k).map(|_| (random_functional(rng, n, 5), rat(rng.gen_range(-10..=10)))).collect();
        // A bounding box keeps the vertex oracle complete.
        for i in 0..n {
            for s in [1, -1] {
                let e = (0..n).map(|j| if i == j { rat(s) } else { rat(0) }).collect();
                rows.push((e, rat(50)));
            }
        }
        let c = random_functional(rng, n, 5);
        let mut sys = LinearSystem::new(n);
        for (a, b) in &rows {
            sys.push(a.clone(), Relation::Le, b.clone());
        }
        let got = lp_status(&sys, &c);
        let want = vertex_optimum(&rows, &c);
        Ok(match (got, want) {
            (LpStatus::Infeasible, None) => None,
            (LpStatus::Bounded { optimum, witness }, Some(v)) => check(optimum == v && sys.satisfied_by(&witness), || {
                format!("optimum {optimum} but vertices give {v}")
            }),
            (g, w) => Some(format!("lp_status {g:?} but vertex oracle {w:?}")),
        })
    })
}

// ---------------------------------------------------------------------
// formula and oracle

/// Renames bound variables to `_b0, _b1, …` in order of appearance.
fn canonical_bound(f: &Formula) -> Formula {
    fn go(f: &Formula, next: &mut usize) -> Formula {
        match f {
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let fresh = var(&format!("_b{next}"));
                *next += 1;
                let body = go(&b.substitute_one(v, &Term::var(&fresh)), next);
                if matches!(f, Formula::Exists(..)) {
                    Formula::Exists(fresh, Box::new(body))
                } else {
                    Formula::Forall(fresh, Box::new(body))
                }
            }
            Formula::Not(a) => Formula::Not(Box::new(go(a, next))),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| go(x, next)).collect()),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| go(x, next)).collect()),
            Formula::Implies(a, b) => Formula::Implies(Box::new(go(a, next)), Box::new(go(b, next))),
            Formula::Iff(a, b) => Formula::Iff(Box::new(go(a, next)), Box::new(go(b, next))),
            other => other.clone(),
        }
    }
    go(f, &mut 0)
}

const SHAPE_QE: Shape = Shape { coef: 5, konst: 10, max_modulus: 6, order: true };

fn round_trip_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("formula.round_trip", cfg, cfg.count(200), |rng| {
        let n = rng.gen_range(1..=3);
        let all = names(n);
        let q = rng.gen_range(0..n);
        let f = random_quantified(rng, &all[q..], &all[..q], SHAPE_QE);
        let text = f.to_string();
        let back = parse(&text)?;
        if back.to_string() != text {
            return Ok(Some(format!("printer unstable: `{text}` reprints as `{back}`")));
        }
        Ok(check(canonical_bound(&back) == canonical_bound(&f), || format!("`{text}` parses to a different tree")))
    })
}

fn substitution_suite(cfg: &SuiteConfig) -> SuiteReport {
    let entries = corpus();
    run_indexed("formula.substitution", cfg, entries.len(), |i, rng| {
        let e = &entries[i];
        let f = parse(e.formula)?;
        let vars = e.vars();
        let shift: Vec<i64> = vars.iter().map(|_| rng.gen_range(-5..=5)).collect();
        let b: BTreeMap<Var, Term> = vars
            .iter()
            .zip(&shift)
            .map(|(v, k)| (v.clone(), Term::var(v) + Term::constant(*k)))
            .collect();
        let moved = f.substitute(&b);
        let env = PredicateEnv::single("P", &vars, f.clone());
        let unfolded = Formula::pred("P", vars.iter().map(|v| Term::var(v)).collect()).unfold_predicates(&env)?;
        if let Some(m) = box_equal(&unfolded, &f, &vars, 20)? {
            return Ok(Some(format!("unfolding changed semantics: {m}")));
        }
        let bx = IntBox::cube(&vars, 20);
        for p in oracle::set_on_box(&moved, &bx, &PredicateEnv::new(), &EvalConfig::default())? {
            let q: Vec<Int> = p.iter().zip(&shift).map(|(a, k)| a + k).collect();
            let look = |v: &str| vars.iter().position(|w| &**w == v).map(|i| q[i].clone());
            if !eval_qf(&f, &look)? {
                return Ok(Some(format!("substitution moved {} outside `{f}`", show_point(&p))));
            }
        }
        Ok(None)
    })
}

fn qf_exact_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("oracle.qf_exact", cfg, cfg.count(200), |rng| {
        let vars = names(rng.gen_range(1..=3));
        let f = random_qf_upto(rng, &vars, 4, SHAPE_QE);
        let point: Vec<Int> = vars.iter().map(|_| int(rng.gen_range(-1000..=1000))).collect();
        let t = oracle::eval(&f, &vars, &point, &PredicateEnv::new(), &EvalConfig::default())?;
        let look = |v: &str| vars.iter().position(|w| &**w == v).map(|i| point[i].clone());
        let direct = eval_qf(&f, &look)?;
        Ok(check(t == Truth::from(direct), || format!("`{f}` at {}: oracle {t:?}, direct {direct}", show_point(&point))))
    })
}

// ---------------------------------------------------------------------
// qe

/// A random formula with at most three variables and quantifier depth at
/// most two; returns it with its free variables.
pub fn random_qe_case(rng: &mut impl Rng) -> (Formula, Vec<Var>) {
    let n = rng.gen_range(1..=3);
    let all = names(n);
    let q = rng.gen_range(0..n.min(3)).min(2);
    let bound = &all[n - q..];
    let free = &all[..n - q];
    let f = random_quantified(rng, free, bound, SHAPE_QE);
    let fv: Vec<Var> = free.iter().filter(|v| f.free_vars().contains(*v)).cloned().collect();
    (f, fv)
}

fn signature_only(f: &Formula) -> bool {
    f.is_quantifier_free()
        && !f.has_predicates()
        && !f.any(&|g| matches!(g, Formula::Implies(..) | Formula::Iff(..)))
}

fn qe_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("qe.random", cfg, cfg.count(500), |rng| {
        let (f, free) = random_qe_case(rng);
        let g = eliminate(&f)?;
        if !signature_only(&g) {
            return Ok(Some(format!("eliminate(`{f}`) = `{g}` is not quantifier-free")));
        }
        if free.is_empty() {
            let t = oracle::eval(&f, &[], &[], &PredicateEnv::new(), &EvalConfig::default())?;
            let v = eval_qf(&g, &|_| None)?;
            return Ok(check(t == Truth::from(v), || format!("sentence `{f}`: oracle {t:?}, eliminated {v}")));
        }
        box_equal(&f, &g, &free, 30)
    })
}

fn qe_self_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("qe.self_consistency", cfg, cfg.count(100), |rng| {
        let (f, _) = random_qe_case(rng);
        let g = eliminate(&f)?;
        Ok(check(decide_equiv(&f, &g)?, || format!("decide_equiv rejects `{f}` against its elimination")))
    })
}

// ---------------------------------------------------------------------
// cells

const SHAPE_CELLS: Shape = Shape { coef: 3, konst: 8, max_modulus: 4, order: true };

fn cells_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("cells.random", cfg, cfg.count(200), |rng| {
        let vars = names(rng.gen_range(2..=3));
        let f = random_qf_upto(rng, &vars, 4, SHAPE_CELLS);
        let d = decompose(&f, &vars)?;
        if let Some(m) = box_equal(&f, &d.to_formula(), &vars, 25)? {
            return Ok(Some(format!("terms disagree with the formula: {m}")));
        }
        let y = vars.last().expect("arity at least two");
        let direct = eliminate(&Formula::exists(y, f.clone()))?;
        Ok(check(decide_equiv(&project(&d), &direct)?, || format!("projection of `{f}` differs from ∃{y}")))
    })
}

fn affine_value(f: &StandardZLinear, x: &[Int]) -> Rat {
    let (slopes, k) = f.affine_parts();
    slopes.iter().zip(x).map(|(a, v)| a * rat_int(v)).sum::<Rat>() + k
}

fn zlinear_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("cells.zlinear", cfg, cfg.count(200), |rng| {
        let vars = names(rng.gen_range(2..=3));
        let f = random_qf_upto(rng, &vars, 4, SHAPE_CELLS);
        let d = decompose(&f, &vars)?;
        for t in &d.terms {
            for z in [&t.lower, &t.upper] {
                let ZLinear::Standard(g) = z else { continue };
                for _ in 0..20 {
                    let x: Vec<Int> = g
                        .residues()
                        .iter()
                        .zip(g.moduli())
                        .map(|(c, m)| c + m * int(rng.gen_range(-20..=20)))
                        .collect();
                    let v = g.eval(&x)?;
                    let exact = affine_value(g, &x);
                    if !exact.is_integer() || exact.to_integer() != v {
                        return Ok(Some(format!("{g} at {} gives {v}, affine value {exact}", show_point(&x))));
                    }
                }
            }
        }
        Ok(None)
    })
}

// ---------------------------------------------------------------------
// groupsets

const SHAPE_GROUP: Shape = Shape { coef: 3, konst: 10, max_modulus: 6, order: false };

fn boolean_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("groupsets.boolean", cfg, cfg.count(200), |rng| {
        let vars = names(rng.gen_range(2..=3));
        let f = random_qf_upto(rng, &vars, 4, SHAPE_GROUP);
        let g = from_boolean_combination(&f, &vars)?;
        let bx = IntBox::cube(&vars, 15);
        let members = oracle::set_on_box(&f, &bx, &PredicateEnv::new(), &EvalConfig::with_bound(1))?;
        let n = vars.len();
        let mut p = vec![-15i64; n];
        let mut k = 0;
        loop {
            let point: Vec<Int> = p.iter().map(|&v| int(v)).collect();
            let want = members.get(k).is_some_and(|m| *m == point);
            if want {
                k += 1;
            }
            if g.contains(&point) != want {
                return Ok(Some(format!("`{f}` at {}: expected {want}", show_point(&point))));
            }
            // Lexicographic order, first coordinate slowest, as in set_on_box.
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                if p[i] < 15 {
                    p[i] += 1;
                    break;
                }
                p[i] = -15;
            }
        }
    })
}

fn random_group_set(rng: &mut impl Rng, vars: &[Var]) -> Result<GroupSet> {
    let f = random_qf_upto(rng, vars, 3, SHAPE_GROUP);
    from_boolean_combination(&f, vars)
}

fn rank_union_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("groupsets.rank_union", cfg, cfg.count(200), |rng| {
        let vars = names(rng.gen_range(1..=3));
        let a = random_group_set(rng, &vars)?;
        let b = random_group_set(rng, &vars)?;
        let u = a.union(&b);
        Ok(check(u.rank() == a.rank().max(b.rank()), || {
            format!("rk(X ∪ Y) = {} but ranks {} and {}", u.rank(), a.rank(), b.rank())
        }))
    })
}

/// A random coset of rank `k` in `Z^n` given by generator rows.
fn random_coset_basis(rng: &mut impl Rng, n: usize, k: usize) -> (IntMatrix, Vec<Int>) {
    loop {
        let m = random_matrix(rng, k, n, 3);
        let (h, _) = hnf(&m);
        if h.without_zero_rows().rows() == k {
            let c = (0..n).map(|_| int(rng.gen_range(-10..=10))).collect();
            return (m, c);
        }
    }
}

fn phi_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("groupsets.phi", cfg, cfg.count(100), |rng| {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=n);
        let (alpha, c) = random_coset_basis(rng, n, k);
        for _ in 0..10 {
            let a: Vec<Int> = (0..k).map(|_| int(rng.gen_range(-6..=6))).collect();
            let x = phi_invert(&alpha, &c, &a);
            let back = phi_apply(&alpha, &c, &x)?;
            if back != a || phi_invert(&alpha, &c, &back) != x {
                return Ok(Some(format!("Φ round trip fails at {}", show_point(&x))));
            }
        }
        let shifted: Vec<Int> = c.iter().enumerate().map(|(i, v)| if i == 0 { v + 1 } else { v.clone() }).collect();
        let outside = !Coset::new(c.clone(), Lattice::generated(n, alpha.to_rows())).contains(&shifted);
        Ok(check(!outside || phi_apply(&alpha, &c, &shifted).is_err(), || "Φ accepted a point outside the coset".into()))
    })
}

fn phi_rank_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("groupsets.phi_rank", cfg, cfg.count(100), |rng| {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(1..=n);
        let (alpha, c) = random_coset_basis(rng, n, k);
        let vars = names(n);
        let coset = Coset::new(c.clone(), Lattice::generated(n, alpha.to_rows()));
        let inside = Formula::conj([random_qf_upto(rng, &vars, 3, SHAPE_GROUP), coset.to_formula(&vars)]);
        let x = from_boolean_combination(&inside, &vars)?;
        // Φ(X) as a set in Z^k: substitute the parametrisation.
        let params: Vec<Var> = (0..k).map(|t| var(&format!("a{t}"))).collect();
        let b: BTreeMap<Var, Term> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let t = (0..k).fold(Term::constant(c[i].clone()), |acc, t| acc + Term::scaled_var(&params[t], alpha.row(t)[i].clone()));
                (v.clone(), t)
            })
            .collect();
        let image = from_boolean_combination(&inside.substitute(&b), &params)?;
        Ok(check(image.rank() == x.rank(), || format!("rank {} becomes {} under Φ for `{inside}`", x.rank(), image.rank())))
    })
}

// ---------------------------------------------------------------------
// polyhedra

fn plank_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("polyhedra.plank", cfg, cfg.count(100), |rng| {
        let n = rng.gen_range(1..=3);
        let a = random_functional(rng, n, 5);
        let u = random_rat(rng, 10, 3);
        let v = &u + random_rat(rng, 10, 3).abs();
        let p = Plank::new(a, u, v)?;
        if !quadrant(n).inradius_infinite() {
            return Ok(Some("quadrant reported finite".into()));
        }
        let poly = p.polyhedron();
        if poly.inradius_infinite() {
            return Ok(Some("plank reported infinite".into()));
        }
        let (lo, hi) = poly.inradius_bounds()?;
        // lo ≤ t/2 ≤ hi, compared through squares.
        let quarter = p.thickness_squared() / rat(4);
        Ok(check(&lo * &lo <= quarter && quarter <= &hi * &hi && !lo.is_negative(), || {
            format!("bounds [{lo}, {hi}] miss t/2 with (t/2)² = {quarter}")
        }))
    })
}

fn opposite_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("polyhedra.opposite", cfg, cfg.count(200), |rng| {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=5);
        let fs: Vec<Vec<Rat>> = (0..k).map(|_| random_functional(rng, n, 5)).collect();
        let bs: Vec<Rat> = (0..k).map(|_| rat(rng.gen_range(-10..=10))).collect();
        let open: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
        let (plus, minus) = opposite_system(&fs, &bs, &open)?;
        let (a, b) = (plus.inradius_infinite(), minus.inradius_infinite());
        Ok(check(a == b, || format!("r(P+) infinite: {a}, r(P-) infinite: {b} for {fs:?}, {bs:?}")))
    })
}

/// Splits `[lo, hi]` at `k - 1` random rational points.
fn cuts(rng: &mut impl Rng, lo: &Rat, hi: &Rat, k: usize) -> Vec<Rat> {
    let mut inner: Vec<Rat> = (1..k).map(|_| lo + (hi - lo) * Rat::new(int(rng.gen_range(0..=100)), int(100))).collect();
    inner.sort();
    let mut out = vec![lo.clone()];
    out.extend(inner);
    out.push(hi.clone());
    out
}

fn kadets_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("polyhedra.kadets", cfg, cfg.count(100), |rng| {
        let n = rng.gen_range(1..=2);
        let lo: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-5..=5))).collect();
        let hi: Vec<Rat> = lo.iter().map(|l| l + rat(rng.gen_range(1..=10))).collect();
        let q = cube_box(&lo, &hi);
        let a = random_functional(rng, n, 5);
        // Range of a·x over the box, attained at corners.
        let mut amin = Rat::zero();
        let mut amax = Rat::zero();
        for i in 0..n {
            let (p, r) = (&a[i] * &lo[i], &a[i] * &hi[i]);
            amin += p.clone().min(r.clone());
            amax += p.max(r);
        }
        let pieces = rng.gen_range(1..=4);
        let ts = cuts(rng, &amin, &amax, pieces);
        let mut total = Rat::zero();
        for w in ts.windows(2) {
            let plank = Plank::new(a.clone(), w[0].clone(), w[1].clone())?.polyhedron();
            let piece = if rng.gen_bool(0.5) { plank.intersect(&q) } else { plank };
            if piece.is_empty() {
                continue;
            }
            total += piece.inradius_bounds()?.1;
        }
        let (qlo, _) = q.inradius_bounds()?;
        Ok(check(qlo <= total, || format!("lo(Q) = {qlo} exceeds Σ hi(P_i) = {total}")))
    })
}

fn cover_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("polyhedra.cover", cfg, cfg.count(100), |rng| {
        let n = rng.gen_range(1..=3);
        let mut pieces = vec![quadrant(n)];
        for _ in 0..rng.gen_range(1..=4) {
            let i = rng.gen_range(0..pieces.len());
            let p = pieces.swap_remove(i);
            let a = random_functional(rng, n, 5);
            let u = rat(rng.gen_range(-10..=10));
            let plus = Polyhedron::new(n, vec![closed(a.clone(), u.clone(), Sign::Plus)])?;
            let minus = Polyhedron::new(n, vec![closed(a, u, Sign::Minus)])?;
            pieces.push(p.intersect(&plus));
            pieces.push(p.intersect(&minus));
        }
        Ok(check(pieces.iter().any(|p| p.inradius_infinite()), || format!("no infinite piece among {}", pieces.len())))
    })
}

fn uncovered_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("polyhedra.uncovered", cfg, cfg.count(50), |rng| {
        // Rank-deficient X: a few lines and points.
        let mut cosets = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let off = vec![int(rng.gen_range(-10..=10)), int(rng.gen_range(-10..=10))];
            let lat = if rng.gen_bool(0.7) {
                let (d, _) = random_coset_basis(rng, 2, 1);
                Lattice::generated(2, d.to_rows())
            } else {
                Lattice::zero(2)
            };
            cosets.push(Coset::new(off, lat));
        }
        let mut qs = Vec::new();
        for _ in 0..rng.gen_range(1..=4) {
            if rng.gen_bool(0.5) {
                let a = random_functional(rng, 2, 5);
                let u = rat(rng.gen_range(-20..=20));
                qs.push(Plank::new(a, u.clone(), &u + rat(rng.gen_range(0..=8)))?.polyhedron());
            } else {
                let lo = vec![rat(rng.gen_range(-5..=30)), rat(rng.gen_range(-5..=30))];
                let hi: Vec<Rat> = lo.iter().map(|l| l + rat(rng.gen_range(0..=20))).collect();
                qs.push(cube_box(&lo, &hi));
            }
        }
        if qs.iter().any(|q| q.inradius_infinite()) {
            return Ok(Some("constructed piece has infinite inradius".into()));
        }
        for r in 0..=300i64 {
            for i in 0..=r {
                for p in [[i, r], [r, i]] {
                    let zp = [int(p[0]), int(p[1])];
                    let qp = [rat(p[0]), rat(p[1])];
                    if !cosets.iter().any(|c| c.contains(&zp)) && !qs.iter().any(|q| q.contains(&qp)) {
                        return Ok(None);
                    }
                }
            }
        }
        Ok(Some("no uncovered integer point with coordinates up to 300".into()))
    })
}

fn invariance_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("polyhedra.invariance", cfg, cfg.count(100), |rng| {
        let n = rng.gen_range(1..=3);
        let hs = (0..rng.gen_range(1..=4))
            .map(|_| closed(random_functional(rng, n, 5), rat(rng.gen_range(-10..=10)), Sign::Plus))
            .collect();
        let p = Polyhedron::new(n, hs)?;
        let t: Vec<Rat> = (0..n).map(|_| random_rat(rng, 20, 4)).collect();
        if p.inradius_infinite() != p.translate(&t).inradius_infinite() {
            return Ok(Some("translation changed the verdict".into()));
        }
        let u = random_unimodular(rng, n);
        let m: Vec<Vec<Rat>> = u.to_rows().iter().map(|r| r.iter().map(rat_int).collect()).collect();
        if !quadrant(n).pull_back(&m).inradius_infinite() {
            return Ok(Some("unimodular image of the quadrant reported finite".into()));
        }
        let plank = Plank::new(random_functional(rng, n, 5), rat(0), rat(rng.gen_range(0..=6)))?.polyhedron();
        Ok(check(!plank.pull_back(&m).inradius_infinite(), || "unimodular image of a plank reported infinite".into()))
    })
}

// ---------------------------------------------------------------------
// classifier

/// Expected verdict of a corpus entry, worked out by hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expected {
    Group,
    Ordering,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub formula: &'static str,
    pub vars: &'static [&'static str],
    pub expected: Expected,
    /// A known witness, compared textually when present.
    pub witness: Option<&'static str>,
}

impl CorpusEntry {
    pub fn vars(&self) -> Vec<Var> {
        self.vars.iter().map(|v| var(v)).collect()
    }
}

macro_rules! entry {
    ($name:expr, $f:expr, [$($v:expr),*], $e:ident) => {
        CorpusEntry { name: $name, formula: $f, vars: &[$($v),*], expected: Expected::$e, witness: None }
    };
    ($name:expr, $f:expr, [$($v:expr),*], $e:ident, $w:expr) => {
        CorpusEntry { name: $name, formula: $f, vars: &[$($v),*], expected: Expected::$e, witness: Some($w) }
    };
}

/// The curated classification corpus.
pub fn corpus() -> Vec<CorpusEntry> {
    vec![
        entry!("nonnegative", "x >= 0", ["x"], Ordering, "A(x)"),
        entry!("evens", "x = 0 mod 2", ["x"], Group),
        entry!("mixed_residue_rays", "(0 <= x & x = 1 mod 2) | (x <= 0 & x = 0 mod 2)", ["x"], Ordering, "A(1 + 2*x)"),
        entry!("bounded_interval", "-3 <= x & x <= 5", ["x"], Group),
        entry!("cofinite", "!(x = 2) & !(x = -7)", ["x"], Group),
        entry!("threes_below_seven", "x <= 7 & x = 0 mod 3", ["x"], Ordering),
        entry!("under_diagonal", "0 <= y & y <= x", ["x", "y"], Ordering),
        entry!("window_mod_three", "x <= y & y <= x + 6 & y = x mod 3", ["x", "y"], Group),
        entry!("graph_triple", "y = 3*x", ["x", "y"], Group),
        entry!("odd_fibers", "y = 1 mod 2", ["x", "y"], Group),
        entry!("quadrant", "0 <= x & 0 <= y", ["x", "y"], Ordering),
        entry!("strip", "x <= y & y <= x + 2", ["x", "y"], Group),
        entry!("slanted_strip", "x + 1 <= 2*y & 2*y <= x + 8", ["x", "y"], Group),
        entry!("two_strips", "(x <= y & y <= x + 1) | (x + 4 <= y & y <= x + 5)", ["x", "y"], Group),
        entry!("strip_with_hole", "x <= y & y <= x + 5 & !(y = x + 2)", ["x", "y"], Group),
        entry!("wedge", "x <= y & y <= 2*x", ["x", "y"], Ordering),
        entry!("half_strip", "x <= y & y <= x + 4 & 0 <= x", ["x", "y"], Ordering),
        entry!("two_lines_switching", "(y = 0 & 0 <= x) | (y = 1 & x <= -1)", ["x", "y"], Ordering),
        entry!("strip_and_late_line", "(x <= y & y <= x + 3) | (0 <= x & y = x + 10)", ["x", "y"], Ordering),
        entry!("strip_and_parity_line", "(x <= y & y <= x + 3) | (y = x + 4 & x = 0 mod 2)", ["x", "y"], Group),
        entry!("crossing_strips", "(2*x <= y & y <= 2*x + 3) | (x + 5 <= y & y <= x + 9)", ["x", "y"], Group),
        entry!("band_minus_diagonal", "y <= 3 & -3 <= y & !(y = x)", ["x", "y"], Group),
        entry!("parity_switch", "(x <= y & y = 0 mod 2) | (y <= x & y = 1 mod 2)", ["x", "y"], Ordering),
        entry!("staggered_strips", "(x <= y & y <= x + 3 & x = 0 mod 2) | (x + 2 <= y & y <= x + 5 & x = 1 mod 2)", ["x", "y"], Group),
        entry!("octant", "0 <= x & 0 <= y & 0 <= z", ["x", "y", "z"], Ordering),
        entry!("cone", "0 <= z & z <= x & z <= y", ["x", "y", "z"], Ordering),
        entry!("lattice_slab", "x + y <= z & z <= x + y + 3 & z = x mod 2", ["x", "y", "z"], Group),
        entry!("skew_slab", "2*x + 3*y <= z & z <= 2*x + 3*y + 5 & z = y mod 2", ["x", "y", "z"], Group),
        entry!("empty", "y <= 0 & 1 <= y", ["x", "y"], Group, "false"),
    ]
}

fn corpus_case(e: &CorpusEntry) -> Result<Option<String>> {
    let f = parse(e.formula)?;
    let c = classifier::classify(&f, &e.vars(), &PredicateEnv::new())?;
    let got = match c.verdict {
        Verdict::GroupDefinable(_) => Expected::Group,
        Verdict::DefinesOrdering(_) => Expected::Ordering,
    };
    if got != e.expected {
        return Ok(Some(format!("{}: expected {:?}, got {:?}", e.name, e.expected, got)));
    }
    if !c.report.passed() {
        return Ok(Some(format!("{}: verification failed: {:?}", e.name, c.report.failure)));
    }
    if let Some(w) = e.witness {
        let want = parse(w)?.to_string();
        if c.verdict.witness().to_string() != want {
            return Ok(Some(format!("{}: witness `{}`, expected `{want}`", e.name, c.verdict.witness())));
        }
    }
    Ok(None)
}

fn corpus_suite(cfg: &SuiteConfig) -> SuiteReport {
    let entries = corpus();
    run_indexed("classifier.corpus", cfg, entries.len(), |i, _| corpus_case(&entries[i]))
}

fn order_free_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("classifier.order_free", cfg, cfg.count(50), |rng| {
        let vars = names(rng.gen_range(1..=3));
        let f = random_qf_upto(rng, &vars, 4, SHAPE_GROUP);
        let f = Formula::conj([f, Formula::eq(Term::var(&vars[0]), Term::var(&vars[0]))]);
        let c = classifier::classify(&f, &vars, &PredicateEnv::new())?;
        Ok(check(matches!(c.verdict, Verdict::GroupDefinable(_)) && c.report.passed(), || {
            format!("`{f}`: {} with report {:?}", c.verdict.name(), c.report)
        }))
    })
}

const SHAPE_SMALL: Shape = Shape { coef: 2, konst: 6, max_modulus: 3, order: true };

fn conservation_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("classifier.conservation", cfg, cfg.count(50), |rng| {
        let vars = names(2);
        let f = random_qf_upto(rng, &vars, 3, SHAPE_SMALL);
        let sem = eliminate(&f)?;
        let d = decompose(&sem, &vars)?;
        let pieces = sort_congruences(&TrackedSet::input(vars.clone(), sem.clone()), &d.terms)?;
        // Undo the shift of each slice and take the union.
        let y = &vars[1];
        let union = Formula::disj(pieces.iter().map(|p| {
            p.set.semantics().substitute_one(y, &(Term::var(y) - Term::constant(p.shift.clone())))
        }));
        let terms = d.to_formula();
        if let Some(m) = box_equal(&f, &terms, &vars, 20)? {
            return Ok(Some(format!("cells: {m}")));
        }
        box_equal(&f, &union, &vars, 20).map(|o| o.map(|m| format!("congruence slices: {m}")))
    })
}

fn classifier_random_suite(cfg: &SuiteConfig) -> SuiteReport {
    run_cases("classifier.random", cfg, cfg.count(40), |rng| {
        let vars = names(rng.gen_range(1..=2));
        let f = random_qf_upto(rng, &vars, 3, SHAPE_SMALL);
        let c = classifier::classify(&f, &vars, &PredicateEnv::new())?;
        Ok(check(c.report.passed(), || format!("`{f}`: {} failed verification: {:?}", c.verdict.name(), c.report.failure)))
    })
}
