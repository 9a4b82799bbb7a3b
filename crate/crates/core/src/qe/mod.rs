//! Quantifier elimination for Presburger arithmetic and the decision
//! procedures built on it.

mod cooper;
mod simplify;

pub use cooper::exists_qf;
pub use simplify::{norm_literal, simplify};

use crate::error::{Error, Result};
use crate::arith::Int;
use crate::formula::{Formula, Term, Var};
use num_traits::{One, Zero};
use crate::oracle::eval_qf;
use std::collections::BTreeSet;

fn neg(f: &Formula) -> Formula {
    simplify(&Formula::not(f.clone()).nnf())
}

fn elim(f: &Formula) -> Result<Formula> {
    Ok(match f {
        Formula::Pred(p, _) => return Err(Error::PredicatePresent(p.to_string())),
        Formula::Not(a) => neg(&elim(a)?),
        Formula::And(xs) => simplify(&Formula::And(xs.iter().map(elim).collect::<Result<_>>()?)),
        Formula::Or(xs) => simplify(&Formula::Or(xs.iter().map(elim).collect::<Result<_>>()?)),
        Formula::Implies(a, b) => simplify(&Formula::Or(vec![neg(&elim(a)?), elim(b)?])),
        Formula::Iff(a, b) => {
            let (p, q) = (elim(a)?, elim(b)?);
            simplify(&Formula::Or(vec![
                Formula::And(vec![p.clone(), q.clone()]),
                Formula::And(vec![neg(&p), neg(&q)]),
            ]))
        }
        Formula::Exists(v, b) => exists_qf(v, &elim(b)?),
        Formula::Forall(v, b) => neg(&exists_qf(v, &neg(&elim(b)?))),
        atom => norm_literal(atom),
    })
}

/// Equivalent quantifier-free formula over `{+, -, 0, 1, <, ≡_m}`.
pub fn eliminate(f: &Formula) -> Result<Formula> {
    if let Some(p) = f.predicates().into_iter().next() {
        return Err(Error::PredicatePresent(p.to_string()));
    }
    elim(f)
}

fn order_atom_count(f: &Formula, v: &str) -> usize {
    let mut n = 0;
    f.visit(&mut |g| match g {
        Formula::Le(t) | Formula::Lt(t) | Formula::Eq(t) if t.mentions(v) => n += 1,
        _ => {}
    });
    n
}

/// Radius of the point probe tried before elimination.
const PROBE_RADIUS: i64 = 3;

/// Looks for a model among small points. Only used for up to three
/// variables, where the probe is a few hundred evaluations.
fn probe(f: &Formula, vars: &BTreeSet<Var>) -> Result<bool> {
    let free = f.free_vars();
    if free.len() > 3 || !free.is_subset(vars) {
        return Ok(false);
    }
    let names: Vec<&Var> = free.iter().collect();
    let side = (2 * PROBE_RADIUS + 1) as usize;
    let total = side.pow(names.len() as u32);
    for idx in 0..total {
        let mut rest = idx;
        let point: Vec<Int> = (0..names.len())
            .map(|_| {
                let c = (rest % side) as i64 - PROBE_RADIUS;
                rest /= side;
                Int::from(c)
            })
            .collect();
        let lookup = |v: &str| names.iter().position(|w| &***w == v).map(|i| point[i].clone());
        if eval_qf(f, &lookup)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether the existential closure of a quantifier-free formula over
/// `vars` holds.
fn satisfiable_qf(f: &Formula, vars: &BTreeSet<Var>) -> Result<bool> {
    let f = simplify(f);
    if probe(&f, vars)? {
        return Ok(true);
    }
    satisfiable_by_elimination(&f, vars)
}

/// Disjunctions are split before eliminating so that a satisfiable branch
/// short-circuits the rest.
fn satisfiable_by_elimination(f: &Formula, vars: &BTreeSet<Var>) -> Result<bool> {
    let f = simplify(f);
    match &f {
        Formula::True => return Ok(true),
        Formula::False => return Ok(false),
        Formula::Or(ds) => {
            for d in ds {
                if satisfiable_by_elimination(d, vars)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        _ => {}
    }
    let free = f.free_vars();
    let live: Vec<&Var> = vars.iter().filter(|v| free.contains(*v)).collect();
    let Some(v) = live.iter().min_by_key(|v| order_atom_count(&f, v)) else {
        return eval_qf(&f, &|_| None);
    };
    let next = exists_qf(v, &f);
    let mut rest = vars.clone();
    rest.remove(*v);
    satisfiable_by_elimination(&next, &rest)
}

/// Truth value of a sentence over `Z`.
pub fn decide_sentence(f: &Formula) -> Result<bool> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(join(&free)));
    }
    let q = eliminate(f)?;
    eval_qf(&q, &|_| None)
}

/// Whether some assignment of the free variables satisfies `f`.
pub fn is_satisfiable(f: &Formula) -> Result<bool> {
    let q = eliminate(f)?;
    satisfiable_qf(&q, &q.free_vars())
}

/// Whether `f` and `g` define the same set (`∀x̄. f ↔ g`).
pub fn decide_equiv(f: &Formula, g: &Formula) -> Result<bool> {
    let (fv, gv) = (f.free_vars(), g.free_vars());
    if fv != gv {
        // Still decidable over the union; only report the mismatch when
        // one side is a predicate-bearing formula.
        if f.has_predicates() || g.has_predicates() {
            return Err(Error::Invalid("free variables differ".into()));
        }
    }
    let fq = eliminate(f)?;
    let gq = eliminate(g)?;
    let vars: BTreeSet<Var> = fv.union(&gv).cloned().collect();
    let left = Formula::And(vec![fq.clone(), neg(&gq)]);
    if satisfiable_qf(&left, &vars)? {
        return Ok(false);
    }
    let right = Formula::And(vec![gq, neg(&fq)]);
    Ok(!satisfiable_qf(&right, &vars)?)
}

/// A satisfying assignment of `vars`, chosen coordinate by coordinate with
/// the smallest absolute value (negative first on ties). `None` when
/// unsatisfiable. Variables of `f` outside `vars` are existential.
pub fn find_model(f: &Formula, vars: &[Var]) -> Result<Option<Vec<Int>>> {
    let mut cur = eliminate(f)?;
    let all: BTreeSet<Var> = cur.free_vars().union(&vars.iter().cloned().collect()).cloned().collect();
    if !satisfiable_qf(&cur, &all)? {
        return Ok(None);
    }
    let mut out = Vec::with_capacity(vars.len());
    for (i, v) in vars.iter().enumerate() {
        let rest: BTreeSet<Var> = all.iter().filter(|w| !vars[..=i].contains(w)).cloned().collect();
        let x = Term::var(v);
        let within = |r: &Int| {
            let boxed = Formula::And(vec![
                cur.clone(),
                Formula::Le(-x.clone() - Term::constant(r.clone())),
                Formula::Le(x.clone() - Term::constant(r.clone())),
            ]);
            satisfiable_qf(&boxed, &rest.iter().cloned().chain([v.clone()]).collect())
        };
        let mut hi = Int::one();
        if !within(&Int::zero())? {
            while !within(&hi)? {
                hi *= 2;
            }
        } else {
            hi = Int::zero();
        }
        let mut lo = &hi / 2;
        while &lo + 1 < hi {
            let mid: Int = (&lo + &hi) / 2;
            if within(&mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let r = hi;
        let pick = |val: &Int| simplify(&cur.substitute_one(v, &Term::constant(val.clone())));
        let neg_side = pick(&-r.clone());
        let val = if satisfiable_qf(&neg_side, &rest)? { -r } else { r };
        cur = pick(&val);
        out.push(val);
    }
    Ok(Some(out))
}

fn join(vs: &BTreeSet<Var>) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

#[cfg(test)]
mod tests;
