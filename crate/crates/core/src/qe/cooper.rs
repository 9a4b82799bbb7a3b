//! Cooper's elimination of one existential quantifier from a
//! quantifier-free formula in negation normal form.

use super::simplify::simplify;
use crate::arith::{lcm, Int};
use crate::formula::{Formula, Term, Var};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

fn atom_term(f: &Formula) -> Option<&Term> {
    match f {
        Formula::Le(t) | Formula::Lt(t) | Formula::Eq(t) | Formula::Cong(t, _) => Some(t),
        _ => None,
    }
}

fn coefficient_lcm(phi: &Formula, v: &str) -> Int {
    let mut l = Int::one();
    phi.visit(&mut |f| {
        if let Some(t) = atom_term(f) {
            let c = t.coeff(v);
            if !c.is_zero() {
                l = lcm(&l, &c.abs());
            }
        }
    });
    l
}

/// `∃v. φ` for quantifier-free `φ` (literals normalized, NNF).
pub fn exists_qf(v: &Var, phi: &Formula) -> Formula {
    if !phi.free_vars().contains(v) {
        return phi.clone();
    }
    match phi {
        Formula::Or(ds) => simplify(&Formula::Or(ds.iter().map(|d| exists_qf(v, d)).collect())),
        Formula::And(cs) => {
            let (with, without): (Vec<Formula>, Vec<Formula>) =
                cs.iter().cloned().partition(|c| c.free_vars().contains(v));
            let inner = match split_on_equalities(v, &with) {
                Some(cases) => simplify(&Formula::Or(cases.iter().map(|c| exists_qf(v, c)).collect())),
                None => eliminate_core(v, &Formula::conj(with)),
            };
            simplify(&Formula::conj(without.into_iter().chain([inner])))
        }
        _ => eliminate_core(v, phi),
    }
}

/// Widest window enumerated point by point.
const WINDOW_LIMIT: i64 = 64;

/// Whether every disjunct of the DNF of `f` pins `v` down to finitely
/// many values by an equality or a short window.
fn pins(v: &str, f: &Formula) -> bool {
    match f {
        Formula::Eq(t) => !t.coeff(v).is_zero(),
        Formula::And(cs) => window(v, cs).is_some() || cs.iter().any(|c| pins(v, c)),
        Formula::Or(ds) => ds.iter().all(|d| pins(v, d)),
        _ => false,
    }
}

/// Two bounds `t1 ≤ 0`, `t2 ≤ 0` among `cs` with `t1 + t2 = c` constant,
/// so `0 ≤ -t2 ≤ -c`. Returns the narrowest such window (width `-c`,
/// possibly negative) together with `t2`.
fn window<'a>(v: &str, cs: &'a [Formula]) -> Option<(Int, &'a Term)> {
    let bounds: Vec<&Term> = cs
        .iter()
        .filter_map(|c| match c {
            Formula::Le(t) if !t.coeff(v).is_zero() => Some(t),
            _ => None,
        })
        .collect();
    let mut best: Option<(Int, &Term)> = None;
    for (i, t1) in bounds.iter().enumerate() {
        for t2 in &bounds[i + 1..] {
            let sum = (*t1).clone() + (*t2).clone();
            if !sum.is_constant() {
                continue;
            }
            let width = -sum.constant_part().clone();
            if width <= Int::from(WINDOW_LIMIT) && best.as_ref().is_none_or(|(w, _)| &width < w) {
                best = Some((width, *t2));
            }
        }
    }
    best
}

/// Rewrites a conjunction as a disjunction of conjunctions that each
/// contain an equality in `v`, so elimination is by substitution: either
/// `v` is pinned to a short window by two bounds, or some conjunct is a
/// disjunction of pinned cases.
fn split_on_equalities(v: &Var, cs: &[Formula]) -> Option<Vec<Formula>> {
    if cs.iter().any(|c| matches!(c, Formula::Eq(t) if !t.coeff(v).is_zero())) {
        return None;
    }
    if let Some((width, t)) = window(v, cs) {
        let mut cases = Vec::new();
        let mut j = Int::zero();
        while j <= width {
            let pin = Formula::Eq(t.clone() + Term::constant(j.clone()));
            cases.push(simplify(&Formula::conj(cs.iter().cloned().chain([pin]))));
            j += 1;
        }
        return Some(cases);
    }
    let pos = cs.iter().position(|c| matches!(c, Formula::Or(_)) && pins(v, c))?;
    let Formula::Or(ds) = &cs[pos] else { unreachable!() };
    let others: Vec<Formula> = cs.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, c)| c.clone()).collect();
    Some(
        ds.iter()
            .map(|d| simplify(&Formula::conj(others.iter().cloned().chain([d.clone()]))))
            .collect(),
    )
}

fn eliminate_core(v: &Var, phi: &Formula) -> Formula {
    let conjuncts: Vec<&Formula> = match phi {
        Formula::And(cs) => cs.iter().collect(),
        other => vec![other],
    };
    let pivot = conjuncts
        .iter()
        .filter_map(|c| match c {
            Formula::Eq(t) if !t.coeff(v).is_zero() => Some(t),
            _ => None,
        })
        .min_by_key(|t| t.coeff(v).abs());
    match pivot {
        Some(t) => substitute_equality(v, phi, t),
        None => general(v, phi),
    }
}

/// Uses `a·v + s = 0` to eliminate `v` everywhere: every atom with
/// coefficient `b` of `v` is scaled by `|a|` and `|a|·b·v` replaced by
/// `b·sign(a)·(-s)`; the divisibility `s ≡ 0 (mod |a|)` is added.
fn substitute_equality(v: &Var, phi: &Formula, eq: &Term) -> Formula {
    let a = eq.coeff(v);
    let s = eq.without(v);
    let abs_a = a.abs();
    let sign = if a.is_negative() { -Int::one() } else { Int::one() };
    let replacement = (-s.clone()).scale(&sign);
    let rewrite = |t: &Term| -> Term {
        let b = t.coeff(v);
        if b.is_zero() {
            return t.clone();
        }
        t.without(v).scale(&abs_a) + replacement.scale(&b)
    };
    let body = phi.map_atoms(&|f| match f {
        Formula::Le(t) => Formula::Le(rewrite(t)),
        Formula::Lt(t) => Formula::Lt(rewrite(t)),
        Formula::Eq(t) => Formula::Eq(rewrite(t)),
        Formula::Cong(t, m) => {
            if t.coeff(v).is_zero() {
                f.clone()
            } else {
                Formula::Cong(rewrite(t), m * &abs_a)
            }
        }
        other => other.clone(),
    });
    let divisibility = Formula::Cong(s, abs_a);
    simplify(&Formula::conj([divisibility, body]))
}

fn general(v: &Var, phi: &Formula) -> Formula {
    let l = coefficient_lcm(phi, v);
    // Normalize every coefficient of v to ±1 (standing for l·v).
    let unit = |t: &Term| -> (Term, Int) {
        let c = t.coeff(v);
        let k = &l / c.abs();
        let sign = if c.is_negative() { -Int::one() } else { Int::one() };
        (t.without(v).scale(&k) + Term::scaled_var(v, sign), k)
    };
    let mut body = phi.map_atoms(&|f| match f {
        Formula::Le(t) | Formula::Lt(t) | Formula::Eq(t) if !t.coeff(v).is_zero() => {
            let (u, _) = unit(t);
            match f {
                Formula::Le(_) => Formula::Le(u),
                Formula::Lt(_) => Formula::Lt(u),
                _ => Formula::Eq(u),
            }
        }
        Formula::Cong(t, m) if !t.coeff(v).is_zero() => {
            let (u, k) = unit(t);
            Formula::Cong(u, m * k)
        }
        other => other.clone(),
    });
    if !l.is_one() {
        body = Formula::conj([body, Formula::Cong(Term::var(v), l.clone())]);
    }

    let mut delta = Int::one();
    let mut lower: BTreeSet<Term> = BTreeSet::new();
    let mut upper: BTreeSet<Term> = BTreeSet::new();
    collect(&body, v, false, &mut delta, &mut lower, &mut upper);

    let use_lower = lower.len() <= upper.len();
    let at_infinity = body.map_atoms(&|f| match f {
        Formula::Le(t) | Formula::Lt(t) => {
            let c = t.coeff(v);
            if c.is_zero() {
                f.clone()
            } else if c.is_positive() == use_lower {
                // Upper bound holds at -∞, lower bound holds at +∞.
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::Eq(t) if !t.coeff(v).is_zero() => Formula::False,
        other => other.clone(),
    });
    let at_infinity = simplify(&at_infinity);

    let mut out = Vec::new();
    let steps: Vec<Int> = num_iter(&delta);
    for j in &steps {
        let point = if use_lower { j.clone() } else { -j.clone() };
        out.push(simplify(&at_infinity.substitute_one(v, &Term::constant(point))));
        if out.last() == Some(&Formula::True) {
            return Formula::True;
        }
    }
    let bounds = if use_lower { &lower } else { &upper };
    for b in bounds {
        for j in &steps {
            let point = if use_lower {
                b.clone() + Term::constant(j.clone())
            } else {
                b.clone() - Term::constant(j.clone())
            };
            let inst = simplify(&body.substitute_one(v, &point));
            if inst == Formula::True {
                return Formula::True;
            }
            out.push(inst);
        }
    }
    simplify(&Formula::Or(out))
}

fn num_iter(delta: &Int) -> Vec<Int> {
    let mut out = Vec::new();
    let mut j = Int::one();
    while &j <= delta {
        out.push(j.clone());
        j += 1;
    }
    out
}

/// Collects the congruence period and the boundary points: `lower` holds
/// `b` such that the atom switches as `v` crosses `b + 1` from below,
/// `upper` holds `a` such that it switches as `v` crosses `a - 1` from above.
fn collect(f: &Formula, v: &str, negated: bool, delta: &mut Int, lower: &mut BTreeSet<Term>, upper: &mut BTreeSet<Term>) {
    match f {
        Formula::Not(a) => collect(a, v, !negated, delta, lower, upper),
        Formula::And(xs) | Formula::Or(xs) => {
            for x in xs {
                collect(x, v, negated, delta, lower, upper);
            }
        }
        Formula::Le(t) | Formula::Lt(t) => {
            let c = t.coeff(v);
            if c.is_zero() {
                return;
            }
            let strict = matches!(f, Formula::Lt(_));
            // c = ±1: v + s (<|<=) 0 or -v + s (<|<=) 0
            let s = t.without(v);
            if c.is_positive() {
                // v <= -s (or v < -s): last true point -s (or -s - 1)
                let last = if strict { -s.clone() - Term::constant(1) } else { -s.clone() };
                upper.insert(last + Term::constant(1));
            } else {
                // v >= s (or v > s): first true point s (or s + 1)
                let first = if strict { s.clone() + Term::constant(1) } else { s.clone() };
                lower.insert(first - Term::constant(1));
            }
        }
        Formula::Eq(t) => {
            let c = t.coeff(v);
            if c.is_zero() {
                return;
            }
            let e = -t.without(v).scale(&c);
            if negated {
                lower.insert(e.clone());
                upper.insert(e);
            } else {
                lower.insert(e.clone() - Term::constant(1));
                upper.insert(e + Term::constant(1));
            }
        }
        Formula::Cong(t, m)
            if !t.coeff(v).is_zero() => {
                *delta = lcm(delta, m);
            }
        _ => {}
    }
}
