//! Atom normalization and light propositional simplification.

use crate::arith::{ceil_div, modulo, Int};
use crate::formula::{Formula, Term};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashSet};

fn truth(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

/// Makes the leading coefficient positive; returns whether it flipped.
fn orient(t: Term) -> (Term, bool) {
    match t.coeffs().values().next() {
        Some(c) if c.is_negative() => (-t, true),
        _ => (t, false),
    }
}

/// Normal form of `t <= 0`.
pub fn norm_le(t: Term) -> Formula {
    let g = t.content();
    if g.is_zero() {
        return truth(!t.constant_part().is_positive());
    }
    let k = ceil_div(t.constant_part(), &g);
    Formula::Le(t.without_constant().div_exact(&g).with_constant(k))
}

/// Normal form of `t = 0`.
pub fn norm_eq(t: Term) -> Formula {
    let g = t.content();
    if g.is_zero() {
        return truth(t.constant_part().is_zero());
    }
    if !(t.constant_part() % &g).is_zero() {
        return Formula::False;
    }
    Formula::Eq(orient(t.div_exact(&g)).0)
}

/// Normal form of `t ≡ 0 (mod m)`.
pub fn norm_cong(t: Term, m: Int) -> Formula {
    if m.is_one() {
        return Formula::True;
    }
    let reduced = Term::from_parts(
        t.coeffs().iter().map(|(v, c)| (v.clone(), modulo(c, &m))),
        modulo(t.constant_part(), &m),
    );
    let g = reduced.content().gcd(&m);
    if reduced.is_constant() {
        return truth(reduced.constant_part().is_zero());
    }
    if !(reduced.constant_part() % &g).is_zero() {
        return Formula::False;
    }
    if g.is_one() {
        Formula::Cong(reduced, m)
    } else {
        norm_cong(reduced.div_exact(&g), &m / &g)
    }
}

/// Normalizes a single literal (atom or negated atom).
pub fn norm_literal(f: &Formula) -> Formula {
    match f {
        Formula::Le(t) => norm_le(t.clone()),
        Formula::Lt(t) => norm_le(t.clone() + Term::constant(1)),
        Formula::Eq(t) => norm_eq(t.clone()),
        Formula::Cong(t, m) => norm_cong(t.clone(), m.clone()),
        Formula::Not(a) => match a.as_ref() {
            Formula::Le(t) => norm_le(-t.clone() + Term::constant(1)),
            Formula::Lt(t) => norm_le(-t.clone()),
            Formula::Not(b) => norm_literal(b),
            other => norm_literal(other).negate(),
        },
        other => other.clone(),
    }
}

impl Term {
    pub fn without_constant(&self) -> Term {
        self.with_constant(Int::zero())
    }
}

/// Bounds on a linear form collected inside a conjunction or disjunction.
#[derive(Default)]
struct Bounds {
    upper: Option<Int>,
    lower: Option<Int>,
    eq: Option<Int>,
    conflict: bool,
}

/// Merges order atoms over a common linear part. In a conjunction the
/// tightest bounds are kept and contradictions detected; in a disjunction the
/// loosest are kept and tautologies detected. Returns `None` when the whole
/// connective collapses (to `false` for `And`, `true` for `Or`).
fn merge_bounds(items: Vec<Formula>, conj: bool) -> Option<Vec<Formula>> {
    let mut table: BTreeMap<Term, Bounds> = BTreeMap::new();
    let mut rest = Vec::new();
    for f in items {
        match &f {
            Formula::Le(t) => {
                let (p, flipped) = orient(t.without_constant());
                let k = t.constant_part();
                let b = table.entry(p).or_default();
                if flipped {
                    // -p + k <= 0  <=>  p >= k
                    let v = k.clone();
                    b.lower = Some(match b.lower.take() {
                        None => v,
                        Some(l) => {
                            if conj {
                                l.max(v)
                            } else {
                                l.min(v)
                            }
                        }
                    });
                } else {
                    // p + k <= 0  <=>  p <= -k
                    let v = -k.clone();
                    b.upper = Some(match b.upper.take() {
                        None => v,
                        Some(u) => {
                            if conj {
                                u.min(v)
                            } else {
                                u.max(v)
                            }
                        }
                    });
                }
            }
            Formula::Eq(t) if conj => {
                let p = t.without_constant();
                let v = -t.constant_part().clone();
                let b = table.entry(p).or_default();
                match &b.eq {
                    Some(e) if *e != v => b.conflict = true,
                    _ => b.eq = Some(v),
                }
            }
            _ => rest.push(f),
        }
    }
    let mut out = Vec::new();
    for (p, b) in table {
        if conj {
            if b.conflict {
                return None;
            }
            if let Some(e) = &b.eq {
                if b.lower.as_ref().is_some_and(|l| l > e) || b.upper.as_ref().is_some_and(|u| u < e) {
                    return None;
                }
                out.push(Formula::Eq(p.with_constant(-e.clone())));
                continue;
            }
            match (&b.lower, &b.upper) {
                (Some(l), Some(u)) if l > u => return None,
                (Some(l), Some(u)) if l == u => out.push(Formula::Eq(p.with_constant(-l.clone()))),
                _ => {
                    if let Some(l) = &b.lower {
                        out.push(Formula::Le((-p.clone()).with_constant(l.clone())));
                    }
                    if let Some(u) = &b.upper {
                        out.push(Formula::Le(p.with_constant(-u.clone())));
                    }
                }
            }
        } else {
            if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
                if *l <= u + Int::one() {
                    return None;
                }
            }
            if let Some(l) = &b.lower {
                out.push(Formula::Le((-p.clone()).with_constant(l.clone())));
            }
            if let Some(u) = &b.upper {
                out.push(Formula::Le(p.with_constant(-u.clone())));
            }
        }
    }
    out.extend(rest);
    Some(out)
}

fn complement_of(f: &Formula) -> Formula {
    match f {
        Formula::Not(a) => (**a).clone(),
        other => Formula::not(other.clone()),
    }
}

fn finish(items: Vec<Formula>, conj: bool) -> Formula {
    let mut seen = HashSet::new();
    let mut uniq = Vec::new();
    for f in items {
        if seen.insert(f.clone()) {
            uniq.push(f);
        }
    }
    for f in &uniq {
        if seen.contains(&complement_of(f)) {
            return truth(!conj);
        }
    }
    let Some(merged) = merge_bounds(uniq, conj) else {
        return truth(!conj);
    };
    if conj {
        Formula::conj(merged)
    } else {
        Formula::disj(merged)
    }
}

/// Simplifies a formula: literal normalization, constant folding,
/// flattening, duplicate and complement detection, bound merging.
/// Quantifiers are kept (their bodies simplified); `->` and `<->` are
/// expanded only when their arguments fold.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Pred(..) => f.clone(),
        Formula::Le(_) | Formula::Lt(_) | Formula::Eq(_) | Formula::Cong(..) => norm_literal(f),
        Formula::Not(a) => match simplify(a) {
            Formula::Le(t) => norm_le(-t + Term::constant(1)),
            Formula::Not(b) => *b,
            other => other.negate(),
        },
        Formula::And(xs) | Formula::Or(xs) => {
            let conj = matches!(f, Formula::And(_));
            let mut items = Vec::new();
            for x in xs {
                match simplify(x) {
                    Formula::True if conj => {}
                    Formula::False if !conj => {}
                    Formula::False if conj => return Formula::False,
                    Formula::True if !conj => return Formula::True,
                    Formula::And(inner) if conj => items.extend(inner),
                    Formula::Or(inner) if !conj => items.extend(inner),
                    other => items.push(other),
                }
            }
            finish(items, conj)
        }
        Formula::Implies(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Formula::False, _) | (_, Formula::True) => Formula::True,
                (Formula::True, _) => b,
                (_, Formula::False) => simplify(&a.negate()),
                _ => Formula::implies(a, b),
            }
        }
        Formula::Iff(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a, &b) {
                (Formula::True, _) => b,
                (_, Formula::True) => a,
                (Formula::False, _) => simplify(&b.negate()),
                (_, Formula::False) => simplify(&a.negate()),
                _ if a == b => Formula::True,
                _ => Formula::iff(a, b),
            }
        }
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            let body = simplify(b);
            if !body.free_vars().contains(v) {
                return body;
            }
            if matches!(f, Formula::Exists(..)) {
                Formula::Exists(v.clone(), Box::new(body))
            } else {
                Formula::Forall(v.clone(), Box::new(body))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn s(x: &str) -> String {
        simplify(&parse(x).unwrap()).to_string()
    }

    #[test]
    fn literal_normal_forms() {
        assert_eq!(s("2*x <= 3"), "x <= 1");
        assert_eq!(s("2*x < 4"), "x <= 1");
        assert_eq!(s("!(x <= 3)"), "4 <= x");
        assert_eq!(s("2*x = 3"), "false");
        assert_eq!(s("-2*x = 4"), "x + 2 = 0");
        assert_eq!(s("7*x + 3 = 1 mod 5"), "2*x + 2 = 0 mod 5");
        assert_eq!(s("2*x = 1 mod 4"), "false");
        assert_eq!(s("2*x = 2 mod 4"), "x + 1 = 0 mod 2");
        assert_eq!(s("x = 3 mod 1"), "true");
        assert_eq!(s("3 = 1 mod 2"), "true");
    }

    #[test]
    fn connectives_fold() {
        assert_eq!(s("x <= 3 & x >= 5"), "false");
        assert_eq!(s("x <= 3 & x >= 3"), "x = 3");
        assert_eq!(s("x <= 3 | x >= 4"), "true");
        assert_eq!(s("x <= 3 | x <= 7"), "x <= 7");
        assert_eq!(s("x <= 3 & x <= 7 & y = 0 mod 2"), "x <= 3 & y = 0 mod 2");
        assert_eq!(s("x = 1 & x = 2"), "false");
        assert_eq!(s("x = 1 mod 2 & !(x = 1 mod 2)"), "false");
        assert_eq!(s("E y. x <= 3"), "x <= 3");
        assert_eq!(s("x = 2 & x <= 5"), "x = 2");
        assert_eq!(s("x = 2 & 3 <= x"), "false");
    }
}
