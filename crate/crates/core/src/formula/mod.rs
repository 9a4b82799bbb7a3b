//! First-order formulas over `{+, -, 0, 1, <, ≡_m}` with named set predicates.

mod env;
mod parse;
mod render;
mod term;
mod transform;

pub use env::{Meaning, OracleFn, PredicateDef, PredicateEnv};
pub use parse::{parse, parse_with_env};
pub use term::{var, Term, Var};
pub use transform::fresh_var;

use crate::arith::Int;
use std::collections::BTreeSet;

/// Atoms compare a term with zero: `Le(t)` is `t <= 0`, `Lt(t)` is `t < 0`,
/// `Eq(t)` is `t = 0`, `Cong(t, m)` is `t ≡ 0 (mod m)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Formula {
    True,
    False,
    Le(Term),
    Lt(Term),
    Eq(Term),
    Cong(Term, Int),
    Pred(Var, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    /// `lhs <= rhs`
    pub fn le(lhs: Term, rhs: Term) -> Formula {
        Formula::Le(lhs - rhs)
    }

    /// `lhs < rhs`
    pub fn lt(lhs: Term, rhs: Term) -> Formula {
        Formula::Lt(lhs - rhs)
    }

    /// `lhs = rhs`
    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs - rhs)
    }

    /// `lhs ≡ rhs (mod m)`
    pub fn cong(lhs: Term, rhs: Term, m: impl Into<Int>) -> Formula {
        Formula::Cong(lhs - rhs, m.into())
    }

    pub fn pred(name: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(var(name), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(var(v), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(var(v), Box::new(body))
    }

    /// Existential closure over `vars`, innermost last.
    pub fn exists_all(vars: &[Var], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::Exists(v.clone(), Box::new(acc)))
    }

    pub fn forall_all(vars: &[Var], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::Forall(v.clone(), Box::new(acc)))
    }

    /// Conjunction with trivial simplification: flattens, drops `true`,
    /// collapses on `false`.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    /// Negation that folds constants and double negation.
    pub fn negate(self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(
            self,
            Formula::Le(_)
                | Formula::Lt(_)
                | Formula::Eq(_)
                | Formula::Cong(..)
                | Formula::Pred(..)
                | Formula::True
                | Formula::False
        )
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => vec![a],
            Formula::And(xs) | Formula::Or(xs) => xs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn any(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    pub fn is_quantifier_free(&self) -> bool {
        !self.any(&|f| matches!(f, Formula::Exists(..) | Formula::Forall(..)))
    }

    pub fn has_predicates(&self) -> bool {
        self.any(&|f| matches!(f, Formula::Pred(..)))
    }

    pub fn has_order_atoms(&self) -> bool {
        self.any(&|f| matches!(f, Formula::Le(_) | Formula::Lt(_)))
    }

    /// Names of predicates used, sorted.
    pub fn predicates(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Pred(p, _) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Every term occurring in an atom or predicate argument.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.visit(&mut |f| match f {
            Formula::Le(t) | Formula::Lt(t) | Formula::Eq(t) | Formula::Cong(t, _) => out.push(t),
            Formula::Pred(_, args) => out.extend(args.iter()),
            _ => {}
        });
        out
    }

    /// Moduli of all congruence atoms.
    pub fn moduli(&self) -> Vec<&Int> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Cong(_, m) = f {
                out.push(m);
            }
        });
        out
    }

    /// Quantifier nesting depth.
    pub fn quantifier_depth(&self) -> usize {
        let inner = self
            .children()
            .into_iter()
            .map(Formula::quantifier_depth)
            .max()
            .unwrap_or(0);
        match self {
            Formula::Exists(..) | Formula::Forall(..) => inner + 1,
            _ => inner,
        }
    }

    /// Number of nodes, a rough size measure.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }
}

#[cfg(test)]
mod tests;
