use crate::arith::Int;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub type Var = Arc<str>;

pub fn var(name: &str) -> Var {
    Arc::from(name)
}

/// Integer-linear combination of variables plus a constant. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Term {
    coeffs: BTreeMap<Var, Int>,
    constant: Int,
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Term {
    pub fn zero() -> Self {
        Term::default()
    }

    pub fn constant(k: impl Into<Int>) -> Self {
        Term {
            coeffs: BTreeMap::new(),
            constant: k.into(),
        }
    }

    pub fn var(v: &str) -> Self {
        Self::scaled_var(v, 1)
    }

    pub fn scaled_var(v: &str, k: impl Into<Int>) -> Self {
        let mut t = Term::zero();
        t.add_coeff(&var(v), &k.into());
        t
    }

    pub fn from_parts(coeffs: impl IntoIterator<Item = (Var, Int)>, constant: Int) -> Self {
        let mut t = Term::constant(constant);
        for (v, c) in coeffs {
            t.add_coeff(&v, &c);
        }
        t
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Int> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &Int {
        &self.constant
    }

    pub fn coeff(&self, v: &str) -> Int {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn mentions(&self, v: &str) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    pub fn add_coeff(&mut self, v: &Var, k: &Int) {
        if k.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(v.clone()).or_default();
        *entry += k;
        if entry.is_zero() {
            self.coeffs.remove(v);
        }
    }

    pub fn add_constant(&mut self, k: &Int) {
        self.constant += k;
    }

    pub fn with_constant(&self, k: Int) -> Term {
        Term {
            coeffs: self.coeffs.clone(),
            constant: k,
        }
    }

    /// The term with variable `v` dropped.
    pub fn without(&self, v: &str) -> Term {
        let mut t = self.clone();
        t.coeffs.remove(v);
        t
    }

    pub fn scale(&self, k: &Int) -> Term {
        if k.is_zero() {
            return Term::zero();
        }
        Term {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// Exact division of every coefficient and the constant.
    pub fn div_exact(&self, k: &Int) -> Term {
        Term {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c / k)).collect(),
            constant: &self.constant / k,
        }
    }

    /// Gcd of the variable coefficients (zero for a constant term).
    pub fn content(&self) -> Int {
        self.coeffs
            .values()
            .fold(Int::zero(), |g, c| g.gcd(c))
    }

    pub fn max_abs_coeff(&self) -> Int {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Replaces variables by terms simultaneously.
    pub fn substitute(&self, bindings: &BTreeMap<Var, Term>) -> Term {
        let mut out = Term::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            match bindings.get(v) {
                Some(t) => out = out + t.scale(c),
                None => out.add_coeff(v, c),
            }
        }
        out
    }

    pub fn substitute_one(&self, v: &str, t: &Term) -> Term {
        let c = self.coeff(v);
        if c.is_zero() {
            return self.clone();
        }
        self.without(v) + t.scale(&c)
    }

    pub fn rename(&self, from: &str, to: &Var) -> Term {
        self.substitute_one(from, &Term::var(to))
    }

    /// Evaluates with a lookup; `None` if a variable is unassigned.
    pub fn eval_with(&self, lookup: impl Fn(&str) -> Option<Int>) -> Option<Int> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * lookup(v)?;
        }
        Some(acc)
    }

    /// Positive part and negated negative part, so `self = pos - neg`.
    pub fn split_signs(&self) -> (Term, Term) {
        let mut pos = Term::zero();
        let mut neg = Term::zero();
        for (v, c) in &self.coeffs {
            if c.is_positive() {
                pos.add_coeff(v, c);
            } else {
                neg.add_coeff(v, &-c);
            }
        }
        if self.constant.is_positive() {
            pos.constant = self.constant.clone();
        } else {
            neg.constant = -self.constant.clone();
        }
        (pos, neg)
    }
}

impl Add for Term {
    type Output = Term;
    fn add(mut self, rhs: Term) -> Term {
        for (v, c) in &rhs.coeffs {
            self.add_coeff(v, c);
        }
        self.constant += rhs.constant;
        self
    }
}

impl Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        self + (-rhs)
    }
}

impl Neg for Term {
    type Output = Term;
    fn neg(self) -> Term {
        Term {
            coeffs: self.coeffs.into_iter().map(|(v, c)| (v, -c)).collect(),
            constant: -self.constant,
        }
    }
}

impl Mul<&Int> for Term {
    type Output = Term;
    fn mul(self, k: &Int) -> Term {
        self.scale(k)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == Int::from(1) {
                write!(f, "{v}")?;
            } else {
                write!(f, "{mag}*{v}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_positive() {
            write!(f, " + {}", self.constant)
        } else if self.constant.is_negative() {
            write!(f, " - {}", -&self.constant)
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let t = Term::scaled_var("x", 2) - Term::var("y") + Term::constant(-3);
        assert_eq!(t.to_string(), "2*x - y - 3");
        assert_eq!((t.clone() - t.clone()).to_string(), "0");
        let (p, n) = t.split_signs();
        assert_eq!(p.to_string(), "2*x");
        assert_eq!(n.to_string(), "y + 3");
        let s = t.substitute_one("x", &(Term::var("y") + Term::constant(1)));
        assert_eq!(s.to_string(), "y - 1");
        assert_eq!(Term::scaled_var("x", -1).to_string(), "-x");
    }
}
