//! Brute-force ground truth: evaluation at integer points with bounded
//! quantifiers, set enumeration on boxes and box equivalence.
//!
//! Quantified variables range over `[-B, B]` where the bound grows with the
//! nesting depth (`B_d = Q·(2(1+C))^d`, `C` the largest coefficient) so that
//! inner witnesses scaled by outer values stay in range. A quantifier whose
//! body is quantifier-free is decided on the finitely many candidate points
//! where some atom can change truth value (plus one congruence period after
//! each), which is exact for the bounded range and much faster than a scan.

use crate::arith::Int;
use crate::error::{Error, Result};
use crate::formula::{Formula, Meaning, OracleFn, PredicateEnv, Term, Var};
use crate::par::{self, Execution};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Closed integer box, one interval per variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntBox {
    pub vars: Vec<Var>,
    pub bounds: Vec<(Int, Int)>,
}

impl IntBox {
    pub fn new(vars: Vec<Var>, bounds: Vec<(Int, Int)>) -> Result<Self> {
        if vars.len() != bounds.len() {
            return Err(Error::Invalid("box dimension mismatch".into()));
        }
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::Invalid("box interval with lo > hi".into()));
        }
        Ok(IntBox { vars, bounds })
    }

    /// `[-r, r]^n`.
    pub fn cube(vars: &[Var], r: i64) -> Self {
        IntBox {
            vars: vars.to_vec(),
            bounds: vars.iter().map(|_| (Int::from(-r), Int::from(r))).collect(),
        }
    }

    pub fn radius(&self) -> Int {
        self.bounds
            .iter()
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .max()
            .unwrap_or_default()
    }

    pub fn len(&self) -> Option<u64> {
        let mut n: u64 = 1;
        for (lo, hi) in &self.bounds {
            let w = (hi - lo + 1u32).to_u64()?;
            n = n.checked_mul(w)?;
        }
        Some(n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    fn small(&self) -> Result<Vec<(i64, i64)>> {
        self.bounds
            .iter()
            .map(|(lo, hi)| Ok((to_i64(lo)?, to_i64(hi)?)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Quantifier bound `Q`; `None` selects the default heuristic.
    pub quantifier_bound: Option<Int>,
    /// Number of doublings of `Q` tried before giving up as unknown.
    pub escalation_steps: usize,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            quantifier_bound: None,
            escalation_steps: 2,
            execution: Execution::default(),
        }
    }
}

impl EvalConfig {
    pub fn with_bound(q: i64) -> Self {
        EvalConfig {
            quantifier_bound: Some(Int::from(q)),
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl From<bool> for Truth {
    fn from(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Counterexample(Vec<Int>),
}

fn to_i64(v: &Int) -> Result<i64> {
    v.to_i64().ok_or(Error::Overflow)
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

#[derive(Clone, Debug)]
struct CTerm {
    coeffs: Vec<(usize, i64)>,
    k: i64,
}

impl CTerm {
    fn eval(&self, vals: &[i64]) -> Result<i128> {
        let mut acc = self.k as i128;
        for &(s, c) in &self.coeffs {
            acc += c as i128 * vals[s] as i128;
        }
        Ok(acc)
    }

    fn coeff(&self, slot: usize) -> i64 {
        self.coeffs
            .iter()
            .find(|(s, _)| *s == slot)
            .map_or(0, |(_, c)| *c)
    }

    /// Value with `slot` treated as zero.
    fn rest(&self, vals: &[i64], slot: usize) -> i128 {
        let mut acc = self.k as i128;
        for &(s, c) in &self.coeffs {
            if s != slot {
                acc += c as i128 * vals[s] as i128;
            }
        }
        acc
    }
}

enum CF {
    Const(bool),
    Le(CTerm),
    Lt(CTerm),
    Eq(CTerm),
    Cong(CTerm, i64),
    Oracle(OracleFn, Vec<CTerm>),
    Not(Box<CF>),
    And(Vec<CF>),
    Or(Vec<CF>),
    Iff(Box<CF>, Box<CF>),
    Quant {
        exists: bool,
        slot: usize,
        depth: u32,
        /// Body is quantifier-free and oracle-free: candidate points suffice.
        simple: bool,
        body: Box<CF>,
    },
}

struct Compiler {
    scopes: Vec<(Var, usize)>,
    nslots: usize,
    max_coeff: i64,
    max_const: i64,
}

impl Compiler {
    fn term(&mut self, t: &Term) -> Result<CTerm> {
        let mut coeffs = Vec::new();
        for (v, c) in t.coeffs() {
            let slot = self
                .scopes
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, s)| *s)
                .ok_or_else(|| Error::Invalid(format!("unassigned variable {v}")))?;
            let c = to_i64(c)?;
            self.max_coeff = self.max_coeff.max(c.abs());
            match coeffs.iter_mut().find(|(s, _)| *s == slot) {
                Some((_, acc)) => *acc += c,
                None => coeffs.push((slot, c)),
            }
        }
        let k = to_i64(t.constant_part())?;
        self.max_const = self.max_const.max(k.abs());
        Ok(CTerm { coeffs, k })
    }

    fn formula(&mut self, f: &Formula, env: &PredicateEnv, depth: u32) -> Result<CF> {
        Ok(match f {
            Formula::True => CF::Const(true),
            Formula::False => CF::Const(false),
            Formula::Le(t) => CF::Le(self.term(t)?),
            Formula::Lt(t) => CF::Lt(self.term(t)?),
            Formula::Eq(t) => CF::Eq(self.term(t)?),
            Formula::Cong(t, m) => {
                let m = to_i64(m)?;
                self.max_const = self.max_const.max(m);
                CF::Cong(self.term(t)?, m)
            }
            Formula::Pred(name, args) => {
                let def = env
                    .get(name)
                    .ok_or_else(|| Error::UnknownPredicate(name.to_string()))?;
                match &def.meaning {
                    Meaning::Oracle(o) => CF::Oracle(
                        o.clone(),
                        args.iter().map(|a| self.term(a)).collect::<Result<_>>()?,
                    ),
                    _ => return Err(Error::OpaquePredicate(name.to_string())),
                }
            }
            Formula::Not(a) => CF::Not(Box::new(self.formula(a, env, depth)?)),
            Formula::And(xs) => CF::And(
                xs.iter()
                    .map(|x| self.formula(x, env, depth))
                    .collect::<Result<_>>()?,
            ),
            Formula::Or(xs) => CF::Or(
                xs.iter()
                    .map(|x| self.formula(x, env, depth))
                    .collect::<Result<_>>()?,
            ),
            Formula::Implies(a, b) => CF::Or(vec![
                CF::Not(Box::new(self.formula(a, env, depth)?)),
                self.formula(b, env, depth)?,
            ]),
            Formula::Iff(a, b) => CF::Iff(
                Box::new(self.formula(a, env, depth)?),
                Box::new(self.formula(b, env, depth)?),
            ),
            Formula::Exists(v, b) | Formula::Forall(v, b) => {
                let slot = self.nslots;
                self.nslots += 1;
                self.scopes.push((v.clone(), slot));
                let body = self.formula(b, env, depth + 1)?;
                self.scopes.pop();
                let simple = b.is_quantifier_free() && !b.has_predicates();
                CF::Quant {
                    exists: matches!(f, Formula::Exists(..)),
                    slot,
                    depth,
                    simple,
                    body: Box::new(body),
                }
            }
        })
    }
}

fn atom_candidates(f: &CF, slot: usize, vals: &[i64], starts: &mut Vec<i128>, period: &mut i128) {
    match f {
        CF::Le(t) | CF::Lt(t) => {
            let a = t.coeff(slot) as i128;
            if a == 0 {
                return;
            }
            // a*v + r (+1 if strict) <= 0
            let r = t.rest(vals, slot) + if matches!(f, CF::Lt(_)) { 1 } else { 0 };
            if a > 0 {
                starts.push(Integer::div_floor(&(-r), &a) + 1);
            } else {
                starts.push(-Integer::div_floor(&(-r), &(-a)));
            }
        }
        CF::Eq(t) => {
            let a = t.coeff(slot) as i128;
            if a == 0 {
                return;
            }
            let r = t.rest(vals, slot);
            if r % a == 0 {
                starts.push(-r / a);
                starts.push(-r / a + 1);
            }
        }
        CF::Cong(t, m) => {
            let a = t.coeff(slot) as i128;
            let m = *m as i128;
            if a == 0 {
                return;
            }
            let p = m / a.abs().gcd(&m);
            *period = (*period).lcm(&p);
        }
        CF::Not(a) => atom_candidates(a, slot, vals, starts, period),
        CF::And(xs) | CF::Or(xs) => {
            for x in xs {
                atom_candidates(x, slot, vals, starts, period);
            }
        }
        CF::Iff(a, b) => {
            atom_candidates(a, slot, vals, starts, period);
            atom_candidates(b, slot, vals, starts, period);
        }
        _ => {}
    }
}

struct Machine<'a> {
    cf: &'a CF,
    nslots: usize,
    bounds: Vec<i64>,
}

impl Machine<'_> {
    fn eval(&self, f: &CF, vals: &mut Vec<i64>) -> Result<bool> {
        Ok(match f {
            CF::Const(b) => *b,
            CF::Le(t) => t.eval(vals)? <= 0,
            CF::Lt(t) => t.eval(vals)? < 0,
            CF::Eq(t) => t.eval(vals)? == 0,
            CF::Cong(t, m) => t.eval(vals)?.mod_floor(&(*m as i128)) == 0,
            CF::Oracle(o, args) => {
                let vs: Vec<Int> = args
                    .iter()
                    .map(|a| a.eval(vals).map(Int::from))
                    .collect::<Result<_>>()?;
                o(&vs)
            }
            CF::Not(a) => !self.eval(a, vals)?,
            CF::And(xs) => {
                for x in xs {
                    if !self.eval(x, vals)? {
                        return Ok(false);
                    }
                }
                true
            }
            CF::Or(xs) => {
                for x in xs {
                    if self.eval(x, vals)? {
                        return Ok(true);
                    }
                }
                false
            }
            CF::Iff(a, b) => self.eval(a, vals)? == self.eval(b, vals)?,
            CF::Quant {
                exists,
                slot,
                depth,
                simple,
                body,
            } => {
                let bound = self.bounds[*depth as usize] as i128;
                if *simple {
                    self.candidates_eval(*exists, *slot, bound, body, vals)?
                } else {
                    self.scan_eval(*exists, *slot, bound, body, vals)?
                }
            }
        })
    }

    fn scan_eval(&self, exists: bool, slot: usize, bound: i128, body: &CF, vals: &mut Vec<i64>) -> Result<bool> {
        let mut k: i128 = 0;
        while k <= bound {
            for v in if k == 0 { vec![0] } else { vec![k, -k] } {
                vals[slot] = narrow(v)?;
                if self.eval(body, vals)? == exists {
                    return Ok(exists);
                }
            }
            k += 1;
        }
        Ok(!exists)
    }

    fn candidates_eval(&self, exists: bool, slot: usize, bound: i128, body: &CF, vals: &mut Vec<i64>) -> Result<bool> {
        let mut starts = vec![-bound];
        let mut period: i128 = 1;
        atom_candidates(body, slot, vals, &mut starts, &mut period);
        starts.retain(|s| (-bound..=bound).contains(s));
        starts.sort_unstable();
        starts.dedup();
        let total: i128 = starts.len() as i128 * period;
        if total > 2 * bound + 1 {
            return self.scan_eval(exists, slot, bound, body, vals);
        }
        let mut last_done = i128::MIN;
        for s in starts {
            let from = s.max(last_done + 1);
            let to = (s + period - 1).min(bound);
            let mut v = from;
            while v <= to {
                vals[slot] = narrow(v)?;
                if self.eval(body, vals)? == exists {
                    return Ok(exists);
                }
                v += 1;
            }
            last_done = last_done.max(to);
        }
        Ok(!exists)
    }

    fn run(&self, point: &[i64]) -> Result<bool> {
        let mut vals = vec![0i64; self.nslots];
        vals[..point.len()].copy_from_slice(point);
        self.eval(self.cf, &mut vals)
    }
}

/// A formula compiled against a fixed variable order.
pub struct Evaluator {
    cf: CF,
    nslots: usize,
    nfree: usize,
    quantified: bool,
    max_coeff: i64,
    max_const: i64,
    max_depth: u32,
}

impl Evaluator {
    pub fn new(f: &Formula, vars: &[Var], env: &PredicateEnv) -> Result<Self> {
        let f = if f.has_predicates() {
            f.unfold_defined(env)?
        } else {
            f.clone()
        };
        for v in f.free_vars() {
            if !vars.contains(&v) {
                return Err(Error::Invalid(format!("free variable {v} not assigned")));
            }
        }
        let mut c = Compiler {
            scopes: vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect(),
            nslots: vars.len(),
            max_coeff: 0,
            max_const: 0,
        };
        let cf = c.formula(&f, env, 0)?;
        Ok(Evaluator {
            cf,
            nslots: c.nslots,
            nfree: vars.len(),
            quantified: !f.is_quantifier_free(),
            max_coeff: c.max_coeff,
            max_const: c.max_const,
            max_depth: f.quantifier_depth() as u32,
        })
    }

    /// `4·(1 + C)·(1 + K)·(1 + radius)`.
    pub fn default_bound(&self, radius: i64) -> i64 {
        let q = 4i128
            * (1 + self.max_coeff as i128)
            * (1 + self.max_const as i128)
            * (1 + radius as i128);
        q.min(i64::MAX as i128 / 4) as i64
    }

    fn bounds_for(&self, q: i64) -> Result<Vec<i64>> {
        let growth = 2 * (1 + self.max_coeff as i128);
        let mut out = Vec::new();
        let mut b = q as i128;
        for _ in 0..=self.max_depth {
            out.push(narrow(b)?);
            b *= growth;
        }
        Ok(out)
    }

    fn eval_with_bound(&self, point: &[i64], q: i64) -> Result<bool> {
        let m = Machine {
            cf: &self.cf,
            nslots: self.nslots,
            bounds: self.bounds_for(q)?,
        };
        m.run(point)
    }

    /// Evaluates at `point` (aligned with the compile-time variables), with
    /// escalation of the quantifier bound for quantified formulas.
    pub fn eval(&self, point: &[i64], q: i64, steps: usize) -> Result<Truth> {
        assert_eq!(point.len(), self.nfree);
        if !self.quantified {
            return Ok(self.eval_with_bound(point, 0)?.into());
        }
        let mut prev = self.eval_with_bound(point, q)?;
        if steps == 0 {
            return Ok(prev.into());
        }
        let mut bound = q;
        for _ in 0..steps {
            bound = bound.checked_mul(2).ok_or(Error::Overflow)?;
            let next = self.eval_with_bound(point, bound)?;
            if next == prev {
                return Ok(next.into());
            }
            prev = next;
        }
        Ok(Truth::Unknown)
    }

    fn bound_for(&self, cfg: &EvalConfig, radius: i64) -> Result<i64> {
        match &cfg.quantifier_bound {
            Some(q) if q.is_negative() => Err(Error::Invalid("negative quantifier bound".into())),
            Some(q) => to_i64(q),
            None => Ok(self.default_bound(radius)),
        }
    }
}

/// Truth value of `f` at `point` (aligned with `vars`).
pub fn eval(f: &Formula, vars: &[Var], point: &[Int], env: &PredicateEnv, cfg: &EvalConfig) -> Result<Truth> {
    if vars.len() != point.len() {
        return Err(Error::Invalid("point dimension mismatch".into()));
    }
    let ev = Evaluator::new(f, vars, env)?;
    let p: Vec<i64> = point.iter().map(to_i64).collect::<Result<_>>()?;
    let radius = p.iter().map(|v| v.abs()).max().unwrap_or(0);
    let q = ev.bound_for(cfg, radius)?;
    ev.eval(&p, q, cfg.escalation_steps)
}

/// Convenience: evaluate with the variables bound by name.
pub fn eval_named(f: &Formula, point: &BTreeMap<Var, Int>, env: &PredicateEnv, cfg: &EvalConfig) -> Result<Truth> {
    let vars: Vec<Var> = point.keys().cloned().collect();
    let vals: Vec<Int> = point.values().cloned().collect();
    eval(f, &vars, &vals, env, cfg)
}

const CHUNK: u64 = 2048;
const MAX_POINTS: u64 = 50_000_000;

fn point_at(b: &[(i64, i64)], mut idx: u64) -> Vec<i64> {
    let mut p = vec![0i64; b.len()];
    for i in (0..b.len()).rev() {
        let w = (b[i].1 - b[i].0 + 1) as u64;
        p[i] = b[i].0 + (idx % w) as i64;
        idx /= w;
    }
    p
}

fn checked_len(bx: &IntBox) -> Result<u64> {
    let n = bx
        .len()
        .ok_or_else(|| Error::Invalid("box too large".into()))?;
    if n > MAX_POINTS {
        return Err(Error::Invalid(format!("box has {n} points")));
    }
    Ok(n)
}

fn truth_at(ev: &Evaluator, p: &[i64], q: i64, steps: usize) -> Result<bool> {
    match ev.eval(p, q, steps)? {
        Truth::True => Ok(true),
        Truth::False => Ok(false),
        Truth::Unknown => Err(Error::Unknown(format!("{p:?}"))),
    }
}

/// Points of `bx` where `f` holds, in lexicographic order.
pub fn set_on_box(f: &Formula, bx: &IntBox, env: &PredicateEnv, cfg: &EvalConfig) -> Result<Vec<Vec<Int>>> {
    let ev = Evaluator::new(f, &bx.vars, env)?;
    let q = ev.bound_for(cfg, to_i64(&bx.radius())?)?;
    let b = bx.small()?;
    let n = checked_len(bx)?;
    let chunks = n.div_ceil(CHUNK) as usize;
    let parts = par::try_map_range(cfg.execution, chunks, |c| {
        let mut out = Vec::new();
        let start = c as u64 * CHUNK;
        for idx in start..(start + CHUNK).min(n) {
            let p = point_at(&b, idx);
            if truth_at(&ev, &p, q, cfg.escalation_steps)? {
                out.push(p.into_iter().map(Int::from).collect());
            }
        }
        Ok(out)
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// First point of `bx` (lexicographically) where `f` and `g` differ.
pub fn equiv_on_box(f: &Formula, g: &Formula, bx: &IntBox, env: &PredicateEnv, cfg: &EvalConfig) -> Result<Equivalence> {
    let ef = Evaluator::new(f, &bx.vars, env)?;
    let eg = Evaluator::new(g, &bx.vars, env)?;
    let radius = to_i64(&bx.radius())?;
    let (qf, qg) = (ef.bound_for(cfg, radius)?, eg.bound_for(cfg, radius)?);
    let b = bx.small()?;
    let n = checked_len(bx)?;
    let chunks = n.div_ceil(CHUNK) as usize;
    let hit = par::find_first(cfg.execution, chunks, |c| {
        let start = c as u64 * CHUNK;
        for idx in start..(start + CHUNK).min(n) {
            let p = point_at(&b, idx);
            if truth_at(&ef, &p, qf, cfg.escalation_steps)? != truth_at(&eg, &p, qg, cfg.escalation_steps)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    })?;
    Ok(match hit {
        None => Equivalence::Equivalent,
        Some((_, p)) => Equivalence::Counterexample(p.into_iter().map(Int::from).collect()),
    })
}

/// Exact evaluation of a quantifier-free, predicate-free formula.
pub fn eval_qf(f: &Formula, lookup: &impl Fn(&str) -> Option<Int>) -> Result<bool> {
    let val = |t: &Term| {
        t.eval_with(lookup)
            .ok_or_else(|| Error::Invalid(format!("unassigned variable in {t}")))
    };
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Le(t) => !val(t)?.is_positive(),
        Formula::Lt(t) => val(t)?.is_negative(),
        Formula::Eq(t) => val(t)?.is_zero(),
        Formula::Cong(t, m) => val(t)?.mod_floor(m).is_zero(),
        Formula::Pred(p, _) => return Err(Error::PredicatePresent(p.to_string())),
        Formula::Not(a) => !eval_qf(a, lookup)?,
        Formula::And(xs) => {
            for x in xs {
                if !eval_qf(x, lookup)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(xs) => {
            for x in xs {
                if eval_qf(x, lookup)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_qf(a, lookup)? || eval_qf(b, lookup)?,
        Formula::Iff(a, b) => eval_qf(a, lookup)? == eval_qf(b, lookup)?,
        Formula::Exists(..) | Formula::Forall(..) => return Err(Error::Quantified),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var};

    fn vs(names: &[&str]) -> Vec<Var> {
        names.iter().map(|n| var(n)).collect()
    }

    fn ints(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn eval_examples() {
        let env = PredicateEnv::new();
        let cfg = EvalConfig::with_bound(10);
        let t = |s: &str, x: i64| eval(&parse(s).unwrap(), &vs(&["x"]), &ints(&[x]), &env, &cfg).unwrap();
        assert_eq!(t("x = 0 mod 2", 4), Truth::True);
        assert_eq!(t("E y. y + y = x", 3), Truth::False);
        assert_eq!(t("E y. (2*y <= x & x <= 3*y)", 1), Truth::False);
        assert_eq!(t("E y. (2*y <= x & x <= 3*y)", 2), Truth::True);
        assert_eq!(t("A y. (y < x -> y + 1 <= x)", -7), Truth::True);
        assert_eq!(t("E y. E z. y = x + z & z = 0 mod 3 & y = 2*z", 5), Truth::False);
        assert_eq!(t("E y. E z. y = x + z & z = 0 mod 3 & y = 2*z", 6), Truth::True);
    }

    #[test]
    fn unbounded_dependence_is_unknown() {
        let env = PredicateEnv::new();
        let f = parse("E y. y > 100*x & y > 1000").unwrap();
        let mut cfg = EvalConfig::with_bound(600);
        cfg.escalation_steps = 1;
        assert_eq!(eval(&f, &vs(&["x"]), &ints(&[5]), &env, &cfg).unwrap(), Truth::Unknown);
        cfg.escalation_steps = 2;
        assert_eq!(eval(&f, &vs(&["x"]), &ints(&[5]), &env, &cfg).unwrap(), Truth::True);
    }

    #[test]
    fn set_on_box_examples() {
        let env = PredicateEnv::new();
        let cfg = EvalConfig::default();
        let got = set_on_box(&parse("x = 0 mod 3").unwrap(), &IntBox::cube(&vs(&["x"]), 4), &env, &cfg).unwrap();
        assert_eq!(got, vec![ints(&[-3]), ints(&[0]), ints(&[3])]);
        let bx = IntBox::new(vs(&["x", "y"]), vec![(0.into(), 2.into()); 2]).unwrap();
        let got = set_on_box(&parse("0 <= y & y <= x").unwrap(), &bx, &env, &cfg).unwrap();
        let want: Vec<Vec<Int>> = [[0, 0], [1, 0], [1, 1], [2, 0], [2, 1], [2, 2]]
            .iter()
            .map(|p| ints(p))
            .collect();
        assert_eq!(got, want);
        let none = set_on_box(&parse("x = 0 & x = 1").unwrap(), &bx, &env, &cfg).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn equiv_examples() {
        let env = PredicateEnv::new();
        let bx = IntBox::cube(&vs(&["x"]), 10);
        let cfg = EvalConfig::with_bound(20);
        let r = equiv_on_box(&parse("x = 0 mod 2").unwrap(), &parse("E y. x = y + y").unwrap(), &bx, &env, &cfg).unwrap();
        assert_eq!(r, Equivalence::Equivalent);
        let r = equiv_on_box(&parse("x >= 0").unwrap(), &parse("x > 0").unwrap(), &bx, &env, &cfg).unwrap();
        assert_eq!(r, Equivalence::Counterexample(ints(&[0])));
    }

    #[test]
    fn oracle_predicates_and_opaque() {
        let mut env = PredicateEnv::new();
        env.oracle("Sq", 1, std::sync::Arc::new(|v: &[Int]| {
            let x = v[0].to_i64().unwrap();
            x >= 0 && (x as f64).sqrt().round() as i64 * (x as f64).sqrt().round() as i64 == x
        }));
        env.opaque("O", 1);
        let cfg = EvalConfig::with_bound(10);
        let f = parse("E y. Sq(y) & y = x + 1").unwrap();
        assert_eq!(eval(&f, &vs(&["x"]), &ints(&[8]), &env, &cfg).unwrap(), Truth::True);
        assert_eq!(eval(&f, &vs(&["x"]), &ints(&[7]), &env, &cfg).unwrap(), Truth::False);
        let g = parse("O(x)").unwrap();
        assert!(matches!(
            eval(&g, &vs(&["x"]), &ints(&[0]), &env, &cfg),
            Err(Error::OpaquePredicate(_))
        ));
    }

    #[test]
    fn strategies_agree_on_boxes() {
        let env = PredicateEnv::new();
        let f = parse("E z. x + y = 2*z + 1 & z >= y").unwrap();
        let bx = IntBox::cube(&vs(&["x", "y"]), 12);
        let seq = EvalConfig {
            execution: Execution::Sequential,
            ..EvalConfig::default()
        };
        let par = EvalConfig::default();
        assert_eq!(set_on_box(&f, &bx, &env, &seq).unwrap(), set_on_box(&f, &bx, &env, &par).unwrap());
    }
}
