//! Z-linear functions and the decomposition of a Presburger set into
//! terms `X[f,g]^c_m = {(x̄,y) : x̄ ∈ X, f(x̄) ≤ y ≤ g(x̄), y ≡_m c}`.
//!
//! The last variable is the fiber variable `y`. Bases `X` are kept as
//! quantifier-free formulas over the remaining variables.

use crate::arith::{ceil_div, int_range, floor_div, gcd, int_json, lcm, modulo, Int, Rat};
use crate::error::{Error, Result};
use crate::formula::{var, Formula, Term, Var};
use crate::oracle::eval_qf;
use crate::qe::{self, exists_qf, simplify};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

/// `x̄ ↦ u + Σ a_i·(x_i − c_i)/m_i` on the grid `c̄ + m̄·Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardZLinear {
    residues: Vec<Int>,
    moduli: Vec<Int>,
    offset: Int,
    coeffs: Vec<Int>,
}

impl StandardZLinear {
    pub fn new(residues: Vec<Int>, moduli: Vec<Int>, offset: Int, coeffs: Vec<Int>) -> Result<Self> {
        if residues.len() != moduli.len() || moduli.len() != coeffs.len() {
            return Err(Error::Invalid("Z-linear function: length mismatch".into()));
        }
        for (c, m) in residues.iter().zip(&moduli) {
            if !m.is_positive() || c.is_negative() || c >= m {
                return Err(Error::Invalid(format!("Z-linear function: bad residue {c} mod {m}")));
            }
        }
        Ok(StandardZLinear { residues, moduli, offset, coeffs })
    }

    /// Affine function defined everywhere.
    pub fn affine(offset: Int, coeffs: Vec<Int>) -> Self {
        let n = coeffs.len();
        StandardZLinear {
            residues: vec![Int::zero(); n],
            moduli: vec![Int::one(); n],
            offset,
            coeffs,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn residues(&self) -> &[Int] {
        &self.residues
    }

    pub fn moduli(&self) -> &[Int] {
        &self.moduli
    }

    pub fn offset(&self) -> &Int {
        &self.offset
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn in_domain(&self, x: &[Int]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.residues.iter().zip(&self.moduli))
                .all(|(xi, (c, m))| modulo(&(xi - c), m).is_zero())
    }

    pub fn eval(&self, x: &[Int]) -> Result<Int> {
        if !self.in_domain(x) {
            let pt: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            return Err(Error::Domain(format!("({})", pt.join(", "))));
        }
        let mut v = self.offset.clone();
        for i in 0..self.dim() {
            v += &self.coeffs[i] * ((&x[i] - &self.residues[i]) / &self.moduli[i]);
        }
        Ok(v)
    }

    pub fn shift(&self, k: &Int) -> Self {
        let mut out = self.clone();
        out.offset += k;
        out
    }

    /// `M = lcm(m̄)`: `M·f` is an integer linear term.
    pub fn scale_factor(&self) -> Int {
        self.moduli.iter().fold(Int::one(), |acc, m| lcm(&acc, m))
    }

    /// The term `M·f(x̄)`, valid on the domain.
    pub fn scaled_term(&self, vars: &[Var]) -> Term {
        let big = self.scale_factor();
        let mut t = Term::constant(&big * &self.offset);
        for i in 0..self.dim() {
            let k = &self.coeffs[i] * (&big / &self.moduli[i]);
            t = t + (Term::var(&vars[i]) - Term::constant(self.residues[i].clone())) * &k;
        }
        t
    }

    pub fn domain_formula(&self, vars: &[Var]) -> Formula {
        Formula::conj((0..self.dim()).filter(|&i| !self.moduli[i].is_one()).map(|i| {
            Formula::cong(Term::var(&vars[i]), Term::constant(self.residues[i].clone()), self.moduli[i].clone())
        }))
    }

    /// `f(x̄) ≤ t` on the domain.
    pub fn le_formula(&self, vars: &[Var], t: &Term) -> Formula {
        let big = self.scale_factor();
        Formula::Le(self.scaled_term(vars) - t.clone() * &big)
    }

    /// `t ≤ f(x̄)` on the domain.
    pub fn ge_formula(&self, vars: &[Var], t: &Term) -> Formula {
        let big = self.scale_factor();
        Formula::Le(t.clone() * &big - self.scaled_term(vars))
    }

    /// `t = f(x̄)` on the domain.
    pub fn eq_formula(&self, vars: &[Var], t: &Term) -> Formula {
        let big = self.scale_factor();
        Formula::Eq(t.clone() * &big - self.scaled_term(vars))
    }

    /// `L·(f − g − k)` with `L` the common scale; an integer term on the
    /// common domain.
    pub fn difference_term(&self, other: &StandardZLinear, vars: &[Var], k: &Int) -> Term {
        let (mf, mg) = (self.scale_factor(), other.scale_factor());
        let l = lcm(&mf, &mg);
        self.scaled_term(vars) * &(&l / &mf) - other.scaled_term(vars) * &(&l / &mg) - Term::constant(&l * k)
    }

    /// `f(x̄) = g(x̄) + k` on the common domain.
    pub fn offset_eq_formula(&self, other: &StandardZLinear, vars: &[Var], k: &Int) -> Formula {
        Formula::Eq(self.difference_term(other, vars, k))
    }

    /// Rational slopes `a_i/m_i` and constant, so that
    /// `f(x̄) = constant + Σ slope_i·x_i` on the domain.
    pub fn affine_parts(&self) -> (Vec<Rat>, Rat) {
        let slopes: Vec<Rat> = (0..self.dim())
            .map(|i| Rat::new(self.coeffs[i].clone(), self.moduli[i].clone()))
            .collect();
        let mut k = Rat::from_integer(self.offset.clone());
        for i in 0..self.dim() {
            k -= &slopes[i] * Rat::from_integer(self.residues[i].clone());
        }
        (slopes, k)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": "standard",
            "u": int_json(&self.offset),
            "a": self.coeffs.iter().map(int_json).collect::<Vec<_>>(),
            "c": self.residues.iter().map(int_json).collect::<Vec<_>>(),
            "m": self.moduli.iter().map(int_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for StandardZLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.offset)?;
        for i in 0..self.dim() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            write!(f, " + {}*(x{} - {})/{}", self.coeffs[i], i + 1, self.residues[i], self.moduli[i])?;
        }
        Ok(())
    }
}

/// A standard function or one of the extreme constants `±∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ZLinear {
    Standard(StandardZLinear),
    PlusInfinity,
    MinusInfinity,
}

/// A value in `Z ∪ {±∞}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    MinusInfinity,
    Finite(Int),
    PlusInfinity,
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::MinusInfinity => write!(f, "-inf"),
            ExtInt::Finite(v) => write!(f, "{v}"),
            ExtInt::PlusInfinity => write!(f, "+inf"),
        }
    }
}

impl ZLinear {
    pub fn standard(&self) -> Option<&StandardZLinear> {
        match self {
            ZLinear::Standard(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_extreme(&self) -> bool {
        !matches!(self, ZLinear::Standard(_))
    }

    /// Shift by a constant; extreme functions are unchanged.
    pub fn shift(&self, k: &Int) -> ZLinear {
        match self {
            ZLinear::Standard(s) => ZLinear::Standard(s.shift(k)),
            other => other.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ZLinear::Standard(s) => s.to_json(),
            ZLinear::PlusInfinity => json!({"kind": "plus_infinity"}),
            ZLinear::MinusInfinity => json!({"kind": "minus_infinity"}),
        }
    }
}

impl fmt::Display for ZLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZLinear::Standard(s) => write!(f, "{s}"),
            ZLinear::PlusInfinity => write!(f, "+inf"),
            ZLinear::MinusInfinity => write!(f, "-inf"),
        }
    }
}

/// Exact value of `f` at `x̄`.
pub fn eval_zlinear(f: &ZLinear, x: &[Int]) -> Result<ExtInt> {
    Ok(match f {
        ZLinear::Standard(s) => ExtInt::Finite(s.eval(x)?),
        ZLinear::PlusInfinity => ExtInt::PlusInfinity,
        ZLinear::MinusInfinity => ExtInt::MinusInfinity,
    })
}

/// One term `X[f,g]^c_m` of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellTerm {
    pub base: Formula,
    pub lower: ZLinear,
    pub upper: ZLinear,
    pub residue: Int,
    pub modulus: Int,
}

impl CellTerm {
    /// The term as a formula in `xs` and `y`.
    pub fn to_formula(&self, xs: &[Var], y: &Term) -> Formula {
        let mut parts = vec![self.base.clone()];
        if let ZLinear::Standard(f) = &self.lower {
            parts.push(f.le_formula(xs, y));
        }
        if let ZLinear::Standard(g) = &self.upper {
            parts.push(g.ge_formula(xs, y));
        }
        if matches!(self.lower, ZLinear::PlusInfinity) || matches!(self.upper, ZLinear::MinusInfinity) {
            return Formula::False;
        }
        parts.push(Formula::cong(y.clone(), Term::constant(self.residue.clone()), self.modulus.clone()));
        Formula::conj(parts)
    }

    /// Points `x̄` of the base over which the interval `[f,g]^c_m` is
    /// nonempty.
    pub fn nonempty_formula(&self, xs: &[Var]) -> Formula {
        let interval = match (&self.lower, &self.upper) {
            (ZLinear::PlusInfinity, _) | (_, ZLinear::MinusInfinity) => Formula::False,
            (ZLinear::Standard(f), ZLinear::Standard(g)) => {
                let m = self.modulus.clone();
                let scale = f.scale_factor();
                let tf = f.scaled_term(xs);
                Formula::disj(int_range(Int::zero(), m.clone()).map(|r| {
                    let fits = Formula::Le(f.difference_term(g, xs, &(-r.clone())));
                    let hits = Formula::Cong(
                        tf.clone() + Term::constant(&scale * (&r - &self.residue)),
                        &scale * &m,
                    );
                    Formula::conj([fits, hits])
                }))
            }
            _ => Formula::True,
        };
        Formula::conj([self.base.clone(), interval])
    }

    /// Membership of `(x̄, y)`, evaluated directly.
    pub fn contains(&self, xs: &[Var], x: &[Int], y: &Int) -> Result<bool> {
        let env: BTreeMap<&str, &Int> = xs.iter().map(|v| &**v).zip(x).collect();
        if !eval_qf(&self.base, &|v| env.get(v).map(|&i| i.clone()))? {
            return Ok(false);
        }
        let lo = eval_zlinear(&self.lower, x)?;
        let hi = eval_zlinear(&self.upper, x)?;
        let yv = ExtInt::Finite(y.clone());
        Ok(lo <= yv && yv <= hi && modulo(&(y - &self.residue), &self.modulus).is_zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_string(),
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "residue": int_json(&self.residue),
            "modulus": int_json(&self.modulus),
        })
    }
}

/// `A = ⋃_t X_t[f_t,g_t]^{c_t}_{m_t}` over variables `(x̄, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDecomposition {
    pub vars: Vec<Var>,
    pub terms: Vec<CellTerm>,
}

impl CellDecomposition {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn base_vars(&self) -> &[Var] {
        &self.vars[..self.vars.len() - 1]
    }

    pub fn fiber_var(&self) -> &Var {
        self.vars.last().expect("decomposition has a fiber variable")
    }

    pub fn to_formula(&self) -> Formula {
        let y = Term::var(self.fiber_var());
        Formula::disj(self.terms.iter().map(|t| t.to_formula(self.base_vars(), &y)))
    }

    pub fn contains(&self, point: &[Int]) -> Result<bool> {
        let (x, y) = point.split_at(self.arity() - 1);
        for t in &self.terms {
            if t.contains(self.base_vars(), x, &y[0])? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Terms whose base contains `x̄`, with their endpoint values there.
    pub fn fiber(&self, x: &[Int]) -> Result<Vec<(&CellTerm, ExtInt, ExtInt)>> {
        let env: BTreeMap<&str, &Int> = self.base_vars().iter().map(|v| &**v).zip(x).collect();
        let mut out = Vec::new();
        for t in &self.terms {
            if eval_qf(&t.base, &|v| env.get(v).map(|&i| i.clone()))? {
                out.push((t, eval_zlinear(&t.lower, x)?, eval_zlinear(&t.upper, x)?));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "arity": self.arity(),
            "vars": self.vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "terms": self.terms.iter().map(CellTerm::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Projection `π(A)` along the fiber variable.
pub fn project(d: &CellDecomposition) -> Formula {
    simplify(&Formula::disj(d.terms.iter().map(|t| t.nonempty_formula(d.base_vars()))))
}

/// `d·y ≥ w` (lower) or `d·y ≤ w` (upper), with `d > 0`.
#[derive(Clone, Debug)]
struct Bound {
    d: Int,
    w: Term,
}

#[derive(Clone, Debug, Default)]
struct Conjunct {
    y_atoms: Vec<Formula>,
    rest: Vec<Formula>,
}

fn mentions(f: &Formula, y: &str) -> bool {
    f.free_vars().iter().any(|v| &**v == y)
}

/// Rewrites negated `y`-literals into disjunctions of positive ones.
fn positive_y_literals(f: &Formula, y: &str) -> Formula {
    match f {
        Formula::And(xs) => Formula::And(xs.iter().map(|x| positive_y_literals(x, y)).collect()),
        Formula::Or(xs) => Formula::Or(xs.iter().map(|x| positive_y_literals(x, y)).collect()),
        Formula::Not(a) if mentions(a, y) => match a.as_ref() {
            Formula::Eq(t) => Formula::Or(vec![
                qe::norm_literal(&Formula::Le(t.clone() + Term::constant(1))),
                qe::norm_literal(&Formula::Le(Term::constant(1) - t.clone())),
            ]),
            Formula::Cong(t, m) => Formula::disj(
                int_range(Int::one(), m.clone())
                    .map(|k| qe::norm_literal(&Formula::Cong(t.clone() + Term::constant(k), m.clone()))),
            ),
            other => qe::norm_literal(&Formula::not(other.clone())),
        },
        other => other.clone(),
    }
}

fn dnf(f: &Formula, y: &str) -> Vec<Conjunct> {
    if !mentions(f, y) {
        return vec![Conjunct { y_atoms: vec![], rest: vec![f.clone()] }];
    }
    match f {
        Formula::Or(xs) => xs.iter().flat_map(|x| dnf(x, y)).collect(),
        Formula::And(xs) => {
            let mut acc = vec![Conjunct::default()];
            for x in xs {
                let parts = dnf(x, y);
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for a in &acc {
                    for p in &parts {
                        let mut c = a.clone();
                        c.y_atoms.extend(p.y_atoms.iter().cloned());
                        c.rest.extend(p.rest.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
        atom => vec![Conjunct { y_atoms: vec![atom.clone()], rest: vec![] }],
    }
}

/// Natural grid on which `w/d` rounds to a standard function.
fn natural_moduli(b: &Bound, xs: &[Var]) -> Vec<Int> {
    xs.iter()
        .map(|v| {
            let c = b.w.coeff(v);
            &b.d / gcd(&b.d, &c)
        })
        .collect()
}

/// `⌈w/d⌉` (or `⌊w/d⌋`) restricted to the class `c̄ mod m̄`.
fn rounded(b: &Bound, xs: &[Var], classes: &[Int], moduli: &[Int], ceil: bool) -> StandardZLinear {
    let lookup: BTreeMap<&str, &Int> = xs.iter().map(|v| &**v).zip(classes).collect();
    let w0 = b.w.eval_with(|v| lookup.get(v).map(|&i| i.clone())).expect("bound over base variables");
    let offset = if ceil { ceil_div(&w0, &b.d) } else { floor_div(&w0, &b.d) };
    let coeffs = xs
        .iter()
        .zip(moduli)
        .map(|(v, m)| b.w.coeff(v) * m / &b.d)
        .collect();
    StandardZLinear {
        residues: classes.to_vec(),
        moduli: moduli.to_vec(),
        offset,
        coeffs,
    }
}

fn fresh(avoid: &[Var]) -> Var {
    let mut name = "_z".to_string();
    while avoid.iter().any(|v| **v == *name) {
        name.push('_');
    }
    var(&name)
}

/// Where lower bound `j` is the first maximal one.
fn lower_active(lowers: &[Bound], j: usize, z: &Var) -> Formula {
    if lowers.len() == 1 {
        return Formula::True;
    }
    let zt = Term::var(z);
    let bj = &lowers[j];
    let mut parts = vec![
        Formula::Le(bj.w.clone() - zt.clone() * &bj.d),
        Formula::Le(zt.clone() * &bj.d - bj.w.clone() - Term::constant(&bj.d - Int::one())),
    ];
    for (i, b) in lowers.iter().enumerate() {
        if i == j {
            continue;
        }
        let at = if i < j { zt.clone() - Term::constant(1) } else { zt.clone() };
        parts.push(Formula::Le(b.w.clone() - at * &b.d));
    }
    exists_qf(z, &simplify(&Formula::conj(parts)))
}

/// Where upper bound `k` is the first minimal one.
fn upper_active(uppers: &[Bound], k: usize, z: &Var) -> Formula {
    if uppers.len() == 1 {
        return Formula::True;
    }
    let zt = Term::var(z);
    let bk = &uppers[k];
    let mut parts = vec![
        Formula::Le(zt.clone() * &bk.d - bk.w.clone()),
        Formula::Le(bk.w.clone() - zt.clone() * &bk.d - Term::constant(&bk.d - Int::one())),
    ];
    for (i, b) in uppers.iter().enumerate() {
        if i == k {
            continue;
        }
        let at = if i < k { zt.clone() + Term::constant(1) } else { zt.clone() };
        parts.push(Formula::Le(at * &b.d - b.w.clone()));
    }
    exists_qf(z, &simplify(&Formula::conj(parts)))
}

fn classes(moduli: &[Int]) -> Vec<Vec<Int>> {
    let mut out = vec![vec![]];
    for m in moduli {
        let mut next = Vec::new();
        for prefix in &out {
            for c in int_range(Int::zero(), m.clone()) {
                let mut p: Vec<Int> = prefix.clone();
                p.push(c);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Decomposes a quantifier-free formula over `vars` (fiber variable last)
/// into cell terms.
pub fn decompose(f: &Formula, vars: &[Var]) -> Result<CellDecomposition> {
    if vars.is_empty() {
        return Err(Error::Invalid("decompose needs at least one variable".into()));
    }
    if !f.is_quantifier_free() {
        return Err(Error::Quantified);
    }
    if let Some(p) = f.predicates().into_iter().next() {
        return Err(Error::PredicatePresent(p.to_string()));
    }
    let extra: Vec<String> = f
        .free_vars()
        .into_iter()
        .filter(|v| !vars.contains(v))
        .map(|v| v.to_string())
        .collect();
    if !extra.is_empty() {
        return Err(Error::FreeVariables(extra.join(", ")));
    }
    let y = vars.last().unwrap().clone();
    let xs = &vars[..vars.len() - 1];
    let z = fresh(vars);
    let normal = positive_y_literals(&qe::eliminate(f)?, &y);

    let mut terms = Vec::new();
    for conj in dnf(&simplify(&normal), &y) {
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        let mut congs = Vec::new();
        let mut rest = conj.rest.clone();
        for atom in &conj.y_atoms {
            match atom {
                Formula::Le(t) => {
                    let a = t.coeff(&y);
                    let s = t.without(&y);
                    if a.is_positive() {
                        uppers.push(Bound { d: a, w: -s });
                    } else {
                        lowers.push(Bound { d: -a, w: s });
                    }
                }
                Formula::Eq(t) => {
                    let a = t.coeff(&y);
                    let s = t.without(&y);
                    let (d, w) = if a.is_positive() { (a, -s) } else { (-a, s) };
                    rest.push(qe::norm_literal(&Formula::Cong(w.clone(), d.clone())));
                    lowers.push(Bound { d: d.clone(), w: w.clone() });
                    uppers.push(Bound { d, w });
                }
                Formula::Cong(t, m) => congs.push((t.coeff(&y), t.without(&y), m.clone())),
                other => return Err(Error::Internal(format!("unexpected literal {other}"))),
            }
        }
        let q = congs
            .iter()
            .fold(Int::one(), |acc, (a, _, m)| lcm(&acc, &(m / gcd(a, m))));
        for r in int_range(Int::zero(), q.clone()) {
            let mut rest_r = rest.clone();
            for (a, s, m) in &congs {
                rest_r.push(Formula::Cong(s.clone() + Term::constant(a * &r), m.clone()));
            }
            let rest_r = simplify(&Formula::conj(rest_r));
            if rest_r == Formula::False {
                continue;
            }
            let lower_choices: Vec<Option<usize>> =
                if lowers.is_empty() { vec![None] } else { (0..lowers.len()).map(Some).collect() };
            let upper_choices: Vec<Option<usize>> =
                if uppers.is_empty() { vec![None] } else { (0..uppers.len()).map(Some).collect() };
            for &j in &lower_choices {
                for &k in &upper_choices {
                    let mut cond = vec![rest_r.clone()];
                    if let Some(j) = j {
                        cond.push(lower_active(&lowers, j, &z));
                    }
                    if let Some(k) = k {
                        cond.push(upper_active(&uppers, k, &z));
                    }
                    let zt = Term::var(&z);
                    let mut window = vec![Formula::cong(zt.clone(), Term::constant(r.clone()), q.clone())];
                    if let Some(j) = j {
                        window.push(Formula::Le(lowers[j].w.clone() - zt.clone() * &lowers[j].d));
                    }
                    if let Some(k) = k {
                        window.push(Formula::Le(zt.clone() * &uppers[k].d - uppers[k].w.clone()));
                    }
                    cond.push(exists_qf(&z, &simplify(&Formula::conj(window))));
                    let cond = simplify(&Formula::conj(cond));
                    if cond == Formula::False {
                        continue;
                    }
                    let mut grid = vec![Int::one(); xs.len()];
                    for b in j.map(|j| &lowers[j]).into_iter().chain(k.map(|k| &uppers[k])) {
                        for (g, m) in grid.iter_mut().zip(natural_moduli(b, xs)) {
                            *g = lcm(g, &m);
                        }
                    }
                    for cls in classes(&grid) {
                        let mut base = vec![cond.clone()];
                        for i in 0..xs.len() {
                            if !grid[i].is_one() {
                                base.push(Formula::cong(
                                    Term::var(&xs[i]),
                                    Term::constant(cls[i].clone()),
                                    grid[i].clone(),
                                ));
                            }
                        }
                        let base = simplify(&Formula::conj(base));
                        if base == Formula::False || !qe::is_satisfiable(&base)? {
                            continue;
                        }
                        let lower = match j {
                            Some(j) => ZLinear::Standard(rounded(&lowers[j], xs, &cls, &grid, true)),
                            None => ZLinear::MinusInfinity,
                        };
                        let upper = match k {
                            Some(k) => ZLinear::Standard(rounded(&uppers[k], xs, &cls, &grid, false)),
                            None => ZLinear::PlusInfinity,
                        };
                        terms.push(CellTerm {
                            base,
                            lower,
                            upper,
                            residue: r.clone(),
                            modulus: q.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(CellDecomposition { vars: vars.to_vec(), terms })
}

#[cfg(test)]
mod tests;
