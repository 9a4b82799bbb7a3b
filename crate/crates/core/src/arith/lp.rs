//! Exact rational linear programming by Fourier–Motzkin elimination.

use super::Rat;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
}

/// `coeffs · x  relation  constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub relation: Relation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        LinearSystem {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<Rat>, relation: Relation, constant: Rat) {
        assert_eq!(coeffs.len(), self.dim, "constraint dimension mismatch");
        self.constraints.push(Constraint {
            coeffs,
            constant,
            relation,
        });
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| {
            let lhs: Rat = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            match c.relation {
                Relation::Eq => lhs == c.constant,
                Relation::Le => lhs <= c.constant,
                Relation::Lt => lhs < c.constant,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LpStatus {
    Infeasible,
    /// `optimum` is the supremum of the objective; `witness` is feasible and
    /// attains it whenever the supremum is attained.
    Bounded { optimum: Rat, witness: Vec<Rat> },
    Unbounded { witness: Vec<Rat>, ray: Vec<Rat> },
}

/// `a · x <= b` (strict when flagged).
#[derive(Clone, Debug)]
struct Ineq {
    a: Vec<Rat>,
    b: Rat,
    strict: bool,
}

type Stage = Vec<Ineq>;

fn to_ineqs(sys: &LinearSystem, extra_dim: usize) -> Vec<Ineq> {
    let pad = |v: &[Rat]| {
        let mut a = v.to_vec();
        a.resize(sys.dim + extra_dim, Rat::zero());
        a
    };
    let mut out = Vec::new();
    for c in &sys.constraints {
        let a = pad(&c.coeffs);
        match c.relation {
            Relation::Le | Relation::Lt => out.push(Ineq {
                a,
                b: c.constant.clone(),
                strict: c.relation == Relation::Lt,
            }),
            Relation::Eq => {
                out.push(Ineq {
                    a: a.iter().map(|v| -v).collect(),
                    b: -c.constant.clone(),
                    strict: false,
                });
                out.push(Ineq {
                    a,
                    b: c.constant.clone(),
                    strict: false,
                });
            }
        }
    }
    out
}

/// Keeps the tightest inequality per direction; `None` if a constant
/// inequality is violated.
fn prune(ineqs: Vec<Ineq>) -> Option<Stage> {
    let mut best: BTreeMap<Vec<Rat>, (Rat, bool)> = BTreeMap::new();
    for ineq in ineqs {
        let Some(lead) = ineq.a.iter().find(|v| !v.is_zero()).map(|v| v.abs()) else {
            let ok = if ineq.strict {
                ineq.b.is_positive()
            } else {
                !ineq.b.is_negative()
            };
            if !ok {
                return None;
            }
            continue;
        };
        let a: Vec<Rat> = ineq.a.iter().map(|v| v / &lead).collect();
        let b = &ineq.b / &lead;
        match best.get_mut(&a) {
            Some(cur) => {
                if b < cur.0 || (b == cur.0 && ineq.strict) {
                    *cur = (b, ineq.strict);
                }
            }
            None => {
                best.insert(a, (b, ineq.strict));
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(a, (b, strict))| Ineq { a, b, strict })
            .collect(),
    )
}

fn eliminate(stage: &Stage, var: usize) -> Option<Stage> {
    let mut out = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for ineq in stage {
        let c = &ineq.a[var];
        if c.is_zero() {
            out.push(ineq.clone());
        } else if c.is_positive() {
            pos.push(ineq);
        } else {
            neg.push(ineq);
        }
    }
    for p in &pos {
        for n in &neg {
            let sp = Rat::one() / &p.a[var];
            let sn = Rat::one() / -&n.a[var];
            let a: Vec<Rat> = p
                .a
                .iter()
                .zip(&n.a)
                .map(|(x, y)| x * &sp + y * &sn)
                .collect();
            out.push(Ineq {
                a,
                b: &p.b * &sp + &n.b * &sn,
                strict: p.strict || n.strict,
            });
        }
    }
    prune(out)
}

/// Runs elimination of variables `order[0], order[1], ...`; returns the
/// stages (stage i is the system before eliminating `order[i]`) or `None`
/// if infeasible.
fn fm_stages(initial: Vec<Ineq>, order: &[usize]) -> Option<Vec<Stage>> {
    let mut stages = vec![prune(initial)?];
    for &v in order {
        let next = eliminate(stages.last().unwrap(), v)?;
        stages.push(next);
    }
    Some(stages)
}

/// Interval of admissible values for `var` in `stage`, all other variables
/// already fixed in `x`.
fn bounds(stage: &Stage, var: usize, x: &[Option<Rat>]) -> (Option<(Rat, bool)>, Option<(Rat, bool)>) {
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for ineq in stage {
        let c = &ineq.a[var];
        if c.is_zero() {
            continue;
        }
        let mut rest = ineq.b.clone();
        for (j, a) in ineq.a.iter().enumerate() {
            if j != var && !a.is_zero() {
                rest -= a * x[j].as_ref().expect("variable fixed in order");
            }
        }
        let v = rest / c;
        if c.is_positive() {
            if hi.as_ref().is_none_or(|(h, s)| v < *h || (v == *h && !s)) {
                hi = Some((v, ineq.strict));
            }
        } else if lo.as_ref().is_none_or(|(l, s)| v > *l || (v == *l && !s)) {
            lo = Some((v, ineq.strict));
        }
    }
    (lo, hi)
}

fn pick(lo: Option<(Rat, bool)>, hi: Option<(Rat, bool)>) -> Rat {
    match (lo, hi) {
        (None, None) => Rat::zero(),
        (Some((l, s)), None) => {
            if s {
                l + Rat::one()
            } else {
                l
            }
        }
        (None, Some((h, s))) => {
            if s {
                h - Rat::one()
            } else {
                h
            }
        }
        (Some((l, _)), Some((h, _))) => {
            if l == h {
                l
            } else {
                (l + h) / Rat::from_integer(2.into())
            }
        }
    }
}

/// Back-substitutes through the stages; `fixed` pre-assigns variables that
/// were never eliminated.
fn back_substitute(stages: &[Stage], order: &[usize], mut x: Vec<Option<Rat>>) -> Vec<Rat> {
    for (i, &v) in order.iter().enumerate().rev() {
        if x[v].is_some() {
            continue;
        }
        let (lo, hi) = bounds(&stages[i], v, &x);
        x[v] = Some(pick(lo, hi));
    }
    x.into_iter().map(|v| v.unwrap_or_else(Rat::zero)).collect()
}

/// A feasible point of the system, if any.
pub fn feasible_point(sys: &LinearSystem) -> Option<Vec<Rat>> {
    let order: Vec<usize> = (0..sys.dim).rev().collect();
    let stages = fm_stages(to_ineqs(sys, 0), &order)?;
    Some(back_substitute(&stages, &order, vec![None; sys.dim]))
}

/// Maximizes `objective · x` over the system.
pub fn lp_status(sys: &LinearSystem, objective: &[Rat]) -> LpStatus {
    assert_eq!(objective.len(), sys.dim, "objective dimension mismatch");
    let n = sys.dim;
    // Extra variable t = objective · x at index n.
    let mut ineqs = to_ineqs(sys, 1);
    let mut row: Vec<Rat> = objective.to_vec();
    row.push(-Rat::one());
    ineqs.push(Ineq {
        a: row.iter().map(|v| -v).collect(),
        b: Rat::zero(),
        strict: false,
    });
    ineqs.push(Ineq {
        a: row,
        b: Rat::zero(),
        strict: false,
    });
    let mut order: Vec<usize> = (0..n).rev().collect();
    order.push(n);
    let Some(stages) = fm_stages(ineqs, &order) else {
        return LpStatus::Infeasible;
    };
    let t_stage = &stages[n];
    let (lo, hi) = bounds(t_stage, n, &vec![None; n + 1]);
    match hi {
        Some((h, strict)) => {
            let t = if strict { pick(lo, Some((h.clone(), true))) } else { h.clone() };
            let mut x = vec![None; n + 1];
            x[n] = Some(t);
            let mut w = back_substitute(&stages, &order, x);
            w.truncate(n);
            LpStatus::Bounded {
                optimum: h,
                witness: w,
            }
        }
        None => {
            let mut w = back_substitute(&stages, &order, vec![None; n + 1]);
            w.truncate(n);
            let mut rays = LinearSystem::new(n);
            for c in &sys.constraints {
                let rel = if c.relation == Relation::Eq {
                    Relation::Eq
                } else {
                    Relation::Le
                };
                rays.push(c.coeffs.clone(), rel, Rat::zero());
            }
            rays.push(
                objective.iter().map(|v| -v).collect(),
                Relation::Le,
                -Rat::one(),
            );
            let ray = feasible_point(&rays).expect("unbounded program has a recession ray");
            LpStatus::Unbounded { witness: w, ray }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn r(v: i64) -> Rat {
        rat(v, 1)
    }

    #[test]
    fn interval_maximum() {
        let mut s = LinearSystem::new(1);
        s.push(vec![r(1)], Relation::Le, r(1));
        s.push(vec![r(-1)], Relation::Le, r(1));
        assert_eq!(
            lp_status(&s, &[r(1)]),
            LpStatus::Bounded {
                optimum: r(1),
                witness: vec![r(1)]
            }
        );
    }

    #[test]
    fn half_line_unbounded() {
        let mut s = LinearSystem::new(1);
        s.push(vec![r(-1)], Relation::Le, r(0));
        match lp_status(&s, &[r(1)]) {
            LpStatus::Unbounded { witness, ray } => {
                assert!(s.satisfied_by(&witness));
                assert!(ray[0] > r(0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn strict_contradiction() {
        let mut s = LinearSystem::new(1);
        s.push(vec![r(1)], Relation::Lt, r(0));
        s.push(vec![r(-1)], Relation::Lt, r(0));
        assert_eq!(lp_status(&s, &[r(1)]), LpStatus::Infeasible);
        assert_eq!(feasible_point(&s), None);
    }

    #[test]
    fn strict_supremum_not_attained() {
        let mut s = LinearSystem::new(2);
        s.push(vec![r(1), r(1)], Relation::Lt, r(2));
        s.push(vec![r(-1), r(0)], Relation::Le, r(0));
        s.push(vec![r(0), r(-1)], Relation::Le, r(0));
        match lp_status(&s, &[r(1), r(1)]) {
            LpStatus::Bounded { optimum, witness } => {
                assert_eq!(optimum, r(2));
                assert!(s.satisfied_by(&witness));
            }
            other => panic!("{other:?}"),
        }
    }
}
