//! The reduction pipeline for arity ≥ 2: congruence sorting, weakly
//! sorted fibers, sorted fibers, and the exchange of a parallel pair of
//! endpoint functions.

use super::base::classify_1d;
use super::windows::{constant_difference, fill_formula, slab_formula};
use super::{fresh_in, join, tidy, TrackedSet, Verdict};
use crate::arith::{int_range, lcm, modulo, Int};
use crate::cells::{decompose, CellTerm, StandardZLinear, ZLinear};
use crate::error::{Error, Result};
use crate::formula::{Formula, Term, Var};
use crate::groupsets::{from_boolean_combination, GroupSet};
use crate::qe::{self, find_model, is_satisfiable, simplify};
use num_traits::{One, Zero};
use std::collections::HashMap;

/// A residue slice `C_d = {(x̄,y) : (x̄, y+d) ∈ A, y ≡_m 0}` with its
/// cell terms (all of modulus `m`, residue 0).
#[derive(Clone, Debug)]
pub struct CongruencePiece {
    pub shift: Int,
    pub modulus: Int,
    pub set: TrackedSet,
    pub terms: Vec<CellTerm>,
}

/// Endpoint functions witnessing sorted fibers, and the projection.
#[derive(Clone, Debug)]
pub struct SortedFibersWitness {
    pub modulus: Int,
    pub fbar: Vec<StandardZLinear>,
    pub gbar: Vec<StandardZLinear>,
    pub projection: TrackedSet,
}

fn split_vars(vars: &[Var]) -> (Vec<Var>, Var) {
    let (xs, y) = vars.split_at(vars.len() - 1);
    (xs.to_vec(), y[0].clone())
}

fn with_fiber(xs: &[Var], y: Term) -> Vec<Term> {
    xs.iter().map(|v| Term::var(v)).chain([y]).collect()
}

/// Splits `A` into residue slices modulo the lcm of the term moduli,
/// shifted down to residue 0. Empty slices are dropped.
pub fn sort_congruences(a: &TrackedSet, terms: &[CellTerm]) -> Result<Vec<CongruencePiece>> {
    let m = terms.iter().fold(Int::one(), |acc, t| lcm(&acc, &t.modulus));
    let (xs, y) = split_vars(a.vars());
    let yt = Term::var(&y);
    let mut out = Vec::new();
    for d in int_range(Int::zero(), m.clone()) {
        let slice: Vec<CellTerm> = terms
            .iter()
            .filter(|t| modulo(&(&d - &t.residue), &t.modulus).is_zero())
            .map(|t| CellTerm {
                base: t.base.clone(),
                lower: t.lower.shift(&-d.clone()),
                upper: t.upper.shift(&-d.clone()),
                residue: Int::zero(),
                modulus: m.clone(),
            })
            .collect();
        if slice.is_empty() {
            continue;
        }
        let shifted = with_fiber(&xs, yt.clone() + Term::constant(d.clone()));
        let m2 = m.clone();
        let set = a.derive(a.vars().to_vec(), |at| {
            Formula::conj([at(&shifted), Formula::cong(yt.clone(), Term::zero(), m2.clone())])
        })?;
        out.push(CongruencePiece { shift: d, modulus: m.clone(), set, terms: slice });
    }
    Ok(out)
}

fn dedup(fs: impl IntoIterator<Item = StandardZLinear>) -> Vec<StandardZLinear> {
    let mut out: Vec<StandardZLinear> = Vec::new();
    for f in fs {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// `y = R_m(f(x̄))` as a disjunction of equalities.
fn rounds_up_to(f: &StandardZLinear, m: &Int, xs: &[Var], y: &Term) -> Vec<Formula> {
    int_range(Int::zero(), m.clone())
        .map(|r| f.eq_formula(xs, &(y.clone() - Term::constant(r))))
        .collect()
}

/// `y = L_m(g(x̄))` as a disjunction of equalities.
fn rounds_down_to(g: &StandardZLinear, m: &Int, xs: &[Var], y: &Term) -> Vec<Formula> {
    int_range(Int::zero(), m.clone())
        .map(|r| g.eq_formula(xs, &(y.clone() + Term::constant(r))))
        .collect()
}

#[derive(Default)]
pub(super) struct Engine {
    pub trace: Vec<String>,
    cache: HashMap<(Vec<Var>, Formula), Formula>,
}

impl Engine {
    pub fn note(&mut self, s: String) {
        self.trace.push(s);
    }

    pub fn classify_set(&mut self, s: &TrackedSet) -> Result<Verdict> {
        let sem = s.semantics();
        if !sem.has_order_atoms() {
            return Ok(Verdict::GroupDefinable(sem.clone()));
        }
        let key = (s.vars().to_vec(), sem.clone());
        if let Some(w) = self.cache.get(&key) {
            return Ok(Verdict::GroupDefinable(w.clone()));
        }
        let v = if !is_satisfiable(sem)? {
            Verdict::GroupDefinable(Formula::False)
        } else if s.arity() == 1 {
            let v = classify_1d(s)?;
            self.note(format!("line over {}: {}", s.vars()[0], v.name()));
            v
        } else {
            self.pipeline(s)?
        };
        if let Verdict::GroupDefinable(w) = &v {
            let w = simplify(w);
            self.cache.insert(key, w.clone());
            return Ok(Verdict::GroupDefinable(w));
        }
        Ok(v)
    }

    fn pipeline(&mut self, s: &TrackedSet) -> Result<Verdict> {
        let (xs, y) = split_vars(s.vars());
        let all = s.var_terms();
        let yv = y.clone();
        let proj = s.derive(xs.clone(), |at| Formula::exists(&yv, at(&all)))?;
        if let v @ Verdict::DefinesOrdering(_) = self.classify_set(&proj)? {
            self.note(format!("projection to ({}) defines the ordering", join(&xs)));
            return Ok(v);
        }
        let d = decompose(s.semantics(), s.vars())?;
        let pieces = sort_congruences(s, &d.terms)?;
        let m = pieces.first().map(|p| p.modulus.clone()).unwrap_or_else(Int::one);
        self.note(format!(
            "cells over ({}): {} terms, modulus {}, {} residue slices",
            join(s.vars()),
            d.terms.len(),
            m,
            pieces.len()
        ));
        let yt = Term::var(&y);
        let mut parts = Vec::new();
        for piece in &pieces {
            match self.uniform(piece)? {
                v @ Verdict::DefinesOrdering(_) => return Ok(v),
                Verdict::GroupDefinable(w) => {
                    let back = w.substitute_one(&y, &(yt.clone() - Term::constant(piece.shift.clone())));
                    parts.push(Formula::conj([
                        Formula::cong(yt.clone(), Term::constant(piece.shift.clone()), m.clone()),
                        back,
                    ]));
                }
            }
        }
        Ok(Verdict::GroupDefinable(simplify(&Formula::disj(parts))))
    }

    /// Weak sorting of a uniformly congruent slice.
    fn uniform(&mut self, piece: &CongruencePiece) -> Result<Verdict> {
        let c = &piece.set;
        let m = &piece.modulus;
        let (xs, y) = split_vars(c.vars());
        let up: Vec<&CellTerm> = piece.terms.iter().filter(|t| t.upper == ZLinear::PlusInfinity).collect();
        let down: Vec<&CellTerm> = piece.terms.iter().filter(|t| t.lower == ZLinear::MinusInfinity).collect();
        let up_f = Formula::disj(up.iter().map(|t| t.base.clone()));
        let down_f = Formula::disj(down.iter().map(|t| t.base.clone()));
        let one_sided = simplify(&Formula::disj([
            Formula::conj([up_f.clone(), down_f.clone().negate()]),
            Formula::conj([down_f.clone(), up_f.clone().negate()]),
        ]));
        if let Some(x0) = find_model(&one_sided, &xs)? {
            let pt: Vec<String> = x0.iter().map(|v| v.to_string()).collect();
            self.note(format!("infinite one-sided fiber over ({})", pt.join(", ")));
            let args: Vec<Term> = x0
                .iter()
                .map(|v| Term::constant(v.clone()))
                .chain([Term::var(&y)])
                .collect();
            let section = c.derive(vec![y.clone()], |at| at(&args))?;
            return match classify_1d(&section)? {
                v @ Verdict::DefinesOrdering(_) => Ok(v),
                Verdict::GroupDefinable(_) => Err(Error::Internal(
                    "one-sided infinite fiber classified as group-definable".into(),
                )),
            };
        }
        let y1_sem = simplify(&Formula::disj([up_f, down_f]));
        let w1 = if y1_sem == Formula::False {
            Formula::False
        } else {
            let z = fresh_in("z", c.vars());
            let y1 = fresh_in("u", c.vars());
            let y2 = fresh_in("v", c.vars());
            let zt = Term::var(&z);
            let sum_test = Formula::forall(
                &z,
                Formula::implies(
                    Formula::cong(zt.clone(), Term::zero(), m.clone()),
                    Formula::exists_all(
                        &[y1.clone(), y2.clone()],
                        Formula::conj([
                            c.def_at(&with_fiber(&xs, Term::var(&y1))),
                            c.def_at(&with_fiber(&xs, Term::var(&y2))),
                            Formula::eq(zt, Term::var(&y1) + Term::var(&y2)),
                        ]),
                    ),
                ),
            );
            let y1set = TrackedSet::new(xs.clone(), y1_sem, sum_test);
            match self.classify_set(&y1set)? {
                v @ Verdict::DefinesOrdering(_) => {
                    self.note("set of infinite fibers defines the ordering".into());
                    return Ok(v);
                }
                Verdict::GroupDefinable(w) => w,
            }
        };
        let finite: Vec<&CellTerm> = piece
            .terms
            .iter()
            .filter(|t| !t.lower.is_extreme() && !t.upper.is_extreme())
            .collect();
        let a2 = c.combine(&w1.clone().negate(), false)?;
        let f2 = dedup(finite.iter().filter_map(|t| t.lower.standard().cloned()));
        let g2 = dedup(finite.iter().filter_map(|t| t.upper.standard().cloned()));
        let w2 = match self.weakly_sorted(&a2, &f2, &g2, m)? {
            v @ Verdict::DefinesOrdering(_) => return Ok(v),
            Verdict::GroupDefinable(w) => w,
        };
        if w1 == Formula::False {
            return Ok(Verdict::GroupDefinable(w2));
        }
        let yt = Term::var(&y);
        let on_grid = Formula::cong(yt.clone(), Term::zero(), m.clone());
        let all = c.var_terms();
        let w1c = w1.clone();
        let grid = on_grid.clone();
        let b = c.derive(c.vars().to_vec(), |at| {
            Formula::conj([w1c.clone(), grid.clone(), at(&all).negate()])
        })?;
        let one = Int::one();
        let fb = dedup(piece.terms.iter().filter_map(|t| t.upper.standard().map(|g| g.shift(&one))));
        let gb = dedup(piece.terms.iter().filter_map(|t| t.lower.standard().map(|f| f.shift(&-one.clone()))));
        self.note(format!("infinite fibers split off; complement has {} lower and {} upper ends", fb.len(), gb.len()));
        let wb = match self.weakly_sorted(&b, &fb, &gb, m)? {
            v @ Verdict::DefinesOrdering(_) => return Ok(v),
            Verdict::GroupDefinable(w) => w,
        };
        let a1 = Formula::conj([w1, on_grid, wb.negate()]);
        Ok(Verdict::GroupDefinable(simplify(&Formula::disj([w2, a1]))))
    }

    /// `A` with finite fibers inside `mZ`, each a union of intervals with
    /// left ends among `F` and right ends among `G`.
    fn weakly_sorted(&mut self, a: &TrackedSet, f: &[StandardZLinear], g: &[StandardZLinear], m: &Int) -> Result<Verdict> {
        if !is_satisfiable(a.semantics())? {
            return Ok(Verdict::GroupDefinable(Formula::False));
        }
        if f.is_empty() || g.is_empty() {
            return Err(Error::Internal("nonempty set without endpoint functions".into()));
        }
        let pieces = self.sort_fibers(a, f, g, m)?;
        self.note(format!(
            "sorted fibers: {} pieces from {} lower and {} upper ends",
            pieces.len(),
            f.len(),
            g.len()
        ));
        let mut parts = Vec::new();
        for (piece, w) in &pieces {
            match self.sorted(piece, w)? {
                v @ Verdict::DefinesOrdering(_) => return Ok(v),
                Verdict::GroupDefinable(x) => parts.push(x),
            }
        }
        Ok(Verdict::GroupDefinable(simplify(&Formula::disj(parts))))
    }

    /// Splits `π(A)` by which functions realise the left ends (`A⁻`) and
    /// right ends (`A⁺`) of each fiber. For every left end the function of
    /// least index is taken, so the pieces are disjoint.
    pub fn sort_fibers(
        &mut self,
        a: &TrackedSet,
        f: &[StandardZLinear],
        g: &[StandardZLinear],
        m: &Int,
    ) -> Result<Vec<(TrackedSet, SortedFibersWitness)>> {
        let (xs, y) = split_vars(a.vars());
        let all = a.var_terms();
        let yv = y.clone();
        let proj = a.derive(xs.clone(), |at| Formula::exists(&yv, at(&all)))?;
        let w = fresh_in("w", a.vars());
        let wt = Term::var(&w);
        let grid = Formula::cong(wt.clone(), Term::zero(), m.clone());
        let step = Term::constant(m.clone());
        // Each end condition as a template in the membership predicate.
        let end = |funcs: &[StandardZLinear], i: usize, left: bool, at: &dyn Fn(&[Term]) -> Formula| -> Formula {
            let h = &funcs[i];
            let round = |q: &StandardZLinear| {
                if left {
                    rounds_up_to(q, m, &xs, &wt)
                } else {
                    rounds_down_to(q, m, &xs, &wt)
                }
            };
            let here = at(&with_fiber(&xs, wt.clone()));
            let beyond = if left { wt.clone() - step.clone() } else { wt.clone() + step.clone() };
            let boundary = Formula::conj([here, at(&with_fiber(&xs, beyond)).negate()]);
            let realised = Formula::disj(round(h).into_iter().map(|eq| {
                Formula::exists(&w, Formula::conj([grid.clone(), eq, boundary.clone()]))
            }));
            let mut parts = vec![h.domain_formula(&xs), realised];
            for q in &funcs[..i] {
                let same = Formula::exists(
                    &w,
                    Formula::conj([grid.clone(), Formula::disj(round(q)), Formula::disj(round(h))]),
                );
                parts.push(Formula::conj([q.domain_formula(&xs), same]).negate());
            }
            Formula::conj(parts)
        };
        let mut conds = Vec::new();
        for i in 0..f.len() {
            let sem = tidy(&xs, qe::eliminate(&end(f, i, true, &|args| a.sem_at(args)))?)?;
            let def = simplify(&end(f, i, true, &|args| a.def_at(args)));
            conds.push((true, i, sem, def));
        }
        for i in 0..g.len() {
            let sem = tidy(&xs, qe::eliminate(&end(g, i, false, &|args| a.sem_at(args)))?)?;
            let def = simplify(&end(g, i, false, &|args| a.def_at(args)));
            conds.push((false, i, sem, def));
        }
        // Leaves: semantics, definition, chosen left and right ends.
        let mut leaves = vec![(proj.semantics().clone(), proj.definition().clone(), vec![], vec![])];
        for (left, i, sem, def) in &conds {
            let mut next = Vec::new();
            for (ls, ld, al, be) in leaves {
                for take in [true, false] {
                    let (cs, cd) = if take {
                        (sem.clone(), def.clone())
                    } else {
                        (sem.clone().negate(), def.clone().negate())
                    };
                    let s2 = tidy(&xs, simplify(&Formula::conj([ls.clone(), cs])))?;
                    if s2 == Formula::False || !is_satisfiable(&s2)? {
                        continue;
                    }
                    let d2 = Formula::conj([ld.clone(), cd]);
                    let (mut al2, mut be2): (Vec<usize>, Vec<usize>) = (al.clone(), be.clone());
                    if take {
                        if *left {
                            al2.push(*i);
                        } else {
                            be2.push(*i);
                        }
                    }
                    next.push((s2, d2, al2, be2));
                }
            }
            leaves = next;
        }
        let mut out = Vec::new();
        for (ls, ld, al, be) in leaves {
            if al.len() != be.len() || al.is_empty() {
                return Err(Error::Internal(format!(
                    "fiber with {} left ends and {} right ends over {}",
                    al.len(),
                    be.len(),
                    ls
                )));
            }
            let y_set = TrackedSet::new(xs.clone(), ls.clone(), simplify(&ld));
            let piece = TrackedSet::new(
                a.vars().to_vec(),
                simplify(&Formula::conj([a.semantics().clone(), ls])),
                simplify(&Formula::conj([a.definition().clone(), ld])),
            );
            out.push((
                piece,
                SortedFibersWitness {
                    modulus: m.clone(),
                    fbar: al.iter().map(|&i| f[i].clone()).collect(),
                    gbar: be.iter().map(|&i| g[i].clone()).collect(),
                    projection: y_set,
                },
            ));
        }
        Ok(out)
    }

    /// A piece with sorted fibers: classify the projection, then handle
    /// each quasi-coset of it separately.
    fn sorted(&mut self, piece: &TrackedSet, w: &SortedFibersWitness) -> Result<Verdict> {
        let wy = match self.classify_set(&w.projection)? {
            v @ Verdict::DefinesOrdering(_) => {
                self.note("projection of a sorted piece defines the ordering".into());
                return Ok(v);
            }
            Verdict::GroupDefinable(wy) => wy,
        };
        let xs = w.projection.vars();
        let gs = from_boolean_combination(&wy, xs)?;
        let mut parts = Vec::new();
        for q in gs.parts() {
            let xf = simplify(&GroupSet::quasi_coset(q.coset().clone(), q.removed()).to_formula(xs));
            let sub = piece.combine(&xf, false)?;
            if !is_satisfiable(sub.semantics())? {
                continue;
            }
            let (s, t, c) = constant_difference(&w.fbar, &w.gbar, q.coset()).ok_or_else(|| {
                Error::Internal(format!(
                    "no constant endpoint difference on quasi-coset {}; lower ends [{}], upper ends [{}]",
                    xf,
                    w.fbar.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "),
                    w.gbar.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "),
                ))
            })?;
            match self.exchange(&sub, w, &xf, (s, t, c))? {
                v @ Verdict::DefinesOrdering(_) => return Ok(v),
                Verdict::GroupDefinable(x) => parts.push(x),
            }
        }
        Ok(Verdict::GroupDefinable(simplify(&Formula::disj(parts))))
    }

    /// Removes the slab between a parallel pair (or fills the gap between
    /// them) and recurses with one function fewer on each side.
    fn exchange(&mut self, a: &TrackedSet, w: &SortedFibersWitness, xf: &Formula, pair: (usize, usize, Int)) -> Result<Verdict> {
        let (s, t, c) = pair;
        let k = w.fbar.len();
        let (xs, y) = split_vars(a.vars());
        let yt = Term::var(&y);
        let gap = -c;
        let rest_f: Vec<StandardZLinear> = w.fbar.iter().enumerate().filter(|(i, _)| *i != s).map(|(_, f)| f.clone()).collect();
        let rest_g: Vec<StandardZLinear> = w.gbar.iter().enumerate().filter(|(i, _)| *i != t).map(|(_, g)| g.clone()).collect();
        self.note(format!("k = {k}: ends {s} and {t} at constant distance {gap}"));
        if gap >= Int::zero() {
            let slab = simplify(&Formula::conj([
                xf.clone(),
                slab_formula(&w.fbar, &w.gbar, s, t, &gap, &w.modulus, &xs, &yt),
            ]));
            let rest = a.combine(&slab.clone().negate(), false)?;
            if k == 1 {
                if is_satisfiable(rest.semantics())? {
                    return Err(Error::Internal("single interval not covered by its slab".into()));
                }
                return Ok(Verdict::GroupDefinable(slab));
            }
            return Ok(match self.weakly_sorted(&rest, &rest_f, &rest_g, &w.modulus)? {
                Verdict::GroupDefinable(r) => Verdict::GroupDefinable(simplify(&Formula::disj([slab, r]))),
                v => v,
            });
        }
        if k == 1 {
            return Err(Error::Internal("single interval with negative width".into()));
        }
        let fill = simplify(&Formula::conj([
            xf.clone(),
            fill_formula(&w.fbar, &w.gbar, s, t, &-gap, &w.modulus, &xs, &yt),
        ]));
        let merged = a.combine(&fill, true)?;
        Ok(match self.weakly_sorted(&merged, &rest_f, &rest_g, &w.modulus)? {
            Verdict::GroupDefinable(r) => Verdict::GroupDefinable(simplify(&Formula::conj([r, fill.negate()]))),
            v => v,
        })
    }
}
