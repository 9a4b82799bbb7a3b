//! Parallel endpoint functions and the order-free formulas for the set
//! of points between them.

use crate::arith::{int_range, Int, Rat};
use crate::cells::StandardZLinear;
use crate::formula::{Formula, Term, Var};
use crate::groupsets::Coset;
use crate::qe::simplify;
use num_traits::{Signed, Zero};

/// A pair `(s, t, c)` with `f_s − g_t = c` on the whole coset.
///
/// Among several constant pairs the one with `g_t ≥ f_s` and the smallest
/// gap is preferred, then the smallest indices.
pub fn constant_difference(fbar: &[StandardZLinear], gbar: &[StandardZLinear], x: &Coset) -> Option<(usize, usize, Int)> {
    let offset: Vec<Rat> = x.offset().iter().map(|v| Rat::from_integer(v.clone())).collect();
    let basis = x.lattice().basis();
    let mut found = Vec::new();
    for (s, f) in fbar.iter().enumerate() {
        let (fs, fk) = f.affine_parts();
        for (t, g) in gbar.iter().enumerate() {
            let (gs, gk) = g.affine_parts();
            let slope: Vec<Rat> = fs.iter().zip(&gs).map(|(a, b)| a - b).collect();
            let flat = (0..basis.rows()).all(|i| {
                let dot: Rat = slope
                    .iter()
                    .zip(basis.row(i))
                    .map(|(a, b)| a * Rat::from_integer(b.clone()))
                    .sum();
                dot.is_zero()
            });
            if !flat {
                continue;
            }
            let value: Rat = &fk - &gk + slope.iter().zip(&offset).map(|(a, b)| a * b).sum::<Rat>();
            if !value.is_integer() {
                continue;
            }
            found.push((s, t, value.to_integer()));
        }
    }
    found.into_iter().min_by_key(|(s, t, c)| {
        let gap = -c.clone();
        (gap.is_negative(), gap.abs(), *s, *t)
    })
}

/// Injective maps `[p] → [k]` with a prescribed image at one position.
fn injections(p: usize, k: usize, pin_pos: usize, pin: usize) -> Vec<Vec<usize>> {
    fn go(p: usize, k: usize, pin_pos: usize, pin: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        let pos = cur.len();
        for v in 0..k {
            if (pos == pin_pos) != (v == pin) || cur.contains(&v) {
                continue;
            }
            cur.push(v);
            go(p, k, pin_pos, pin, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, k, pin_pos, pin, &mut Vec::new(), &mut out);
    out
}

/// Offset pairs `(i_q, j_q)` for `q = 1..p` with `i_1 = 0`, `j_p = c`,
/// `i_q + inner ≤ j_q` and `j_q + outer ≤ i_{q+1}`.
fn tuples(p: usize, c: &Int, inner: i64, outer: i64) -> Vec<Vec<(Int, Int)>> {
    fn go(p: usize, c: &Int, inner: i64, outer: i64, start: Int, cur: &mut Vec<(Int, Int)>, out: &mut Vec<Vec<(Int, Int)>>) {
        let q = cur.len();
        if q == p {
            out.push(cur.clone());
            return;
        }
        let i_lo = start.clone();
        let i_hi = if q == 0 { Int::zero() } else { c.clone() };
        for i in int_range(i_lo, i_hi + 1) {
            let j_lo = &i + inner;
            let js: Vec<Int> = if q + 1 == p {
                if *c >= j_lo { vec![c.clone()] } else { vec![] }
            } else {
                int_range(j_lo, c + 1).collect()
            };
            for j in js {
                cur.push((i.clone(), j.clone()));
                go(p, c, inner, outer, &j + outer, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(p, c, inner, outer, Int::zero(), &mut Vec::new(), &mut out);
    out
}

/// `f(x̄) = h(x̄) + i`, simplified.
fn offset_eq(f: &StandardZLinear, h: &StandardZLinear, xs: &[Var], i: &Int) -> Formula {
    simplify(&f.offset_eq_formula(h, xs, i))
}

/// `y = h(x̄) + i`.
fn point_at(h: &StandardZLinear, xs: &[Var], y: &Term, i: &Int) -> Formula {
    h.eq_formula(xs, &(y.clone() - Term::constant(i.clone())))
}

/// The points of `A` between `f_s` and `g_t = f_s + c` (with `c ≥ 0`), for
/// `A` with sorted fibers `(f̄, ḡ, m)`: a disjunction over the number `p`
/// of intervals inside the window, the functions bounding them, and their
/// offsets from `f_s`. Only equalities and congruences occur.
pub fn slab_formula(
    fbar: &[StandardZLinear],
    gbar: &[StandardZLinear],
    s: usize,
    t: usize,
    c: &Int,
    m: &Int,
    xs: &[Var],
    y: &Term,
) -> Formula {
    let k = fbar.len();
    let h = &fbar[s];
    let mut cases = Vec::new();
    for p in 1..=k {
        for sigma in injections(p, k, 0, s) {
            for tau in injections(p, k, p - 1, t) {
                let mut outside = Vec::new();
                for u in (0..k).filter(|u| !sigma.contains(u)) {
                    for i in int_range(Int::zero(), c + 1) {
                        outside.push(offset_eq(&fbar[u], h, xs, &i).negate());
                    }
                }
                for v in (0..k).filter(|v| !tau.contains(v)) {
                    for i in int_range(Int::zero(), c + 1) {
                        outside.push(offset_eq(&gbar[v], h, xs, &i).negate());
                    }
                }
                let outside = simplify(&Formula::conj(outside));
                if outside == Formula::False {
                    continue;
                }
                'tuple: for tup in tuples(p, c, 0, 2) {
                    let mut parts = vec![outside.clone()];
                    let mut inside = Vec::new();
                    for (q, (i, j)) in tup.iter().enumerate() {
                        for atom in [offset_eq(&fbar[sigma[q]], h, xs, i), offset_eq(&gbar[tau[q]], h, xs, j)] {
                            if atom == Formula::False {
                                continue 'tuple;
                            }
                            parts.push(atom);
                        }
                        for o in int_range(i.clone(), j + 1) {
                            inside.push(point_at(h, xs, y, &o));
                        }
                    }
                    parts.push(Formula::disj(inside));
                    cases.push(Formula::conj(parts));
                }
            }
        }
    }
    simplify(&Formula::conj([
        Formula::cong(y.clone(), Term::zero(), m.clone()),
        Formula::disj(cases),
    ]))
}

/// The multiples of `m` strictly inside the gaps of `A` between
/// `g_t` and `f_s = g_t + c` (with `c > 0`): the dual of
/// [`slab_formula`]. Adding them to `A` merges the intervals ending at
/// `g_t` and starting at `f_s`.
pub fn fill_formula(
    fbar: &[StandardZLinear],
    gbar: &[StandardZLinear],
    s: usize,
    t: usize,
    c: &Int,
    m: &Int,
    xs: &[Var],
    y: &Term,
) -> Formula {
    let k = fbar.len();
    let h = &gbar[t];
    let mut cases = Vec::new();
    for p in 1..=k {
        for tau in injections(p, k, 0, t) {
            for sigma in injections(p, k, p - 1, s) {
                let mut outside = Vec::new();
                for u in (0..k).filter(|u| !sigma.contains(u)) {
                    for i in int_range(Int::from(1), c.clone()) {
                        outside.push(offset_eq(&fbar[u], h, xs, &i).negate());
                    }
                }
                for v in (0..k).filter(|v| !tau.contains(v)) {
                    for i in int_range(Int::from(1), c.clone()) {
                        outside.push(offset_eq(&gbar[v], h, xs, &i).negate());
                    }
                }
                let outside = simplify(&Formula::conj(outside));
                if outside == Formula::False {
                    continue;
                }
                'tuple: for tup in tuples(p, c, 2, 0) {
                    let mut parts = vec![outside.clone()];
                    let mut inside = Vec::new();
                    for (q, (i, j)) in tup.iter().enumerate() {
                        for atom in [offset_eq(&gbar[tau[q]], h, xs, i), offset_eq(&fbar[sigma[q]], h, xs, j)] {
                            if atom == Formula::False {
                                continue 'tuple;
                            }
                            parts.push(atom);
                        }
                        for o in int_range(i + 1, j.clone()) {
                            inside.push(point_at(h, xs, y, &o));
                        }
                    }
                    parts.push(Formula::disj(inside));
                    cases.push(Formula::conj(parts));
                }
            }
        }
    }
    simplify(&Formula::conj([
        Formula::cong(y.clone(), Term::zero(), m.clone()),
        Formula::disj(cases),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offset_tuples() {
        // One interval covering the whole window.
        assert_eq!(tuples(1, &Int::from(3), 0, 2).len(), 1);
        // Two intervals in [0,4] separated by a gap of at least 2.
        let two = tuples(2, &Int::from(4), 0, 2);
        assert!(two.iter().all(|t| t[0].0 == Int::zero() && t[1].1 == Int::from(4)));
        assert!(two.iter().all(|t| &t[0].1 + 2 <= t[1].0));
        assert_eq!(two.len(), 6);
    }

    #[test]
    fn pinned_injections() {
        let inj = injections(2, 3, 0, 1);
        assert_eq!(inj, vec![vec![1, 0], vec![1, 2]]);
        assert_eq!(injections(1, 3, 0, 2), vec![vec![2]]);
    }
}
