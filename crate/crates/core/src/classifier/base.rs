//! One-dimensional sets: eventually periodic on both rays.

use super::{TrackedSet, Verdict, WITNESS_VAR};
use crate::arith::{int_range, lcm, modulo, Int};
use crate::error::{Error, Result};
use crate::formula::{Formula, Term, Var};
use crate::oracle::eval_qf;
use crate::qe::simplify;
use num_traits::{One, Signed, Zero};

/// Residues of the two rays and the threshold beyond which membership is
/// periodic.
struct Rays {
    m: Int,
    k: Int,
    right: Vec<bool>,
    left: Vec<bool>,
}

fn rays(f: &Formula, v: &Var) -> Result<Rays> {
    let mut m = Int::one();
    let mut k = Int::zero();
    f.visit(&mut |g| match g {
        Formula::Cong(_, md) => m = lcm(&m, md),
        Formula::Le(t) | Formula::Lt(t) | Formula::Eq(t) => {
            let c = t.constant_part().abs();
            if c > k {
                k = c;
            }
        }
        _ => {}
    });
    k += 1;
    let member = |x: &Int| eval_qf(f, &|n| (n == &**v).then(|| x.clone()));
    let mut right = Vec::new();
    let mut left = Vec::new();
    for r in int_range(Int::zero(), m.clone()) {
        let p = &k + modulo(&(&r - &k), &m);
        right.push(member(&p)?);
        let q = -&k - modulo(&(-&k - &r), &m);
        left.push(member(&q)?);
    }
    Ok(Rays { m, k, right, left })
}

/// Compact form of a quantifier-free formula in one variable: per residue
/// class modulo the period read off the formula, the maximal runs of
/// members, each written as at most two bounds and a congruence.
pub fn compact_line(f: &Formula, v: &Var) -> Result<Formula> {
    if f.free_vars().iter().any(|w| w != v) {
        return Err(Error::FreeVariables(format!("{v} expected")));
    }
    let rays = rays(f, v)?;
    let m = &rays.m;
    let vt = Term::var(v);
    let member = |x: &Int| eval_qf(f, &|n| (n == &**v).then(|| x.clone()));
    let mut runs = Vec::new();
    for r in int_range(Int::zero(), m.clone()) {
        let i = usize::try_from(&r).expect("residue fits");
        // Class points from just below -k to just above k.
        let lo = -&rays.k - modulo(&(-&rays.k - &r), m);
        let hi = &rays.k + modulo(&(&r - &rays.k), m);
        let mut start: Option<Option<Int>> = rays.left[i].then_some(None);
        let mut x = lo.clone();
        let mut prev = &lo - m;
        while x <= hi {
            let inside = if x == lo { rays.left[i] } else if x == hi { rays.right[i] } else { member(&x)? };
            match (&start, inside) {
                (None, true) => start = Some(Some(x.clone())),
                (Some(a), false) => {
                    runs.push(run(&vt, a.clone(), Some(prev.clone()), &r, m));
                    start = None;
                }
                _ => {}
            }
            prev = x.clone();
            x += m;
        }
        if let Some(a) = start {
            runs.push(run(&vt, a, None, &r, m));
        }
    }
    Ok(simplify(&Formula::disj(runs)))
}

fn run(x: &Term, from: Option<Int>, to: Option<Int>, r: &Int, m: &Int) -> Formula {
    if let (Some(a), Some(b)) = (&from, &to) {
        if a == b {
            return Formula::eq(x.clone(), Term::constant(a.clone()));
        }
    }
    let mut parts = Vec::new();
    if let Some(a) = from {
        parts.push(Formula::le(Term::constant(a), x.clone()));
    }
    if let Some(b) = to {
        parts.push(Formula::le(x.clone(), Term::constant(b)));
    }
    if !m.is_one() {
        parts.push(Formula::cong(x.clone(), Term::constant(r.clone()), m.clone()));
    }
    Formula::conj(parts)
}

/// Classifies a subset of `Z`.
///
/// Group side: the common residue classes, corrected by finitely many
/// equalities. Ordering side: `x ↦ A(d + m·x)` for a residue `d` that
/// occurs on the right ray only (or `A(d − m·x)` for one on the left ray
/// only), corrected at the finitely many `x` where it disagrees with `N`.
pub fn classify_1d(s: &TrackedSet) -> Result<Verdict> {
    if s.arity() != 1 {
        return Err(Error::Invalid(format!("one-dimensional case called with arity {}", s.arity())));
    }
    if !s.semantics().is_quantifier_free() {
        return Err(Error::Quantified);
    }
    let v = s.vars()[0].clone();
    let rays = rays(s.semantics(), &v)?;
    let member = |x: &Int| eval_qf(s.semantics(), &|n| (n == &*v).then(|| x.clone()));
    let idx = |x: &Int| {
        let r = modulo(x, &rays.m);
        usize::try_from(r).expect("residue fits")
    };
    if rays.right == rays.left {
        let vt = Term::var(&v);
        let classes: Vec<Formula> = (0..rays.right.len())
            .filter(|&r| rays.right[r])
            .map(|r| Formula::cong(vt.clone(), Term::constant(r as i64), rays.m.clone()))
            .collect();
        let mut removed = Vec::new();
        let mut added = Vec::new();
        for x in int_range(-&rays.k, &rays.k + 1) {
            let predicted = rays.right[idx(&x)];
            let actual = member(&x)?;
            let at = Formula::eq(vt.clone(), Term::constant(x.clone()));
            if predicted && !actual {
                removed.push(at.negate());
            } else if actual && !predicted {
                added.push(at);
            }
        }
        let periodic = Formula::conj([Formula::disj(classes)].into_iter().chain(removed));
        return Ok(Verdict::GroupDefinable(simplify(&Formula::disj(
            [periodic].into_iter().chain(added),
        ))));
    }
    let m = rays.m.clone();
    let x = Term::var(WITNESS_VAR);
    let right_only = (0..rays.right.len()).find(|&r| rays.right[r] && !rays.left[r]);
    let (d, sign) = match right_only {
        Some(d) => (Int::from(d), Int::one()),
        None => {
            let d = (0..rays.left.len())
                .find(|&r| rays.left[r] && !rays.right[r])
                .ok_or_else(|| Error::Internal("ray residues differ without a witness residue".into()))?;
            (Int::from(d), -Int::one())
        }
    };
    let arg = |t: Term| Term::constant(d.clone()) + t * &(&m * &sign);
    // Beyond |d + m·x| > k the periodic pattern already agrees with N.
    let reach = (&rays.k + &m + &d) / &m + 1;
    let mut removed = Vec::new();
    let mut added = Vec::new();
    for x0 in int_range(-&reach, &reach + 1) {
        let actual = member(&(&d + &x0 * &m * &sign))?;
        let want = !x0.is_negative();
        let at = Formula::eq(x.clone(), Term::constant(x0.clone()));
        if actual && !want {
            removed.push(at.negate());
        } else if want && !actual {
            added.push(at);
        }
    }
    let core = Formula::conj([s.def_at(&[arg(x.clone())])].into_iter().chain(removed));
    Ok(Verdict::DefinesOrdering(Formula::disj([core].into_iter().chain(added))))
}
