//! Sets definable in `(Z,+,0)`: lattices, cosets, quasi-cosets and finite
//! unions of quasi-cosets, with the Boolean operations needed to turn any
//! Boolean combination of equations and congruences into that normal form.
//!
//! A quasi-coset is a coset `C` minus a set of strictly smaller rank
//! contained in `C`. When an intersection would leave a removed part whose
//! rank equals that of the surrounding coset, the difference is computed in
//! coordinates of the coset (`Z^e`, `e` its rank) and mapped back, so every
//! stored quasi-coset satisfies the rank condition.

use crate::arith::{floor_div, hnf, int_from_json, int_json, snf, solve_diophantine, Int, IntMatrix};
use crate::error::{Error, Result};
use crate::formula::{Formula, Term, Var};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

/// Upper limit on residues enumerated for one full-rank complement.
const MAX_INDEX: u64 = 1 << 16;

/// Subgroup of `Z^n` given by a basis in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    /// Lattice generated by arbitrary integer vectors of length `dim`.
    pub fn generated(dim: usize, gens: Vec<Vec<Int>>) -> Self {
        let m = IntMatrix::from_rows(gens, dim);
        let (h, _) = hnf(&m);
        Lattice {
            dim,
            basis: h.without_zero_rows(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::zeros(0, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    fn pivot(&self, i: usize) -> usize {
        (0..self.dim)
            .find(|&j| !self.basis[(i, j)].is_zero())
            .expect("HNF basis has no zero rows")
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[Int]) -> Vec<Int> {
        let mut v = v.to_vec();
        for i in 0..self.rank() {
            let p = self.pivot(i);
            let q = floor_div(&v[p], &self.basis[(i, p)]);
            if !q.is_zero() {
                for (j, x) in v.iter_mut().enumerate() {
                    *x -= &q * &self.basis[(i, j)];
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        (0..other.rank()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            let p = self.pivot(i);
            let piv = &self.basis[(i, p)];
            if !(&rest[p] % piv).is_zero() {
                return None;
            }
            let a = &rest[p] / piv;
            for (j, x) in rest.iter_mut().enumerate() {
                *x -= &a * &self.basis[(i, j)];
            }
            coords.push(a);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    /// `Σ a_i·b_i` over the basis rows.
    pub fn combine(&self, coords: &[Int]) -> Vec<Int> {
        self.basis.left_apply(coords)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        match intersect_affine(&vec![Int::zero(); self.dim], self, &vec![Int::zero(); self.dim], other) {
            Some((_, l)) => l,
            None => unreachable!("lattices always share the origin"),
        }
    }

    /// `|Z^n / L|` for a full-rank lattice.
    pub fn index(&self) -> Option<Int> {
        (self.rank() == self.dim).then(|| {
            (0..self.dim)
                .map(|i| self.basis[(i, i)].clone())
                .product()
        })
    }
}

/// Intersection of `a + L1` and `b + L2`: a common point and `L1 ∩ L2`.
fn intersect_affine(a: &[Int], l1: &Lattice, b: &[Int], l2: &Lattice) -> Option<(Vec<Int>, Lattice)> {
    let n = l1.dim;
    let (k1, k2) = (l1.rank(), l2.rank());
    // Columns: basis rows of L1, then negated basis rows of L2.
    let mut m = IntMatrix::zeros(n, k1 + k2);
    for j in 0..n {
        for i in 0..k1 {
            m[(j, i)] = l1.basis[(i, j)].clone();
        }
        for i in 0..k2 {
            m[(j, k1 + i)] = -&l2.basis[(i, j)];
        }
    }
    let rhs: Vec<Int> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let (sol, kernel) = solve_diophantine(&m, &rhs)?;
    let shift = l1.combine(&sol[..k1]);
    let point: Vec<Int> = a.iter().zip(&shift).map(|(x, y)| x + y).collect();
    let gens = (0..kernel.rows())
        .map(|r| l1.combine(&kernel.row(r)[..k1]))
        .collect();
    Some((point, Lattice::generated(n, gens)))
}

/// `c + L` with `c` reduced canonically modulo `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coset {
    offset: Vec<Int>,
    lattice: Lattice,
}

impl Coset {
    pub fn new(offset: Vec<Int>, lattice: Lattice) -> Self {
        assert_eq!(offset.len(), lattice.dim, "offset dimension mismatch");
        let offset = lattice.reduce(&offset);
        Coset { offset, lattice }
    }

    pub fn full(dim: usize) -> Self {
        Coset::new(vec![Int::zero(); dim], Lattice::full(dim))
    }

    pub fn point(p: Vec<Int>) -> Self {
        let n = p.len();
        Coset::new(p, Lattice::zero(n))
    }

    pub fn offset(&self) -> &[Int] {
        &self.offset
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        let d: Vec<Int> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.lattice.contains(&d)
    }

    pub fn contains_coset(&self, other: &Coset) -> bool {
        self.lattice.contains_lattice(&other.lattice) && self.contains(&other.offset)
    }

    pub fn intersect(&self, other: &Coset) -> Option<Coset> {
        let (p, l) = intersect_affine(&self.offset, &self.lattice, &other.offset, &other.lattice)?;
        Some(Coset::new(p, l))
    }

    /// `Φ⁻¹`: coordinates of a point of the coset.
    fn to_coords(&self, x: &[Int]) -> Option<Vec<Int>> {
        let d: Vec<Int> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.lattice.coordinates(&d)
    }

    /// `Φ`: point of the coset with the given coordinates.
    fn from_coords(&self, a: &[Int]) -> Vec<Int> {
        let v = self.lattice.combine(a);
        v.iter().zip(&self.offset).map(|(x, y)| x + y).collect()
    }

    /// Formula over `vars` defining the coset, built from the Smith form of
    /// the basis: `(x̄ - c̄)·V` has entries divisible by `d_i` in the first
    /// `k` positions and zero afterwards.
    pub fn to_formula(&self, vars: &[Var]) -> Formula {
        let n = self.dim();
        let k = self.rank();
        let (d, _, v) = snf(&self.lattice.basis);
        let mut parts = Vec::new();
        for i in 0..n {
            let mut t = Term::zero();
            for (j, x) in vars.iter().enumerate() {
                t.add_coeff(x, &v[(j, i)]);
            }
            let shift: Int = (0..n).map(|j| &self.offset[j] * &v[(j, i)]).sum();
            t.add_constant(&-shift);
            if i < k {
                let di = d[(i, i)].abs();
                if !di.is_one() {
                    parts.push(Formula::Cong(t, di));
                }
            } else {
                parts.push(Formula::Eq(t));
            }
        }
        Formula::conj(parts)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "offset": self.offset.iter().map(int_json).collect::<Vec<_>>(),
            "basis": self.lattice.basis.to_rows().iter()
                .map(|r| r.iter().map(int_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Invalid("malformed coset".into());
        let offset = int_vec(v.get("offset").ok_or_else(bad)?).ok_or_else(bad)?;
        let rows = v
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|r| int_vec(r).filter(|r| r.len() == offset.len()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?;
        Ok(Coset::new(offset.clone(), Lattice::generated(offset.len(), rows)))
    }
}

fn int_vec(v: &Value) -> Option<Vec<Int>> {
    v.as_array()?.iter().map(int_from_json).collect()
}

/// `C \ Z` with `Z ⊆ C` and `rank(Z) < rank(C)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiCoset {
    coset: Coset,
    removed: GroupSet,
}

impl QuasiCoset {
    pub fn coset(&self) -> &Coset {
        &self.coset
    }

    pub fn removed(&self) -> &GroupSet {
        &self.removed
    }

    pub fn rank(&self) -> usize {
        self.coset.rank()
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.coset.contains(x) && !self.removed.contains(x)
    }

    fn plain(coset: Coset) -> Self {
        let dim = coset.dim();
        QuasiCoset {
            coset,
            removed: GroupSet::empty(dim),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"coset": self.coset.to_json(), "removed": self.removed.to_json()})
    }
}

/// Finite union of quasi-cosets in `Z^dim`; overlaps are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSet {
    dim: usize,
    parts: Vec<QuasiCoset>,
}

impl GroupSet {
    pub fn empty(dim: usize) -> Self {
        GroupSet { dim, parts: vec![] }
    }

    pub fn full(dim: usize) -> Self {
        Self::from_coset(Coset::full(dim))
    }

    pub fn from_coset(c: Coset) -> Self {
        GroupSet {
            dim: c.dim(),
            parts: vec![QuasiCoset::plain(c)],
        }
    }

    /// `C \ Z`, rectified into quasi-cosets when `Z` is not of lower rank.
    pub fn quasi_coset(c: Coset, removed: &GroupSet) -> Self {
        diff_coset(&c, removed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[QuasiCoset] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Least `k` such that the set lies in finitely many cosets of rank
    /// `<= k`; `-1` for the empty set.
    pub fn rank(&self) -> i64 {
        self.parts.iter().map(|p| p.rank() as i64).max().unwrap_or(-1)
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &GroupSet) -> GroupSet {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        GroupSet { dim: self.dim, parts }.tidy()
    }

    pub fn intersect(&self, other: &GroupSet) -> GroupSet {
        let mut parts = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                parts.extend(intersect_qc(a, b).parts);
            }
        }
        GroupSet { dim: self.dim, parts }.tidy()
    }

    pub fn complement(&self) -> GroupSet {
        let mut acc = GroupSet::full(self.dim);
        for p in &self.parts {
            let not_p = complement_coset(&p.coset).union(&p.removed);
            acc = acc.intersect(&not_p);
            if acc.is_empty() {
                break;
            }
        }
        acc
    }

    pub fn difference(&self, other: &GroupSet) -> GroupSet {
        self.intersect(&other.complement())
    }

    /// Drops duplicates and parts contained in a plain coset of the union.
    fn tidy(mut self) -> GroupSet {
        let mut kept: Vec<QuasiCoset> = Vec::new();
        for p in self.parts.drain(..) {
            if kept.contains(&p) {
                continue;
            }
            kept.push(p);
        }
        let covered = |i: usize, kept: &[QuasiCoset]| {
            kept.iter().enumerate().any(|(j, q)| {
                j != i
                    && q.removed.is_empty()
                    && q.coset.contains_coset(&kept[i].coset)
            })
        };
        let mut i = 0;
        while i < kept.len() {
            if covered(i, &kept) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        GroupSet { dim: self.dim, parts: kept }
    }

    /// Order-free formula over `vars` with the same members.
    pub fn to_formula(&self, vars: &[Var]) -> Formula {
        Formula::disj(self.parts.iter().map(|p| {
            let c = p.coset.to_formula(vars);
            if p.removed.is_empty() {
                c
            } else {
                Formula::conj([c, p.removed.to_formula(vars).negate()])
            }
        }))
    }

    /// Image under `Φ⁻¹` of a subset of the coset `c`, as a set in `Z^e`.
    fn pull_back(&self, c: &Coset) -> GroupSet {
        let e = c.rank();
        let parts = self
            .parts
            .iter()
            .map(|p| {
                let off = c.to_coords(&p.coset.offset).expect("part inside coset");
                let gens = (0..p.coset.rank())
                    .map(|i| {
                        c.lattice
                            .coordinates(p.coset.lattice.basis.row(i))
                            .expect("sublattice")
                    })
                    .collect();
                QuasiCoset {
                    coset: Coset::new(off, Lattice::generated(e, gens)),
                    removed: p.removed.pull_back(c),
                }
            })
            .collect();
        GroupSet { dim: e, parts }
    }

    /// Image under `Φ` of a subset of `Z^e`, landing in the coset `c`.
    fn push_forward(&self, c: &Coset) -> GroupSet {
        let parts = self
            .parts
            .iter()
            .map(|p| {
                let off = c.from_coords(&p.coset.offset);
                let gens = (0..p.coset.rank())
                    .map(|i| c.lattice.combine(p.coset.lattice.basis.row(i)))
                    .collect();
                QuasiCoset {
                    coset: Coset::new(off, Lattice::generated(c.dim(), gens)),
                    removed: p.removed.push_forward(c),
                }
            })
            .collect();
        GroupSet { dim: c.dim(), parts }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.parts.iter().map(QuasiCoset::to_json).collect())
    }

    pub fn from_json(dim: usize, v: &Value) -> Result<Self> {
        let bad = || Error::Invalid("malformed group set".into());
        let mut acc = GroupSet::empty(dim);
        for p in v.as_array().ok_or_else(bad)? {
            let c = Coset::from_json(p.get("coset").ok_or_else(bad)?)?;
            if c.dim() != dim {
                return Err(bad());
            }
            let removed = GroupSet::from_json(dim, p.get("removed").ok_or_else(bad)?)?;
            acc = acc.union(&GroupSet::quasi_coset(c, &removed));
        }
        Ok(acc)
    }
}

fn intersect_qc(a: &QuasiCoset, b: &QuasiCoset) -> GroupSet {
    match a.coset.intersect(&b.coset) {
        None => GroupSet::empty(a.coset.dim()),
        Some(d) => diff_coset(&d, &a.removed.union(&b.removed)),
    }
}

/// `D \ R` for a coset `D` and any group set `R`.
fn diff_coset(d: &Coset, r: &GroupSet) -> GroupSet {
    let inside = r.intersect(&GroupSet::from_coset(d.clone()));
    if inside.is_empty() {
        return GroupSet::from_coset(d.clone());
    }
    if inside.rank() < d.rank() as i64 {
        return GroupSet {
            dim: d.dim(),
            parts: vec![QuasiCoset {
                coset: d.clone(),
                removed: inside,
            }],
        };
    }
    // Same rank: work in coordinates of D, where D is all of Z^e.
    let local = inside.pull_back(d).complement();
    local.push_forward(d).tidy()
}

/// `Z^n \ C`.
fn complement_coset(c: &Coset) -> GroupSet {
    let n = c.dim();
    if c.rank() < n {
        return GroupSet {
            dim: n,
            parts: vec![QuasiCoset {
                coset: Coset::full(n),
                removed: GroupSet::from_coset(c.clone()),
            }],
        };
    }
    let diag: Vec<Int> = (0..n).map(|i| c.lattice.basis[(i, i)].clone()).collect();
    let index = c.lattice.index().and_then(|i| i.to_u64()).unwrap_or(u64::MAX);
    assert!(index <= MAX_INDEX, "coset index {index} too large to enumerate");
    let mut parts = Vec::new();
    let mut r = vec![Int::zero(); n];
    'outer: loop {
        if r != c.offset {
            parts.push(QuasiCoset::plain(Coset::new(r.clone(), c.lattice.clone())));
        }
        for i in (0..n).rev() {
            r[i] += 1;
            if r[i] < diag[i] {
                continue 'outer;
            }
            r[i] = Int::zero();
        }
        break;
    }
    GroupSet { dim: n, parts }
}

/// Coordinates of `x` in the coset `c̄ + span(alpha)` (`Φ⁻¹_{α,c̄}`).
pub fn phi_apply(alpha: &IntMatrix, c: &[Int], x: &[Int]) -> Result<Vec<Int>> {
    let d: Vec<Int> = x.iter().zip(c).map(|(a, b)| a - b).collect();
    match solve_diophantine(&alpha.transpose(), &d) {
        Some((a, kernel)) if kernel.rows() == 0 => Ok(a),
        Some(_) => Err(Error::Invalid("basis rows are linearly dependent".into())),
        None => Err(Error::Domain("point outside the coset".into())),
    }
}

/// `c̄ + Σ a_t·alpha_t`.
pub fn phi_invert(alpha: &IntMatrix, c: &[Int], a: &[Int]) -> Vec<Int> {
    alpha.left_apply(a).iter().zip(c).map(|(x, y)| x + y).collect()
}

/// Group set over `vars` with the same members as an order-free
/// quantifier-free formula built from equations and congruences.
pub fn from_boolean_combination(f: &Formula, vars: &[Var]) -> Result<GroupSet> {
    let n = vars.len();
    for v in f.free_vars() {
        if !vars.contains(&v) {
            return Err(Error::Invalid(format!("variable {v} not in the variable list")));
        }
    }
    let coeffs = |t: &Term| -> Vec<Int> { vars.iter().map(|v| t.coeff(v)).collect() };
    Ok(match f {
        Formula::True => GroupSet::full(n),
        Formula::False => GroupSet::empty(n),
        Formula::Le(_) | Formula::Lt(_) => return Err(Error::OrderAtom(f.to_string())),
        Formula::Eq(t) => {
            let a = IntMatrix::from_rows(vec![coeffs(t)], n);
            match solve_diophantine(&a, &[-t.constant_part()]) {
                None => GroupSet::empty(n),
                Some((x0, k)) => GroupSet::from_coset(Coset::new(x0, Lattice::generated(n, k.to_rows()))),
            }
        }
        Formula::Cong(t, m) => {
            let mut row = coeffs(t);
            row.push(m.clone());
            let a = IntMatrix::from_rows(vec![row], n + 1);
            match solve_diophantine(&a, &[-t.constant_part()]) {
                None => GroupSet::empty(n),
                Some((x0, k)) => {
                    let gens = k.to_rows().into_iter().map(|r| r[..n].to_vec()).collect();
                    GroupSet::from_coset(Coset::new(x0[..n].to_vec(), Lattice::generated(n, gens)))
                }
            }
        }
        Formula::Not(a) => from_boolean_combination(a, vars)?.complement(),
        Formula::And(xs) => {
            let mut acc = GroupSet::full(n);
            for x in xs {
                acc = acc.intersect(&from_boolean_combination(x, vars)?);
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        Formula::Or(xs) => {
            let mut acc = GroupSet::empty(n);
            for x in xs {
                acc = acc.union(&from_boolean_combination(x, vars)?);
            }
            acc
        }
        Formula::Implies(a, b) => {
            let a = from_boolean_combination(a, vars)?;
            a.complement().union(&from_boolean_combination(b, vars)?)
        }
        Formula::Iff(a, b) => {
            let a = from_boolean_combination(a, vars)?;
            let b = from_boolean_combination(b, vars)?;
            a.intersect(&b).union(&a.complement().intersect(&b.complement()))
        }
        Formula::Pred(p, _) => return Err(Error::PredicatePresent(p.to_string())),
        Formula::Exists(..) | Formula::Forall(..) => return Err(Error::Quantified),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, var};
    use crate::oracle::eval_qf;

    fn vs(names: &[&str]) -> Vec<Var> {
        names.iter().map(|n| var(n)).collect()
    }

    fn iv(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    fn agrees(f: &Formula, s: &GroupSet, vars: &[Var], r: i64) {
        let n = vars.len();
        let mut p = vec![-r; n];
        loop {
            let x = iv(&p);
            let want = eval_qf(f, &|name| vars.iter().position(|v| &**v == name).map(|i| x[i].clone())).unwrap();
            assert_eq!(s.contains(&x), want, "{f} at {p:?}");
            let mut i = 0;
            loop {
                if i == n {
                    return;
                }
                p[i] += 1;
                if p[i] <= r {
                    break;
                }
                p[i] = -r;
                i += 1;
            }
        }
    }

    #[test]
    fn ranks() {
        let v = vs(&["x", "y"]);
        assert_eq!(GroupSet::empty(2).rank(), -1);
        let line = from_boolean_combination(&parse("y = 0").unwrap(), &v).unwrap();
        assert_eq!(line.rank(), 1);
        let punctured = from_boolean_combination(&parse("!(x = 0 & y = 0)").unwrap(), &v).unwrap();
        assert_eq!(punctured.rank(), 2);
        agrees(&parse("!(x = 0 & y = 0)").unwrap(), &punctured, &v, 4);
    }

    #[test]
    fn boolean_combination_examples() {
        let v = vs(&["x", "y"]);
        let f = parse("x = 0 mod 2 & y = x").unwrap();
        let s = from_boolean_combination(&f, &v).unwrap();
        assert_eq!(s.parts().len(), 1);
        assert_eq!(s.parts()[0].coset(), &Coset::new(iv(&[0, 0]), Lattice::generated(2, vec![iv(&[2, 2])])));
        assert!(s.parts()[0].removed().is_empty());
        agrees(&f, &s, &v, 10);
        let x = vs(&["x"]);
        let s = from_boolean_combination(&parse("!(x = 0)").unwrap(), &x).unwrap();
        assert_eq!(s.rank(), 1);
        agrees(&parse("x != 0").unwrap(), &s, &x, 10);
        let s = from_boolean_combination(&parse("x = 0 & !(x = 0)").unwrap(), &x).unwrap();
        assert!(s.is_empty());
        assert!(matches!(from_boolean_combination(&parse("x <= 0").unwrap(), &x), Err(Error::OrderAtom(_))));
    }

    #[test]
    fn set_algebra_examples() {
        let v = vs(&["x", "y"]);
        assert_eq!(GroupSet::empty(2).complement().rank(), 2);
        let a = from_boolean_combination(&parse("x = 0 mod 2").unwrap(), &v).unwrap();
        let b = from_boolean_combination(&parse("y = 0 mod 3").unwrap(), &v).unwrap();
        let ab = a.intersect(&b);
        assert_eq!(ab.parts().len(), 1);
        assert_eq!(ab.parts()[0].coset().lattice(), &Lattice::generated(2, vec![iv(&[2, 0]), iv(&[0, 3])]));
        let x = vs(&["x"]);
        let even = from_boolean_combination(&parse("x = 0 mod 2").unwrap(), &x).unwrap();
        let odd = even.complement();
        assert_eq!(odd.parts().len(), 1);
        assert_eq!(odd.parts()[0].coset(), &Coset::new(iv(&[1]), Lattice::generated(1, vec![iv(&[2])])));
    }

    #[test]
    fn rectification_when_ranks_collide() {
        let v = vs(&["x", "y"]);
        // The diagonal minus the even diagonal points: removed part has the
        // same rank as the coset and must be rectified.
        let f = parse("y = x & !(x = 0 mod 2 & y = x)").unwrap();
        let s = from_boolean_combination(&f, &v).unwrap();
        for p in s.parts() {
            assert!(p.removed().rank() < p.rank() as i64);
        }
        agrees(&f, &s, &v, 8);
    }

    #[test]
    fn to_formula_examples() {
        let v = vs(&["x", "y"]);
        let c = Coset::new(iv(&[1, 0]), Lattice::generated(2, vec![iv(&[2, 0]), iv(&[0, 1])]));
        let f = GroupSet::from_coset(c).to_formula(&v);
        assert!(!f.has_order_atoms());
        assert_eq!(crate::qe::simplify(&f), parse("x + 1 = 0 mod 2").unwrap());
        assert_eq!(GroupSet::empty(2).to_formula(&v), Formula::False);
        assert_eq!(GroupSet::full(2).to_formula(&v), Formula::True);
        let g = parse("(x = 1 mod 3 | y = 2*x) & !(x = 4 & y = 8)").unwrap();
        let s = from_boolean_combination(&g, &v).unwrap();
        let back = s.to_formula(&v);
        agrees(&back, &s, &v, 9);
        agrees(&g, &s, &v, 9);
    }

    #[test]
    fn phi_examples() {
        let alpha = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        let c = iv(&[2, 0]);
        assert_eq!(phi_apply(&alpha, &c, &iv(&[3, 2])).unwrap(), iv(&[1, 1]));
        assert_eq!(phi_apply(&alpha, &c, &c).unwrap(), iv(&[0, 0]));
        assert_eq!(phi_apply(&alpha, &c, &iv(&[3, 1])).unwrap(), iv(&[1, 0]));
        assert_eq!(phi_invert(&alpha, &c, &iv(&[1, 1])), iv(&[3, 2]));
        let thin = IntMatrix::from_i64(&[&[2, 0]]);
        assert!(matches!(phi_apply(&thin, &c, &iv(&[3, 0])), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let v = vs(&["x", "y"]);
        let s = from_boolean_combination(&parse("x = 1 mod 2 & !(y = 0)").unwrap(), &v).unwrap();
        let back = GroupSet::from_json(2, &s.to_json()).unwrap();
        assert_eq!(back, s);
    }
}
