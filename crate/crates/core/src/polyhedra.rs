//! Affine functionals, half-spaces, planks and polyhedra over `Q^n`, with
//! exact decisions about the inradius.
//!
//! Balls are Euclidean. Shifting each constraint `a·x <= b` inward by
//! `r·‖a‖₁` instead of `r·‖a‖₂` keeps everything rational: the resulting
//! optimum `lo` satisfies `lo <= r(P) <= √n·lo`, and `√n` is replaced by a
//! rational upper bound. Finiteness of the inradius is decided exactly.

use crate::arith::{feasible_point, lp_status, rat_json, LinearSystem, LpStatus, Rat, Relation};
use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// `x ↦ u + a·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub a: Vec<Rat>,
    pub u: Rat,
}

impl AffineFunctional {
    pub fn new(a: Vec<Rat>, u: Rat) -> Self {
        AffineFunctional { a, u }
    }

    pub fn linear(a: Vec<Rat>) -> Self {
        AffineFunctional { a, u: Rat::zero() }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn is_constant(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn is_linear(&self) -> bool {
        self.u.is_zero()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.a.iter().zip(x).map(|(a, v)| a * v).sum::<Rat>() + &self.u
    }

    pub fn l1_norm(&self) -> Rat {
        self.a.iter().map(|v| v.abs()).sum()
    }

    pub fn l2_norm_squared(&self) -> Rat {
        self.a.iter().map(|v| v * v).sum()
    }

    /// `x ↦ f(x + t)`.
    pub fn translate(&self, t: &[Rat]) -> Self {
        AffineFunctional::new(self.a.clone(), self.eval(t))
    }

    pub fn to_json(&self) -> Value {
        json!({"a": self.a.iter().map(rat_json).collect::<Vec<_>>(), "u": rat_json(&self.u)})
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `{f > 0}` / `{f >= 0}` for `Plus`, `{f < 0}` / `{f <= 0}` for `Minus`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub f: AffineFunctional,
    pub sign: Sign,
    pub closed: bool,
}

impl HalfSpace {
    pub fn new(f: AffineFunctional, sign: Sign, closed: bool) -> Result<Self> {
        if f.is_constant() {
            return Err(Error::Invalid("half-space of a constant functional".into()));
        }
        Ok(HalfSpace { f, sign, closed })
    }

    /// `(g, b)` with the half-space equal to `g·x <= b` (or `<`).
    fn as_upper(&self) -> (Vec<Rat>, Rat) {
        match self.sign {
            Sign::Minus => (self.f.a.clone(), -&self.f.u),
            Sign::Plus => (self.f.a.iter().map(|v| -v).collect(), self.f.u.clone()),
        }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let v = self.f.eval(x);
        match (self.sign, self.closed) {
            (Sign::Plus, true) => !v.is_negative(),
            (Sign::Plus, false) => v.is_positive(),
            (Sign::Minus, true) => !v.is_positive(),
            (Sign::Minus, false) => v.is_negative(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "f": self.f.to_json(),
            "sign": match self.sign { Sign::Plus => "+", Sign::Minus => "-" },
            "closed": self.closed,
        })
    }
}

/// Finite intersection of half-spaces; no half-spaces means `Q^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub dim: usize,
    pub halfspaces: Vec<HalfSpace>,
}

/// What is known about `r(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inradius {
    Empty,
    Infinite,
    Bounds { lo: Rat, hi: Rat },
}

impl Inradius {
    pub fn to_json(&self) -> Value {
        match self {
            Inradius::Empty => json!({"inradius": "empty"}),
            Inradius::Infinite => json!({"inradius": "infinite"}),
            Inradius::Bounds { lo, hi } => json!({"inradius": "finite", "lo": rat_json(lo), "hi": rat_json(hi)}),
        }
    }
}

/// Rational `s >= √n` with `s <= n`.
pub fn sqrt_upper(n: usize) -> Rat {
    match n {
        0 | 1 => Rat::one(),
        2 => Rat::new(3.into(), 2.into()),
        3 => Rat::new(7.into(), 4.into()),
        4 => Rat::from_integer(2.into()),
        _ => {
            let mut s: u64 = 1;
            while s * s < n as u64 {
                s += 1;
            }
            Rat::from_integer(s.into())
        }
    }
}

impl Polyhedron {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if halfspaces.iter().any(|h| h.f.dim() != dim) {
            return Err(Error::Invalid("half-space dimension mismatch".into()));
        }
        Ok(Polyhedron { dim, halfspaces })
    }

    pub fn whole(dim: usize) -> Self {
        Polyhedron { dim, halfspaces: vec![] }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        let mut hs = self.halfspaces.clone();
        hs.extend(other.halfspaces.iter().cloned());
        Polyhedron { dim: self.dim, halfspaces: hs }
    }

    /// `{x : x - t ∈ P}`.
    pub fn translate(&self, t: &[Rat]) -> Polyhedron {
        let neg: Vec<Rat> = t.iter().map(|v| -v).collect();
        Polyhedron {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace {
                    f: h.f.translate(&neg),
                    ..h.clone()
                })
                .collect(),
        }
    }

    /// `{x : M·x ∈ P}` for a square matrix `M` given by rows.
    pub fn pull_back(&self, m: &[Vec<Rat>]) -> Polyhedron {
        Polyhedron {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| {
                    let a = (0..self.dim)
                        .map(|j| (0..self.dim).map(|i| &h.f.a[i] * &m[i][j]).sum())
                        .collect();
                    HalfSpace {
                        f: AffineFunctional::new(a, h.f.u.clone()),
                        ..h.clone()
                    }
                })
                .collect(),
        }
    }

    fn system(&self) -> LinearSystem {
        let mut s = LinearSystem::new(self.dim);
        for h in &self.halfspaces {
            let (g, b) = h.as_upper();
            s.push(g, if h.closed { Relation::Le } else { Relation::Lt }, b);
        }
        s
    }

    /// Exact emptiness, strict inequalities honored.
    pub fn is_empty(&self) -> bool {
        feasible_point(&self.system()).is_none()
    }

    pub fn point(&self) -> Option<Vec<Rat>> {
        feasible_point(&self.system())
    }

    /// Closed system in `(x, r)` with each constraint shifted inward by
    /// `r·w·‖a‖₁`, plus `r >= 0`.
    fn shifted(&self, weight: &Rat) -> LinearSystem {
        let mut s = LinearSystem::new(self.dim + 1);
        for h in &self.halfspaces {
            let (mut g, b) = h.as_upper();
            g.push(weight * h.f.l1_norm());
            s.push(g, Relation::Le, b);
        }
        let mut nonneg = vec![Rat::zero(); self.dim + 1];
        nonneg[self.dim] = -Rat::one();
        s.push(nonneg, Relation::Le, Rat::zero());
        s
    }

    fn radius_objective(&self) -> Vec<Rat> {
        let mut obj = vec![Rat::zero(); self.dim + 1];
        obj[self.dim] = Rat::one();
        obj
    }

    /// Whether `P` contains balls of every radius. Strict half-spaces are
    /// treated as closed, which does not affect finiteness.
    pub fn inradius_infinite(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        matches!(
            lp_status(&self.shifted(&Rat::one()), &self.radius_objective()),
            LpStatus::Unbounded { .. }
        )
    }

    pub fn inradius(&self) -> Inradius {
        if self.is_empty() {
            return Inradius::Empty;
        }
        match lp_status(&self.shifted(&Rat::one()), &self.radius_objective()) {
            LpStatus::Unbounded { .. } => Inradius::Infinite,
            LpStatus::Bounded { optimum, .. } => Inradius::Bounds {
                hi: &optimum * sqrt_upper(self.dim),
                lo: optimum,
            },
            // The closure of a nonempty polyhedron always admits r = 0.
            LpStatus::Infeasible => unreachable!("nonempty polyhedron with infeasible closure"),
        }
    }

    /// `lo <= r(P) <= hi` with `hi <= n·lo`.
    pub fn inradius_bounds(&self) -> Result<(Rat, Rat)> {
        match self.inradius() {
            Inradius::Bounds { lo, hi } => Ok((lo, hi)),
            Inradius::Empty => Err(Error::Invalid("empty polyhedron".into())),
            Inradius::Infinite => Err(Error::Invalid("infinite inradius".into())),
        }
    }

    /// Conjunction of order atoms over `vars`; `t = 0` contributes two
    /// closed half-spaces.
    pub fn from_formula(f: &Formula, vars: &[Var]) -> Result<Polyhedron> {
        let atoms: Vec<&Formula> = match f {
            Formula::And(xs) => xs.iter().collect(),
            Formula::True => vec![],
            other => vec![other],
        };
        let mut hs = Vec::new();
        for a in atoms {
            let (t, closed, both) = match a {
                Formula::Le(t) => (t, true, false),
                Formula::Lt(t) => (t, false, false),
                Formula::Eq(t) => (t, true, true),
                other => return Err(Error::Invalid(format!("not a half-space: {other}"))),
            };
            for v in t.vars() {
                if !vars.contains(v) {
                    return Err(Error::Invalid(format!("unknown variable {v}")));
                }
            }
            let f = AffineFunctional::new(
                vars.iter().map(|v| Rat::from_integer(t.coeff(v))).collect(),
                Rat::from_integer(t.constant_part().clone()),
            );
            hs.push(HalfSpace::new(f.clone(), Sign::Minus, closed)?);
            if both {
                hs.push(HalfSpace::new(f, Sign::Plus, true)?);
            }
        }
        Polyhedron::new(vars.len(), hs)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.halfspaces.iter().map(HalfSpace::to_json).collect())
    }
}

/// Region `u <= f(x) <= v` between two parallel hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plank {
    pub f: AffineFunctional,
    pub u: Rat,
    pub v: Rat,
}

impl Plank {
    pub fn new(a: Vec<Rat>, u: Rat, v: Rat) -> Result<Self> {
        let f = AffineFunctional::linear(a);
        if f.is_constant() {
            return Err(Error::Invalid("plank of a constant functional".into()));
        }
        if u > v {
            return Err(Error::Invalid("plank bounds out of order".into()));
        }
        Ok(Plank { f, u, v })
    }

    /// Square of the distance between the bounding hyperplanes.
    pub fn thickness_squared(&self) -> Rat {
        let d = &self.v - &self.u;
        &d * &d / self.f.l2_norm_squared()
    }

    pub fn polyhedron(&self) -> Polyhedron {
        let lower = AffineFunctional::new(self.f.a.clone(), -&self.u);
        let upper = AffineFunctional::new(self.f.a.clone(), -&self.v);
        Polyhedron {
            dim: self.f.dim(),
            halfspaces: vec![
                HalfSpace { f: lower, sign: Sign::Plus, closed: true },
                HalfSpace { f: upper, sign: Sign::Minus, closed: true },
            ],
        }
    }
}

/// `P⁺ = ⋂ H⁺(f_i - b_i)` and `P⁻ = ⋂ H⁻(f_i - b_i)`, each half-space open
/// exactly where `open[i]` is set.
pub fn opposite_system(fs: &[Vec<Rat>], bs: &[Rat], open: &[bool]) -> Result<(Polyhedron, Polyhedron)> {
    if fs.len() != bs.len() || fs.len() != open.len() {
        return Err(Error::Invalid("opposite system length mismatch".into()));
    }
    let dim = fs.first().map_or(0, Vec::len);
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for ((a, b), o) in fs.iter().zip(bs).zip(open) {
        let f = AffineFunctional::new(a.clone(), -b);
        plus.push(HalfSpace::new(f.clone(), Sign::Plus, !o)?);
        minus.push(HalfSpace::new(f, Sign::Minus, !o)?);
    }
    Ok((Polyhedron::new(dim, plus)?, Polyhedron::new(dim, minus)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::formula::{parse, var};

    fn r(n: i64) -> Rat {
        Rat::from_integer(n.into())
    }

    fn poly(s: &str, names: &[&str]) -> Polyhedron {
        let vars: Vec<Var> = names.iter().map(|n| var(n)).collect();
        Polyhedron::from_formula(&parse(s).unwrap(), &vars).unwrap()
    }

    #[test]
    fn emptiness() {
        assert!(poly("x > 0 & x < 0", &["x"]).is_empty());
        assert!(!poly("x >= 0", &["x"]).is_empty());
        assert!(poly("x + y <= 1 & x >= 1 & y >= 1", &["x", "y"]).is_empty());
        assert!(poly("x > 0 & x < 1", &["x"]).point().is_some());
    }

    #[test]
    fn infinite_inradius() {
        assert!(poly("x >= 0 & y >= 0", &["x", "y"]).inradius_infinite());
        let plank = Plank::new(vec![r(1), r(0)], r(0), r(4)).unwrap();
        assert!(!plank.polyhedron().inradius_infinite());
        assert!(!poly("x <= 0 & x >= 0", &["x", "y"]).inradius_infinite());
        assert!(!poly("x < 0 & x > 0", &["x"]).inradius_infinite());
        assert!(poly("x > 0 & y > 0", &["x", "y"]).inradius_infinite());
    }

    #[test]
    fn bounds() {
        let interval = Plank::new(vec![r(1)], r(0), r(4)).unwrap().polyhedron();
        assert_eq!(interval.inradius_bounds().unwrap(), (r(2), r(2)));
        let (lo, hi) = poly("x >= 0 & y >= 0 & x <= 1 & y <= 1", &["x", "y"]).inradius_bounds().unwrap();
        assert!(lo <= rat(1, 2) && rat(1, 2) <= hi);
        // 2 - √2 lies in (0.5857, 0.5859).
        let (lo, hi) = poly("x >= 0 & y >= 0 & x + y <= 2", &["x", "y"]).inradius_bounds().unwrap();
        assert!(lo <= rat(5857, 10000) && rat(5859, 10000) <= hi);
        assert!(hi <= &lo * r(2));
        assert_eq!(poly("x >= 0", &["x"]).inradius(), Inradius::Infinite);
        assert_eq!(poly("x > 0 & x < 0", &["x"]).inradius(), Inradius::Empty);
    }

    #[test]
    fn plank_thickness() {
        let p = Plank::new(vec![r(3), r(4)], r(-1), r(9)).unwrap();
        assert_eq!(p.thickness_squared(), r(4));
        let (lo, hi) = p.polyhedron().inradius_bounds().unwrap();
        assert!(&lo * &lo <= r(1) && r(1) <= &hi * &hi);
    }

    #[test]
    fn opposite_examples() {
        let (p, m) = opposite_system(&[vec![r(1)]], &[r(0)], &[false]).unwrap();
        assert_eq!(p.halfspaces[0], HalfSpace::new(AffineFunctional::linear(vec![r(1)]), Sign::Plus, true).unwrap());
        assert_eq!(m.halfspaces[0].sign, Sign::Minus);
        assert!(m.contains(&[r(0)]) && !m.contains(&[r(1)]));
        let (p, m) = opposite_system(&[vec![r(1), r(0)], vec![r(0), r(1)]], &[r(1), r(-1)], &[false, false]).unwrap();
        assert!(p.contains(&[r(1), r(-1)]) && !p.contains(&[r(0), r(0)]));
        assert!(m.contains(&[r(1), r(-1)]) && !m.contains(&[r(2), r(-1)]));
        assert_eq!(p.inradius_infinite(), m.inradius_infinite());
    }

    #[test]
    fn translation_invariance() {
        let p = poly("x >= 0 & y >= 0 & x + y <= 2", &["x", "y"]);
        let t = p.translate(&[r(5), r(-3)]);
        assert!(t.contains(&[r(5), r(-3)]) && !t.contains(&[r(0), r(0)]));
        assert_eq!(p.inradius(), t.inradius());
    }
}
