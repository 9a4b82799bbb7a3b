//! Exact arithmetic backend.

mod lp;
mod matrix;

pub use lp::{feasible_point, lp_status, Constraint, LinearSystem, LpStatus, Relation};
pub use matrix::{hnf, snf, solve_diophantine, IntMatrix};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(v: &Int) -> Rat {
    Rat::from_integer(v.clone())
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return a.abs().max(b.abs());
    }
    a.lcm(b)
}

/// Floor division for a positive divisor.
pub fn floor_div(a: &Int, d: &Int) -> Int {
    a.div_floor(d)
}

pub fn ceil_div(a: &Int, d: &Int) -> Int {
    -((-a).div_floor(d))
}

/// Representative of `a` modulo `m` in `[0, m)`.
pub fn modulo(a: &Int, m: &Int) -> Int {
    a.mod_floor(m)
}

pub fn rat_floor(r: &Rat) -> Int {
    r.numer().div_floor(r.denom())
}

pub fn rat_ceil(r: &Rat) -> Int {
    -((-r.numer()).div_floor(r.denom()))
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// `lo, lo+1, …, hi-1`.
pub fn int_range(lo: Int, hi: Int) -> impl Iterator<Item = Int> {
    let mut cur = lo;
    std::iter::from_fn(move || {
        if cur < hi {
            let out = cur.clone();
            cur += 1;
            Some(out)
        } else {
            None
        }
    })
}

pub fn is_one(a: &Int) -> bool {
    a.is_one()
}

/// JSON number when the value fits in `i64`, decimal string otherwise.
pub fn int_json(v: &Int) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::from(v.to_string()),
    }
}

/// Inverse of [`int_json`].
pub fn int_from_json(v: &serde_json::Value) -> Option<Int> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(Int::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

pub fn rat_json(v: &Rat) -> serde_json::Value {
    if v.is_integer() {
        int_json(v.numer())
    } else {
        serde_json::Value::from(v.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_modulo() {
        assert_eq!(floor_div(&int(-7), &int(3)), int(-3));
        assert_eq!(ceil_div(&int(-7), &int(3)), int(-2));
        assert_eq!(modulo(&int(-7), &int(3)), int(2));
        let (g, s, t) = ext_gcd(&int(-4), &int(6));
        assert_eq!(g, int(2));
        assert_eq!(s * int(-4) + t * int(6), int(2));
        assert_eq!(rat(6, -4), rat(-3, 2));
        assert_eq!(rat_floor(&rat(-3, 2)), int(-2));
        assert_eq!(rat_ceil(&rat(-3, 2)), int(-1));
    }
}
