use super::*;
use crate::arith::int;
use crate::cells::decompose;
use crate::formula::parse;
use std::time::Instant;

fn vs(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| var(n)).collect()
}

fn run(src: &str, names: &[&str]) -> Classification {
    let start = Instant::now();
    let c = classify(&parse(src).unwrap(), &vs(names), &PredicateEnv::new()).unwrap();
    eprintln!("{src}: {} in {:?}", c.verdict.name(), start.elapsed());
    assert!(c.report.passed(), "{src}: {:?}\n{}", c.report, c.trace.join("\n"));
    c
}

fn group(src: &str, names: &[&str]) -> Formula {
    let c = run(src, names);
    assert!(matches!(c.verdict, Verdict::GroupDefinable(_)), "{src}: {}", c.verdict.witness());
    c.verdict.witness().clone()
}

fn ordering(src: &str, names: &[&str]) -> Formula {
    let c = run(src, names);
    assert!(matches!(c.verdict, Verdict::DefinesOrdering(_)), "{src}: {}", c.verdict.witness());
    c.verdict.witness().clone()
}

#[test]
fn boundary_map_values() {
    let m = int(3);
    assert_eq!(boundary_maps(&m, &int(7)), (int(1), int(6), int(9), int(3), int(12)));
    assert_eq!(boundary_maps(&m, &int(6)), (int(0), int(6), int(6), int(3), int(9)));
    assert_eq!(boundary_maps(&m, &int(-1)), (int(2), int(-3), int(0), int(-6), int(3)));
    assert_eq!(boundary_maps(&int(1), &int(-5)), (int(0), int(-5), int(-5), int(-6), int(-4)));
}

#[test]
fn one_dimensional_sets() {
    assert!(decide_equiv(&group("x = 0 mod 2", &["x"]), &parse("x = 0 mod 2").unwrap()).unwrap());
    let w = ordering("0 <= x", &["x"]);
    assert_eq!(w.to_string(), parse("A(x)").unwrap().to_string());
    // Odd numbers on the right ray, even numbers on the left ray.
    let w = ordering("(0 <= x & x = 1 mod 2) | (x <= 0 & x = 0 mod 2)", &["x"]);
    assert_eq!(w.to_string(), parse("A(1 + 2*x)").unwrap().to_string());
    group("x = 3 | (x = 1 mod 4 & !(x = 5))", &["x"]);
    group("x <= 4 & -2 <= x", &["x"]);
    ordering("x <= 7 & x = 0 mod 3", &["x"]);
}

#[test]
fn interval_under_diagonal_defines_order() {
    ordering("0 <= y & y <= x", &["x", "y"]);
}

#[test]
fn bounded_window_is_group_definable() {
    let w = group("x <= y & y <= x + 6 & y = x mod 3", &["x", "y"]);
    assert!(decide_equiv(&w, &parse("y = x | y = x + 3 | y = x + 6").unwrap()).unwrap());
}

#[test]
fn graphs_and_periodic_fibers() {
    group("y = 3*x", &["x", "y"]);
    group("y = 1 mod 2", &["x", "y"]);
    group("2*y = x + 1 | y = x + 2 mod 5", &["x", "y"]);
}

#[test]
fn quadrant_has_an_escape() {
    ordering("0 <= x & 0 <= y", &["x", "y"]);
    ordering("y <= x & 0 <= x + y", &["x", "y"]);
}

#[test]
fn strips_and_slabs() {
    group("x <= y & y <= x + 2", &["x", "y"]);
    group("x + 1 <= 2*y & 2*y <= x + 8", &["x", "y"]);
    group("(x <= y & y <= x + 1) | (x + 4 <= y & y <= x + 5)", &["x", "y"]);
    group("x <= y & y <= x + 5 & !(y = x + 2)", &["x", "y"]);
    ordering("x <= y & y <= 2*x", &["x", "y"]);
}

#[test]
fn three_variable_cases() {
    ordering("0 <= z & z <= x & z <= y", &["x", "y", "z"]);
    group("x + y <= z & z <= x + y + 3 & z = x mod 2", &["x", "y", "z"]);
}

#[test]
fn congruence_slices() {
    let f = parse("y = 2 mod 6 | y = 3 mod 6 | (0 <= y & y <= x & y = 4 mod 6)").unwrap();
    let vars = vs(&["x", "y"]);
    let sem = qe::eliminate(&f).unwrap();
    let d = decompose(&sem, &vars).unwrap();
    let a = TrackedSet::input(vars, sem);
    let pieces = sort_congruences(&a, &d.terms).unwrap();
    let shifts: Vec<Int> = pieces.iter().map(|p| p.shift.clone()).collect();
    assert_eq!(shifts, vec![int(2), int(3), int(4)]);
    assert!(pieces.iter().all(|p| p.modulus == int(6)));
    assert!(pieces.iter().all(|p| p.terms.iter().all(|t| t.residue == int(0))));
}

#[test]
fn constant_differences() {
    use crate::cells::StandardZLinear;
    use crate::groupsets::{Coset, Lattice};
    let f = StandardZLinear::affine(int(0), vec![int(1)]);
    let g = StandardZLinear::affine(int(3), vec![int(1)]);
    let h = StandardZLinear::affine(int(0), vec![int(2)]);
    let line = Coset::full(1);
    assert_eq!(constant_difference(std::slice::from_ref(&f), std::slice::from_ref(&g), &line), Some((0, 0, int(-3))));
    assert_eq!(constant_difference(std::slice::from_ref(&h), std::slice::from_ref(&g), &line), None);
    // On the single point x = 5 every pair has a constant difference.
    let pt = Coset::new(vec![int(5)], Lattice::zero(1));
    assert_eq!(constant_difference(&[h], &[g], &pt), Some((0, 0, int(2))));
}

#[test]
fn verify_rejects_wrong_witnesses() {
    let env = PredicateEnv::new();
    let f = parse("0 <= y & y <= x").unwrap();
    let vars = vs(&["x", "y"]);
    let bad = verify(&f, &vars, &Verdict::GroupDefinable(parse("y = 0").unwrap()), &env).unwrap();
    assert!(!bad.passed());
    let ordered = verify(&f, &vars, &Verdict::GroupDefinable(f.clone()), &env).unwrap();
    assert!(ordered.failure.is_some() && !ordered.passed());
    let good = verify(&f, &vars, &Verdict::DefinesOrdering(parse("A(x, 0)").unwrap()), &env).unwrap();
    assert!(good.passed(), "{good:?}");
    let wrong = verify(&f, &vars, &Verdict::DefinesOrdering(parse("A(0, x)").unwrap()), &env).unwrap();
    assert!(!wrong.passed());
}

#[test]
fn rejects_bad_variable_lists() {
    let env = PredicateEnv::new();
    let f = parse("x = y").unwrap();
    assert!(classify(&f, &[], &env).is_err());
    assert!(classify(&f, &vs(&["x", "x"]), &env).is_err());
    assert!(matches!(classify(&f, &vs(&["x"]), &env), Err(Error::FreeVariables(_))));
}
