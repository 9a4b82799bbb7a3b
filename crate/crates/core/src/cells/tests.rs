use super::*;
use crate::arith::int;
use crate::formula::parse;
use crate::qe::decide_equiv;

fn vs(names: &[&str]) -> Vec<Var> {
    names.iter().map(|n| var(n)).collect()
}

fn ints(xs: &[i64]) -> Vec<Int> {
    xs.iter().map(|&x| int(x)).collect()
}

/// Compares the decomposition with the formula at every point of a box.
fn check_box(src: &str, names: &[&str], r: i64) -> CellDecomposition {
    let f = parse(src).unwrap();
    let vars = vs(names);
    let d = decompose(&f, &vars).unwrap();
    let sem = d.to_formula();
    let mut pt = vec![-r; names.len()];
    loop {
        let point = ints(&pt);
        let lookup = |v: &str| vars.iter().position(|w| &**w == v).map(|i| point[i].clone());
        let want = eval_qf(&f, &lookup).unwrap();
        assert_eq!(d.contains(&point).unwrap(), want, "{src} at {pt:?}");
        assert_eq!(eval_qf(&sem, &lookup).unwrap(), want, "{src} (formula) at {pt:?}");
        let mut i = 0;
        while i < pt.len() && pt[i] == r {
            pt[i] = -r;
            i += 1;
        }
        if i == pt.len() {
            break;
        }
        pt[i] += 1;
    }
    d
}

#[test]
fn zlinear_evaluation() {
    let f = ZLinear::Standard(StandardZLinear::new(ints(&[0]), ints(&[1]), int(1), ints(&[2])).unwrap());
    assert_eq!(eval_zlinear(&f, &ints(&[5])).unwrap(), ExtInt::Finite(int(11)));
    assert_eq!(eval_zlinear(&ZLinear::PlusInfinity, &ints(&[3])).unwrap(), ExtInt::PlusInfinity);
    let g = ZLinear::Standard(StandardZLinear::new(ints(&[1]), ints(&[3]), int(0), ints(&[1])).unwrap());
    assert_eq!(eval_zlinear(&g, &ints(&[7])).unwrap(), ExtInt::Finite(int(2)));
    assert!(matches!(eval_zlinear(&g, &ints(&[8])), Err(Error::Domain(_))));
    assert!(StandardZLinear::new(ints(&[3]), ints(&[3]), int(0), ints(&[1])).is_err());
}

#[test]
fn scaled_term_matches_evaluation() {
    let f = StandardZLinear::new(ints(&[1, 0]), ints(&[3, 2]), int(-4), ints(&[5, -1])).unwrap();
    let vars = vs(&["a", "b"]);
    let t = f.scaled_term(&vars);
    for a in (-11..11).filter(|a: &i64| a.rem_euclid(3) == 1) {
        for b in (-10..10).step_by(2) {
            let x = ints(&[a, b]);
            let v = t.eval_with(|n| if n == "a" { Some(int(a)) } else { Some(int(b)) }).unwrap();
            assert_eq!(v, f.eval(&x).unwrap() * f.scale_factor());
        }
    }
}

#[test]
fn interval_under_diagonal() {
    let d = check_box("0 <= y & y <= x", &["x", "y"], 10);
    assert_eq!(d.terms.len(), 1);
    let t = &d.terms[0];
    assert!(decide_equiv(&t.base, &parse("0 <= x").unwrap()).unwrap());
    assert_eq!(t.lower, ZLinear::Standard(StandardZLinear::affine(int(0), ints(&[0]))));
    assert_eq!(t.upper, ZLinear::Standard(StandardZLinear::affine(int(0), ints(&[1]))));
    assert!(decide_equiv(&project(&d), &parse("0 <= x").unwrap()).unwrap());
}

#[test]
fn odd_fibers() {
    let d = check_box("y = 1 mod 2", &["x", "y"], 10);
    assert_eq!(d.terms.len(), 1);
    let t = &d.terms[0];
    assert_eq!(t.base, Formula::True);
    assert_eq!((t.lower.clone(), t.upper.clone()), (ZLinear::MinusInfinity, ZLinear::PlusInfinity));
    assert_eq!((t.residue.clone(), t.modulus.clone()), (int(1), int(2)));
    assert_eq!(project(&d), Formula::True);
}

#[test]
fn graph_of_linear_map() {
    let d = check_box("y = 3*x", &["x", "y"], 10);
    assert_eq!(d.terms.len(), 1);
    let f = ZLinear::Standard(StandardZLinear::affine(int(0), ints(&[3])));
    assert_eq!((d.terms[0].lower.clone(), d.terms[0].upper.clone()), (f.clone(), f));
}

#[test]
fn empty_set_projects_to_false() {
    let d = decompose(&parse("y <= 0 & 1 <= y").unwrap(), &vs(&["x", "y"])).unwrap();
    assert!(d.terms.is_empty());
    assert_eq!(project(&d), Formula::False);
}

#[test]
fn mixed_formulas_match_on_boxes() {
    for src in [
        "2*y <= x & x <= 3*y",
        "x <= y & y <= x + 6 & y = x mod 3",
        "!(y = x) & 0 <= y & y <= 4",
        "3*y + x = 1 mod 4 | (y <= 2*x - 1 & 5*y >= x)",
        "!(y + x = 0 mod 3) & y <= 5 & -5 <= y",
        "y = 0 mod 2 | y = 0 mod 3",
        "2*y = x + 1",
        "(y <= 0 & y = 0 mod 2) | (0 <= y & y = 1 mod 2)",
    ] {
        let d = check_box(src, &["x", "y"], 12);
        let proj = project(&d);
        let direct = Formula::exists("y", parse(src).unwrap());
        assert!(decide_equiv(&proj, &direct).unwrap(), "projection of {src}");
    }
}

#[test]
fn three_variables() {
    for src in ["x <= z & z <= y & y <= 2*x", "z = x + y mod 2 & 0 <= z & z <= x - y"] {
        let d = check_box(src, &["x", "y", "z"], 6);
        assert!(decide_equiv(&project(&d), &Formula::exists("z", parse(src).unwrap())).unwrap());
    }
}

#[test]
fn one_variable_sets() {
    check_box("(3 <= y & y = 1 mod 2) | y = -4", &["y"], 20);
    let d = decompose(&parse("y = 2 mod 5").unwrap(), &vs(&["y"])).unwrap();
    assert_eq!(d.terms.len(), 1);
}

#[test]
fn rejects_bad_input() {
    let vars = vs(&["x", "y"]);
    assert_eq!(decompose(&parse("E z. z = y").unwrap(), &vars), Err(Error::Quantified));
    assert!(matches!(decompose(&parse("w = y").unwrap(), &vars), Err(Error::FreeVariables(_))));
}

#[test]
fn json_shape() {
    let d = decompose(&parse("0 <= y & y <= x").unwrap(), &vs(&["x", "y"])).unwrap();
    let j = d.to_json();
    assert_eq!(j["arity"], 2);
    assert_eq!(j["terms"][0]["lower"]["kind"], "standard");
    assert_eq!(j["terms"][0]["upper"]["a"][0], 1);
}
