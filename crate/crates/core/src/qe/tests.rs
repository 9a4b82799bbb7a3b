use super::*;
use crate::formula::{parse, var, PredicateEnv};
use crate::oracle::{equiv_on_box, EvalConfig, Equivalence, IntBox};

fn p(s: &str) -> Formula {
    parse(s).unwrap()
}

fn box_equal(f: &Formula, g: &Formula, r: i64) -> bool {
    let mut vars: Vec<Var> = f.free_vars().union(&g.free_vars()).cloned().collect();
    if vars.is_empty() {
        vars.push(var("unused"));
    }
    let bx = IntBox::cube(&vars, r);
    equiv_on_box(f, g, &bx, &PredicateEnv::new(), &EvalConfig::default()).unwrap() == Equivalence::Equivalent
}

#[test]
fn eliminate_examples() {
    let e = eliminate(&p("E y. x = y + y")).unwrap();
    assert!(e.is_quantifier_free());
    assert_eq!(e, p("x = 0 mod 2"));
    assert_eq!(eliminate(&p("E y. (0 <= y & y <= x)")).unwrap(), p("0 <= x"));
    assert_eq!(eliminate(&p("A y. (y < x -> y + 1 <= x)")).unwrap(), Formula::True);
}

#[test]
fn eliminate_matches_oracle() {
    for s in [
        "E y. (2*y <= x & x <= 3*y)",
        "E y. 3*y = x + 1 & y = 1 mod 2",
        "A y. (y = 0 mod 3 -> x != y)",
        "E y. E z. x = 2*y + 3*z & y >= 0 & z >= 0",
        "A y. E z. (y < x | z = y + x & z = 0 mod 4)",
        "E y. 5*y <= 2*x + 3 & 3*x <= 4*y + 1 & x + y = 1 mod 3",
        "!(E y. x < y & y < x + 2 & y = 1 mod 2)",
    ] {
        let f = p(s);
        let e = eliminate(&f).unwrap();
        assert!(e.is_quantifier_free(), "{s}");
        assert!(box_equal(&f, &e, 30), "{s} -> {e}");
    }
}

#[test]
fn sentences() {
    assert!(decide_sentence(&p("A x. x = 0 mod 1")).unwrap());
    assert!(!decide_sentence(&p("E x. x < x")).unwrap());
    assert!(decide_sentence(&p("A x. E y. (x = y + y | x = y + y + 1)")).unwrap());
    assert!(!decide_sentence(&p("A x. E y. x = y + y")).unwrap());
    assert!(matches!(decide_sentence(&p("x = 0")), Err(Error::FreeVariables(_))));
    assert!(matches!(eliminate(&p("A(x)")), Err(Error::PredicatePresent(_))));
}

#[test]
fn equivalences() {
    let f = p("x >= 0");
    assert!(decide_equiv(&f, &f).unwrap());
    assert!(!decide_equiv(&f, &p("x > 0")).unwrap());
    assert!(decide_equiv(&p("x = 0 mod 2"), &p("E y. x = y + y")).unwrap());
    let g = p("E y. x = y + y | x = 2*y + 1");
    assert!(decide_equiv(&g, &p("true | x = x")).unwrap());
    assert_eq!(decide_equiv(&f, &g).unwrap(), box_equal(&f, &g, 50));
}

#[test]
fn models_have_small_coordinates() {
    let vars = vec![var("x"), var("y")];
    let m = find_model(&parse("7 <= x & y = x + 3").unwrap(), &vars).unwrap().unwrap();
    assert_eq!(m, vec![Int::from(7), Int::from(10)]);
    let m = find_model(&parse("x = 1 mod 2 & x <= 40 & -40 <= x").unwrap(), &vars[..1]).unwrap().unwrap();
    assert_eq!(m, vec![Int::from(-1)]);
    assert_eq!(find_model(&parse("x <= 0 & 1 <= x").unwrap(), &vars[..1]).unwrap(), None);
    let m = find_model(&parse("E z. x = 2*z & 100 <= x").unwrap(), &vars[..1]).unwrap().unwrap();
    assert_eq!(m, vec![Int::from(100)]);
}
