use super::*;
use crate::arith::int;

fn p(s: &str) -> Formula {
    parse(s).unwrap()
}

#[test]
fn parses_congruence() {
    assert_eq!(p("x = 0 mod 2"), Formula::Cong(Term::var("x"), int(2)));
}

#[test]
fn parses_existential() {
    let f = p("E y. (0 <= y & y <= x)");
    assert_eq!(
        f,
        Formula::exists(
            "y",
            Formula::And(vec![
                Formula::Le(-Term::var("y")),
                Formula::Le(Term::var("y") - Term::var("x")),
            ])
        )
    );
}

#[test]
fn parses_predicate_with_env() {
    let env = PredicateEnv::single("A", &[var("u"), var("v")], Formula::True);
    let f = parse_with_env("A(x, x+1)", &env).unwrap();
    assert_eq!(
        f,
        Formula::pred("A", vec![Term::var("x"), Term::var("x") + Term::constant(1)])
    );
    assert!(matches!(
        parse_with_env("A(x)", &env),
        Err(crate::Error::Arity { .. })
    ));
    assert!(matches!(parse("B(x) & B(x, y)"), Err(crate::Error::Arity { .. })));
}

#[test]
fn reports_positions_and_modulus() {
    match parse("x <= \n  y +") {
        Err(crate::Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 6)),
        other => panic!("{other:?}"),
    }
    assert!(parse("x = 1 mod 0").is_err());
    assert!(parse("x <=").is_err());
    assert!(parse("E. x = 0").is_err());
}

#[test]
fn precedence_and_associativity() {
    let f = p("a = 0 | b = 0 & c = 0 -> d = 0 -> e = 0 <-> f = 0");
    let a = || Formula::Eq(Term::var("a"));
    let b = || Formula::Eq(Term::var("b"));
    let c = || Formula::Eq(Term::var("c"));
    let d = || Formula::Eq(Term::var("d"));
    let e = || Formula::Eq(Term::var("e"));
    let g = || Formula::Eq(Term::var("f"));
    let expected = Formula::iff(
        Formula::implies(
            Formula::Or(vec![a(), Formula::And(vec![b(), c()])]),
            Formula::implies(d(), e()),
        ),
        g(),
    );
    assert_eq!(f, expected);
}

#[test]
fn round_trip_samples() {
    for s in [
        "x = 0 mod 2",
        "E y. 0 <= y & y <= x",
        "!(x < 3) | 2*x - y >= -4",
        "(E y. x = 2*y) & x != 0",
        "A z. (z < x -> z + 1 <= x) <-> true",
        "(a = 0 -> b = 0) -> c = 0",
        "a = 0 & (b = 0 & c = 0)",
        "A(x + 1, -y) | !!(x = y)",
        "a = 0 <-> (b = 0 <-> c = 0)",
        "!(E y. y = x)",
        "false | 0 <= 0",
    ] {
        let f = p(s);
        let r = f.to_string();
        let g = parse(&r).unwrap_or_else(|e| panic!("{r}: {e}"));
        assert_eq!(f, g, "{s} rendered as {r}");
        assert_eq!(g.to_string(), r);
    }
}

#[test]
fn renders_sides() {
    assert_eq!(p("x - 5 <= 0").to_string(), "x <= 5");
    assert_eq!(p("0 <= x").to_string(), "0 <= x");
    assert_eq!(p("x + x = 0 mod 2").to_string(), "2*x = 0 mod 2");
}

#[test]
fn substitution_examples() {
    let f = p("x = 0 mod 2").substitute_one("x", &(Term::var("y") + Term::constant(1)));
    assert_eq!(f, p("y + 1 = 0 mod 2"));
    let g = p("E y. y = x").substitute_one("x", &Term::var("y"));
    match &g {
        Formula::Exists(v, body) => {
            assert_ne!(&**v, "y");
            assert_eq!(**body, Formula::Eq(Term::var(v) - Term::var("y")));
        }
        other => panic!("{other:?}"),
    }
    let h = p("E y. y < x & A(y)");
    assert_eq!(h.substitute(&Default::default()), h);
}

#[test]
fn unfolding_examples() {
    let env = PredicateEnv::single("A", &[var("x")], p("x >= 0"));
    assert_eq!(p("A(x)").unfold_predicates(&env).unwrap(), p("x >= 0"));

    let env = PredicateEnv::single("A", &[var("y")], p("y = 0 mod 2"));
    assert_eq!(
        p("!A(x + x)").unfold_predicates(&env).unwrap(),
        p("!(x + x = 0 mod 2)")
    );

    let mut env = PredicateEnv::new();
    env.define("B", &[var("x")], p("A(x + 1)"));
    env.define("A", &[var("y")], p("y = 0"));
    assert_eq!(p("B(5)").unfold_predicates(&env).unwrap(), p("5 + 1 = 0"));

    let mut cyc = PredicateEnv::new();
    cyc.define("P", &[var("x")], p("Q(x)"));
    cyc.define("Q", &[var("x")], p("P(x)"));
    assert!(matches!(
        p("P(0)").unfold_predicates(&cyc),
        Err(crate::Error::CyclicDefinition(_))
    ));
    let mut op = PredicateEnv::new();
    op.opaque("O", 1);
    assert!(matches!(
        p("O(0)").unfold_predicates(&op),
        Err(crate::Error::OpaquePredicate(_))
    ));
}

#[test]
fn unfolding_avoids_capture() {
    let env = PredicateEnv::single("P", &[var("x")], p("E y. y < x"));
    let f = p("E x. P(y)").unfold_predicates(&env).unwrap();
    assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![var("y")]);
}

#[test]
fn free_vars_and_nnf() {
    let f = p("E y. (y < x -> !(z = y))");
    let fv: Vec<String> = f.free_vars().iter().map(|v| v.to_string()).collect();
    assert_eq!(fv, vec!["x", "z"]);
    let n = p("!(a = 0 -> E y. b < y)").nnf();
    assert_eq!(n, p("a = 0 & (A y. !(b < y))"));
}
