//! Every property suite at its default size.

use dichotomy::suites::{find_suite, SuiteConfig};

fn run(name: &str) {
    let suite = find_suite(name).expect("suite is registered");
    let start = std::time::Instant::now();
    let report = suite(&SuiteConfig::default());
    eprintln!("{name}: {} cases in {:?}", report.cases, start.elapsed());
    assert!(report.passed(), "{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
}

macro_rules! suites {
    ($($test:ident => $name:expr),* $(,)?) => {
        $(#[test] fn $test() { run($name); })*
    };
}

suites! {
    arith_snf => "arith.snf",
    arith_hnf => "arith.hnf",
    arith_lp => "arith.lp",
    formula_round_trip => "formula.round_trip",
    formula_substitution => "formula.substitution",
    oracle_qf_exact => "oracle.qf_exact",
    qe_random => "qe.random",
    qe_self_consistency => "qe.self_consistency",
    cells_random => "cells.random",
    cells_zlinear => "cells.zlinear",
    groupsets_boolean => "groupsets.boolean",
    groupsets_rank_union => "groupsets.rank_union",
    groupsets_phi => "groupsets.phi",
    groupsets_phi_rank => "groupsets.phi_rank",
    polyhedra_plank => "polyhedra.plank",
    polyhedra_opposite => "polyhedra.opposite",
    polyhedra_kadets => "polyhedra.kadets",
    polyhedra_cover => "polyhedra.cover",
    polyhedra_uncovered => "polyhedra.uncovered",
    polyhedra_invariance => "polyhedra.invariance",
    classifier_corpus => "classifier.corpus",
    classifier_order_free => "classifier.order_free",
    classifier_conservation => "classifier.conservation",
    classifier_random => "classifier.random",
}

#[test]
fn registry_is_complete() {
    assert_eq!(dichotomy::suites::SUITES.len(), 24);
}
