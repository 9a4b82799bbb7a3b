//! Sequential against rayon execution for the data-parallel paths: box
//! equivalence checks in the oracle and a property suite.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dichotomy::formula::{parse, var, PredicateEnv};
use dichotomy::oracle::{equiv_on_box, EvalConfig, IntBox};
use dichotomy::par::Execution;
use dichotomy::suites::{find_suite, SuiteConfig};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn box_equivalence(c: &mut Criterion) {
    let f = parse("E z. x <= 2*z & 2*z <= y + 3 & z = x mod 3").unwrap();
    let g = parse("E z. x <= 2*z & 2*z <= y + 3 & z = x mod 3 & (x = y | !(x = y))").unwrap();
    let vars = [var("x"), var("y")];
    let mut group = c.benchmark_group("equiv_on_box");
    group.sample_size(10);
    for r in [10, 20] {
        let bx = IntBox::cube(&vars, r);
        for (name, execution) in MODES {
            let cfg = EvalConfig { execution, ..EvalConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, r), &bx, |b, bx| {
                b.iter(|| equiv_on_box(black_box(&f), &g, bx, &PredicateEnv::new(), &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn suite(c: &mut Criterion) {
    let run = find_suite("cells.random").unwrap();
    let mut group = c.benchmark_group("suite_cells_random");
    group.sample_size(10);
    for (name, execution) in MODES {
        let cfg = SuiteConfig { seed: 1, scale: 0.1, execution };
        group.bench_function(name, |b| b.iter(|| assert!(run(black_box(&cfg)).passed())));
    }
    group.finish();
}

criterion_group!(benches, box_equivalence, suite);
criterion_main!(benches);
