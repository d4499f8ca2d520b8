use std::hint::black_box;

use cgl_core::exec::Exec;
use cgl_core::fixtures;
use cgl_core::pipeline::run_fixtures;
use cgl_core::quantizer::{quantize, QuantizeOptions};
use cgl_core::verifier::{verify, VerifyOptions};
use criterion::{criterion_group, criterion_main, Criterion};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn verify_m2x2(c: &mut Criterion) {
    let spec = fixtures::by_name("m2x2").unwrap().spec;
    let qz = quantize(&spec, &QuantizeOptions::default()).unwrap();
    let mut group = c.benchmark_group("verify_m2x2");
    group.sample_size(20);
    for (name, exec) in MODES {
        let opts = VerifyOptions {
            exec,
            ..Default::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| {
                // Fresh caches each round so both modes do the same work.
                qz.presentation().clear_caches();
                black_box(verify(&spec, qz.presentation(), &opts))
            })
        });
    }
    group.finish();
}

fn fixture_suite(c: &mut Criterion) {
    let all = fixtures::all();
    let qopts = QuantizeOptions::default();
    let mut group = c.benchmark_group("fixtures_run");
    group.sample_size(10);
    for (name, exec) in MODES {
        let vopts = VerifyOptions {
            exec,
            ..Default::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| black_box(run_fixtures(&all, exec, &vopts, &qopts)))
        });
    }
    group.finish();
}

criterion_group!(benches, verify_m2x2, fixture_suite);
criterion_main!(benches);
