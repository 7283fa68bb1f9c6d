//! Benchmarks comparing parallel and sequential suite execution, plus the
//! cost of the two extension-object constructions on a fixed instance.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use extent_core::extension::{ext_former, generic_ext_context, interpret_shape, ExtInput, ShapeKind};
use extent_core::presheaf::BaseId;
use extent_harness::{gen_instance, run_suite, InstanceSpec, SuiteConfig};

fn bench_config(parallel: bool) -> SuiteConfig {
    // terminal-base fleet: the shared generic-context setup is cheap there,
    // so the comparison reflects per-instance work
    SuiteConfig {
        n: 128,
        seed: 7,
        base: Some("terminal".into()),
        parallel,
        ..SuiteConfig::default()
    }
}

fn suite_parallel_vs_sequential(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| {
            let (report, _) = run_suite(black_box(&bench_config(true))).unwrap();
            assert_eq!(report.summary.violations, 0);
            report.summary.instances
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let (report, _) = run_suite(black_box(&bench_config(false))).unwrap();
            assert_eq!(report.summary.violations, 0);
            report.summary.instances
        })
    });
    group.finish();
}

fn former_and_oracle(c: &mut Criterion) {
    let spec = InstanceSpec {
        base: BaseId::Arrow,
        bound: 2,
        shape: ShapeKind::Endpoint,
        gamma_max: 2,
    };
    let cap = 16384;
    let inst = gen_instance(11, spec, cap).unwrap();
    c.bench_function("ext_former", |b| {
        b.iter(|| {
            let input = ExtInput::new(
                inst.input.shape.clone(),
                inst.input.gamma.clone(),
                inst.input.family.data.clone(),
                inst.input.boundary.clone(),
            )
            .unwrap();
            ext_former(black_box(input), cap).unwrap().family
        })
    });
    c.bench_function("generic_context", |b| {
        let shape =
            std::sync::Arc::new(interpret_shape(spec.base, &spec.shape.inclusion()).unwrap());
        b.iter(|| generic_ext_context(black_box(&shape), spec.bound, cap).unwrap().u_ext)
    });
}

criterion_group!(benches, suite_parallel_vs_sequential, former_and_oracle);
criterion_main!(benches);
