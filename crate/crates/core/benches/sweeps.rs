use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use gcfg::gpgen::{builtin_action, gen_configuration, ActionSpec};
use gcfg::localglue::{verify_group_with, ExactRational};
use gcfg::quadrangle::{config_to_quad, validate_quadrangle_with};
use gcfg::reconstruct::{ab_claim_with, presentation_property_with};
use gcfg::{FunctionalInstance, Strategy};

fn strategies() -> Vec<(&'static str, Strategy)> {
    let mut s = vec![("sequential", Strategy::Sequential)];
    #[cfg(feature = "parallel")]
    s.push(("parallel", Strategy::Parallel));
    s
}

fn instance(spec: &str) -> FunctionalInstance {
    let action = builtin_action(&spec.parse().unwrap(), &ActionSpec::Regular).unwrap();
    gen_configuration(&action, None).unwrap()
}

fn sweeps(c: &mut Criterion) {
    // Z/24 is abelian, so every sweep runs to completion without a witness.
    let inst = instance("cyclic:24");
    let families = inst.extract_families().unwrap();
    let quad = config_to_quad(&inst).unwrap();
    let half = ExactRational::new(1, 4);

    let mut group = c.benchmark_group("sweeps");
    for (name, strategy) in strategies() {
        group.bench_with_input(
            BenchmarkId::new("master_equation", name),
            &strategy,
            |b, &s| b.iter(|| inst.check_master_equation_with(s).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("presentation", name),
            &strategy,
            |b, &s| b.iter(|| presentation_property_with(black_box(&families), s)),
        );
        group.bench_with_input(BenchmarkId::new("ab_claim", name), &strategy, |b, &s| {
            b.iter(|| ab_claim_with(black_box(&families.h), s))
        });
        group.bench_with_input(
            BenchmarkId::new("quadrangle_axioms", name),
            &strategy,
            |b, &s| b.iter(|| validate_quadrangle_with(black_box(&quad), s)),
        );
        group.bench_with_input(
            BenchmarkId::new("glue_grid_64", name),
            &strategy,
            |b, &s| b.iter(|| verify_group_with(&half, 64, s).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
