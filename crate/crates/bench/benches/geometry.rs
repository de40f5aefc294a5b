use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcvx::convex_bodies::{minkowski_sum, ConvexBody};
use qcvx::inequality_lab::generators::{random_polytope, random_radial, random_stack};
use qcvx::inequality_lab::suite::{run_check, SuiteConfig};
use qcvx::mixed_volumes::{minkowski_polynomial, mixed_volume};
use qcvx::qc_calculus::grid::{grid_sup_min, Lattice};
use qcvx::qc_calculus::{integral, mixed_integral, oplus, QCFunction};
use qcvx::rearrange::SizeFunctional;

fn polytopes(dim: usize, count: usize) -> Vec<ConvexBody> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..count).map(|_| random_polytope(&mut rng, dim).unwrap()).collect()
}

fn bodies(c: &mut Criterion) {
    for dim in [2, 3] {
        let ks = polytopes(dim, dim);
        let refs: Vec<&ConvexBody> = ks.iter().collect();
        c.bench_function(&format!("minkowski_sum/n{dim}"), |b| b.iter(|| minkowski_sum(&ks[0], &ks[1]).unwrap()));
        c.bench_function(&format!("mixed_volume/n{dim}"), |b| b.iter(|| mixed_volume(&refs).unwrap()));
        c.bench_function(&format!("minkowski_polynomial/n{dim}"), |b| {
            b.iter(|| minkowski_polynomial(&refs, dim).unwrap())
        });
    }
}

fn functions(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f: QCFunction = random_stack(&mut rng, 2).unwrap().into();
    let g: QCFunction = random_stack(&mut rng, 2).unwrap().into();
    let r = random_radial(&mut rng, 2, true).unwrap();
    c.bench_function("oplus/stacks", |b| b.iter(|| oplus(&f, &g).unwrap()));
    c.bench_function("oplus/stack+radial", |b| b.iter(|| oplus(&f, &r).unwrap()));
    c.bench_function("integral/radial", |b| b.iter(|| integral(&r).unwrap()));
    c.bench_function("mixed_integral/stack,radial", |b| b.iter(|| mixed_integral(&[&f, &r]).unwrap()));
    let w1 = SizeFunctional::quermass(2, 1).unwrap();
    c.bench_function("eval_fn_sum/W1", |b| b.iter(|| w1.eval_fn_sum(&f, &r).unwrap()));
    let lattice = Lattice::covering(&f, &g, 41).unwrap();
    c.bench_function("grid_sup_min/41x41", |b| b.iter(|| grid_sup_min(&f, &g, &lattice).unwrap()));
}

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for name in ["gen-bm", "af", "rescaled-bm"] {
        let cfg = SuiteConfig {
            seed: 3,
            trials: 20,
            dim: 2,
            ..SuiteConfig::default()
        };
        group.bench_function(name, |b| b.iter_batched(|| cfg, |cfg| run_check(name, &cfg).unwrap(), BatchSize::SmallInput));
    }
    group.finish();
}

criterion_group!(benches, bodies, functions, suite);
criterion_main!(benches);
