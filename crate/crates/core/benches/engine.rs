//! Parallel engine against a single worker. Built with
//! `--no-default-features`, both arms run the sequential fallback.

use std::hint::black_box;

use cfpart::enumerate::count;
use cfpart::orbit::{orbit_bfs, GeneratorSet, Limits};
use cfpart::{build_e, canonical_key, enumerate};
use criterion::{criterion_group, criterion_main, Criterion};

fn workloads(c: &mut Criterion, arm: &str, run: &dyn Fn(&mut (dyn FnMut() + Send))) {
    let mut g = c.benchmark_group(arm);
    g.sample_size(10);
    g.bench_function("count d=3", |b| {
        b.iter(|| {
            run(&mut || {
                black_box(count(3, None).unwrap());
            })
        })
    });
    g.bench_function("orbit d=3", |b| {
        b.iter(|| {
            run(&mut || {
                let r = orbit_bfs(&build_e(3), GeneratorSet::InvolutionsOnly, &Limits::default()).unwrap();
                black_box(r.size);
            })
        })
    });
    let sample: Vec<_> = enumerate(3, None).unwrap().step_by(16).collect();
    g.bench_function("canonical keys d=3", |b| {
        b.iter(|| {
            run(&mut || {
                black_box(cfpart::par::map(&sample, canonical_key));
            })
        })
    });
    g.finish();
}

fn bench(c: &mut Criterion) {
    workloads(c, "default pool", &|f| f());
    #[cfg(feature = "parallel")]
    {
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        workloads(c, "one worker", &|f| single.install(&mut *f));
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
