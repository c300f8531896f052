//! Slice-parallel kernels on one worker versus the whole rayon pool.
//!
//! Build with `--no-default-features` to benchmark the sequential fallback;
//! both arms then run the same code path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPool;
use tkrylov::{gaussian_tensor, tprod, tsvd, Algorithm, SketchParams, Tensor3};

fn pools() -> Vec<(String, ThreadPool)> {
    let all = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut out = vec![("1-thread".to_string(), rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap())];
    if all > 1 {
        out.push((format!("{all}-threads"), rayon::ThreadPoolBuilder::new().num_threads(all).build().unwrap()));
    }
    out
}

fn label(pool: &str) -> String {
    let mode = if tkrylov::is_parallel() { "parallel-build" } else { "sequential-build" };
    format!("{mode}/{pool}")
}

fn bench_kernels(c: &mut Criterion) {
    let x: Tensor3 = gaussian_tensor(96, 96, 32, 1);
    let y: Tensor3 = gaussian_tensor(96, 96, 32, 2);
    let pools = pools();

    let mut group = c.benchmark_group("tprod_96x96x32");
    for (name, pool) in &pools {
        group.bench_function(BenchmarkId::from_parameter(label(name)), |b| {
            pool.install(|| b.iter(|| tprod(&x, &y).unwrap()))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("tsvd_96x96x32");
    group.sample_size(20);
    for (name, pool) in &pools {
        group.bench_function(BenchmarkId::from_parameter(label(name)), |b| {
            pool.install(|| b.iter(|| tsvd(&x).unwrap()))
        });
    }
    group.finish();

    let params = SketchParams::new(20, 5, 2, 3);
    for algo in [Algorithm::Power, Algorithm::BlockKrylov] {
        let mut group = c.benchmark_group(format!("{}_R20_q2_96x96x32", algo.name()));
        group.sample_size(20);
        for (name, pool) in &pools {
            group.bench_function(BenchmarkId::from_parameter(label(name)), |b| {
                pool.install(|| b.iter(|| algo.run(&x, &params).unwrap()))
            });
        }
        group.finish();
    }
}

criterion_group!(benches, bench_kernels);
criterion_main!(benches);
