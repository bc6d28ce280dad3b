use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gridpair_core::factorization::{two_factorization, Multigraph};
use gridpair_core::generate::{random_multigraph, random_pairing};
use gridpair_core::{solve, solve_complete, BaseOptions, GridSpec, SolveOptions};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn regular_multigraph(vertices: usize, degree: usize, seed: u64) -> Multigraph {
    let mut stubs: Vec<usize> = (0..vertices)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    stubs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Multigraph::new(
        vertices,
        stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect(),
    )
    .unwrap()
}

fn bench_factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_factorization");
    // column graphs of K_18^3 (q = 2) and K_30^2 (q = 4)
    for (vertices, k) in [(324usize, 18usize), (30, 60)] {
        let g = regular_multigraph(vertices, 2 * k, 1);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("v{vertices}_k{k}")),
            &g,
            |b, g| b.iter(|| two_factorization(g, k).unwrap()),
        );
    }
    group.finish();
}

fn bench_base_solver(c: &mut Criterion) {
    let spec = GridSpec::new(18, 1).unwrap();
    let d = random_multigraph(spec, 4, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let opts = BaseOptions::default();
    c.bench_function("solve_complete_k18_degree4", |b| {
        b.iter(|| solve_complete(18, d.edges(), 0, &opts).unwrap())
    });
}

fn bench_pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_pairing");
    group.sample_size(20);
    for n in [2usize, 3] {
        let spec = GridSpec::new(18, n).unwrap();
        let d = random_pairing(spec, &mut ChaCha8Rng::seed_from_u64(n as u64)).unwrap();
        for jobs in [1usize, 4] {
            let opts = SolveOptions {
                jobs: Some(jobs),
                ..Default::default()
            };
            group.bench_with_input(
                BenchmarkId::new(format!("k18_n{n}"), format!("jobs{jobs}")),
                &d,
                |b, d| b.iter(|| solve(d, &opts).unwrap()),
            );
        }
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_factorization,
    bench_base_solver,
    bench_pipeline
);
criterion_main!(benches);
