use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use rwde::lattice::{sample_environment, TorusGraph, Weights};
#[cfg(feature = "parallel")]
use rwde::par::map_indexed_parallel;
use rwde::par::map_indexed_sequential;
use rwde::rng::stream;
use rwde::stationary::{density_from, stationary_distribution, SolverOptions};
use rwde::walk::simulate_annealed_reinforced;

fn density_replica(w: &Weights, graph: &TorusGraph, r: usize) -> f64 {
    let env = sample_environment(w, graph, &mut stream(1, &[r as u64])).unwrap();
    density_from(&stationary_distribution(&env, &SolverOptions::default()).unwrap())
}

fn walk_replica(w: &Weights, r: usize) -> i64 {
    simulate_annealed_reinforced(w, vec![0; 3], 5_000, &mut stream(2, &[r as u64]))
        .unwrap()
        .position[0]
}

fn densities(c: &mut Criterion) {
    let w = Weights::uniform(3, 0.5).unwrap();
    let mut group = c.benchmark_group("density_replicas");
    group.sample_size(10);
    for side in [4usize, 6] {
        let graph = TorusGraph::new(3, side).unwrap();
        group.bench_with_input(BenchmarkId::new("sequential", side), &side, |b, _| {
            b.iter(|| black_box(map_indexed_sequential(32, |r| density_replica(&w, &graph, r))))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", side), &side, |b, _| {
            b.iter(|| black_box(map_indexed_parallel(32, |r| density_replica(&w, &graph, r))))
        });
    }
    group.finish();
}

fn walks(c: &mut Criterion) {
    let w = Weights::new(3, vec![2.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
    let mut group = c.benchmark_group("annealed_walk_replicas");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(map_indexed_sequential(16, |r| walk_replica(&w, r))))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(map_indexed_parallel(16, |r| walk_replica(&w, r))))
    });
    group.finish();
}

criterion_group!(benches, densities, walks);
criterion_main!(benches);
