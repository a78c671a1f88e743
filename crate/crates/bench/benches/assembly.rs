use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shotgun_bench::covered_reads;
use shotgun_core::assembly::{debruijn_assemble, greedy_assemble, noisy_greedy_assemble, sequential_assemble, OverlapScorer};
use shotgun_core::overlap::MapScorerConfig;
use shotgun_core::{Distribution, DmcChannel};
use std::hint::black_box;

fn assemblers(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble");
    group.sample_size(10);
    for g in [2_000usize, 10_000] {
        let l = (2.0 * (g as f64).log2()).round() as usize;
        let rs = covered_reads(g, l, 1.3, 11);
        group.bench_with_input(BenchmarkId::new("greedy", g), rs.blind(), |b, r| b.iter(|| greedy_assemble(black_box(r))));
        group.bench_with_input(BenchmarkId::new("sequential", g), rs.blind(), |b, r| {
            b.iter(|| sequential_assemble(black_box(r)))
        });
        group.bench_with_input(BenchmarkId::new("debruijn", g), rs.blind(), |b, r| {
            b.iter(|| debruijn_assemble(black_box(r), l / 2).unwrap())
        });
        let cfg = MapScorerConfig::new(&Distribution::uniform(4), &DmcChannel::identity(), None).unwrap();
        let scorer = OverlapScorer::Map(cfg);
        group.bench_with_input(BenchmarkId::new("noisy-greedy", g), rs.blind(), |b, r| {
            b.iter(|| noisy_greedy_assemble(black_box(r), &scorer).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, assemblers);
criterion_main!(benches);
