use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shotgun_bench::covered_reads;
use shotgun_core::overlap::{build_index, map_overlap_score, suffix_prefix_overlap, MapScorerConfig};
use shotgun_core::{Distribution, DmcChannel};
use std::hint::black_box;

fn index(c: &mut Criterion) {
    let mut group = c.benchmark_group("lmer_index");
    group.sample_size(10);
    for g in [10_000usize, 100_000] {
        let rs = covered_reads(g, 32, 1.3, 5);
        for ell in [12usize, 24] {
            group.bench_with_input(BenchmarkId::new(format!("ell{ell}"), g), rs.blind(), |b, r| {
                b.iter(|| build_index(black_box(r), ell).unwrap().candidate_pairs().count())
            });
        }
    }
    group.finish();
}

fn pairwise(c: &mut Criterion) {
    let rs = covered_reads(2_000, 64, 1.0, 9);
    let (a, b) = (rs.blind().read(0).to_vec(), rs.blind().read(1).to_vec());
    c.bench_function("suffix_prefix_overlap/64", |bn| bn.iter(|| suffix_prefix_overlap(black_box(&a), black_box(&b))));
    let cfg = MapScorerConfig::new(&Distribution::uniform(4), &DmcChannel::symmetric(0.05).unwrap(), None).unwrap();
    c.bench_function("map_overlap_score/64", |bn| {
        bn.iter(|| map_overlap_score(black_box(&a), black_box(&b), &cfg).unwrap())
    });
}

criterion_group!(benches, index, pairwise);
criterion_main!(benches);
