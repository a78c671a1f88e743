//! Small-instance oracles for the assemblers and layout checks.

use shotgun_core::assembly::{
    debruijn_assemble, greedy_assemble, noisy_greedy_assemble, repeats_assemble, sequential_assemble, OverlapScorer,
};
use shotgun_core::diagnostics::{count_repeat_pairs, find_repeats, verify_layout};
use shotgun_core::overlap::MapScorerConfig;
use shotgun_core::reads::{sample_mate_pairs, sample_reads, BlindReads};
use shotgun_core::sequence::{generate_iid, plant_repeats, sequences_equal_circular};
use shotgun_core::theory::expected_repeats;
use shotgun_core::{AssemblyOutcome, Contig, DmcChannel, Distribution, DnaSequence, Placement, ReadSet};

fn uniform() -> Distribution {
    Distribution::uniform(4)
}

/// Longest repeat (either kind) in a circular sequence.
fn longest_repeat(s: &DnaSequence) -> usize {
    let r = find_repeats(s, 1).unwrap();
    r.repeat_pairs.iter().chain(&r.self_overlapping).map(|p| p.length).max().unwrap_or(0)
}

/// Every length-`l` window, in order.
fn all_windows(s: &DnaSequence, l: usize) -> ReadSet {
    let windows: Vec<Vec<u8>> = (0..s.len()).map(|i| s.window(i, l)).collect();
    ReadSet::from_parts(BlindReads::new(s.len(), l, &windows).unwrap(), (0..s.len()).collect()).unwrap()
}

fn same(outcome: &AssemblyOutcome, s: &DnaSequence) -> bool {
    outcome.sequence.as_ref().is_some_and(|x| sequences_equal_circular(x, s))
}

#[test]
fn dense_small_instances_reconstruct() {
    let (g, l) = (200, 12);
    let mut tried = 0;
    for seed in 0..400u64 {
        let s = generate_iid(g, &uniform(), seed).unwrap();
        let longest = longest_repeat(&s);
        if longest >= l - 1 {
            continue;
        }
        tried += 1;
        let reads = all_windows(&s, l);
        let greedy = greedy_assemble(reads.blind());
        let seq = sequential_assemble(reads.blind());
        let dbg = debruijn_assemble(reads.blind(), longest + 2).unwrap();
        assert!(same(&greedy, &s) && same(&seq, &s) && same(&dbg, &s), "seed {seed}");
        assert!(verify_layout(&greedy, &reads).unwrap());
    }
    assert!(tried >= 20, "{tried}");
}

#[test]
fn debruijn_sees_repeat_ambiguity() {
    // x and y alternate around the circle: two Eulerian circuits.
    let x = generate_iid(20, &uniform(), 1).unwrap();
    let y = generate_iid(20, &uniform(), 2).unwrap();
    let fill: Vec<DnaSequence> = (3..7).map(|k| generate_iid(40, &uniform(), k).unwrap()).collect();
    let mut codes = Vec::new();
    for (rep, f) in [&x, &y, &x, &y].into_iter().zip(&fill) {
        codes.extend_from_slice(rep.codes());
        codes.extend_from_slice(f.codes());
    }
    let s = DnaSequence::from_codes(codes).unwrap();
    let reads = all_windows(&s, 30);
    let out = debruijn_assemble(reads.blind(), 12).unwrap();
    assert!(out.ambiguous || out.sequence.is_none(), "{:?}", out.kind);
}

#[test]
fn noiseless_noisy_greedy_matches_greedy() {
    let scorer = OverlapScorer::Map(MapScorerConfig::new(&uniform(), &DmcChannel::identity(), None).unwrap());
    for seed in 0..50u64 {
        let s = generate_iid(1000, &uniform(), 100 + seed).unwrap();
        let reads = sample_reads(&s, 300, 24, 200 + seed).unwrap();
        let a = greedy_assemble(reads.blind());
        let b = noisy_greedy_assemble(reads.blind(), &scorer).unwrap();
        assert_eq!(a.kind, b.kind, "seed {seed}");
        assert_eq!(same(&a, &s), same(&b, &s), "seed {seed}");
        assert_eq!(a.contigs.len(), b.contigs.len(), "seed {seed}");
    }
}

#[test]
fn single_repeat_copy_assembles() {
    let base = generate_iid(3000, &uniform(), 7).unwrap();
    let rep = generate_iid(40, &uniform(), 8).unwrap();
    let planted = plant_repeats(&base, &rep, 1, 9).unwrap();
    let pairs = sample_mate_pairs(&planted.sequence, 1500, 30, 40, 10).unwrap();
    let out = repeats_assemble(&pairs.blind(), 40, 4).unwrap();
    assert!(same(&out, &planted.sequence), "{:?}", out.failure);
}

#[test]
fn repeat_counts_near_twelve() {
    let (g, l) = (10_000, 11);
    let predicted = expected_repeats(g, l, &uniform());
    assert!((predicted - 11.9).abs() < 0.05);
    let inside = (0..100u64)
        .filter(|&t| (4..=36).contains(&count_repeat_pairs(&generate_iid(g, &uniform(), 500 + t).unwrap(), l)))
        .count();
    assert!(inside >= 90, "{inside}");
}

#[test]
fn layout_swap_across_interleaved_repeats_is_rejected() {
    // a x b y c x d y: swapping b and d gives the same reads.
    let part = |k: u64, n: usize| generate_iid(n, &uniform(), k).unwrap().into_codes();
    let (x, y) = (part(1, 15), part(2, 15));
    let (a, b, c, d) = (part(3, 30), part(4, 30), part(5, 30), part(6, 30));
    let order = [&a, &x, &b, &y, &c, &x, &d, &y];
    let truth: Vec<u8> = order.iter().flat_map(|v| v.iter().copied()).collect();
    let s = DnaSequence::from_codes(truth).unwrap();
    let g = s.len();
    let l = 10;
    let reads = all_windows(&s, l);
    let layout: Vec<Placement> = (0..g).map(|i| Placement { read: i as u32, offset: i }).collect();
    let outcome = |layout: Vec<Placement>| {
        AssemblyOutcome::contig_set(vec![Contig { symbols: s.codes().to_vec(), layout }], Vec::new())
    };
    assert!(verify_layout(&outcome(layout.clone()), &reads).unwrap());
    let rotated: Vec<Placement> =
        layout.iter().map(|p| Placement { read: p.read, offset: (p.offset + 37) % g }).collect();
    assert!(verify_layout(&outcome(rotated), &reads).unwrap());
    // b starts at 45, d at 135; exchange the reads lying wholly inside them.
    let swapped: Vec<Placement> = layout
        .iter()
        .map(|p| {
            let o = p.offset;
            let offset = if (45..=45 + 30 - l).contains(&o) {
                o + 90
            } else if (135..=135 + 30 - l).contains(&o) {
                o - 90
            } else {
                o
            };
            Placement { read: p.read, offset }
        })
        .collect();
    assert!(!verify_layout(&outcome(swapped), &reads).unwrap());
}

#[test]
fn debruijn_needs_overlaps_of_k() {
    let (g, l) = (2000usize, 30usize);
    let k = shotgun_core::assembly::default_kmer_size(g, l, &uniform());
    let scale = g as f64 * (g as f64).ln() / (l - k) as f64;
    let rate = |factor: f64| {
        let n = (factor * scale) as usize;
        (0..40u64)
            .filter(|&t| {
                let s = generate_iid(g, &uniform(), 700 + t).unwrap();
                let reads = sample_reads(&s, n, l, 800 + t).unwrap();
                same(&debruijn_assemble(reads.blind(), k).unwrap(), &s)
            })
            .count()
    };
    let (lo, hi) = (rate(0.5), rate(2.0));
    assert!(lo <= 4 && hi >= 36, "K={k}: {lo}/40 at half, {hi}/40 at double");
}
