//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails. Pass substrings as
//! arguments (e.g. `ac3 ac10`) to run a subset.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use shotgun_core::assembly::{
    debruijn_assemble, default_kmer_size, greedy_assemble, noisy_greedy_assemble, repeats_assemble, sequential_assemble,
    AssemblyOutcome, OverlapScorer,
};
use shotgun_core::diagnostics::{check_bridging, count_repeat_pairs, coverage_from_starts, find_repeats, RepeatPair};
use shotgun_core::experiment::{estimate_nmin, preset, run_sweep, Algorithm, ExperimentConfig, PRESET_NAMES};
use shotgun_core::overlap::{build_index, MapScorerConfig};
use shotgun_core::reads::{apply_noise, sample_mate_pairs, sample_reads};
use shotgun_core::sequence::{generate_iid, plant_repeats};
use shotgun_core::theory::{d_parameter, istar_general, istar_symmetric, renyi2, renyi2_rate_markov};
use shotgun_core::{Distribution, DmcChannel, DnaSequence, MarkovModel, ReadSet};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

// ---- independent oracles ----

fn read_len(lbar: f64, g: usize) -> usize {
    (lbar * (g as f64).log2()).round() as usize
}

fn ncov(eps: f64, g: usize, l: usize) -> usize {
    let (g, l) = (g as f64, l as f64);
    ((g / l) * (g / (l * eps)).ln()).ceil() as usize
}

/// Equal length and `b` occurs in `a + a`.
fn same_circular(a: &[u8], b: &[u8]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let doubled: Vec<u8> = a.iter().chain(a).copied().collect();
    doubled.windows(b.len()).any(|w| w == b)
}

fn reconstructed(outcome: &AssemblyOutcome, genome: &DnaSequence) -> bool {
    outcome.sequence.as_ref().is_some_and(|s| same_circular(genome.codes(), s.codes()))
}

/// One contig whose placements all differ from the true starts by the same
/// rotation.
fn perfect_layout(outcome: &AssemblyOutcome, reads: &ReadSet) -> bool {
    let [contig] = outcome.contigs.as_slice() else { return false };
    if contig.layout.len() != reads.len() {
        return false;
    }
    let g = reads.genome_len();
    let truth = reads.true_starts();
    let rots: BTreeSet<usize> =
        contig.layout.iter().map(|p| (truth[p.read as usize] + g - p.offset % g) % g).collect();
    let ids: BTreeSet<u32> = contig.layout.iter().map(|p| p.read).collect();
    rots.len() == 1 && ids.len() == reads.len()
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

fn uniform() -> Distribution {
    Distribution::uniform(4)
}

// ---- criteria ----

fn ac1() -> Verdict {
    let h = renyi2(&uniform());
    let ratio = 2.0 / h;
    let mut worst: f64 = 0.0;
    for p in [[0.25, 0.25, 0.25, 0.25], [0.1, 0.2, 0.3, 0.4], [0.7, 0.1, 0.1, 0.1], [0.45, 0.45, 0.05, 0.05]] {
        let dist = Distribution::new(p.to_vec()).unwrap();
        // Every column equal to p: the chain is iid.
        let model = MarkovModel::new([0, 1, 2, 3].map(|i| [p[i]; 4])).unwrap();
        let direct = -(p.iter().map(|x| x * x).sum::<f64>()).log2();
        worst = worst.max((renyi2_rate_markov(&model).unwrap() - direct).abs());
        worst = worst.max((renyi2(&dist) - direct).abs());
    }
    verdict(ratio == 1.0 && worst < 1e-9, format!("2/H2(uniform) = {ratio}, max |markov - iid| = {worst:.2e}"))
}

fn ac2() -> Verdict {
    let t01 = 2.0 / istar_symmetric(0.1).unwrap();
    let t001 = 2.0 / istar_symmetric(0.01).unwrap();
    let mut worst: f64 = 0.0;
    for eps in [0.01, 0.05, 0.1] {
        let general = istar_general(&uniform(), &DmcChannel::symmetric(eps).unwrap()).unwrap().bits;
        worst = worst.max((general - istar_symmetric(eps).unwrap()).abs());
    }
    let pass = (t01 - 5.29).abs() <= 0.05 && (t001 - 2.16).abs() <= 0.05 && worst <= 1e-6;
    verdict(pass, format!("2/I*(0.1) = {t01:.4}, 2/I*(0.01) = {t001:.4}, max |general - closed form| = {worst:.2e}"))
}

fn ac3() -> Verdict {
    let g = 10_000;
    let l = read_len(2.0, g);
    let n = (1.3 * ncov(0.05, g, l) as f64).ceil() as usize;
    let ok = (0..100u64)
        .filter(|&t| {
            let genome = generate_iid(g, &uniform(), 30_000 + t).unwrap();
            let reads = sample_reads(&genome, n, l, 31_000 + t).unwrap();
            reconstructed(&greedy_assemble(reads.blind()), &genome)
        })
        .count();
    verdict(ok >= 95, format!("L={l} N={n}: {ok}/100 exact circular reconstructions"))
}

fn ac4() -> Verdict {
    let g = 10_000;
    let l = read_len(0.8, g);
    let interleaved = (0..100u64)
        .filter(|&t| {
            let genome = generate_iid(g, &uniform(), 40_000 + t).unwrap();
            find_repeats(&genome, l - 1).unwrap().interleaved
        })
        .count();
    let mut cfg = ExperimentConfig::new(g, Algorithm::Greedy, 4);
    cfg.lbar_grid = vec![0.8];
    let est = estimate_nmin(&cfg, l).unwrap();
    verdict(
        interleaved >= 95 && est.nmin.is_none(),
        format!("L={l}: interleaved (L-1)-repeats in {interleaved}/100, N_min = {:?}", est.nmin),
    )
}

fn ac5() -> Verdict {
    let g = 10_000;
    let mut lines = Vec::new();
    let mut pass = true;
    // Sparse settings (lambda <= 0.1) where the Poisson approximation holds;
    // at higher densities tied starts shrink the distinct gap count.
    for (n, l) in [(1000usize, 80usize), (500, 130), (300, 190)] {
        let gaps: Vec<f64> = (0..500u64)
            .map(|t| {
                let genome = generate_iid(g, &uniform(), 50_000 + t).unwrap();
                let reads = sample_reads(&genome, n, l, 51_000 + t + 1000 * l as u64).unwrap();
                coverage_from_starts(g, l, reads.true_starts()).gaps.len() as f64
            })
            .collect();
        let (m, sd) = mean_sd(&gaps);
        let lambda = n as f64 / g as f64;
        let predicted = n as f64 * (-lambda * l as f64).exp();
        let sigma = sd / (gaps.len() as f64).sqrt();
        let ok = (m - predicted).abs() <= 3.0 * sigma;
        pass &= ok;
        let (gf, nf, lf) = (g as f64, n as i32, l as f64);
        let discrete = gf * ((1.0 - lf / gf).powi(nf) - (1.0 - (lf + 1.0) / gf).powi(nf));
        lines.push(format!(
            "N={n} L={l}: gaps {m:.3} vs {predicted:.3} (3 sigma {:.3}, discrete {discrete:.3})",
            3.0 * sigma
        ));
    }
    verdict(pass, lines.join("; "))
}

fn ac6() -> Verdict {
    let g = 10_000;
    let h2 = renyi2(&uniform());
    let genomes: Vec<DnaSequence> = (0..100u64).map(|t| generate_iid(g, &uniform(), 60_000 + t).unwrap()).collect();
    let mut lines = Vec::new();
    let mut pass = true;
    let mut checked = 0;
    for l in 4..=16 {
        let predicted = (g as f64).powi(2) / 2.0 * 2f64.powf(-(l as f64) * h2);
        if predicted < 10.0 {
            continue;
        }
        checked += 1;
        let counts: Vec<f64> = genomes.iter().map(|s| count_repeat_pairs(s, l) as f64).collect();
        let (m, _) = mean_sd(&counts);
        let ok = m >= predicted / 2.0 && m <= predicted * 2.0;
        pass &= ok;
        lines.push(format!("L={l}: {m:.1} vs {predicted:.1}"));
    }
    verdict(pass && checked > 0, lines.join("; "))
}

fn ac7() -> Verdict {
    let g = 10_000;
    let l = read_len(1.5, g);
    let n = (1.3 * ncov(0.05, g, l) as f64).ceil() as usize;
    let k = default_kmer_size(g, l, &uniform());
    let (mut greedy, mut seq, mut dbg) = (0, 0, 0);
    let trials = 200u64;
    for t in 0..trials {
        let genome = generate_iid(g, &uniform(), 70_000 + t).unwrap();
        let reads = sample_reads(&genome, n, l, 71_000 + t).unwrap();
        greedy += reconstructed(&greedy_assemble(reads.blind()), &genome) as usize;
        seq += reconstructed(&sequential_assemble(reads.blind()), &genome) as usize;
        dbg += reconstructed(&debruijn_assemble(reads.blind(), k).unwrap(), &genome) as usize;
    }
    let pct = |x: usize| 100.0 * x as f64 / trials as f64;
    let pass = pct(greedy) >= 90.0 && pct(greedy) - pct(seq) >= 10.0 && pct(greedy) - pct(dbg) >= 10.0;
    verdict(
        pass,
        format!(
            "L={l} N={n} K={k}: greedy {:.1}%, sequential {:.1}%, de Bruijn {:.1}%",
            pct(greedy),
            pct(seq),
            pct(dbg)
        ),
    )
}

fn ac8() -> Verdict {
    let g = 10_000;
    let eps = 0.01;
    let channel = DmcChannel::symmetric(eps).unwrap();
    let scorer = OverlapScorer::Map(MapScorerConfig::new(&uniform(), &channel, None).unwrap());
    let run = |lbar: f64, base: u64| {
        let l = read_len(lbar, g);
        let n = (1.3 * ncov(0.1, g, l) as f64).ceil() as usize;
        let ok = (0..100u64)
            .filter(|&t| {
                let genome = generate_iid(g, &uniform(), base + t).unwrap();
                let reads = sample_reads(&genome, n, l, base + 500 + t).unwrap();
                let noisy = apply_noise(&reads, &channel, base + 900 + t).unwrap();
                perfect_layout(&noisy_greedy_assemble(noisy.blind(), &scorer).unwrap(), &noisy)
            })
            .count();
        (l, n, ok)
    };
    let (l_hi, n_hi, hi) = run(3.0, 80_000);
    let (l_lo, n_lo, lo) = run(1.5, 82_000);
    verdict(
        hi >= 90 && lo < 50,
        format!("L={l_hi} N={n_hi}: {hi}/100 perfect layouts; L={l_lo} N={n_lo}: {lo}/100"),
    )
}

fn ac9() -> Verdict {
    let (g0, m, k, l, j) = (100_000usize, 10usize, 60usize, 30usize, 100usize);
    let d = d_parameter(m, 0.05, &uniform()).unwrap();
    let d_oracle = (1.05 * 2.0 * (m as f64).ln() / (4f64).ln() - 1e-9).ceil() as usize;
    let g = g0 + m * k;
    let span = |j: usize| j as f64 + 2.0 * l as f64 - (2.0 * d as f64 + k as f64);
    let rate_bridge = span(j) / (2.0 * (m as f64).ln());
    let n_bridge = g as f64 / rate_bridge;
    let n = (1.3 * n_bridge.max(ncov(0.1, g, l) as f64)).ceil() as usize;

    let trial = |t: u64, j: usize, n_reads: usize| {
        let base = generate_iid(g0, &uniform(), 90_000 + t).unwrap();
        let repeat = generate_iid(k, &uniform(), 91_000 + t).unwrap();
        let planted = plant_repeats(&base, &repeat, m, 92_000 + t).unwrap();
        let pairs = sample_mate_pairs(&planted.sequence, n_reads / 2, l, j, 93_000 + t).unwrap();
        (planted, pairs)
    };
    let solved = |j: usize, n: usize| {
        (0..100u64)
            .filter(|&t| {
                let (planted, pairs) = trial(t, j, n);
                reconstructed(&repeats_assemble(&pairs.blind(), k, d).unwrap(), &planted.sequence)
            })
            .count()
    };
    let ok = solved(j, n);
    let control = solved(0, n);

    // The bridging bound alone asks for too few reads to cover the genome;
    // report reconstruction there too, and check the unbridged-copy law.
    let n_lit = (1.3 * n_bridge).ceil() as usize;
    let literal = solved(j, n_lit);
    let unbridged: Vec<f64> = (0..100u64)
        .map(|t| {
            let (planted, pairs) = trial(t, j, n_lit);
            let bridged = check_bridging(&pairs, &planted.positions, k, d).unwrap();
            bridged.iter().filter(|b| !**b).count() as f64
        })
        .collect();
    let (mean, sd) = mean_sd(&unbridged);
    // A copy is unbridged when no left mate starts in its span + 1 window.
    let window = span(j) + 1.0;
    let predicted = m as f64 * (1.0 - window / g as f64).powi((n_lit / 2) as i32);
    let sigma = sd / 10.0;
    let freq_ok = (mean - predicted).abs() <= 3.0 * sigma;
    verdict(
        d == 4 && d == d_oracle && ok >= 90 && control <= 20 && freq_ok,
        format!(
            "d={d}, N={n}: {ok}/100 reconstructed; J=0: {control}/100; N={n_lit} (bridging only): {literal}/100, unbridged copies {mean:.3} vs {predicted:.3} (3 sigma {:.3})",
            3.0 * sigma
        ),
    )
}

fn naive_candidates(reads: &[Vec<u8>], ell: usize) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for (i, a) in reads.iter().enumerate() {
        for (j, b) in reads.iter().enumerate() {
            if i != j && a[a.len() - ell..] == b[..ell] {
                out.insert((i as u32, j as u32));
            }
        }
    }
    out
}

/// All left-maximal repeated pairs of length at least `ell`, by direct
/// comparison of every pair of positions.
fn quadratic_repeats(s: &[u8], ell: usize) -> (Vec<RepeatPair>, Vec<RepeatPair>) {
    let g = s.len();
    let at = |i: usize| s[i % g];
    let (mut disjoint, mut overlapping) = (Vec::new(), Vec::new());
    for i in 0..g {
        for j in i + 1..g {
            if at(i + g - 1) == at(j + g - 1) {
                continue;
            }
            let mut len = 0;
            while len < g && at(i + len) == at(j + len) {
                len += 1;
            }
            if len >= ell {
                let pair = RepeatPair { first: i, second: j, length: len };
                let d = j - i;
                if d >= len && g - d >= len {
                    disjoint.push(pair);
                } else {
                    overlapping.push(pair);
                }
            }
        }
    }
    (disjoint, overlapping)
}

/// Whether two disjoint, non-touching repeat pairs alternate around the circle.
fn quadratic_interleaved(pairs: &[RepeatPair], g: usize) -> bool {
    let touch = |s1: usize, l1: usize, s2: usize, l2: usize| (0..l1).any(|a| (0..l2).any(|b| (s1 + a) % g == (s2 + b) % g));
    for (x, a) in pairs.iter().enumerate() {
        for b in &pairs[x + 1..] {
            let touching = [a.first, a.second]
                .iter()
                .any(|&p| touch(p, a.length, b.first, b.length) || touch(p, a.length, b.second, b.length));
            if touching {
                continue;
            }
            let mut marks = [(a.first, 0), (a.second, 0), (b.first, 1), (b.second, 1)];
            marks.sort();
            if marks[0].1 != marks[1].1 && marks[1].1 != marks[2].1 && marks[2].1 != marks[3].1 {
                return true;
            }
        }
    }
    false
}

fn ac10() -> Verdict {
    let mut failures = Vec::new();
    // Candidate pairs.
    for t in 0..30u64 {
        let g = 300 + 20 * t as usize;
        let genome = generate_iid(g, &uniform(), 100_000 + t).unwrap();
        let n = 100 + 13 * t as usize;
        let l = 12 + (t as usize % 5);
        let reads = sample_reads(&genome, n.min(500), l, 101_000 + t).unwrap();
        let raw: Vec<Vec<u8>> = reads.blind().iter().map(<[u8]>::to_vec).collect();
        for ell in 1..=l {
            let index = build_index(reads.blind(), ell).unwrap();
            let got: BTreeSet<(u32, u32)> = index.candidate_pairs().collect();
            if got != naive_candidates(&raw, ell) {
                failures.push(format!("candidates t={t} ell={ell}"));
            }
        }
    }
    // Repeat finding, including low-entropy and planted sequences.
    for t in 0..12u64 {
        let g = 500 + 125 * t as usize;
        let genome = match t % 3 {
            0 => generate_iid(g, &uniform(), 102_000 + t).unwrap(),
            1 => generate_iid(g, &Distribution::new(vec![0.7, 0.1, 0.1, 0.1]).unwrap(), 102_000 + t).unwrap(),
            _ => {
                let base = generate_iid(g - 120, &uniform(), 102_000 + t).unwrap();
                let rep = generate_iid(30, &uniform(), 103_000 + t).unwrap();
                plant_repeats(&base, &rep, 4, t).unwrap().sequence
            }
        };
        for ell in [6usize, 9, 12] {
            let report = find_repeats(&genome, ell).unwrap();
            let (mut dis, mut ovl) = quadratic_repeats(genome.codes(), ell);
            dis.sort();
            ovl.sort();
            let inter = quadratic_interleaved(&dis, genome.len());
            if report.repeat_pairs != dis || report.self_overlapping != ovl || report.interleaved != inter {
                failures.push(format!("repeats t={t} ell={ell}"));
            }
        }
    }
    // Greedy on repeat-free covered instances.
    let mut instances = 0;
    let mut seed = 0u64;
    let mut greedy_failures = 0;
    while instances < 200 {
        seed += 1;
        let g = 300;
        let l = 30;
        let genome = generate_iid(g, &uniform(), 104_000 + seed).unwrap();
        let reads = sample_reads(&genome, 100, l, 105_000 + seed).unwrap();
        let mut starts = reads.true_starts().to_vec();
        starts.sort_unstable();
        let min_overlap = (0..starts.len())
            .map(|x| {
                let next = starts[(x + 1) % starts.len()];
                let gap = (next + g - starts[x]) % g;
                l as i64 - gap as i64
            })
            .min()
            .unwrap();
        let (dis, ovl) = quadratic_repeats(genome.codes(), 1);
        let longest = dis.iter().chain(&ovl).map(|p| p.length).max().unwrap_or(0) as i64;
        if min_overlap <= longest {
            continue;
        }
        instances += 1;
        if !reconstructed(&greedy_assemble(reads.blind()), &genome) {
            greedy_failures += 1;
        }
    }
    if greedy_failures > 0 {
        failures.push(format!("greedy failed on {greedy_failures}/200 repeat-free instances"));
    }
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            format!("candidates, repeats and 200 greedy instances ({seed} drawn) agree with brute force")
        } else {
            failures.join("; ")
        },
    )
}

fn ac11() -> Verdict {
    let mut diffs = Vec::new();
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap();
        let a = run_sweep(&cfg).unwrap().to_csv_string();
        let b = run_sweep(&cfg).unwrap().to_csv_string();
        if a != b {
            diffs.push(*name);
        }
    }
    verdict(
        diffs.is_empty(),
        format!("{} presets run twice; differing: {:?}", PRESET_NAMES.len(), diffs),
    )
}

type Criterion = (&'static str, &'static str, fn() -> Verdict, Option<Duration>);

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let min = |m: u64| Some(Duration::from_secs(60 * m));
    let criteria: Vec<Criterion> = vec![
        ("ac1", "threshold arithmetic", ac1, Some(Duration::from_secs(1))),
        ("ac2", "noisy thresholds", ac2, Some(Duration::from_secs(10))),
        ("ac3", "phase transition, achievability", ac3, min(5)),
        ("ac4", "phase transition, converse", ac4, min(5)),
        ("ac5", "coverage law", ac5, min(2)),
        ("ac6", "expected repeats", ac6, min(2)),
        ("ac7", "algorithm ordering", ac7, None),
        ("ac8", "noisy assembly", ac8, min(10)),
        ("ac9", "repeats pipeline", ac9, min(15)),
        ("ac10", "oracle equivalences", ac10, min(2)),
        ("ac11", "sweep determinism", ac11, None),
    ];
    let mut failed = 0;
    let mut ran = 0;
    for (id, name, f, limit) in criteria {
        if !filters.is_empty() && !filters.iter().any(|x| x == id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let v = f();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|lim| took <= lim);
        let pass = v.pass && in_time;
        failed += !pass as usize;
        let budget = limit.map_or(String::new(), |lim| format!(" / {}s", lim.as_secs()));
        println!(
            "{} {} {}: {} [{:.1}s{}]",
            id.to_uppercase(),
            if pass { "PASS" } else { "FAIL" },
            name,
            v.detail,
            took.as_secs_f64(),
            budget
        );
    }
    println!("acceptance: {}/{} criteria passed", ran - failed, ran);
    if failed > 0 {
        std::process::exit(1);
    }
}
