//! Greedy assembly of noisy reads with a statistical overlap score.
//!
//! Candidate pairs come from shared exact `k`-mers; each is tested at the
//! overlap lengths its seeds imply, scored by the largest passing length and
//! merged in order of decreasing score, ties broken by `(i, j)`. Contig ends left over are then scored
//! against all contig starts. With the noiseless channel and the default
//! threshold this reproduces [`greedy_assemble`](super::greedy_assemble).

use super::greedy::MergeState;
use super::outcome::{close_noisy, consensus, AssemblyOutcome, Contig, FailureReason};
use crate::error::{Error, Result};
use crate::overlap::{hamming_overlap_score, map_score_unchecked, pack, MapScorerConfig};
use crate::reads::BlindReads;

/// Bounds on the seed length used for candidate discovery.
pub const MIN_SEED_K: usize = 6;
pub const MAX_SEED_K: usize = 12;
/// Seed groups larger than this are skipped as low-complexity.
const MAX_SEED_GROUP: usize = 2000;
/// Neighbour lists longer than this are skipped when inferring overlaps.
const MAX_NEIGHBOURS: usize = 256;
/// Cap on end/start pairs scored in the final pass.
pub const MAX_FINAL_PAIRS: usize = 2_000_000;

/// `ceil(log4(windows)) - 2`, clamped: chance seed hits stay within a small
/// multiple of the window count, while one read error cannot break every
/// seed of an overlap longer than `2k`.
pub fn seed_len(n_windows: usize, l: usize) -> usize {
    let k = (n_windows.max(1) as f64).log(4.0).ceil() as usize;
    k.saturating_sub(2).clamp(MIN_SEED_K, MAX_SEED_K).min(l)
}

#[derive(Debug, Clone, PartialEq)]
pub enum OverlapScorer {
    Map(MapScorerConfig),
    /// Accept when the mismatch fraction is at most `alpha`.
    Hamming { alpha: f64 },
}

impl OverlapScorer {
    fn score(&self, ri: &[u8], rj: &[u8]) -> usize {
        match self {
            OverlapScorer::Map(cfg) => map_score_unchecked(ri, rj, cfg, ri.len()),
            OverlapScorer::Hamming { alpha } => hamming_overlap_score(ri, rj, *alpha),
        }
    }

    /// Whether the length-`len` suffix of `ri` and prefix of `rj` pass.
    fn passes_at(&self, ri: &[u8], rj: &[u8], len: usize) -> bool {
        let (x, y) = (&ri[ri.len() - len..], &rj[..len]);
        match self {
            OverlapScorer::Map(cfg) => cfg.llr(x, y) >= len as f64 * cfg.theta(),
            OverlapScorer::Hamming { alpha } => {
                x.iter().zip(y).filter(|(a, b)| a != b).count() as f64 <= alpha * len as f64
            }
        }
    }

    fn wraps(&self, symbols: &[u8], g: usize) -> Option<crate::sequence::DnaSequence> {
        match self {
            OverlapScorer::Map(cfg) => close_noisy(symbols, g, cfg),
            OverlapScorer::Hamming { alpha } => {
                if symbols.len() < g {
                    return None;
                }
                let extra = symbols.len() - g;
                let dist = symbols[g..].iter().zip(&symbols[..extra]).filter(|(a, b)| a != b).count();
                (dist as f64 <= alpha * extra as f64)
                    .then(|| crate::sequence::DnaSequence::from_codes(symbols[..g].to_vec()).expect("codes"))
            }
        }
    }
}

/// Candidate `(i, j, len)` overlaps implied by shared `k`-mers, scored by
/// the largest implied length that passes the test.
fn seeded_scores(reads: &BlindReads, k: usize, scorer: &OverlapScorer) -> Vec<(usize, u32, u32)> {
    let l = reads.read_len();
    let mut entries: Vec<(u64, u32, u16)> = Vec::with_capacity(reads.len() * (l - k + 1));
    for (id, r) in reads.iter().enumerate() {
        for (pos, w) in r.windows(k).enumerate() {
            entries.push((pack(w) as u64, id as u32, pos as u16));
        }
    }
    entries.sort_unstable();
    let mut implied: Vec<(u32, u32, u16)> = Vec::new();
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && entries[end].0 == entries[start].0 {
            end += 1;
        }
        let group = &entries[start..end];
        if group.len() <= MAX_SEED_GROUP {
            for (x, &(_, a, pa)) in group.iter().enumerate() {
                for &(_, b, pb) in &group[x + 1..] {
                    if a == b {
                        continue;
                    }
                    // The read whose seed sits further right is the left read.
                    if pa >= pb {
                        implied.push((a, b, l as u16 - (pa - pb)));
                    }
                    if pb >= pa {
                        implied.push((b, a, l as u16 - (pb - pa)));
                    }
                }
            }
        }
        start = end;
    }
    implied.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(y.2.cmp(&x.2)));
    implied.dedup();
    let mut scored = Vec::new();
    let mut idx = 0;
    while idx < implied.len() {
        let (i, j, _) = implied[idx];
        let mut next = idx;
        let mut best = None;
        while next < implied.len() && implied[next].0 == i && implied[next].1 == j {
            let len = implied[next].2 as usize;
            if best.is_none() && scorer.passes_at(reads.read(i as usize), reads.read(j as usize), len) {
                best = Some(len);
            }
            next += 1;
        }
        if let Some(w) = best {
            scored.push((w, i, j));
        }
        idx = next;
    }
    scored
}

/// Overlaps implied through a shared neighbour: if `a` and `b` both overlap
/// `c` (or are both overlapped by `c`), their relative shift is known. Only
/// lengths of at least `k` are tried, which seeds would have found without
/// read errors; pairs already scored are skipped.
fn transitive_scores(reads: &BlindReads, k: usize, scorer: &OverlapScorer, scored: &[(usize, u32, u32)]) -> Vec<(usize, u32, u32)> {
    let l = reads.read_len();
    let mut known: Vec<(u32, u32)> = scored.iter().map(|&(_, i, j)| (i, j)).collect();
    known.sort_unstable();
    // (shared neighbour, shift of the other read relative to it, other read)
    let mut preds: Vec<(u32, usize, u32)> = scored.iter().map(|&(w, i, j)| (j, l - w, i)).collect();
    let mut succs: Vec<(u32, usize, u32)> = scored.iter().map(|&(w, i, j)| (i, l - w, j)).collect();
    preds.sort_unstable();
    succs.sort_unstable();
    let mut implied: Vec<(u32, u32, usize)> = Vec::new();
    for (list, before) in [(&preds, true), (&succs, false)] {
        for group in list.chunk_by(|x, y| x.0 == y.0) {
            if group.len() > MAX_NEIGHBOURS {
                continue;
            }
            for (x, &(_, sa, a)) in group.iter().enumerate() {
                for &(_, sb, b) in &group[x + 1..] {
                    // Shifts grow away from the neighbour: predecessors with a
                    // larger shift sit further left, successors further right.
                    let d = sa.abs_diff(sb);
                    if d + k > l {
                        continue;
                    }
                    let orders: &[(u32, u32)] = match (before, sa.cmp(&sb)) {
                        (_, std::cmp::Ordering::Equal) => &[(a, b), (b, a)],
                        (true, std::cmp::Ordering::Greater) | (false, std::cmp::Ordering::Less) => &[(a, b)],
                        _ => &[(b, a)],
                    };
                    for &(left, right) in orders {
                        if known.binary_search(&(left, right)).is_err() {
                            implied.push((left, right, l - d));
                        }
                    }
                }
            }
        }
    }
    implied.sort_unstable_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(y.2.cmp(&x.2)));
    implied.dedup();
    let mut out = Vec::new();
    for group in implied.chunk_by(|x, y| x.0 == y.0 && x.1 == y.1) {
        let (i, j) = (group[0].0, group[0].1);
        if let Some(&(_, _, w)) =
            group.iter().find(|&&(_, _, w)| scorer.passes_at(reads.read(i as usize), reads.read(j as usize), w))
        {
            out.push((w, i, j));
        }
    }
    out
}

fn merge_sorted(state: &mut MergeState, scored: &mut [(usize, u32, u32)], l: usize, hist: &mut [usize]) {
    scored.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for &(w, i, j) in scored.iter() {
        if state.can_merge(i, j) {
            state.merge(i, j, (l - w) as u32);
            hist[w] += 1;
        }
    }
}

pub fn noisy_greedy_assemble(reads: &BlindReads, scorer: &OverlapScorer) -> Result<AssemblyOutcome> {
    if reads.is_empty() {
        return Ok(AssemblyOutcome::failure(FailureReason::NoReads));
    }
    if let OverlapScorer::Map(cfg) = scorer {
        // Surface impossible symbols once instead of per pair.
        for r in reads.iter() {
            crate::overlap::map_overlap_test(r, r, cfg)?;
        }
    }
    if let OverlapScorer::Hamming { alpha } = scorer {
        if !(0.0..=1.0).contains(alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
        }
    }
    let l = reads.read_len();
    let k = seed_len(reads.len() * l, l);
    let mut state = MergeState::new(reads.len());
    let mut hist = vec![0usize; l + 1];

    let mut scored = seeded_scores(reads, k, scorer);
    let rescued = transitive_scores(reads, k, scorer, &scored);
    scored.extend(rescued);
    merge_sorted(&mut state, &mut scored, l, &mut hist);

    let ends = state.ends();
    let starts = state.starts();
    if ends.len().saturating_mul(starts.len()) <= MAX_FINAL_PAIRS {
        let mut rest = Vec::new();
        for &i in &ends {
            for &j in &starts {
                if state.can_merge(i, j) {
                    let w = scorer.score(reads.read(i as usize), reads.read(j as usize));
                    if w > 0 {
                        rest.push((w, i, j));
                    }
                }
            }
        }
        merge_sorted(&mut state, &mut rest, l, &mut hist);
    } else {
        log::warn!("{} x {} contig ends; skipping the final pass", ends.len(), starts.len());
    }

    let contigs: Vec<Contig> = state
        .chains()
        .into_iter()
        .map(|c| Contig { symbols: consensus(reads, &c.placements, &[]), layout: c.placements })
        .collect();
    if contigs.len() == 1 {
        if let Some(seq) = scorer.wraps(&contigs[0].symbols, reads.genome_len()) {
            return Ok(AssemblyOutcome::circular(seq, contigs, hist));
        }
    }
    Ok(AssemblyOutcome::contig_set(contigs, hist))
}
