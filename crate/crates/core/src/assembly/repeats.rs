//! Assembly of a genome carrying many copies of one long repeat, using mate
//! pairs to order the pieces between copies.
//!
//! 1. The repeat `x` is found as the longest chain of high-multiplicity
//!    `k`-mers, and must have the declared length `K`.
//! 2. Reads lying entirely inside `x` are dropped.
//! 3. Greedy merging runs with two extra strings: the head `a` of `x` as an
//!    unlimited sink and its tail `b` as an unlimited source. Every contig
//!    must then read `b U a`, the unique stretch `U` between two copies.
//! 4. A mate pair whose left read sits in the last part of contig `C` (at
//!    least `d` symbols before the copy) and whose right read sits in the
//!    first part of `C'` links `C -> C'`. The links must form one cycle.

use std::collections::{BTreeMap, HashMap};

use super::greedy::{greedy_assemble, run_stages, spell, MergeState};
use super::outcome::{AssemblyOutcome, Contig, FailureReason, Placement};
use crate::error::{Error, Result};
use crate::overlap::pack;
use crate::reads::{BlindMatePairs, BlindReads};
use crate::sequence::DnaSequence;

/// Multiplicity, relative to the median, above which a `k`-mer counts as
/// repeated.
pub const REPEAT_FOLD: usize = 3;

fn count_kmer_len(l: usize, repeat_len: usize) -> usize {
    (2 * l / 3).max(l.min(12)).min(l).min(repeat_len).max(1)
}

/// The repeat as seen through `k`-mer counts.
///
/// Starting from the most frequent `k`-mer, the chain of over-represented
/// `k`-mers is extended while each step is unambiguous. Copies that happen to
/// share a flanking symbol can stretch the chain past the repeat, so when
/// `repeat_len` is given the window of that length with the largest total
/// count is returned.
pub fn find_repeat_candidate(reads: &BlindReads, k: usize, repeat_len: Option<usize>) -> Option<Vec<u8>> {
    let mut keys: Vec<u128> = reads.iter().flat_map(|r| r.windows(k).map(pack)).collect();
    if keys.is_empty() {
        return None;
    }
    keys.sort_unstable();
    let mut counted: Vec<(u128, usize)> = Vec::new();
    for key in keys {
        match counted.last_mut() {
            Some((k0, c)) if *k0 == key => *c += 1,
            _ => counted.push((key, 1)),
        }
    }
    let mut counts: Vec<usize> = counted.iter().map(|&(_, c)| c).collect();
    counts.sort_unstable();
    let median = counts[counts.len() / 2];
    let threshold = (REPEAT_FOLD * median).max(3);
    let high: Vec<(u128, usize)> = counted.into_iter().filter(|&(_, c)| c >= threshold).collect();
    let &(seed, seed_count) = high.iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))?;
    let count_of = |key: u128| high.binary_search_by_key(&key, |&(k, _)| k).ok().map(|i| high[i].1);
    let mask = if 2 * k >= 128 { u128::MAX } else { (1u128 << (2 * k)) - 1 };
    let succs = |key: u128| -> Vec<u128> {
        (0..4u128).map(|c| ((key << 2) & mask) | c).filter(|&n| count_of(n).is_some()).collect()
    };
    let preds = |key: u128| -> Vec<u128> {
        (0..4u128).map(|c| (key >> 2) | (c << (2 * (k - 1)))).filter(|&p| count_of(p).is_some()).collect()
    };

    let mut right = vec![(seed, seed_count)];
    let mut cur = seed;
    while right.len() <= high.len() {
        match succs(cur).as_slice() {
            [s] if preds(*s) == [cur] && *s != seed => {
                cur = *s;
                right.push((cur, count_of(cur).unwrap()));
            }
            _ => break,
        }
    }
    let mut left = Vec::new();
    cur = seed;
    while left.len() + right.len() <= high.len() {
        match preds(cur).as_slice() {
            [p] if succs(*p) == [cur] && *p != seed => {
                cur = *p;
                left.push((cur, count_of(cur).unwrap()));
            }
            _ => break,
        }
    }
    left.reverse();
    left.extend(right);
    let chain = left;

    let span = match repeat_len {
        Some(r) if r >= k && r - k + 1 <= chain.len() => r - k + 1,
        _ => chain.len(),
    };
    let best = (0..=chain.len() - span)
        .max_by_key(|&s| (chain[s..s + span].iter().map(|&(_, c)| c).sum::<usize>(), std::cmp::Reverse(s)))
        .unwrap();
    let window = &chain[best..best + span];
    let mut seq: Vec<u8> = (0..k).rev().map(|i| ((window[0].0 >> (2 * i)) & 3) as u8).collect();
    seq.extend(window[1..].iter().map(|&(key, _)| (key & 3) as u8));
    Some(seq)
}

/// Reassemble a genome with repeated copies of a length-`repeat_len` string
/// from mate pairs, using bridging reads that extend at least `d` symbols
/// past the repeat on both sides.
pub fn repeats_assemble(pairs: &BlindMatePairs, repeat_len: usize, d: usize) -> Result<AssemblyOutcome> {
    let reads = &pairs.reads;
    let l = reads.read_len();
    if reads.is_empty() {
        return Ok(AssemblyOutcome::failure(FailureReason::NoReads));
    }
    if repeat_len < l {
        return Err(Error::InvalidParameter(format!("repeat length {repeat_len} shorter than reads ({l})")));
    }
    let x = match find_repeat_candidate(reads, count_kmer_len(l, repeat_len), Some(repeat_len)) {
        Some(x) if 2 * x.len() >= repeat_len => x,
        // Nothing repeated at high multiplicity: a single copy is just
        // ordinary sequence.
        _ => return Ok(greedy_assemble(reads)),
    };
    if x.len() != repeat_len {
        return Ok(AssemblyOutcome::failure(FailureReason::RepeatNotFound { found_len: x.len() }));
    }

    let mut inside: Vec<&[u8]> = x.windows(l).collect();
    inside.sort_unstable();
    let kept: Vec<usize> = (0..reads.len()).filter(|&i| inside.binary_search(&reads.read(i)).is_err()).collect();
    let mut with_anchors: Vec<Vec<u8>> = kept.iter().map(|&i| reads.read(i).to_vec()).collect();
    let a = x[..l].to_vec();
    let b = x[repeat_len - l..].to_vec();
    with_anchors.push(a.clone());
    with_anchors.push(b.clone());
    let ext = BlindReads::new(reads.genome_len(), l, &with_anchors)?;
    let mut state = MergeState::with_anchors(kept.len());
    let hist = run_stages(&ext, &mut state, None)?;

    let chains = state.chains();
    let mut contigs = Vec::with_capacity(chains.len());
    let mut copy_at = Vec::with_capacity(chains.len());
    let mut broken = 0;
    for chain in &chains {
        let mut symbols = spell(&ext, &chain.placements);
        let layout: Vec<Placement> =
            chain.placements.iter().map(|p| Placement { read: kept[p.read as usize] as u32, offset: p.offset }).collect();
        match (chain.from_source, chain.to_sink) {
            (true, Some(end)) if end >= l => {
                symbols.resize(end + l, 0);
                symbols[..l].copy_from_slice(&b);
                symbols[end..end + l].copy_from_slice(&a);
                copy_at.push(end);
            }
            _ => {
                broken += 1;
                copy_at.push(usize::MAX);
            }
        }
        contigs.push(Contig { symbols, layout });
    }
    let done = |reason| Ok(AssemblyOutcome::contig_set(contigs.clone(), hist.clone()).with_failure(reason));
    if broken > 0 {
        return done(FailureReason::BrokenContigs { count: broken });
    }

    let span = 2 * l as i64 + pairs.separation as i64 - repeat_len as i64;
    let (lo, hi) = (d as i64, span - d as i64);
    let mut tail: HashMap<&[u8], Vec<(usize, i64)>> = HashMap::new();
    let mut head: HashMap<&[u8], Vec<(usize, i64)>> = HashMap::new();
    for (c, contig) in contigs.iter().enumerate() {
        let e = copy_at[c] as i64;
        for off in lo..=hi {
            let p = e - off;
            if p >= 0 {
                tail.entry(&contig.symbols[p as usize..p as usize + l]).or_default().push((c, off));
            }
            if off + l as i64 <= contig.len() as i64 && off >= 0 {
                head.entry(&contig.symbols[off as usize..off as usize + l]).or_default().push((c, off));
            }
        }
    }
    let n = contigs.len();
    let mut votes: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
    let mut ambiguous = vec![false; n];
    for p in 0..pairs.n_pairs() {
        let (left, right) = pairs.pair(p);
        let Some(cands) = tail.get(left) else { continue };
        let mut links: Vec<(usize, usize)> = Vec::new();
        for &(c, off) in cands {
            if let Some(hits) = head.get(right) {
                links.extend(hits.iter().filter(|&&(_, q)| q == span - off).map(|&(c2, _)| (c, c2)));
            }
        }
        links.sort_unstable();
        links.dedup();
        match links.as_slice() {
            [] => {}
            [(c, c2)] => *votes[*c].entry(*c2).or_default() += 1,
            many => many.iter().for_each(|&(c, _)| ambiguous[c] = true),
        }
    }
    let mut succ = vec![0usize; n];
    for c in 0..n {
        match votes[c].len() {
            0 if ambiguous[c] => return done(FailureReason::AmbiguousIdentification { contig: c }),
            0 => return done(FailureReason::UnbridgedRepeat { contig: c }),
            1 => succ[c] = *votes[c].keys().next().unwrap(),
            _ => return done(FailureReason::ConflictingBridges { contig: c }),
        }
    }
    let mut order = vec![0usize];
    while order.len() < n {
        let nxt = succ[*order.last().unwrap()];
        if nxt == 0 {
            break;
        }
        order.push(nxt);
    }
    if order.len() != n || succ[*order.last().unwrap()] != 0 {
        return done(FailureReason::OrderingNotCyclic);
    }
    let mut genome = Vec::new();
    for &c in &order {
        genome.extend_from_slice(&contigs[c].symbols[l..copy_at[c]]);
        genome.extend_from_slice(&x);
    }
    let seq = DnaSequence::from_codes(genome)?;
    Ok(AssemblyOutcome::circular(seq, contigs, hist))
}
