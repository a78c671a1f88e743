//! Ground-truth checks: coverage, repeat structure, layout correctness and
//! repeat bridging. These read true positions and never feed assemblers.

use serde::{Deserialize, Serialize};

use crate::assembly::AssemblyOutcome;
use crate::error::{Error, Result};
use crate::reads::{MatePairSet, ReadSet};
use crate::sequence::DnaSequence;
use crate::theory::bridging_span;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub covered: bool,
    /// Uncovered stretches as `(start, length)`.
    pub gaps: Vec<(usize, usize)>,
    /// Maximal covered arcs.
    pub islands: usize,
}

pub fn check_coverage(reads: &ReadSet) -> CoverageReport {
    coverage_from_starts(reads.genome_len(), reads.read_len(), reads.true_starts())
}

pub fn coverage_from_starts(g: usize, l: usize, starts: &[usize]) -> CoverageReport {
    if starts.is_empty() {
        return CoverageReport { covered: g == 0, gaps: vec![(0, g)], islands: 0 };
    }
    let mut s: Vec<usize> = starts.to_vec();
    s.sort_unstable();
    s.dedup();
    let mut gaps = Vec::new();
    for (k, &a) in s.iter().enumerate() {
        let next = if k + 1 < s.len() { s[k + 1] } else { s[0] + g };
        if next - a > l {
            gaps.push(((a + l) % g, next - a - l));
        }
    }
    gaps.sort_unstable();
    let islands = gaps.len().max(1);
    CoverageReport { covered: gaps.is_empty(), gaps, islands }
}

/// Two occurrences of the same string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepeatPair {
    pub first: usize,
    pub second: usize,
    pub length: usize,
}

impl RepeatPair {
    fn disjoint(&self, g: usize) -> bool {
        let d = self.second - self.first;
        d >= self.length && g - d >= self.length
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepeatReport {
    /// Maximal repeats of length at least `ell` with disjoint copies.
    pub repeat_pairs: Vec<RepeatPair>,
    /// Repeats whose two copies overlap.
    pub self_overlapping: Vec<RepeatPair>,
    pub interleaved: bool,
    /// Some `ell`-mer occurs at three pairwise disjoint places.
    pub triple: bool,
}

fn circular_arc_contains(a: usize, b: usize, x: usize) -> bool {
    // Strictly inside the arc from a forward to b.
    if a < b {
        a < x && x < b
    } else {
        x > a || x < b
    }
}

fn intervals_overlap(s1: usize, l1: usize, s2: usize, l2: usize, g: usize) -> bool {
    let d = (s2 + g - s1) % g;
    d < l1 || (g - d) % g < l2
}

/// Maximal exact repeats of length at least `ell` in a circular sequence.
pub fn find_repeats(s: &DnaSequence, ell: usize) -> Result<RepeatReport> {
    let g = s.len();
    if ell == 0 || ell > g {
        return Err(Error::InvalidParameter(format!("repeat length {ell} not in [1, {g}]")));
    }
    let doubled: Vec<u8> = s.codes().iter().chain(s.codes().iter()).copied().collect();
    let at = |i: usize| doubled[i % g];
    let mut order: Vec<usize> = (0..g).collect();
    order.sort_unstable_by(|&a, &b| doubled[a..a + ell].cmp(&doubled[b..b + ell]).then(a.cmp(&b)));

    let mut pairs = Vec::new();
    let mut overlapping = Vec::new();
    let mut triple = false;
    let mut start = 0;
    while start < g {
        let mut end = start + 1;
        while end < g && doubled[order[end]..order[end] + ell] == doubled[order[start]..order[start] + ell] {
            end += 1;
        }
        let mut group: Vec<usize> = order[start..end].to_vec();
        group.sort_unstable();
        if group.len() >= 3 {
            let mut picked = vec![group[0]];
            for &p in &group[1..] {
                if p - picked.last().unwrap() >= ell {
                    picked.push(p);
                }
            }
            while picked.len() >= 2 && picked[0] + g - picked.last().unwrap() < ell {
                picked.pop();
            }
            triple |= picked.len() >= 3;
        }
        for (x, &i) in group.iter().enumerate() {
            for &j in &group[x + 1..] {
                let left_max = at(i + g - 1) != at(j + g - 1);
                let periodic = !left_max && i == 0 && (1..=g).all(|e| at(i + g - e) == at(j + g - e));
                if !left_max && !periodic {
                    continue;
                }
                let mut len = ell;
                while len < g && at(i + len) == at(j + len) {
                    len += 1;
                }
                let cap = (j - i).min(g - (j - i));
                if periodic && cap >= ell {
                    // Unbounded run: report the longest length with disjoint copies.
                    len = cap;
                }
                let pair = RepeatPair { first: i, second: j, length: len };
                if pair.disjoint(g) {
                    pairs.push(pair);
                } else {
                    overlapping.push(pair);
                }
            }
        }
        start = end;
    }
    pairs.sort_unstable();
    overlapping.sort_unstable();
    let interleaved = pairs.iter().enumerate().any(|(x, a)| {
        pairs[x + 1..].iter().any(|b| {
            let touches = [a.first, a.second].iter().any(|&p| {
                intervals_overlap(p, a.length, b.first, b.length, g) || intervals_overlap(p, a.length, b.second, b.length, g)
            });
            !touches
                && circular_arc_contains(a.first, a.second, b.first) != circular_arc_contains(a.first, a.second, b.second)
        })
    });
    Ok(RepeatReport { repeat_pairs: pairs, self_overlapping: overlapping, interleaved, triple })
}

/// Number of unordered position pairs whose length-`l` windows are equal.
pub fn count_repeat_pairs(s: &DnaSequence, l: usize) -> u64 {
    let g = s.len();
    if g == 0 || l == 0 {
        return 0;
    }
    let mut windows: Vec<Vec<u8>> = (0..g).map(|i| s.window(i, l)).collect();
    windows.sort_unstable();
    let mut total = 0u64;
    let mut run = 1u64;
    for k in 1..=windows.len() {
        if k < windows.len() && windows[k] == windows[k - 1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total
}

/// Whether one contig places every read at its true position, up to a
/// single rotation.
pub fn verify_layout(outcome: &AssemblyOutcome, reads: &ReadSet) -> Result<bool> {
    if outcome.contigs.is_empty() || outcome.contigs.iter().all(|c| c.layout.is_empty()) {
        return Err(Error::LayoutAbsent);
    }
    if outcome.contigs.len() != 1 {
        return Ok(false);
    }
    let layout = &outcome.contigs[0].layout;
    if layout.len() != reads.len() {
        return Ok(false);
    }
    let g = reads.genome_len();
    let truth = reads.true_starts();
    let first = layout[0];
    let rot = (truth[first.read as usize] + g - first.offset % g) % g;
    Ok(layout.iter().all(|p| (p.offset + rot) % g == truth[p.read as usize]))
}

/// For each repeat copy starting at `repeat_positions[k]`, whether some mate
/// pair's left read starts between `2L + J - K - d` and `d` symbols before it,
/// so that both mates reach at least `d` symbols into unique sequence.
pub fn check_bridging(pairs: &MatePairSet, repeat_positions: &[usize], k: usize, d: usize) -> Result<Vec<bool>> {
    let l = pairs.reads().read_len();
    let g = pairs.reads().genome_len();
    let span = bridging_span(pairs.separation(), l, k, d);
    if span < 0 {
        return Err(Error::EmptyBridgingInterval(span));
    }
    let mut lefts: Vec<usize> = pairs.left_starts().collect();
    lefts.sort_unstable();
    let far = d + span as usize;
    let any_in = |lo: usize, hi: usize| {
        // Starts in the circular range [lo, hi].
        let lo = lo % g;
        let hi = hi % g;
        let count = |a: usize, b: usize| lefts.partition_point(|&t| t <= b) - lefts.partition_point(|&t| t < a);
        if lo <= hi {
            count(lo, hi) > 0
        } else {
            count(lo, g - 1) + count(0, hi) > 0
        }
    };
    Ok(repeat_positions
        .iter()
        .map(|&r| far < g && any_in(r + g - far, r + g - d))
        .collect())
}
