//! Greedy overlap merging.
//!
//! Stages run from overlap `L` down to 1. At each stage every current contig
//! end `i` is paired, in ascending id order, with the lowest-id contig start
//! `j` whose prefix equals its suffix, provided `j` is not the head of `i`'s
//! own contig. Validity of a pair can only be lost during a stage, so this is
//! the same as scanning all candidate pairs in lexicographic order.

use std::io::Write;

use super::outcome::{close_exact, AssemblyOutcome, Contig, FailureReason, Placement};
use crate::error::Result;
use crate::overlap::{LmerIndex, CANDIDATE_CSV_HEADER};
use crate::reads::BlindReads;

const NONE: u32 = u32::MAX;
const SOURCE_HEAD: u32 = u32::MAX - 1;
const SINK_TAIL: u32 = u32::MAX - 2;

/// A maximal chain of merged nodes with offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Chain {
    /// Chain starts with a copy of the source string at offset 0.
    pub from_source: bool,
    /// Real reads and their offsets.
    pub placements: Vec<Placement>,
    /// Offset of a trailing copy of the sink string, if any.
    pub to_sink: Option<usize>,
}

/// Successor links between reads. Optionally two extra nodes act as an
/// unlimited sink (any number of predecessors, never a successor) and an
/// unlimited source (any number of successors, never a predecessor).
pub(crate) struct MergeState {
    n: usize,
    succ: Vec<u32>,
    shift: Vec<u32>,
    has_pred: Vec<bool>,
    sink_shift: Vec<u32>,
    head_of_tail: Vec<u32>,
    tail_of_head: Vec<u32>,
    sink: Option<u32>,
    source: Option<u32>,
    source_links: Vec<(u32, u32)>,
}

impl MergeState {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            succ: vec![NONE; n],
            shift: vec![0; n],
            has_pred: vec![false; n],
            sink_shift: vec![NONE; n],
            head_of_tail: (0..n as u32).collect(),
            tail_of_head: (0..n as u32).collect(),
            sink: None,
            source: None,
            source_links: Vec::new(),
        }
    }

    /// Nodes `n` and `n + 1` become the sink and source.
    pub fn with_anchors(n: usize) -> Self {
        let mut s = Self::new(n);
        s.sink = Some(n as u32);
        s.source = Some(n as u32 + 1);
        s
    }

    pub fn is_end(&self, i: u32) -> bool {
        if Some(i) == self.source {
            return true;
        }
        if Some(i) == self.sink {
            return false;
        }
        self.succ[i as usize] == NONE && self.sink_shift[i as usize] == NONE
    }

    pub fn is_start(&self, j: u32) -> bool {
        if Some(j) == self.sink {
            return true;
        }
        if Some(j) == self.source {
            return false;
        }
        !self.has_pred[j as usize]
    }

    pub fn can_merge(&self, i: u32, j: u32) -> bool {
        if i == j || !self.is_end(i) || !self.is_start(j) {
            return false;
        }
        if Some(i) == self.source {
            return Some(j) != self.sink;
        }
        if Some(j) == self.sink {
            return true;
        }
        self.head_of_tail[i as usize] != j
    }

    /// Link `j` after `i`, `shift` symbols further along. Caller checks
    /// [`can_merge`](Self::can_merge).
    pub fn merge(&mut self, i: u32, j: u32, shift: u32) {
        let real = |x: u32| (x as usize) < self.n;
        if Some(i) == self.source {
            self.source_links.push((j, shift));
            self.has_pred[j as usize] = true;
            let t = self.tail_of_head[j as usize];
            if real(t) {
                self.head_of_tail[t as usize] = SOURCE_HEAD;
            }
        } else if Some(j) == self.sink {
            self.sink_shift[i as usize] = shift;
            let h = self.head_of_tail[i as usize];
            if real(h) {
                self.tail_of_head[h as usize] = SINK_TAIL;
            }
        } else {
            self.succ[i as usize] = j;
            self.shift[i as usize] = shift;
            self.has_pred[j as usize] = true;
            let h = self.head_of_tail[i as usize];
            let t = self.tail_of_head[j as usize];
            if real(t) {
                self.head_of_tail[t as usize] = h;
            }
            if real(h) {
                self.tail_of_head[h as usize] = t;
            }
        }
    }

    pub fn ends(&self) -> Vec<u32> {
        let mut v: Vec<u32> = (0..self.n as u32).filter(|&i| self.is_end(i)).collect();
        v.extend(self.source);
        v
    }

    pub fn starts(&self) -> Vec<u32> {
        let mut v: Vec<u32> = (0..self.n as u32).filter(|&j| self.is_start(j)).collect();
        v.extend(self.sink);
        v
    }

    /// True when nothing can merge any more: one contig and no anchors.
    fn finished(&self, ends: &[u32], starts: &[u32]) -> bool {
        ends.is_empty()
            || starts.is_empty()
            || (self.source.is_none()
                && ends.len() == 1
                && starts.len() == 1
                && self.head_of_tail[ends[0] as usize] == starts[0])
    }

    pub fn chains(&self) -> Vec<Chain> {
        let walk = |first: u32, first_offset: usize, from_source: bool| {
            let mut placements = Vec::new();
            let mut cur = first;
            let mut offset = first_offset;
            loop {
                placements.push(Placement { read: cur, offset });
                let next = self.succ[cur as usize];
                if next == NONE {
                    break;
                }
                offset += self.shift[cur as usize] as usize;
                cur = next;
            }
            let s = self.sink_shift[cur as usize];
            let to_sink = (s != NONE).then(|| offset + s as usize);
            Chain { from_source, placements, to_sink }
        };
        let mut chains: Vec<Chain> =
            (0..self.n as u32).filter(|&j| !self.has_pred[j as usize]).map(|j| walk(j, 0, false)).collect();
        chains.extend(self.source_links.iter().map(|&(j, s)| walk(j, s as usize, true)));
        chains
    }
}

/// Run the stage loop over `reads`, which must include the anchor strings
/// as its last two reads when `state` has anchors. Returns merges per stage.
pub(crate) fn run_stages(reads: &BlindReads, state: &mut MergeState, mut trace: Option<&mut dyn Write>) -> Result<Vec<usize>> {
    let l = reads.read_len();
    let mut hist = vec![0usize; l + 1];
    if let Some(out) = trace.as_deref_mut() {
        writeln!(out, "{CANDIDATE_CSV_HEADER}")?;
    }
    for (stage, ell) in (1..=l).rev().enumerate() {
        let ends = state.ends();
        let starts = state.starts();
        if state.finished(&ends, &starts) {
            break;
        }
        let idx = LmerIndex::build_subset(reads, ell, &ends, &starts);
        if let Some(out) = trace.as_deref_mut() {
            idx.write_candidates_csv(out, stage)?;
        }
        let shift = (l - ell) as u32;
        let mut cursor = vec![0usize; idx.buckets().len()];
        for &(i, b) in idx.end_slots() {
            let bucket = &idx.buckets()[b as usize];
            if Some(i) == state.source {
                for &j in &bucket.starts {
                    if state.can_merge(i, j) {
                        state.merge(i, j, shift);
                        hist[ell] += 1;
                    }
                }
                continue;
            }
            let c = &mut cursor[b as usize];
            while *c < bucket.starts.len() && !state.is_start(bucket.starts[*c]) {
                *c += 1;
            }
            if let Some(&j) = bucket.starts[*c..].iter().find(|&&j| state.can_merge(i, j)) {
                state.merge(i, j, shift);
                hist[ell] += 1;
            }
        }
    }
    Ok(hist)
}

pub(crate) fn spell(reads: &BlindReads, placements: &[Placement]) -> Vec<u8> {
    let l = reads.read_len();
    let len = placements.iter().map(|p| p.offset + l).max().unwrap_or(0);
    let mut out = vec![0u8; len];
    for p in placements {
        out[p.offset..p.offset + l].copy_from_slice(reads.read(p.read as usize));
    }
    out
}

/// Exact-overlap greedy assembly of noiseless reads.
pub fn greedy_assemble(reads: &BlindReads) -> AssemblyOutcome {
    greedy_impl(reads, None).expect("no trace writer, no io")
}

/// As [`greedy_assemble`], also writing every candidate pair considered as
/// CSV (`stage,ell,read_i,read_j`).
pub fn greedy_assemble_traced(reads: &BlindReads, trace: &mut dyn Write) -> Result<AssemblyOutcome> {
    greedy_impl(reads, Some(trace))
}

fn greedy_impl(reads: &BlindReads, trace: Option<&mut dyn Write>) -> Result<AssemblyOutcome> {
    if reads.is_empty() {
        return Ok(AssemblyOutcome::failure(FailureReason::NoReads));
    }
    let mut state = MergeState::new(reads.len());
    let hist = run_stages(reads, &mut state, trace)?;
    let contigs: Vec<Contig> = state
        .chains()
        .into_iter()
        .map(|c| Contig { symbols: spell(reads, &c.placements), layout: c.placements })
        .collect();
    if contigs.len() == 1 {
        if let Some(seq) = close_exact(&contigs[0].symbols, reads.genome_len()) {
            return Ok(AssemblyOutcome::circular(seq, contigs, hist));
        }
    }
    Ok(AssemblyOutcome::contig_set(contigs, hist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::OutcomeKind;
    use crate::dist::Distribution;
    use crate::reads::sample_reads;
    use crate::sequence::{generate_iid, parse_codes, DnaSequence};

    fn blind(g: usize, rs: &[&str]) -> BlindReads {
        let v: Vec<Vec<u8>> = rs.iter().map(|s| parse_codes(s).unwrap()).collect();
        BlindReads::new(g, v[0].len(), &v).unwrap()
    }

    #[test]
    fn single_full_read_closes() {
        let out = greedy_assemble(&blind(6, &["ACGTTG"]));
        assert_eq!(out.kind, OutcomeKind::SingleCircularSequence);
        assert_eq!(out.sequence.unwrap().to_string(), "ACGTTG");
    }

    #[test]
    fn tiny_tiling_closes() {
        // Reads of length 4 every two positions; the last merge would close
        // the circle and is refused.
        let genome: DnaSequence = "ACGTTGCA".parse().unwrap();
        let reads: Vec<String> = (0..8).step_by(2).map(|s| crate::sequence::codes_to_string(&genome.window(s, 4))).collect();
        let refs: Vec<&str> = reads.iter().map(|s| s.as_str()).collect();
        let out = greedy_assemble(&blind(8, &refs));
        assert!(out.reconstructs(&genome), "{:?}", out.summary());
        assert_eq!(out.stage_histogram[2], 3);
    }

    #[test]
    fn empty_reads_fail() {
        let r = BlindReads::new(10, 3, &[]).unwrap();
        assert_eq!(greedy_assemble(&r).kind, OutcomeKind::Failure);
    }

    #[test]
    fn dense_coverage_reconstructs() {
        let g = generate_iid(400, &Distribution::uniform(4), 1).unwrap();
        let rs = sample_reads(&g, 300, 24, 2).unwrap();
        let out = greedy_assemble(rs.blind());
        assert!(out.reconstructs(&g));
    }

    #[test]
    fn trace_lists_candidates() {
        let g = generate_iid(100, &Distribution::uniform(4), 1).unwrap();
        let rs = sample_reads(&g, 40, 20, 2).unwrap();
        let mut buf = Vec::new();
        let a = greedy_assemble_traced(rs.blind(), &mut buf).unwrap();
        assert_eq!(a, greedy_assemble(rs.blind()));
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("stage,ell,read_i,read_j\n"));
        assert!(text.lines().count() > 1);
    }
}
