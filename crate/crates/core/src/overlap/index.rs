//! Bucketing reads by their length-`l` prefixes and suffixes.

use std::io::Write;

use crate::error::{Error, Result};
use crate::reads::BlindReads;

/// Reads sharing one `l`-mer: those ending with it and those starting with it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bucket {
    /// Reads whose suffix is the key, ascending.
    pub ends: Vec<u32>,
    /// Reads whose prefix is the key, ascending.
    pub starts: Vec<u32>,
}

/// Sort-based index from `l`-mers to reads. Every candidate pair `(i, j)`
/// with `suffix_l(i) == prefix_l(j)` lies in exactly one bucket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LmerIndex {
    ell: usize,
    buckets: Vec<Bucket>,
    /// `(end id, bucket)` ascending by id.
    end_slots: Vec<(u32, u32)>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    End = 0,
    Start = 1,
}

/// Two bits per symbol; order-preserving for equal lengths up to 64.
pub(crate) fn pack(s: &[u8]) -> u128 {
    s.iter().fold(0u128, |acc, &c| (acc << 2) | c as u128)
}

impl LmerIndex {
    /// Index every read on both sides.
    pub fn build(reads: &BlindReads, ell: usize) -> Result<Self> {
        if ell == 0 || ell > reads.read_len() {
            return Err(Error::InvalidParameter(format!(
                "overlap length {ell} not in [1, {}]",
                reads.read_len()
            )));
        }
        let all: Vec<u32> = (0..reads.len() as u32).collect();
        Ok(Self::build_subset(reads, ell, &all, &all))
    }

    /// Index the suffixes of `ends` and prefixes of `starts`. Ids must be
    /// ascending.
    pub fn build_subset(reads: &BlindReads, ell: usize, ends: &[u32], starts: &[u32]) -> Self {
        let l = reads.read_len();
        if ell <= 64 {
            let mut entries: Vec<(u128, Side, u32)> = Vec::with_capacity(ends.len() + starts.len());
            entries.extend(ends.iter().map(|&i| (pack(&reads.read(i as usize)[l - ell..]), Side::End, i)));
            entries.extend(starts.iter().map(|&j| (pack(&reads.read(j as usize)[..ell]), Side::Start, j)));
            entries.sort_unstable();
            Self::group(ell, entries)
        } else {
            let mut entries: Vec<(&[u8], Side, u32)> = Vec::with_capacity(ends.len() + starts.len());
            entries.extend(ends.iter().map(|&i| (&reads.read(i as usize)[l - ell..], Side::End, i)));
            entries.extend(starts.iter().map(|&j| (&reads.read(j as usize)[..ell], Side::Start, j)));
            entries.sort_unstable();
            Self::group(ell, entries)
        }
    }

    fn group<K: Eq>(ell: usize, entries: Vec<(K, Side, u32)>) -> Self {
        let mut buckets: Vec<Bucket> = Vec::new();
        let mut end_slots = Vec::new();
        let mut prev: Option<&K> = None;
        for (key, side, id) in &entries {
            if prev != Some(key) {
                buckets.push(Bucket::default());
                prev = Some(key);
            }
            let slot = (buckets.len() - 1) as u32;
            let b = buckets.last_mut().expect("bucket");
            match side {
                Side::End => {
                    end_slots.push((*id, slot));
                    b.ends.push(*id);
                }
                Side::Start => b.starts.push(*id),
            }
        }
        end_slots.sort_unstable();
        Self { ell, buckets, end_slots }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn buckets(&self) -> &[Bucket] {
        &self.buckets
    }

    /// Every indexed end with the bucket holding its suffix, ascending by id.
    pub fn end_slots(&self) -> &[(u32, u32)] {
        &self.end_slots
    }

    /// All `(i, j)` with `i != j` and `suffix(i) == prefix(j)`, in bucket order.
    pub fn candidate_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.buckets.iter().flat_map(|b| {
            b.ends
                .iter()
                .flat_map(move |&i| b.starts.iter().filter(move |&&j| j != i).map(move |&j| (i, j)))
        })
    }

    /// Append candidate pairs as CSV rows `stage,ell,read_i,read_j`.
    pub fn write_candidates_csv<W: Write + ?Sized>(&self, out: &mut W, stage: usize) -> Result<()> {
        for (i, j) in self.candidate_pairs() {
            writeln!(out, "{stage},{},{i},{j}", self.ell)?;
        }
        Ok(())
    }
}

pub const CANDIDATE_CSV_HEADER: &str = "stage,ell,read_i,read_j";
