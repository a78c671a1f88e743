//! Sequential assembly: grow one contig from read 0, always appending the
//! unused read with the largest overlap with the most recent read.

use super::outcome::{close_exact, AssemblyOutcome, Contig, FailureReason, Placement};
use crate::reads::BlindReads;

/// Prefix tables for one overlap length: read ids sorted by `(prefix, id)`,
/// plus a "next unused slot" forest for skipping consumed reads.
struct PrefixTable {
    order: Vec<u32>,
    slot_of: Vec<u32>,
    next_free: Vec<u32>,
}

impl PrefixTable {
    fn new(reads: &BlindReads, ell: usize) -> Self {
        let mut order: Vec<u32> = (0..reads.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| {
            reads.read(a as usize)[..ell].cmp(&reads.read(b as usize)[..ell]).then(a.cmp(&b))
        });
        let mut slot_of = vec![0u32; reads.len()];
        for (slot, &id) in order.iter().enumerate() {
            slot_of[id as usize] = slot as u32;
        }
        let next_free = (0..=reads.len() as u32).collect();
        Self { order, slot_of, next_free }
    }

    fn find(&mut self, mut s: u32) -> u32 {
        let mut root = s;
        while self.next_free[root as usize] != root {
            root = self.next_free[root as usize];
        }
        while self.next_free[s as usize] != root {
            let nxt = self.next_free[s as usize];
            self.next_free[s as usize] = root;
            s = nxt;
        }
        root
    }

    fn consume(&mut self, id: u32) {
        let s = self.slot_of[id as usize];
        self.next_free[s as usize] = s + 1;
    }

    /// Lowest unused id whose length-`ell` prefix equals `key`.
    fn lookup(&mut self, reads: &BlindReads, ell: usize, key: &[u8]) -> Option<u32> {
        let lo = self.order.partition_point(|&id| &reads.read(id as usize)[..ell] < key);
        let slot = self.find(lo as u32) as usize;
        let id = *self.order.get(slot)?;
        (reads.read(id as usize)[..ell] == *key).then_some(id)
    }
}

pub fn sequential_assemble(reads: &BlindReads) -> AssemblyOutcome {
    if reads.is_empty() {
        return AssemblyOutcome::failure(FailureReason::NoReads);
    }
    let l = reads.read_len();
    let g = reads.genome_len();
    let mut tables: Vec<PrefixTable> = (1..=l).map(|ell| PrefixTable::new(reads, ell)).collect();
    let mut hist = vec![0usize; l + 1];
    let mut symbols = reads.read(0).to_vec();
    let mut layout = vec![Placement { read: 0, offset: 0 }];
    for t in tables.iter_mut() {
        t.consume(0);
    }
    let mut current = 0usize;
    while symbols.len() < g {
        let last = reads.read(current);
        let next = (1..=l).rev().find_map(|ell| {
            tables[ell - 1].lookup(reads, ell, &last[l - ell..]).map(|id| (id, ell))
        });
        let Some((id, ell)) = next else { break };
        for t in tables.iter_mut() {
            t.consume(id);
        }
        let offset = layout.last().unwrap().offset + (l - ell);
        symbols.extend_from_slice(&reads.read(id as usize)[ell..]);
        layout.push(Placement { read: id, offset });
        hist[ell] += 1;
        current = id as usize;
    }
    let contig = Contig { symbols, layout };
    match close_exact(&contig.symbols, g) {
        Some(seq) => AssemblyOutcome::circular(seq, vec![contig], hist),
        None => AssemblyOutcome::contig_set(vec![contig], hist),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;
    use crate::overlap::suffix_prefix_overlap;
    use crate::reads::sample_reads;
    use crate::sequence::generate_iid;

    /// Quadratic reference: scan every unused read for the best overlap.
    fn naive(reads: &BlindReads) -> Vec<u32> {
        let mut used = vec![false; reads.len()];
        used[0] = true;
        let mut order = vec![0u32];
        let mut len = reads.read_len();
        let mut cur = 0;
        while len < reads.genome_len() {
            let best = (0..reads.len())
                .filter(|&j| !used[j])
                .map(|j| (suffix_prefix_overlap(reads.read(cur), reads.read(j)), std::cmp::Reverse(j)))
                .filter(|&(w, _)| w > 0)
                .max();
            let Some((w, std::cmp::Reverse(j))) = best else { break };
            used[j] = true;
            order.push(j as u32);
            len += reads.read_len() - w;
            cur = j;
        }
        order
    }

    #[test]
    fn matches_quadratic_reference() {
        for seed in 0..20 {
            let g = generate_iid(150, &Distribution::uniform(4), seed).unwrap();
            let rs = sample_reads(&g, 40, 8, seed + 100).unwrap();
            let out = sequential_assemble(rs.blind());
            let got: Vec<u32> = out.contigs[0].layout.iter().map(|p| p.read).collect();
            assert_eq!(got, naive(rs.blind()), "seed {seed}");
        }
    }

    #[test]
    fn high_coverage_reconstructs() {
        let g = generate_iid(300, &Distribution::uniform(4), 3).unwrap();
        let rs = sample_reads(&g, 400, 30, 4).unwrap();
        assert!(sequential_assemble(rs.blind()).reconstructs(&g));
    }
}
