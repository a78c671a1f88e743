//! K-mer (de Bruijn) assembly.
//!
//! Distinct `K`-mers of the reads are edges between their `(K-1)`-mer prefix
//! and suffix. A connected balanced graph is Eulerian; the genome is recovered
//! when it has exactly one Eulerian circuit, counted with the BEST theorem.

use super::outcome::{AssemblyOutcome, Contig, FailureReason};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::reads::BlindReads;
use crate::sequence::DnaSequence;
use crate::theory::renyi2;

/// Above this many branching nodes the circuit count is not computed and the
/// graph is reported as ambiguous.
pub const MAX_BRANCH_NODES: usize = 400;

/// `min(L, ceil((2 log2 G + 2) / H2) + 1)`, and at least 2. The two extra
/// bits keep the expected number of repeated `(K-1)`-mers near 1/8, so
/// interleaved repeats rarely make the circuit ambiguous.
pub fn default_kmer_size(g: usize, l: usize, p: &Distribution) -> usize {
    let k = ((2.0 * (g as f64).log2() + 2.0) / renyi2(p)).ceil() as usize + 1;
    k.min(l).max(2)
}

struct Graph<'a> {
    nodes: Vec<&'a [u8]>,
    from: Vec<u32>,
    to: Vec<u32>,
    sym: Vec<u8>,
    out_edges: Vec<Vec<u32>>,
    indeg: Vec<u32>,
}

impl<'a> Graph<'a> {
    fn build(reads: &'a BlindReads, k: usize) -> Self {
        let mut kmers: Vec<&[u8]> = reads.iter().flat_map(|r| r.windows(k)).collect();
        kmers.sort_unstable();
        kmers.dedup();
        let mut nodes: Vec<&[u8]> = kmers.iter().flat_map(|e| [&e[..k - 1], &e[1..]]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let id = |s: &[u8]| nodes.binary_search(&s).expect("node present") as u32;
        let mut from = Vec::with_capacity(kmers.len());
        let mut to = Vec::with_capacity(kmers.len());
        let mut sym = Vec::with_capacity(kmers.len());
        let mut out_edges = vec![Vec::new(); nodes.len()];
        let mut indeg = vec![0u32; nodes.len()];
        for (e, kmer) in kmers.iter().enumerate() {
            let (u, v) = (id(&kmer[..k - 1]), id(&kmer[1..]));
            from.push(u);
            to.push(v);
            sym.push(kmer[k - 1]);
            out_edges[u as usize].push(e as u32);
            indeg[v as usize] += 1;
        }
        Self { nodes, from, to, sym, out_edges, indeg }
    }

    fn outdeg(&self, v: usize) -> usize {
        self.out_edges[v].len()
    }

    fn simple(&self, v: usize) -> bool {
        self.indeg[v] == 1 && self.outdeg(v) == 1
    }

    fn components(&self) -> usize {
        let mut parent: Vec<u32> = (0..self.nodes.len() as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for e in 0..self.from.len() {
            let a = find(&mut parent, self.from[e]);
            let b = find(&mut parent, self.to[e]);
            if a != b {
                parent[a as usize] = b;
            }
        }
        (0..self.nodes.len() as u32).filter(|&v| find(&mut parent, v) == v).count()
    }

    fn balanced(&self) -> bool {
        (0..self.nodes.len()).all(|v| self.indeg[v] as usize == self.outdeg(v))
    }

    /// Maximal non-branching paths, including isolated cycles.
    fn unitigs(&self) -> Vec<Vec<u8>> {
        let mut used = vec![false; self.from.len()];
        let mut out = Vec::new();
        let extend = |start_edge: u32, used: &mut Vec<bool>, stop_at_start: bool| {
            let mut seq = self.nodes[self.from[start_edge as usize] as usize].to_vec();
            let mut e = start_edge;
            loop {
                used[e as usize] = true;
                seq.push(self.sym[e as usize]);
                let w = self.to[e as usize] as usize;
                if !self.simple(w) {
                    break;
                }
                e = self.out_edges[w][0];
                if stop_at_start && e == start_edge || used[e as usize] {
                    break;
                }
            }
            seq
        };
        for v in 0..self.nodes.len() {
            if self.simple(v) {
                continue;
            }
            for &e in &self.out_edges[v] {
                out.push(extend(e, &mut used, false));
            }
        }
        for e in 0..self.from.len() as u32 {
            if !used[e as usize] {
                out.push(extend(e, &mut used, true));
            }
        }
        out
    }

    /// Number of Eulerian circuits is exactly one. `None` when too many
    /// branching nodes to decide.
    fn unique_circuit(&self) -> Option<bool> {
        let branching: Vec<usize> = (0..self.nodes.len()).filter(|&v| self.outdeg(v) >= 2).collect();
        if branching.is_empty() {
            return Some(true);
        }
        // The product of (outdeg - 1)! already exceeds one.
        if branching.iter().any(|&v| self.outdeg(v) >= 3) {
            return Some(false);
        }
        if branching.len() > MAX_BRANCH_NODES {
            log::warn!("{} branching nodes; circuit count not computed", branching.len());
            return None;
        }
        let mut slot = vec![usize::MAX; self.nodes.len()];
        for (i, &v) in branching.iter().enumerate() {
            slot[v] = i;
        }
        let b = branching.len();
        let mut lap = vec![vec![0.0f64; b]; b];
        for (i, &v) in branching.iter().enumerate() {
            for &e in &self.out_edges[v] {
                let mut w = self.to[e as usize] as usize;
                while slot[w] == usize::MAX {
                    w = self.to[self.out_edges[w][0] as usize] as usize;
                }
                lap[i][i] += 1.0;
                lap[i][slot[w]] -= 1.0;
            }
        }
        // Arborescences toward branching[0]: drop its row and column.
        let minor: Vec<Vec<f64>> = lap[1..].iter().map(|row| row[1..].to_vec()).collect();
        Some(determinant(minor) < 1.5)
    }

    /// Hierholzer's algorithm from edge 0's tail.
    fn circuit(&self) -> Vec<u32> {
        let mut next = vec![0usize; self.nodes.len()];
        let mut stack: Vec<(u32, Option<u32>)> = vec![(self.from[0], None)];
        let mut circuit = Vec::with_capacity(self.from.len());
        while let Some(&(v, via)) = stack.last() {
            let v = v as usize;
            if next[v] < self.out_edges[v].len() {
                let e = self.out_edges[v][next[v]];
                next[v] += 1;
                stack.push((self.to[e as usize], Some(e)));
            } else {
                stack.pop();
                if let Some(e) = via {
                    circuit.push(e);
                }
            }
        }
        circuit.reverse();
        circuit
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[p][c].abs() < 1e-12 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            if f != 0.0 {
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    det
}

pub fn debruijn_assemble(reads: &BlindReads, k: usize) -> Result<AssemblyOutcome> {
    if k < 2 || k > reads.read_len() {
        return Err(Error::InvalidParameter(format!("K = {k} not in [2, {}]", reads.read_len())));
    }
    if reads.is_empty() {
        return Ok(AssemblyOutcome::failure(FailureReason::NoReads));
    }
    let graph = Graph::build(reads, k);
    let as_contigs = |g: &Graph| -> Vec<Contig> {
        g.unitigs().into_iter().map(|symbols| Contig { symbols, layout: Vec::new() }).collect()
    };
    let components = graph.components();
    if components > 1 {
        return Ok(AssemblyOutcome::contig_set(as_contigs(&graph), Vec::new())
            .with_failure(FailureReason::Disconnected { components }));
    }
    if !graph.balanced() {
        let mut out = AssemblyOutcome::contig_set(as_contigs(&graph), Vec::new());
        out.ambiguous = true;
        return Ok(out);
    }
    match graph.unique_circuit() {
        Some(true) => {
            let symbols: Vec<u8> = graph.circuit().iter().map(|&e| graph.sym[e as usize]).collect();
            let seq = DnaSequence::from_codes(symbols).expect("valid codes");
            Ok(AssemblyOutcome::circular(seq, Vec::new(), Vec::new()))
        }
        _ => {
            let mut out = AssemblyOutcome::contig_set(as_contigs(&graph), Vec::new());
            out.ambiguous = true;
            Ok(out)
        }
    }
}
