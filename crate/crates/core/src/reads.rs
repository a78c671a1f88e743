//! Read sampling, noise channels and the read-set file format.
//!
//! Assemblers only ever see [`BlindReads`]: the true start positions live in
//! [`ReadSet`] and are reachable only through diagnostics.

use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, SimRng};
use crate::sequence::{codes_to_string, parse_codes, Categorical4, DnaSequence, Matrix4};

/// Reads with no position metadata: what an assembler is allowed to see.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlindReads {
    genome_len: usize,
    read_len: usize,
    data: Vec<u8>,
}

impl BlindReads {
    pub fn new(genome_len: usize, read_len: usize, reads: &[Vec<u8>]) -> Result<Self> {
        if read_len == 0 {
            return Err(Error::InvalidParameter("read length must be positive".into()));
        }
        let mut data = Vec::with_capacity(reads.len() * read_len);
        for r in reads {
            if r.len() != read_len {
                return Err(Error::InvalidParameter(format!(
                    "read of length {} in a set of length {read_len}",
                    r.len()
                )));
            }
            if r.iter().any(|&c| c > 3) {
                return Err(Error::InvalidParameter("read symbol out of range".into()));
            }
            data.extend_from_slice(r);
        }
        Ok(Self { genome_len, read_len, data })
    }

    pub fn genome_len(&self) -> usize {
        self.genome_len
    }

    pub fn read_len(&self) -> usize {
        self.read_len
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.read_len
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn read(&self, i: usize) -> &[u8] {
        &self.data[i * self.read_len..(i + 1) * self.read_len]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.data.chunks_exact(self.read_len)
    }

    /// Subset by index, preserving order.
    pub fn select(&self, ids: &[usize]) -> BlindReads {
        let mut data = Vec::with_capacity(ids.len() * self.read_len);
        for &i in ids {
            data.extend_from_slice(self.read(i));
        }
        BlindReads { genome_len: self.genome_len, read_len: self.read_len, data }
    }
}

/// A read together with its true start (diagnostics only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Read<'a> {
    pub symbols: &'a [u8],
    pub true_start: usize,
}

/// Sampled reads plus the ground truth needed to score an assembly.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadSet {
    reads: BlindReads,
    starts: Vec<usize>,
    noise_eps: f64,
    noised: bool,
}

impl ReadSet {
    pub fn from_parts(reads: BlindReads, starts: Vec<usize>) -> Result<Self> {
        if starts.len() != reads.len() {
            return Err(Error::InvalidParameter(format!(
                "{} positions for {} reads",
                starts.len(),
                reads.len()
            )));
        }
        Ok(Self { reads, starts, noise_eps: 0.0, noised: false })
    }

    pub fn blind(&self) -> &BlindReads {
        &self.reads
    }

    pub fn genome_len(&self) -> usize {
        self.reads.genome_len
    }

    pub fn read_len(&self) -> usize {
        self.reads.read_len
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    pub fn true_starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn get(&self, i: usize) -> Read<'_> {
        Read { symbols: self.reads.read(i), true_start: self.starts[i] }
    }

    pub fn iter(&self) -> impl Iterator<Item = Read<'_>> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    /// Symbol error rate recorded by [`apply_noise`]; zero when noiseless.
    pub fn noise_eps(&self) -> f64 {
        self.noise_eps
    }

    pub fn is_noised(&self) -> bool {
        self.noised
    }

    /// The first `n` reads; sampling is sequential, so this is the read set
    /// the same seed would give for `n` reads.
    pub fn truncated(&self, n: usize) -> ReadSet {
        let n = n.min(self.len());
        ReadSet {
            reads: BlindReads {
                genome_len: self.reads.genome_len,
                read_len: self.reads.read_len,
                data: self.reads.data[..n * self.reads.read_len].to_vec(),
            },
            starts: self.starts[..n].to_vec(),
            noise_eps: self.noise_eps,
            noised: self.noised,
        }
    }
}

/// Discrete memoryless channel. `t[r][s]` is the probability of reading `r`
/// when the true symbol is `s`; columns sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcChannel {
    t: Matrix4,
}

impl DmcChannel {
    pub fn new(t: Matrix4) -> Result<Self> {
        for s in 0..4 {
            let mut col = 0.0;
            for row in &t {
                if !row[s].is_finite() || row[s] < 0.0 {
                    return Err(Error::InvalidChannel(format!("entry {} in column {s}", row[s])));
                }
                col += row[s];
            }
            if (col - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidChannel(format!("column {s} sums to {col}")));
            }
        }
        Ok(Self { t })
    }

    pub fn identity() -> Self {
        Self::symmetric(0.0).expect("identity channel")
    }

    /// Each symbol flips to each of the other three with probability `eps/3`.
    pub fn symmetric(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidChannel(format!("error rate {eps} outside [0, 1]")));
        }
        let mut t = [[eps / 3.0; 4]; 4];
        for (s, row) in t.iter_mut().enumerate() {
            row[s] = 1.0 - eps;
        }
        Ok(Self { t })
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.t
    }

    pub fn prob(&self, read: u8, truth: u8) -> f64 {
        self.t[read as usize][truth as usize]
    }

    pub fn is_identity(&self) -> bool {
        (0..4).all(|s| self.t[s][s] == 1.0)
    }

    /// Symbol error rate under a uniform input.
    pub fn mean_error_rate(&self) -> f64 {
        1.0 - (0..4).map(|s| self.t[s][s]).sum::<f64>() / 4.0
    }
}

/// Draw `n` reads of length `l` with uniform, independent start positions.
pub fn sample_reads(genome: &DnaSequence, n: usize, l: usize, seed: u64) -> Result<ReadSet> {
    sample_reads_with(genome, n, l, &mut rng_from_seed(seed))
}

pub fn sample_reads_with(genome: &DnaSequence, n: usize, l: usize, rng: &mut SimRng) -> Result<ReadSet> {
    let g = genome.len();
    check_read_geometry(g, l)?;
    let starts: Vec<usize> = (0..n).map(|_| rng.random_range(0..g)).collect();
    let mut data = vec![0u8; n * l];
    for (chunk, &s) in data.chunks_exact_mut(l).zip(&starts) {
        genome.copy_window(s, chunk);
    }
    Ok(ReadSet {
        reads: BlindReads { genome_len: g, read_len: l, data },
        starts,
        noise_eps: 0.0,
        noised: false,
    })
}

fn check_read_geometry(g: usize, l: usize) -> Result<()> {
    if g == 0 {
        return Err(Error::InvalidParameter("empty genome".into()));
    }
    if l == 0 || l > g {
        return Err(Error::InvalidParameter(format!("read length {l} not in [1, {g}]")));
    }
    Ok(())
}

/// Pass every symbol of every read through `channel`.
pub fn apply_noise(reads: &ReadSet, channel: &DmcChannel, seed: u64) -> Result<ReadSet> {
    apply_noise_with(reads, channel, &mut rng_from_seed(seed))
}

pub fn apply_noise_with(reads: &ReadSet, channel: &DmcChannel, rng: &mut SimRng) -> Result<ReadSet> {
    if reads.noised {
        return Err(Error::AlreadyNoised);
    }
    let t = channel.matrix();
    let columns: Vec<Categorical4> = (0..4)
        .map(|s| Categorical4::new([t[0][s], t[1][s], t[2][s], t[3][s]]))
        .collect();
    let mut out = reads.clone();
    if !channel.is_identity() {
        for c in out.reads.data.iter_mut() {
            *c = columns[*c as usize].sample(rng);
        }
    }
    out.noise_eps = channel.mean_error_rate();
    out.noised = true;
    Ok(out)
}

/// Mate pairs stored as an interleaved read set: read `2i` is the left mate
/// and read `2i + 1` the right mate of pair `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatePairSet {
    reads: ReadSet,
    separation: usize,
}

/// Mate pairs without positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlindMatePairs {
    pub reads: BlindReads,
    pub separation: usize,
}

impl BlindMatePairs {
    pub fn n_pairs(&self) -> usize {
        self.reads.len() / 2
    }

    pub fn pair(&self, i: usize) -> (&[u8], &[u8]) {
        (self.reads.read(2 * i), self.reads.read(2 * i + 1))
    }
}

impl MatePairSet {
    pub fn from_reads(reads: ReadSet, separation: usize) -> Result<Self> {
        if reads.len() % 2 != 0 {
            return Err(Error::InvalidParameter("mate-pair set needs an even read count".into()));
        }
        Ok(Self { reads, separation })
    }

    pub fn reads(&self) -> &ReadSet {
        &self.reads
    }

    pub fn separation(&self) -> usize {
        self.separation
    }

    pub fn n_pairs(&self) -> usize {
        self.reads.len() / 2
    }

    /// True start of the left mate of each pair.
    pub fn left_starts(&self) -> impl Iterator<Item = usize> + '_ {
        self.reads.starts.iter().step_by(2).copied()
    }

    pub fn blind(&self) -> BlindMatePairs {
        BlindMatePairs { reads: self.reads.reads.clone(), separation: self.separation }
    }

    pub fn with_noise(&self, channel: &DmcChannel, seed: u64) -> Result<MatePairSet> {
        Ok(MatePairSet { reads: apply_noise(&self.reads, channel, seed)?, separation: self.separation })
    }
}

/// Draw `n_pairs` pairs: the left mate starts uniformly at `t`, the right mate
/// at `t + l + j`, so `j` symbols separate the mates.
pub fn sample_mate_pairs(genome: &DnaSequence, n_pairs: usize, l: usize, j: usize, seed: u64) -> Result<MatePairSet> {
    let g = genome.len();
    check_read_geometry(g, l)?;
    if 2 * l + j > g {
        return Err(Error::InvalidParameter(format!("pair span {} exceeds genome length {g}", 2 * l + j)));
    }
    let mut rng = rng_from_seed(seed);
    let mut starts = Vec::with_capacity(2 * n_pairs);
    for _ in 0..n_pairs {
        let t = rng.random_range(0..g);
        starts.push(t);
        starts.push((t + l + j) % g);
    }
    let mut data = vec![0u8; starts.len() * l];
    for (chunk, &s) in data.chunks_exact_mut(l).zip(&starts) {
        genome.copy_window(s, chunk);
    }
    Ok(MatePairSet {
        reads: ReadSet {
            reads: BlindReads { genome_len: g, read_len: l, data },
            starts,
            noise_eps: 0.0,
            noised: false,
        },
        separation: j,
    })
}

/// Contents of a read-set file.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadSetFile {
    pub reads: BlindReads,
    pub noise_eps: f64,
    /// Mate separation `J` when the reads are interleaved pairs.
    pub separation: Option<usize>,
}

/// Sidecar path holding true positions, one per line.
pub fn positions_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".pos");
    PathBuf::from(p)
}

/// Write the header line `G L N noise_eps [J]` followed by one read per line,
/// plus the positions sidecar.
pub fn write_read_set(path: &Path, reads: &ReadSet, separation: Option<usize>) -> Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    write!(out, "{} {} {} {}", reads.genome_len(), reads.read_len(), reads.len(), reads.noise_eps)?;
    if let Some(j) = separation {
        write!(out, " {j}")?;
    }
    writeln!(out)?;
    for r in reads.blind().iter() {
        writeln!(out, "{}", codes_to_string(r))?;
    }
    out.flush()?;
    let mut pos = BufWriter::new(std::fs::File::create(positions_path(path))?);
    for s in &reads.starts {
        writeln!(pos, "{s}")?;
    }
    pos.flush()?;
    Ok(())
}

pub fn write_mate_pairs(path: &Path, pairs: &MatePairSet) -> Result<()> {
    write_read_set(path, &pairs.reads, Some(pairs.separation))
}

pub fn read_read_set_file(path: &Path) -> Result<ReadSetFile> {
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut lines = file.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if !(4..=5).contains(&fields.len()) {
        return Err(Error::Parse(format!("header needs `G L N noise_eps [J]`, got {header:?}")));
    }
    let int = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
    let g = int(fields[0])?;
    let l = int(fields[1])?;
    let n = int(fields[2])?;
    let noise_eps = fields[3].parse::<f64>().map_err(|e| Error::Parse(format!("{:?}: {e}", fields[3])))?;
    let separation = fields.get(4).map(|s| int(s)).transpose()?;
    let mut reads = Vec::with_capacity(n);
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        reads.push(parse_codes(&line)?);
    }
    if reads.len() != n {
        return Err(Error::Parse(format!("header declares {n} reads, found {}", reads.len())));
    }
    let reads = BlindReads::new(g, l, &reads)?;
    Ok(ReadSetFile { reads, noise_eps, separation })
}

/// Load a read set together with its positions sidecar.
pub fn read_read_set(path: &Path) -> Result<ReadSet> {
    let file = read_read_set_file(path)?;
    let text = std::fs::read_to_string(positions_path(path))?;
    let starts = text
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| l.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{l:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut rs = ReadSet::from_parts(file.reads, starts)?;
    rs.noise_eps = file.noise_eps;
    rs.noised = file.noise_eps > 0.0;
    Ok(rs)
}
