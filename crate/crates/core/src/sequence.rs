//! Source models for circular DNA and their generators.
//!
//! Symbols are stored as `u8` codes 0..4 for A, C, G, T.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{Distribution, MASS_TOL};
use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, SimRng};

pub const ALPHABET: [char; 4] = ['A', 'C', 'G', 'T'];

/// 4x4 matrix, indexed `[row][col]`.
pub type Matrix4 = [[f64; 4]; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Nucleotide {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

impl Nucleotide {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Nucleotide {
        match c & 3 {
            0 => Nucleotide::A,
            1 => Nucleotide::C,
            2 => Nucleotide::G,
            _ => Nucleotide::T,
        }
    }

    pub fn to_char(self) -> char {
        ALPHABET[self as usize]
    }

    pub fn from_char(c: char) -> Result<Nucleotide> {
        char_to_code(c).map(Nucleotide::from_code)
    }
}

pub fn char_to_code(c: char) -> Result<u8> {
    match c {
        'A' | 'a' => Ok(0),
        'C' | 'c' => Ok(1),
        'G' | 'g' => Ok(2),
        'T' | 't' => Ok(3),
        other => Err(Error::InvalidSymbol(other)),
    }
}

pub fn code_to_char(c: u8) -> char {
    ALPHABET[(c & 3) as usize]
}

pub fn codes_to_string(codes: &[u8]) -> String {
    codes.iter().map(|&c| code_to_char(c)).collect()
}

pub fn parse_codes(s: &str) -> Result<Vec<u8>> {
    s.chars().map(char_to_code).collect()
}

/// A circular DNA sequence. Index arithmetic wraps modulo the length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DnaSequence {
    symbols: Vec<u8>,
}

impl DnaSequence {
    pub fn from_codes(symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&c| c > 3) {
            return Err(Error::InvalidSymbol(bad as char));
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn codes(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_codes(self) -> Vec<u8> {
        self.symbols
    }

    pub fn at(&self, i: usize) -> u8 {
        self.symbols[i % self.symbols.len()]
    }

    /// Copy the circular window `[start, start + out.len())` into `out`.
    pub fn copy_window(&self, start: usize, out: &mut [u8]) {
        let g = self.symbols.len();
        let mut pos = start % g;
        let mut filled = 0;
        while filled < out.len() {
            let take = (g - pos).min(out.len() - filled);
            out[filled..filled + take].copy_from_slice(&self.symbols[pos..pos + take]);
            filled += take;
            pos = 0;
        }
    }

    pub fn window(&self, start: usize, len: usize) -> Vec<u8> {
        let mut out = vec![0; len];
        self.copy_window(start, &mut out);
        out
    }

    /// Rotate so that position `start` becomes index 0.
    pub fn rotated(&self, start: usize) -> DnaSequence {
        DnaSequence { symbols: self.window(start, self.len()) }
    }

    /// Read a one-line ACGT file.
    pub fn load_text(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    /// Write as one ACGT line terminated by a newline.
    pub fn save_text(&self, path: &Path) -> Result<()> {
        std::fs::write(path, format!("{self}\n"))?;
        Ok(())
    }
}

impl fmt::Display for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&codes_to_string(&self.symbols))
    }
}

impl FromStr for DnaSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let line = s.trim_end_matches(['\n', '\r']);
        if line.contains('\n') {
            return Err(Error::Parse("sequence file must hold a single line".into()));
        }
        Ok(Self { symbols: parse_codes(line)? })
    }
}

/// Inverse-CDF sampler over the four nucleotides.
#[derive(Debug, Clone, Copy)]
pub struct Categorical4 {
    cum: [f64; 4],
}

impl Categorical4 {
    pub fn new(p: [f64; 4]) -> Self {
        let mut cum = [0.0; 4];
        let mut acc = 0.0;
        for (c, m) in cum.iter_mut().zip(p) {
            acc += m;
            *c = acc;
        }
        // Pin the last non-empty bucket so rounding never leaks mass past it.
        if let Some(last) = (0..4).rev().find(|&i| p[i] > 0.0) {
            for c in cum.iter_mut().skip(last) {
                *c = f64::INFINITY;
            }
        }
        Self { cum }
    }

    pub fn sample(&self, rng: &mut SimRng) -> u8 {
        let u: f64 = rng.random();
        self.cum.iter().position(|&c| u < c).unwrap_or(3) as u8
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IidModel {
    pub p: Distribution,
}

/// First-order Markov source. `q[i][j]` is the probability of symbol `i`
/// following symbol `j`; every column sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix4", into = "Matrix4")]
pub struct MarkovModel {
    q: Matrix4,
}

impl TryFrom<Matrix4> for MarkovModel {
    type Error = Error;
    fn try_from(q: Matrix4) -> Result<Self> {
        Self::new(q)
    }
}

impl From<MarkovModel> for Matrix4 {
    fn from(m: MarkovModel) -> Self {
        m.q
    }
}

/// Any supported random source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceModel {
    Iid(Distribution),
    Markov(MarkovModel),
}

impl SourceModel {
    pub fn uniform() -> Self {
        SourceModel::Iid(Distribution::uniform(4))
    }

    pub fn generate_with(&self, g: usize, rng: &mut SimRng) -> Result<DnaSequence> {
        match self {
            SourceModel::Iid(p) => generate_iid_with(g, p, rng),
            SourceModel::Markov(m) => generate_markov_with(g, m, rng),
        }
    }

    /// Single-symbol law: `p` itself, or the stationary law of the chain.
    pub fn marginal(&self) -> Result<Distribution> {
        match self {
            SourceModel::Iid(p) => Ok(p.clone()),
            SourceModel::Markov(m) => Distribution::new(stationary_distribution(m)?.to_vec()),
        }
    }
}

impl MarkovModel {
    pub fn new(q: Matrix4) -> Result<Self> {
        for j in 0..4 {
            let mut col = 0.0;
            for row in &q {
                let v = row[j];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidTransitionMatrix(format!("entry {v} in column {j}")));
                }
                col += v;
            }
            if (col - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidTransitionMatrix(format!("column {j} sums to {col}")));
            }
        }
        Ok(Self { q })
    }

    /// The i.i.d. source written as a Markov chain with identical columns.
    pub fn from_iid(p: &Distribution) -> Result<Self> {
        let p = p.as_array4()?;
        let mut q = [[0.0; 4]; 4];
        for (i, row) in q.iter_mut().enumerate() {
            *row = [p[i]; 4];
        }
        Self::new(q)
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.q
    }

    /// Parse 16 comma-separated entries in row-major order.
    pub fn parse(s: &str) -> Result<Self> {
        let vals = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != 16 {
            return Err(Error::InvalidTransitionMatrix(format!("expected 16 entries, got {}", vals.len())));
        }
        let mut q = [[0.0; 4]; 4];
        for (k, v) in vals.into_iter().enumerate() {
            q[k / 4][k % 4] = v;
        }
        Self::new(q)
    }
}

/// Draw `g` i.i.d. symbols from `p`.
pub fn generate_iid(g: usize, p: &Distribution, seed: u64) -> Result<DnaSequence> {
    generate_iid_with(g, p, &mut rng_from_seed(seed))
}

pub fn generate_iid_with(g: usize, p: &Distribution, rng: &mut SimRng) -> Result<DnaSequence> {
    let sampler = Categorical4::new(p.as_array4()?);
    let symbols = (0..g).map(|_| sampler.sample(rng)).collect();
    Ok(DnaSequence { symbols })
}

/// Stationary distribution of a column-stochastic chain by power iteration.
pub fn stationary_distribution(model: &MarkovModel) -> Result<[f64; 4]> {
    const MAX_ITERS: usize = 100_000;
    let q = model.matrix();
    let mut pi = [0.25; 4];
    for _ in 0..MAX_ITERS {
        let mut next = [0.0; 4];
        for (i, n) in next.iter_mut().enumerate() {
            *n = (0..4).map(|j| q[i][j] * pi[j]).sum();
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let resid: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if resid <= 1e-13 {
            return Ok(pi);
        }
    }
    Err(Error::NoConvergence { what: "stationary distribution", iterations: MAX_ITERS })
}

/// Draw a stationary Markov sequence: the first symbol from the stationary
/// distribution, each later one from the column of its predecessor.
pub fn generate_markov(g: usize, model: &MarkovModel, seed: u64) -> Result<DnaSequence> {
    generate_markov_with(g, model, &mut rng_from_seed(seed))
}

pub fn generate_markov_with(g: usize, model: &MarkovModel, rng: &mut SimRng) -> Result<DnaSequence> {
    let pi = stationary_distribution(model)?;
    let q = model.matrix();
    let columns: Vec<Categorical4> = (0..4)
        .map(|j| Categorical4::new([q[0][j], q[1][j], q[2][j], q[3][j]]))
        .collect();
    let first = Categorical4::new(pi);
    let mut symbols = Vec::with_capacity(g);
    if g > 0 {
        symbols.push(first.sample(rng));
    }
    for _ in 1..g {
        let prev = *symbols.last().unwrap() as usize;
        symbols.push(columns[prev].sample(rng));
    }
    Ok(DnaSequence { symbols })
}

/// A base sequence with `M` copies of a repeat inserted.
#[derive(Debug, Clone, PartialEq)]
pub struct RepeatPlanted {
    pub sequence: DnaSequence,
    /// Start of each inserted copy, ascending; the first is 0.
    pub positions: Vec<usize>,
    pub repeat_len: usize,
}

impl RepeatPlanted {
    /// Remove the planted copies, returning the base sequence.
    pub fn strip(&self) -> DnaSequence {
        let mut out = Vec::with_capacity(self.sequence.len() - self.positions.len() * self.repeat_len);
        let codes = self.sequence.codes();
        let mut cursor = 0;
        for &p in &self.positions {
            out.extend_from_slice(&codes[cursor..p]);
            cursor = p + self.repeat_len;
        }
        out.extend_from_slice(&codes[cursor..]);
        DnaSequence { symbols: out }
    }
}

/// Insert `m` copies of `repeat` into `base`.
///
/// The first copy sits at index 0. The base is cut into `m` consecutive
/// segments of length `floor(G0/m)` or `ceil(G0/m)`, one after each copy; the
/// seed decides which segments get the extra symbol. No copy straddles the
/// circular seam.
pub fn plant_repeats(base: &DnaSequence, repeat: &DnaSequence, m: usize, seed: u64) -> Result<RepeatPlanted> {
    if m == 0 {
        return Err(Error::InvalidParameter("repeat copy count must be positive".into()));
    }
    let g0 = base.len();
    if repeat.len() > g0 {
        return Err(Error::InvalidParameter(format!(
            "repeat length {} exceeds base length {g0}",
            repeat.len()
        )));
    }
    let mut lens = vec![g0 / m; m];
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng_from_seed(seed));
    for &i in order.iter().take(g0 % m) {
        lens[i] += 1;
    }
    let k = repeat.len();
    let mut symbols = Vec::with_capacity(g0 + m * k);
    let mut positions = Vec::with_capacity(m);
    let mut cursor = 0;
    for len in lens {
        positions.push(symbols.len());
        symbols.extend_from_slice(repeat.codes());
        symbols.extend_from_slice(&base.codes()[cursor..cursor + len]);
        cursor += len;
    }
    Ok(RepeatPlanted { sequence: DnaSequence { symbols }, positions, repeat_len: k })
}

/// Start index of the lexicographically least rotation (Booth).
pub fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    let mut f = vec![-1isize; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = f[j - k - 1];
        while i != -1 && sj != at(k + i as usize + 1) {
            if sj < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = f[i as usize];
        }
        if sj != at(k + (i + 1) as usize) {
            if sj < at(k) {
                k = j;
            }
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    k % n
}

/// True when `b` is a rotation of `a`.
pub fn sequences_equal_circular(a: &DnaSequence, b: &DnaSequence) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let ra = least_rotation(a.codes());
    let rb = least_rotation(b.codes());
    let n = a.len();
    (0..n).all(|i| a.codes()[(ra + i) % n] == b.codes()[(rb + i) % n])
}
