use serde::{Deserialize, Serialize};

use crate::sequence::DnaSequence;

/// A read placed at an offset within a contig.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    pub read: u32,
    pub offset: usize,
}

/// A linear stretch of reconstructed sequence with the layout that built it.
/// The layout is empty for assemblers that do not track reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contig {
    pub symbols: Vec<u8>,
    pub layout: Vec<Placement>,
}

impl Contig {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    SingleCircularSequence,
    ContigSet,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum FailureReason {
    NoReads,
    /// The de Bruijn graph falls apart into several components.
    Disconnected { components: usize },
    /// No long high-multiplicity path of the declared repeat length.
    RepeatNotFound { found_len: usize },
    /// Contigs that do not run from the repeat's tail to its head.
    BrokenContigs { count: usize },
    /// A contig with no mate pair spanning the repeat copy after it.
    UnbridgedRepeat { contig: usize },
    /// Every candidate bridge matched more than one contig.
    AmbiguousIdentification { contig: usize },
    /// Bridges point one contig at two different successors.
    ConflictingBridges { contig: usize },
    /// Successor links do not form a single cycle.
    OrderingNotCyclic,
}

/// What an assembler produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyOutcome {
    pub kind: OutcomeKind,
    pub contigs: Vec<Contig>,
    /// Present exactly when `kind` is `SingleCircularSequence`.
    pub sequence: Option<DnaSequence>,
    pub closed: bool,
    /// Merges per overlap length, indexed by length.
    pub stage_histogram: Vec<usize>,
    /// Several reconstructions were consistent with the reads.
    pub ambiguous: bool,
    pub failure: Option<FailureReason>,
}

/// Compact report for the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeSummary {
    pub kind: OutcomeKind,
    pub n_contigs: usize,
    pub length: usize,
    pub closed: bool,
    pub stage_histogram: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<FailureReason>,
}

impl AssemblyOutcome {
    pub fn failure(reason: FailureReason) -> Self {
        Self {
            kind: OutcomeKind::Failure,
            contigs: Vec::new(),
            sequence: None,
            closed: false,
            stage_histogram: Vec::new(),
            ambiguous: false,
            failure: Some(reason),
        }
    }

    pub fn circular(sequence: DnaSequence, contigs: Vec<Contig>, stage_histogram: Vec<usize>) -> Self {
        Self {
            kind: OutcomeKind::SingleCircularSequence,
            contigs,
            sequence: Some(sequence),
            closed: true,
            stage_histogram,
            ambiguous: false,
            failure: None,
        }
    }

    pub fn contig_set(contigs: Vec<Contig>, stage_histogram: Vec<usize>) -> Self {
        Self {
            kind: OutcomeKind::ContigSet,
            contigs,
            sequence: None,
            closed: false,
            stage_histogram,
            ambiguous: false,
            failure: None,
        }
    }

    pub fn with_failure(mut self, reason: FailureReason) -> Self {
        self.kind = OutcomeKind::Failure;
        self.sequence = None;
        self.closed = false;
        self.failure = Some(reason);
        self
    }

    /// True when the output is one circular sequence equal to `genome` up to
    /// rotation.
    pub fn reconstructs(&self, genome: &DnaSequence) -> bool {
        self.sequence
            .as_ref()
            .is_some_and(|s| crate::sequence::sequences_equal_circular(s, genome))
    }

    pub fn summary(&self) -> OutcomeSummary {
        let length = match &self.sequence {
            Some(s) => s.len(),
            None => self.contigs.iter().map(Contig::len).sum(),
        };
        OutcomeSummary {
            kind: self.kind,
            n_contigs: if self.sequence.is_some() { 1 } else { self.contigs.len() },
            length,
            closed: self.closed,
            stage_histogram: self.stage_histogram.clone(),
            failure: self.failure.clone(),
        }
    }
}

/// Wrap a contig of length at least `g` into a circle when its two ends agree.
pub(crate) fn close_exact(symbols: &[u8], g: usize) -> Option<DnaSequence> {
    if g == 0 || symbols.len() < g {
        return None;
    }
    let extra = symbols.len() - g;
    (symbols[..extra] == symbols[g..]).then(|| DnaSequence::from_codes(symbols[..g].to_vec()).expect("valid codes"))
}

/// Majority symbol per column of a layout; ties go to the lower code.
pub(crate) fn consensus(reads: &crate::reads::BlindReads, layout: &[Placement], extra: &[(usize, &[u8])]) -> Vec<u8> {
    let l = reads.read_len();
    let len = layout
        .iter()
        .map(|p| p.offset + l)
        .chain(extra.iter().map(|(o, s)| o + s.len()))
        .max()
        .unwrap_or(0);
    let mut counts = vec![[0u32; 4]; len];
    for p in layout {
        for (k, &c) in reads.read(p.read as usize).iter().enumerate() {
            counts[p.offset + k][c as usize] += 1;
        }
    }
    for (o, s) in extra {
        for (k, &c) in s.iter().enumerate() {
            counts[o + k][c as usize] += 1;
        }
    }
    counts
        .iter()
        .map(|col| (0..4u8).max_by_key(|&c| (col[c as usize], std::cmp::Reverse(c))).unwrap())
        .collect()
}

/// Whether the layout's two ends agree after wrapping at `g`, judged by the
/// MAP test on the wrapped overlap.
pub(crate) fn close_noisy(symbols: &[u8], g: usize, cfg: &crate::overlap::MapScorerConfig) -> Option<DnaSequence> {
    if g == 0 || symbols.len() < g {
        return None;
    }
    let extra = symbols.len() - g;
    if extra > 0 && cfg.llr(&symbols[g..], &symbols[..extra]) < extra as f64 * cfg.theta() {
        return None;
    }
    Some(DnaSequence::from_codes(symbols[..g].to_vec()).expect("valid codes"))
}

