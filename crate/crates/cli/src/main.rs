//! `shotgun`: generate genomes, sample reads, assemble, diagnose, print
//! theoretical thresholds and run Monte Carlo sweeps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use shotgun_core::assembly::{
    debruijn_assemble, default_kmer_size, greedy_assemble, noisy_greedy_assemble, repeats_assemble, sequential_assemble,
    OverlapScorer,
};
use shotgun_core::diagnostics::{check_coverage, count_repeat_pairs, find_repeats, verify_layout, CoverageReport, RepeatReport};
use shotgun_core::experiment::{preset, run_sweep, ExperimentConfig, RunManifest};
use shotgun_core::overlap::MapScorerConfig;
use shotgun_core::reads::{
    apply_noise, positions_path, read_read_set, read_read_set_file, sample_mate_pairs, sample_reads, write_mate_pairs,
    write_read_set,
};
use shotgun_core::rng::{derive_seed, rng_from_seed, stream};
use shotgun_core::sequence::plant_repeats;
use shotgun_core::theory::threshold_report;
use shotgun_core::{Distribution, DmcChannel, DnaSequence, Error, MarkovModel, MatePairSet, Result, SourceModel};

#[derive(Parser)]
#[command(name = "shotgun", version, about = "DNA shotgun sequencing simulator")]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random circular genome.
    Gen(GenArgs),
    /// Sample reads (or mate pairs) from a genome file.
    Sample(SampleArgs),
    /// Reassemble a genome from a read file and print the outcome as JSON.
    Assemble(AssembleArgs),
    /// Report coverage gaps, repeats and layout checks.
    Diagnose(DiagnoseArgs),
    /// Print theoretical thresholds for a source and channel as JSON.
    Thresholds(ThresholdArgs),
    /// Run a Monte Carlo sweep and write CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Iid,
    Markov,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "iid")]
    model: ModelKind,
    /// Genome length.
    #[arg(long = "G", value_name = "G")]
    g: usize,
    /// Symbol distribution: `uniform` or four comma-separated masses.
    #[arg(long, default_value = "uniform")]
    p: String,
    /// Markov transition matrix, 16 comma-separated values, row-major,
    /// entry `(i, j)` = P(next = i | current = j).
    #[arg(long)]
    q: Option<String>,
    /// Plant copies of a random repeat of this length (the genome grows by
    /// `copies * repeat_len`).
    #[arg(long, requires = "copies")]
    repeat_len: Option<usize>,
    #[arg(long, requires = "repeat_len")]
    copies: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    genome: PathBuf,
    /// Number of reads, or of pairs with `--j`.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    seed: u64,
    /// Symmetric substitution rate.
    #[arg(long)]
    eps: Option<f64>,
    /// Sample mate pairs whose reads are `j` symbols apart.
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum AlgoArg {
    Greedy,
    Sequential,
    Debruijn,
    NoisyGreedy,
    Repeats,
}

#[derive(Args)]
struct AssembleArgs {
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long)]
    reads: PathBuf,
    /// K-mer size for de Bruijn assembly.
    #[arg(long)]
    k: Option<usize>,
    /// MAP decision threshold in bits per symbol (noisy greedy).
    #[arg(long)]
    theta: Option<f64>,
    /// Use a Hamming overlap test with this mismatch fraction instead of MAP
    /// (noisy greedy).
    #[arg(long, conflicts_with = "theta")]
    alpha: Option<f64>,
    /// Unique flank length (repeats).
    #[arg(long)]
    d: Option<usize>,
    /// Repeat length (repeats).
    #[arg(long)]
    repeat_len: Option<usize>,
    /// Source distribution assumed by the MAP test.
    #[arg(long, default_value = "uniform")]
    p: String,
    /// Write the reconstructed genome here when one is found.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[arg(long)]
    genome: Option<PathBuf>,
    /// Read file; coverage needs its positions sidecar.
    #[arg(long)]
    reads: Option<PathBuf>,
    /// Repeat length to search for in the genome.
    #[arg(long)]
    ell: Option<usize>,
    /// Outcome JSON is recomputed with this assembler to check the layout.
    #[arg(long, value_enum)]
    layout: Option<AlgoArg>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, default_value = "uniform")]
    p: String,
    /// Markov transition matrix, 16 comma-separated values, row-major.
    #[arg(long)]
    q: Option<String>,
    /// Symmetric read error rate.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override trials per point.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: kind={} msg={}", e.kind(), msg);
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Sample(a) => sample(a),
        Command::Assemble(a) => assemble(a),
        Command::Diagnose(a) => diagnose(a),
        Command::Thresholds(a) => thresholds(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn source_model(model: ModelKind, p: &str, q: Option<&str>) -> Result<SourceModel> {
    match (model, q) {
        (ModelKind::Iid, None) => Ok(SourceModel::Iid(Distribution::parse_nucleotide(p)?)),
        (ModelKind::Iid, Some(_)) => Err(Error::InvalidParameter("--q needs --model markov".into())),
        (ModelKind::Markov, Some(q)) => Ok(SourceModel::Markov(MarkovModel::parse(q)?)),
        (ModelKind::Markov, None) => Err(Error::InvalidParameter("--model markov needs --q".into())),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct GenReport {
    length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    repeat_positions: Option<Vec<usize>>,
}

fn gen(a: GenArgs) -> Result<()> {
    let source = source_model(a.model, &a.p, a.q.as_deref())?;
    let mut rng = rng_from_seed(derive_seed(a.seed, &[stream::GENOME]));
    let base = source.generate_with(a.g, &mut rng)?;
    let (genome, positions) = match (a.repeat_len, a.copies) {
        (Some(k), Some(m)) => {
            let mut rrng = rng_from_seed(derive_seed(a.seed, &[stream::REPEAT]));
            let repeat = source.generate_with(k, &mut rrng)?;
            let planted = plant_repeats(&base, &repeat, m, derive_seed(a.seed, &[stream::PLANT]))?;
            (planted.sequence, Some(planted.positions))
        }
        _ => (base, None),
    };
    genome.save_text(&a.out)?;
    print_json(&GenReport { length: genome.len(), repeat_positions: positions })
}

fn sample(a: SampleArgs) -> Result<()> {
    let genome = DnaSequence::load_text(&a.genome)?;
    let read_seed = derive_seed(a.seed, &[stream::READS]);
    let noise_seed = derive_seed(a.seed, &[stream::NOISE]);
    let channel = match a.eps {
        Some(eps) if eps > 0.0 => Some(DmcChannel::symmetric(eps)?),
        Some(eps) if eps < 0.0 => return Err(Error::InvalidChannel(format!("error rate {eps} is negative"))),
        _ => None,
    };
    match a.j {
        Some(j) => {
            let mut pairs = sample_mate_pairs(&genome, a.n, a.l, j, read_seed)?;
            if let Some(ch) = &channel {
                pairs = pairs.with_noise(ch, noise_seed)?;
            }
            write_mate_pairs(&a.out, &pairs)
        }
        None => {
            let mut reads = sample_reads(&genome, a.n, a.l, read_seed)?;
            if let Some(ch) = &channel {
                reads = apply_noise(&reads, ch, noise_seed)?;
            }
            write_read_set(&a.out, &reads, None)
        }
    }
}

fn assemble(a: AssembleArgs) -> Result<()> {
    let file = read_read_set_file(&a.reads)?;
    let reads = &file.reads;
    let outcome = match a.algo {
        AlgoArg::Greedy => greedy_assemble(reads),
        AlgoArg::Sequential => sequential_assemble(reads),
        AlgoArg::Debruijn => {
            let p = Distribution::parse_nucleotide(&a.p)?;
            let k = a.k.unwrap_or_else(|| default_kmer_size(reads.genome_len(), reads.read_len(), &p));
            debruijn_assemble(reads, k)?
        }
        AlgoArg::NoisyGreedy => {
            let scorer = match a.alpha {
                Some(alpha) => OverlapScorer::Hamming { alpha },
                None => {
                    let p = Distribution::parse_nucleotide(&a.p)?;
                    let channel = if file.noise_eps > 0.0 {
                        DmcChannel::symmetric(file.noise_eps)?
                    } else {
                        DmcChannel::identity()
                    };
                    OverlapScorer::Map(MapScorerConfig::new(&p, &channel, a.theta)?)
                }
            };
            noisy_greedy_assemble(reads, &scorer)?
        }
        AlgoArg::Repeats => {
            let j = file
                .separation
                .ok_or_else(|| Error::InvalidParameter("repeat assembly needs a mate-pair read file".into()))?;
            let k = a.repeat_len.ok_or_else(|| Error::InvalidParameter("repeat assembly needs --repeat-len".into()))?;
            let d = a.d.ok_or_else(|| Error::InvalidParameter("repeat assembly needs --d".into()))?;
            let rs = read_read_set(&a.reads)?;
            let pairs = MatePairSet::from_reads(rs, j)?;
            repeats_assemble(&pairs.blind(), k, d)?
        }
    };
    if let (Some(out), Some(seq)) = (&a.out, &outcome.sequence) {
        seq.save_text(out)?;
    }
    print_json(&outcome.summary())
}

#[derive(Serialize, Default)]
struct DiagnoseReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    coverage: Option<CoverageReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    repeats: Option<RepeatReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    repeat_pair_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    layout_correct: Option<bool>,
}

fn diagnose(a: DiagnoseArgs) -> Result<()> {
    let mut report = DiagnoseReport::default();
    let reads = match &a.reads {
        Some(path) => {
            if !positions_path(path).exists() {
                return Err(Error::Parse(format!("{} has no positions sidecar", path.display())));
            }
            Some(read_read_set(path)?)
        }
        None => None,
    };
    if let Some(rs) = &reads {
        report.coverage = Some(check_coverage(rs));
    }
    if let Some(ell) = a.ell {
        let path = a.genome.as_deref().ok_or_else(|| Error::InvalidParameter("--ell needs --genome".into()))?;
        let genome = DnaSequence::load_text(path)?;
        report.repeats = Some(find_repeats(&genome, ell)?);
        report.repeat_pair_count = Some(count_repeat_pairs(&genome, ell));
    }
    if let Some(algo) = a.layout {
        let rs = reads.as_ref().ok_or_else(|| Error::InvalidParameter("--layout needs --reads".into()))?;
        let outcome = match algo {
            AlgoArg::Greedy => greedy_assemble(rs.blind()),
            AlgoArg::Sequential => sequential_assemble(rs.blind()),
            AlgoArg::NoisyGreedy => {
                let channel = if rs.noise_eps() > 0.0 {
                    DmcChannel::symmetric(rs.noise_eps())?
                } else {
                    DmcChannel::identity()
                };
                let cfg = MapScorerConfig::new(&Distribution::uniform(4), &channel, None)?;
                noisy_greedy_assemble(rs.blind(), &OverlapScorer::Map(cfg))?
            }
            _ => return Err(Error::InvalidParameter("layout checks support greedy, sequential, noisy-greedy".into())),
        };
        report.layout_correct = Some(verify_layout(&outcome, rs)?);
    }
    print_json(&report)
}

fn thresholds(a: ThresholdArgs) -> Result<()> {
    let source = match a.q.as_deref() {
        Some(q) => SourceModel::Markov(MarkovModel::parse(q)?),
        None => SourceModel::Iid(Distribution::parse_nucleotide(&a.p)?),
    };
    print_json(&threshold_report(&source, a.eps)?)
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    f(&mut out)?;
    out.flush()?;
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    let mut cfg: ExperimentConfig = match (&a.preset, &a.config) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        (None, None) => unreachable!("clap requires one of --preset, --config"),
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = a.trials {
        cfg.trials_per_point = trials;
    }
    cfg.validate()?;
    let output = run_sweep(&cfg)?;
    write_file(&a.out, |w| output.write_csv(w))?;
    if let Some(path) = &a.manifest {
        let manifest = RunManifest::new(&cfg, a.preset.as_deref());
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
        write_file(path, |w| Ok(writeln!(w, "{text}")?))?;
    }
    Ok(())
}
