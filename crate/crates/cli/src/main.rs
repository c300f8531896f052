use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tkrylov::{Algorithm, BasisTruncation, Error, FillInit, MaskPattern, SketchParams};

mod commands;

/// Randomized truncated T-SVD for third-order tensors: image compression,
/// image completion and synthetic benchmarks.
#[derive(Debug, Parser)]
#[command(name = "tkrylov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Low-rank approximation of an RGB image.
    Compress(CompressArgs),
    /// Recover missing pixels of an RGB image.
    Complete(CompleteArgs),
    /// Relative error and runtime of both algorithms on synthetic tensors (CSV).
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoArg {
    Power,
    Krylov,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Power => Algorithm::Power,
            AlgoArg::Krylov => Algorithm::BlockKrylov,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasisArg {
    /// Every Krylov block, capped at min(n1, n2).
    Full,
    /// Only the first R+P basis slices.
    Truncated,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PatternArg {
    Random,
    Rows,
    Columns,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitArg {
    /// Missing entries start at 0.
    Zero,
    /// Missing entries start at the mean of the observed ones.
    Mean,
}

#[derive(Debug, Args)]
struct SketchArgs {
    /// Target tubal rank R.
    #[arg(long, default_value_t = 25)]
    rank: usize,
    /// Oversampling P.
    #[arg(long, default_value_t = 5)]
    oversample: usize,
    /// Power-iteration / Krylov depth q.
    #[arg(long, default_value_t = 2)]
    power: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BasisArg::Full)]
    basis: BasisArg,
}

impl SketchArgs {
    fn params(&self) -> SketchParams {
        let truncation = match self.basis {
            BasisArg::Full => BasisTruncation::Full,
            BasisArg::Truncated => BasisTruncation::TruncatedToRPlusP,
        };
        SketchParams::new(self.rank, self.oversample, self.power, self.seed).with_basis_truncation(truncation)
    }
}

#[derive(Debug, Args)]
struct CompressArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[command(flatten)]
    sketch: SketchArgs,
    #[arg(long, value_enum, default_value_t = AlgoArg::Krylov)]
    algo: AlgoArg,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompleteArgs {
    #[arg(long)]
    input: PathBuf,
    /// Recovered image.
    #[arg(long)]
    output: PathBuf,
    /// Observed (masked) image; defaults to `<output stem>_observed.<ext>`.
    #[arg(long)]
    observed: Option<PathBuf>,
    #[command(flatten)]
    sketch: SketchArgs,
    #[arg(long, value_enum, default_value_t = AlgoArg::Krylov)]
    algo: AlgoArg,
    #[arg(long, default_value_t = 100)]
    iters: usize,
    /// Fraction of pixels to hide, in [0, 1).
    #[arg(long, default_value_t = 0.7)]
    mask_ratio: f64,
    #[arg(long, value_enum, default_value_t = PatternArg::Random)]
    mask_pattern: PatternArg,
    /// Grayscale mask image (0 = missing); overrides the generated mask.
    #[arg(long)]
    mask_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = InitArg::Zero)]
    init: InitArg,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Singular-value profile: 1 = m⁻⁵, 2 = m⁻⁶, 3 = 0.5^m.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    case: u8,
    /// Tensor size n (n × n × n).
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 25)]
    rank: usize,
    #[arg(long, default_value_t = 5)]
    oversample: usize,
    #[arg(long, default_value_t = 2)]
    power: usize,
    /// First sketch seed; trials use `seed, seed+1, …`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of seeds per configuration.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Seed of the synthetic tensor itself.
    #[arg(long, default_value_t = 0)]
    data_seed: u64,
    /// Sweep over ranks instead of `--rank` (comma-separated).
    #[arg(long, value_delimiter = ',')]
    ranks: Vec<usize>,
    /// Sweep over depths instead of `--power` (comma-separated).
    #[arg(long, value_delimiter = ',')]
    powers: Vec<usize>,
    /// Sweep over sizes instead of `--n` (comma-separated).
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    /// CSV output path; printed to stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn pattern(p: PatternArg) -> MaskPattern {
    match p {
        PatternArg::Random => MaskPattern::Random,
        PatternArg::Rows => MaskPattern::Rows,
        PatternArg::Columns => MaskPattern::Columns,
    }
}

fn init(i: InitArg) -> FillInit {
    match i {
        InitArg::Zero => FillInit::ZeroFill,
        InitArg::Mean => FillInit::MeanFill,
    }
}

/// 2: bad configuration, 3: file problems, 4: numerical failure.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Image(_) | Error::Format(_) => 3,
        Error::Numerical { .. } | Error::Symmetry { .. } => 4,
        Error::Config(_)
        | Error::Rank(_)
        | Error::Value(_)
        | Error::Dimension(_)
        | Error::Index { .. }
        | Error::Size(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compress(a) => commands::compress(&a),
        Command::Complete(a) => commands::complete(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
