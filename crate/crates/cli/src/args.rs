use clap::{Args, Parser, Subcommand, ValueEnum};
use rsl_core::rmt::EnsembleClass;
use serde::{Serialize, Serializer};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "rsl", version, about = "Riemann zeros, prime-orbit sums and random-matrix statistics")]
pub struct Cli {
    /// Configuration file of `key = value` lines; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Number of worker threads (default: one per core)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Find zeros of zeta on the critical line below --emax
    Zeros(ZerosArgs),
    /// Exact, smooth and oscillating parts of the zero count over an E grid
    Count(CountArgs),
    /// Truncated prime and periodic-orbit sums over an E grid
    Orbitsum(OrbitsumArgs),
    /// Doubling identity for f(n) = x^n
    Identity(IdentityArgs),
    /// Class-C ansatz sum against the prime sum on closed truncations
    Equiv(EquivArgs),
    /// Sample a random-matrix ensemble and write its spectra
    Rmt(RmtArgs),
    /// Spacing, pair-correlation and near-zero statistics
    Stats(StatsArgs),
    /// Lowest zeros of quadratic-character L-functions
    Family(FamilyArgs),
    /// Primes in residue classes against Li(x)/φ(d)
    Progression(ProgressionArgs),
    /// Validate and import a zero table
    Ingest(IngestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zeros(_) => "zeros",
            Command::Count(_) => "count",
            Command::Orbitsum(_) => "orbitsum",
            Command::Identity(_) => "identity",
            Command::Equiv(_) => "equiv",
            Command::Rmt(_) => "rmt",
            Command::Stats(_) => "stats",
            Command::Family(_) => "family",
            Command::Progression(_) => "progression",
            Command::Ingest(_) => "ingest",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Zeros(a) => &a.output,
            Command::Count(a) => &a.output,
            Command::Orbitsum(a) => &a.output,
            Command::Identity(a) => &a.output,
            Command::Equiv(a) => &a.output,
            Command::Rmt(a) => &a.output,
            Command::Stats(a) => &a.output,
            Command::Family(a) => &a.output,
            Command::Progression(a) => &a.output,
            Command::Ingest(a) => &a.output,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Rmt(a) => Some(a.seed),
            Command::Stats(a) if a.source == StatsSource::Ensemble && a.input.is_none() => Some(a.seed),
            _ => None,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct OutputArgs {
    /// Data file to write (default: <command>.<format> in the working directory)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Data file format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct ZerosArgs {
    /// Upper height; all zeros with 0 < γ < emax are found
    #[arg(long, default_value_t = 100.0)]
    pub emax: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct GridArgs {
    /// First grid point
    #[arg(long, default_value_t = 10.0)]
    pub emin: f64,
    /// Last grid point
    #[arg(long, default_value_t = 100.0)]
    pub emax: f64,
    /// Number of evenly spaced grid points
    #[arg(long, default_value_t = 91)]
    pub points: usize,
}

impl GridArgs {
    pub fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.emin];
        }
        let h = (self.emax - self.emin) / (self.points - 1) as f64;
        (0..self.points).map(|i| self.emin + h * i as f64).collect()
    }
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct CountArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct OrbitsumArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Largest prime P
    #[arg(long, default_value_t = 1000)]
    pub primes: u64,
    /// Largest doubling index K of the ansatz orbits
    #[arg(long, default_value_t = 3)]
    pub kmax: u32,
    /// Repetitions r <= R per orbit
    #[arg(long, default_value_t = 3)]
    pub reps: u64,
    /// Use the closed truncation 2^k r <= NMAX instead of --kmax/--reps
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Gaussian smoothing width for the reconstructed staircase (0 = raw)
    #[arg(long, default_value_t = 0.2)]
    pub width: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct IdentityArgs {
    /// Values of x, comma separated, with |x| < 1
    #[arg(long, value_delimiter = ',', default_value = "0.5", allow_hyphen_values = true)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct EquivArgs {
    /// Energies, comma separated
    #[arg(long, value_delimiter = ',', default_value = "1,20,50")]
    pub energies: Vec<f64>,
    /// Prime cutoffs, comma separated
    #[arg(long, value_delimiter = ',', default_value = "2,5,11")]
    pub primes: Vec<u64>,
    /// Closed-truncation bounds on n = 2^k r, comma separated
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    pub nmax: Vec<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn serialize_class<S: Serializer>(class: &EnsembleClass, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&class.to_string())
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct EnsembleArgs {
    /// Symmetry class: GUE, C or D
    #[arg(long, default_value = "GUE")]
    #[serde(serialize_with = "serialize_class")]
    pub class: EnsembleClass,
    /// Base dimension N (class C matrices are 2N x 2N)
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Number of samples
    #[arg(long, default_value_t = 1)]
    pub samples: u64,
    /// Entry variance scale
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct RmtArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StatsSource {
    Zeros,
    Ensemble,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct StatsArgs {
    /// What to analyse
    #[arg(long, value_enum, default_value_t = StatsSource::Zeros)]
    pub source: StatsSource,
    /// Read a zero table or an `rmt` spectrum file instead of computing
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Zeros: search height
    #[arg(long, default_value_t = 1420.0)]
    pub emax: f64,
    /// Zeros: keep only the first COUNT zeros
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    /// Ensemble: random seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ensemble: central fraction of each spectrum kept for unfolding
    #[arg(long, default_value_t = 0.6)]
    pub window: f64,
    /// Ensemble: near-zero bin width (default: a quarter of the mean spacing at zero)
    #[arg(long)]
    pub bin: Option<f64>,
    /// Largest pair separation
    #[arg(long, default_value_t = 3.0)]
    pub pair_max: f64,
    /// Pair-correlation bin width
    #[arg(long, default_value_t = 0.1)]
    pub pair_width: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct FamilyArgs {
    /// Moduli, comma separated (default: primes p ≡ 1 mod 4 up to --max-modulus)
    #[arg(long, value_delimiter = ',')]
    pub moduli: Option<Vec<u64>>,
    /// Largest prime modulus for the default family
    #[arg(long, default_value_t = 200)]
    pub max_modulus: u64,
    /// Search window (0, WINDOW) for the lowest zero
    #[arg(long, default_value_t = 20.0)]
    pub window: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct ProgressionArgs {
    /// Modulus d
    #[arg(long, default_value_t = 4)]
    pub modulus: u64,
    /// Bounds x, comma separated
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000")]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
#[command(args_override_self = true)]
pub struct IngestArgs {
    /// Zero table: one ordinate per line, or `k,gamma` rows
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}
