use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "lacuna", version, about = "Verification toolkit for the sharp L2 -> L6 extension inequality with lacunary spectrum")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Worker threads for parallel sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    /// Rebuild the quadrature table instead of reading or writing the disk cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    /// Truncation radius of the direct quadrature.
    #[arg(long, global = true, default_value_t = 1.0e5)]
    pub r_max: f64,

    /// Panel-halving agreement target of the direct quadrature.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,

    /// Largest Bessel order stored in the quadrature table.
    #[arg(long, global = true, default_value_t = 532)]
    pub order_cap: u32,

    /// Source of the diagonal integrals.
    #[arg(long, global = true, value_enum, default_value_t = Diagonal::Direct)]
    pub diagonal: Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Diagonal {
    /// Truncated direct quadrature with an analytic tail bound.
    Direct,
    /// Table sum recentred inside the one-sided 1e-2 gap.
    Centered,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bessel functions of the first kind and zeros of J_1.
    #[command(subcommand)]
    Bessel(BesselCmd),
    /// Sextet integrals, F ratios and threshold sweeps.
    #[command(subcommand)]
    Integrals(IntegralsCmd),
    /// Exception classification of a lacunary spectrum.
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Check the inequality and its certificate on a spectrum.
    Certify(CertifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum BesselCmd {
    /// J_n(x).
    Eval {
        #[arg(short = 'n', long, allow_negative_numbers = true)]
        n: i64,
        #[arg(short = 'x', long)]
        x: f64,
    },
    /// The first `count` non-negative zeros of J_1, starting at 0.
    Zeros {
        #[arg(short = 'c', long)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum IntegralsCmd {
    /// Table approximation of the diagonal integral at (k, m, n).
    Tilde(Triple),
    /// Direct quadrature of a sextet integral.
    Direct {
        #[arg(num_args = 6, required = true, allow_negative_numbers = true, value_name = "N")]
        orders: Vec<i64>,
    },
    /// Diagonal integral as used by the certificate.
    Script(Triple),
    /// F(n1, n2, n3) = I(0,0,0) / I(n1, n2, n3).
    #[command(alias = "F")]
    F(Triple),
    /// The conjectured sharp constant.
    Copt,
    /// Finite-window threshold suites.
    Sweep {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest order in the gap sweep.
        #[arg(long, default_value_t = 60)]
        max_order: u32,
    },
}

#[derive(Debug, Args)]
pub struct Triple {
    #[arg(num_args = 3, required = true, allow_negative_numbers = true, value_name = "N")]
    pub orders: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Lower bounds on F over the finite windows.
    BoundsF,
    /// Gap between direct diagonal integrals and their table values.
    Lemma8,
}

#[derive(Debug, Args)]
pub struct SpectrumSpec {
    /// Explicit lambda_0 = 0 < lambda_1 < ...
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["base", "depth"], required_unless_present = "base")]
    pub lambdas: Option<Vec<i128>>,

    /// Geometric spectrum [0, s, s q, ..., s q^(depth-1)].
    #[arg(long, requires = "depth")]
    pub base: Option<i128>,

    #[arg(long, requires = "base")]
    pub depth: Option<usize>,

    #[arg(long, default_value_t = 1, requires = "base")]
    pub scale: i128,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Classify every triple sum of the truncation.
    Classify {
        #[command(flatten)]
        spec: SpectrumSpec,
        /// Compare brute force against the closed-form exception families.
        #[arg(long)]
        cross_check: bool,
        /// List unique and trivial points too, not only exceptions.
        #[arg(long)]
        all: bool,
    },
    /// Check that non-zero pair sums are uniquely represented.
    P2 {
        #[command(flatten)]
        spec: SpectrumSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffPreset {
    /// f^(0) = 1.
    Const,
    /// f^(1) = f^(-1) = 1.
    PmOne,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub spec: SpectrumSpec,

    /// Built-in coefficient vector.
    #[arg(long, conflicts_with = "coeff_file")]
    pub coeff: Option<CoeffPreset>,

    /// CSV file with header `n,re,im`.
    #[arg(long)]
    pub coeff_file: Option<PathBuf>,

    /// Random coefficient vectors to test. Defaults to 100 when no coefficients are given.
    #[arg(long)]
    pub trials: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Largest support of a random vector.
    #[arg(long, default_value_t = 9)]
    pub max_support: usize,

    /// Trade-off parameter of the basic inequality.
    #[arg(long, default_value_t = 6.66)]
    pub b: f64,
}
