use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "zaklab",
    version,
    about = "Zak-transform numerics for Gabor generators"
)]
pub struct Cli {
    /// Flat key=value file; explicit flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Zak transform dump and unitarity check.
    Zak(ZakArgs),
    /// Riesz bounds from the Zak modulus.
    Riesz(Common),
    /// Residuals of the quasiperiodicity, Fourier-swap and convolution identities.
    Identities(IdentitiesArgs),
    /// Winding number of the Zak transform around the unit square.
    Winding(PlaneArgs),
    /// Jump certificate for an argument branch.
    Lemma1(Lemma1Args),
    /// Jump set of the Zak transform at steps 1/k, 1/n.
    Jumpset(PlaneArgs),
    /// Smoothing alternatives for dilated mollifiers.
    Lemma3(Lemma3Args),
    /// Space and frequency tails against the theorem bound.
    Tails(TailsArgs),
    /// Tail sweep over lists of rectangles.
    Probe(ProbeArgs),
    /// Tail model sweep with L = R·sqrt(ln R).
    Sharpness(SharpnessArgs),
    /// Golden table of the mollifier constant.
    Gamma(GammaArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Advisory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    /// Bounds apply to |Zg|².
    Squared,
    /// Bounds apply to |Zg|.
    Modulus,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// indicator, modulated-indicator, gaussian, synthetic or zero.
    #[arg(long, default_value = "indicator")]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Samples per unit length.
    #[arg(long)]
    pub q: Option<usize>,
    /// Support half-width in unit cells.
    #[arg(long)]
    pub m: Option<usize>,
    /// Seed for the synthetic family.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Gaussian width.
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Comma-separated modulation frequencies.
    #[arg(long)]
    pub modulation: Option<String>,
    /// Comma-separated translation.
    #[arg(long)]
    pub translation: Option<String>,
    #[arg(long, value_enum, default_value = "strict")]
    pub mode: ModeArg,
    /// Directory for CSV, PGM and text artifacts.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ZakArgs {
    #[command(flatten)]
    pub common: Common,
    /// Frequency resolution (defaults to 2M).
    #[arg(long)]
    pub n: Option<usize>,
    /// Relative unitarity tolerance (defaults to 1e-6, 1e-3 for gaussians).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct IdentitiesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Dilation scale of the mollifier used as convolution kernel.
    #[arg(long)]
    pub p3_r: Option<f64>,
    #[arg(long, default_value_t = 5e-3)]
    pub tol_zf: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol_p3: f64,
}

#[derive(Args, Debug)]
pub struct PlaneArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// y-resolution of the sampled plane (defaults to 64n).
    #[arg(long)]
    pub ny: Option<usize>,
}

#[derive(Args, Debug)]
pub struct Lemma1Args {
    #[command(flatten)]
    pub plane: PlaneArgs,
    #[arg(long, default_value_t = 0)]
    pub base_a: usize,
    #[arg(long, default_value_t = 0)]
    pub base_b: usize,
}

#[derive(Args, Debug)]
pub struct Lemma3Args {
    #[command(flatten)]
    pub common: Common,
    /// Space scales, one value or colon-separated per axis.
    #[arg(long, default_value = "1")]
    pub r: String,
    /// Frequency scales, one value or colon-separated per axis.
    #[arg(long, default_value = "1")]
    pub l: String,
    #[arg(long, default_value_t = 0)]
    pub axis: usize,
    #[arg(long, value_enum, default_value = "squared")]
    pub convention: ConventionArg,
    /// Lower bound overriding the computed Riesz bound.
    #[arg(long)]
    pub a: Option<f64>,
    /// Upper bound overriding the computed Riesz bound.
    #[arg(long)]
    pub b: Option<f64>,
}

#[derive(Args, Debug)]
pub struct TailsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "1")]
    pub r: String,
    #[arg(long, default_value = "1")]
    pub l: String,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated rectangles; axes within one rectangle separated by colons.
    #[arg(long, default_value = "1,2,4,8")]
    pub r_list: String,
    #[arg(long, default_value = "1,2,4,8")]
    pub l_list: String,
}

#[derive(Args, Debug)]
pub struct SharpnessArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "3,10,100,1000")]
    pub r_values: String,
    /// Also measure tails of the tensor power of the generator.
    #[arg(long)]
    pub measured: bool,
}

#[derive(Args, Debug)]
pub struct GammaArgs {
    #[arg(long, default_value = "1,2,3")]
    pub dims: String,
    #[arg(long, default_value = "32,64,128")]
    pub resolutions: String,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}
