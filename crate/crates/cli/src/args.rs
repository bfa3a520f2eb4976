use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "unruhchan",
    version,
    about = "Holevo and coherent information of single- and dual-rail Unruh-mode channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every measure at one parameter point.
    Point(SharedArgs),
    /// Tabulate measures over a grid of r, qR and alpha2.
    Sweep(SharedArgs),
    /// Maximize a measure over (alpha2, qR) along a range of r.
    Optimize(SharedArgs),
    /// Regenerate fig1..fig6 (SVG plus backing CSV) into the --out directory.
    Figures(SharedArgs),
}

/// Options shared by all subcommands. Values are kept as text and parsed
/// after merging with the config file.
#[derive(Debug, Args, Default)]
pub struct SharedArgs {
    /// Flat `key = value` file supplying defaults for any option below.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// single | dual
    #[arg(long)]
    pub rail: Option<String>,
    /// classical | quantum | both
    #[arg(long)]
    pub channel: Option<String>,
    /// Squeezing: start:stop:step, or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Proper acceleration; r follows from tanh r = exp(-pi c omega / a).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Rindler frequency (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<String>,
    /// Speed of light (default 1).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Comma-separated right-region weights in [1/sqrt2, 1]; `1/sqrt2` is accepted.
    #[arg(long, allow_hyphen_values = true)]
    pub qr: Option<String>,
    /// Comma-separated |alpha|^2 values in [0, 1].
    #[arg(long, allow_hyphen_values = true)]
    pub alpha2: Option<String>,
    /// Per-mode Fock cutoff: auto | integer >= 2.
    #[arg(long)]
    pub nmax: Option<String>,
    /// Truncation-deficit tolerance (default 1e-8).
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<String>,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    pub jobs: Option<String>,
    /// Output file (point/sweep/optimize) or directory (figures).
    #[arg(long)]
    pub out: Option<String>,
    /// csv | svg | both
    #[arg(long)]
    pub format: Option<String>,
    /// holevo | coherent (optimize only)
    #[arg(long)]
    pub measure: Option<String>,
    /// R | Rbar (optimize only)
    #[arg(long)]
    pub receiver: Option<String>,
}
