use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tropjac_core::exact::parse_rational;
use tropjac_core::Rational;

/// An exact rational flag value such as `3`, `-21` or `74/9`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Q).ok_or_else(|| format!("{s:?} is not an exact rational (use p or p/q)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "tropjac", version, about = "Genus-2 tropical curves with split Jacobians")]
pub struct Cli {
    /// Output format; `sweep` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Iteration cap for reductions, cone cap for `fan` and `locus-compare`.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SplitArgs {
    #[arg(long)]
    pub d: u64,
    #[arg(long)]
    pub k: u64,
    /// Length of E'.
    #[arg(long, allow_hyphen_values = true)]
    pub lp: Q,
    /// Length of E.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Q,
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub q11: Q,
    #[arg(long, allow_hyphen_values = true)]
    pub q12: Q,
    #[arg(long, allow_hyphen_values = true)]
    pub q22: Q,
}

/// Either a JSON input file or splitting data whose canonical morphism is used.
#[derive(Args, Debug, Clone)]
pub struct MorphismArgs {
    /// JSON file with `morphism`, `z1` and optionally `z2`; `-` reads stdin.
    #[arg(long, conflicts_with_all = ["d", "k", "lp", "l"])]
    pub input: Option<PathBuf>,
    #[arg(long, requires_all = ["k", "lp", "l"])]
    pub d: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lp: Option<Q>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<Q>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The sign-flipped period matrix Q^pp of the quotient.
    Setmatrix(SplitArgs),
    /// Selling reduction of a positive definite form.
    Selling(FormArgs),
    /// Representative in the fundamental domain.
    Fd(FormArgs),
    /// Tropical curve whose period matrix is the given form.
    Lengths(FormArgs),
    /// Full pipeline from splitting data to the curve.
    Reconstruct(SplitArgs),
    /// The two degree-d covers onto E' and E.
    Covers(SplitArgs),
    /// Isogeny, adjoint and the maps between the factors.
    Diagram(SplitArgs),
    /// Decide whether a polarization descends along an isogeny.
    Mumford(MorphismArgs),
    /// Adjoint of a morphism between principally polarized tori.
    Adjoint(MorphismArgs),
    /// Cones of the fan of the length quadrant.
    Fan {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
        /// Also write ray directions and cone samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare the images of two fans in the theta cell.
    LocusCompare {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k1: u64,
        #[arg(long)]
        k2: u64,
    },
    /// Run the pipeline on a grid of lengths.
    Sweep {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        k: u64,
        /// Comma-separated values of lp.
        #[arg(long, requires = "l", conflicts_with = "farey")]
        lp: Option<String>,
        /// Comma-separated values of l.
        #[arg(long, requires = "lp")]
        l: Option<String>,
        /// Use every a/b with 1 ≤ a, b ≤ N for both lengths.
        #[arg(long, required_unless_present = "lp")]
        farey: Option<u64>,
    },
}
