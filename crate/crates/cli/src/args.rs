use clap::{Args, Parser, Subcommand};

/// Exact Abelian differentials on smooth plane curves over Q.
#[derive(Debug, Parser)]
#[command(name = "weier", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree and genus of the curve.
    Genus(CurveArgs),
    /// Exact smoothness test.
    Smooth(CurveArgs),
    /// Basis of the differentials of the first kind.
    FirstKind(CurveArgs),
    /// Differential of the third kind with residues +1 at P1 and -1 at P2.
    ThirdKind(PoleArgs),
    /// Value of the fundamental function at P1.
    Haupt(HauptArgs),
    /// Run every available certification check.
    Verify(PoleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Genus(_) => "genus",
            Command::Smooth(_) => "smooth",
            Command::FirstKind(_) => "first-kind",
            Command::ThirdKind(_) => "third-kind",
            Command::Haupt(_) => "haupt",
            Command::Verify(_) => "verify",
        }
    }

    pub fn curve_args(&self) -> &CurveArgs {
        match self {
            Command::Genus(c) | Command::Smooth(c) | Command::FirstKind(c) => c,
            Command::ThirdKind(p) | Command::Verify(p) => &p.curve,
            Command::Haupt(h) => &h.poles.curve,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Curve equation in x and y, e.g. "x^3-y^3+2*x*y+x-2*y+1".
    #[arg(short = 'f', long, allow_hyphen_values = true)]
    pub curve: String,

    /// Decimal digits of approximations.
    #[arg(long, default_value_t = 50)]
    pub digits: u32,

    /// Emit the structured JSON document.
    #[arg(long)]
    pub json: bool,

    /// Skip the exact smoothness test.
    #[arg(long)]
    pub assume_smooth: bool,

    /// Omit wall-clock timings (for byte-identical output).
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PoleArgs {
    #[command(flatten)]
    pub curve: CurveArgs,

    /// Abscissa of the pole with residue +1.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: String,

    /// Abscissa of the pole with residue -1.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: String,

    /// Index of P1 in the canonical root order over x1.
    #[arg(long, default_value_t = 0)]
    pub root1: usize,

    #[arg(long, default_value_t = 0)]
    pub root2: usize,

    /// Rational ordinate of P1 (instead of a root index).
    #[arg(long, allow_hyphen_values = true)]
    pub y1: Option<String>,

    #[arg(long, allow_hyphen_values = true)]
    pub y2: Option<String>,

    /// Truncation order of the local series used for residues.
    #[arg(long, default_value_t = 2)]
    pub series_order: usize,

    /// Corrupt the constructed numerator before verification.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Args)]
pub struct HauptArgs {
    #[command(flatten)]
    pub poles: PoleArgs,

    /// Abscissa of the evaluation point P'.
    #[arg(long, allow_hyphen_values = true)]
    pub xp: String,

    #[arg(long, default_value_t = 0)]
    pub rootp: usize,

    #[arg(long, allow_hyphen_values = true)]
    pub yp: Option<String>,

    /// Abscissas of the additional points A_i (one per unit of genus).
    #[arg(long = "a", allow_hyphen_values = true)]
    pub a: Vec<String>,

    /// Root indices of the A_i, in the same order (default 0).
    #[arg(long)]
    pub roota: Vec<usize>,
}
