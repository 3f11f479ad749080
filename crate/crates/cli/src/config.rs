use std::fmt;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Rational;

use pochzeta_core::data::{bundled_zeros, load_zeros};
use pochzeta_core::params::parse_rational;
use pochzeta_core::{ExactComplex, ExpansionParams, PrecisionContext, ZeroTable};

/// Bad flags or flag combinations; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Parser)]
#[command(
    name = "pochzeta",
    version,
    about = "Pochhammer-polynomial expansions of zeta-related functions: figure data and generic sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical-line series against (1 - 2^{1/2-it}) zeta(1/2+it), t in [0, 18].
    Fig1(Common),
    /// The same for t in [18, 40], where the order switches to 50.
    Fig2(Common),
    /// ln((1 - 2^{1-sigma}) zeta(sigma)) and its d_k series on [-1, 1).
    Fig3(Common),
    /// psi1 from zeta zeros over x = ln k in [2.5, 30].
    Fig4(CriticalArgs),
    /// psi2 from primes next to psi1, with their difference.
    Fig5(CriticalArgs),
    /// Contributions of single primes to psi2.
    Fig6(Fig6Args),
    /// Convergence to Euler's constant as beta grows, k = e^15.
    Fig7(Fig7Args),
    /// Dump one coefficient family.
    Coeffs(CoeffsArgs),
    /// Partial sums of one expansion against its target on a line.
    Series(SeriesArgs),
    /// psi1/psi2 sweep with arbitrary parameters (exact kernels by default).
    Sweep(Common),
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a decimal or fraction: {s:?}"))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Node offset alpha, e.g. 9/2 or 0.5.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<ExactComplex>,
    /// Node step beta: "4", "i", "1+2i".
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<ExactComplex>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub sigma: Option<Rational>,
    /// Truncation order of the expansion.
    #[arg(long = "K")]
    pub order: Option<u64>,
    #[arg(long)]
    pub n_zeros: Option<usize>,
    #[arg(long)]
    pub n_trivial: Option<u64>,
    #[arg(long)]
    pub n_primes: Option<u64>,
    #[arg(long)]
    pub q_max: Option<u32>,
    /// Lower end of the grid (t, sigma, x = ln k or beta, depending on the command).
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub x_min: Option<Rational>,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub x_max: Option<Rational>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Target decimal digits; output is printed with this many significant digits.
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    /// Zero ordinates, one per line, '#' comments (default: the bundled 100).
    #[arg(long)]
    pub zeros_file: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// exp(-k p^{-beta q}) instead of (1 - p^{-beta q})^k in the prime sums.
    #[arg(long)]
    pub approx_paper: bool,
    /// Gamma(a) k^{-a} instead of B(a, k + 1) in the zero and prime routes.
    #[arg(long)]
    pub asymptotic: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalArgs {
    #[command(flatten)]
    pub common: Common,
    /// Exact kernels instead of the large-k formulas of the reference plots.
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Fig6Args {
    #[command(flatten)]
    pub common: Common,
    /// Comma separated primes.
    #[arg(long, value_delimiter = ',', default_values_t = [29u64, 229, 541])]
    pub primes: Vec<u64>,
    /// (1 - p^{-beta q})^k instead of exp(-k p^{-beta q}).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Fig7Args {
    #[command(flatten)]
    pub common: Common,
    /// ln k.
    #[arg(long, default_value_t = 15.0)]
    pub log_k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    B,
    A,
    D,
    Dhat,
    Dhathat,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Binomial,
    Zeros,
    Primes,
    ClosedForm,
}

#[derive(Debug, Clone, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Defaults to binomial, or closed-form for s.
    #[arg(long, value_enum)]
    pub route: Option<RouteArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    EtaFactor,
    Maslanka,
    LogEta,
    LogDeriv,
    FFunction,
    InvSMinus1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    T,
    Sigma,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub target: TargetArg,
    /// Vary Im s (real part from --sigma) or Re s (imaginary part from --t).
    #[arg(long, value_enum, default_value_t = AxisArg::T)]
    pub axis: AxisArg,
    #[arg(long, allow_hyphen_values = true, value_parser = rational)]
    pub t: Option<Rational>,
}

/// Per-command fallbacks for the shared flags.
#[derive(Clone, Debug)]
pub struct Defaults {
    pub params: ExpansionParams,
    pub order: u64,
    pub n_zeros: Option<usize>,
    pub n_trivial: u64,
    pub n_primes: u64,
    pub q_max: u32,
    pub x_min: Rational,
    pub x_max: Rational,
    pub points: usize,
    /// Grid excludes `x_max`.
    pub half_open: bool,
}

impl Defaults {
    pub fn new(params: ExpansionParams, x_min: Rational, x_max: Rational, points: usize) -> Self {
        Defaults {
            params,
            order: 40,
            n_zeros: None,
            n_trivial: 20,
            n_primes: 5000,
            q_max: 50,
            x_min,
            x_max,
            points,
            half_open: false,
        }
    }
}

/// Fully resolved and validated settings of one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: ExpansionParams,
    pub order: u64,
    pub n_zeros: usize,
    pub n_trivial: u64,
    pub n_primes: u64,
    pub q_max: u32,
    pub grid: Vec<Rational>,
    pub digits: u32,
    pub zeros: ZeroTable,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub approx_paper: bool,
    pub asymptotic: bool,
}

/// Largest accepted truncation order; the binomial transforms need
/// about 0.3 K extra digits.
pub const MAX_ORDER: u64 = 5000;

impl RunConfig {
    pub fn resolve(c: &Common, d: Defaults) -> anyhow::Result<Self> {
        let mut params = d.params;
        if c.alpha.is_some() || c.beta.is_some() || c.sigma.is_some() {
            params = ExpansionParams::new(
                c.alpha.clone().unwrap_or(params.alpha),
                c.beta.clone().unwrap_or(params.beta),
                c.sigma.clone().unwrap_or(params.sigma),
            )
            .map_err(|e| usage(e.to_string()))?;
        }
        PrecisionContext::new(c.digits, 0).map_err(|e| usage(e.to_string()))?;

        let order = c.order.unwrap_or(d.order);
        if order > MAX_ORDER {
            return Err(usage(format!("--K {order} exceeds {MAX_ORDER}")));
        }
        let points = c.points.unwrap_or(d.points);
        let x_min = c.x_min.clone().unwrap_or(d.x_min);
        let x_max = c.x_max.clone().unwrap_or(d.x_max);
        let grid = make_grid(&x_min, &x_max, points, d.half_open)?;

        let zeros = match &c.zeros_file {
            Some(path) => load_zeros(path, usize::MAX)
                .with_context(|| format!("loading zeros from {}", path.display()))?,
            None => bundled_zeros(),
        };
        let n_zeros = c.n_zeros.or(d.n_zeros).unwrap_or(zeros.len());
        if n_zeros == 0 || n_zeros > zeros.len() {
            return Err(usage(format!(
                "--n-zeros {n_zeros}: the zero table ({}) holds {} ordinates",
                zeros.source(),
                zeros.len()
            )));
        }
        let n_primes = c.n_primes.unwrap_or(d.n_primes);
        if n_primes == 0 {
            return Err(usage("--n-primes must be positive"));
        }
        let q_max = c.q_max.unwrap_or(d.q_max);
        if q_max == 0 {
            return Err(usage("--q-max must be positive"));
        }

        Ok(RunConfig {
            params,
            order,
            n_zeros,
            n_trivial: c.n_trivial.unwrap_or(d.n_trivial),
            n_primes,
            q_max,
            grid,
            digits: c.digits,
            zeros,
            out: c.out.clone(),
            format: c.format,
            approx_paper: c.approx_paper,
            asymptotic: c.asymptotic,
        })
    }

    /// Context with the guard digits an order-`order` transform needs.
    pub fn ctx_for_order(&self, order: u64) -> PrecisionContext {
        PrecisionContext::for_order(self.digits, order).expect("digits validated")
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::new(self.digits, 10).expect("digits validated")
    }

    pub fn grid_f64(&self) -> Vec<f64> {
        self.grid.iter().map(Rational::to_f64).collect()
    }
}

/// `points` values from `min` to `max`; `max` itself is left out when
/// `half_open`. A single point sits at `min`.
pub fn make_grid(min: &Rational, max: &Rational, points: usize, half_open: bool) -> anyhow::Result<Vec<Rational>> {
    if points == 0 {
        return Err(usage("the grid needs at least one point"));
    }
    if points == 1 {
        return Ok(vec![min.clone()]);
    }
    if min >= max {
        return Err(usage(format!("grid minimum {min} must be below maximum {max}")));
    }
    let steps = if half_open { points } else { points - 1 };
    let width = Rational::from(max - min);
    Ok((0..points)
        .map(|i| min + Rational::from(&width * i as u64) / steps as u64)
        .collect())
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}
