//! Critical functions `k^{(alpha - sigma)/beta} d^_k` computed from zeta zeros
//! (`psi1`) and from primes (`psi2`), with `x = ln k` treated as continuous.

use std::io::{self, Write};

use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::coefficients::{
    dhat_zeros_at, log_two_pi_minus_one, prime_double_sum, prime_route_first_term, prime_term,
    zero_pairs, Kernel, PrimeRouteOptions,
};
use crate::data::{is_prime, PrimeTable, ZeroTable};
use crate::error::{Error, Result};
use crate::hiprec::{sci, HComplex, HReal, PrecisionContext, ZetaEngine};
use crate::params::ExpansionParams;

/// One grid point of a sweep.
#[derive(Clone, Debug)]
pub struct CriticalSample {
    pub x: HReal,
    pub k: HReal,
    pub psi1: HReal,
    pub psi2: HReal,
    pub diff: HReal,
}

/// Truncations and kernel choices of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalConfig {
    pub n_zeros: usize,
    pub n_trivial: u64,
    pub q_max: u32,
    /// Kernel of the zero route.
    #[serde(skip)]
    pub psi1_kernel: Kernel,
    #[serde(skip)]
    pub psi2: PrimeRouteOptions,
}

impl CriticalConfig {
    /// 10 zeros, 20 trivial terms, `q <= 50`, with the large-`k` formulas on
    /// both sides: `Gamma(a) k^{-a}` for the zeros and the first prime term,
    /// `exp(-k p^{-beta q})` in the prime sum.
    pub fn paper() -> Self {
        CriticalConfig {
            n_zeros: 10,
            n_trivial: 20,
            q_max: 50,
            psi1_kernel: Kernel::Asymptotic,
            psi2: PrimeRouteOptions {
                approx_paper: true,
                first_term: Kernel::Asymptotic,
            },
        }
    }

    /// Same truncations, exact Beta kernels and exact `(1 - p^{-beta q})^k`.
    pub fn exact() -> Self {
        CriticalConfig {
            psi1_kernel: Kernel::ExactBeta,
            psi2: PrimeRouteOptions {
                approx_paper: false,
                first_term: Kernel::ExactBeta,
            },
            ..Self::paper()
        }
    }
}

/// `(alpha - sigma)/beta` as `f64`, used to size precision.
fn growth_rate(params: &ExpansionParams) -> f64 {
    let a = params.alpha.re_f64();
    let b = params.beta.re_f64().hypot(params.beta.im_f64());
    ((a - params.sigma.to_f64()) / b).abs()
}

/// Context with enough extra digits to absorb the factor `k^{(alpha-sigma)/beta}`.
fn ctx_at(x: &HReal, params: &ExpansionParams, ctx: PrecisionContext) -> PrecisionContext {
    let extra = (x.to_f64().abs() * growth_rate(params) / std::f64::consts::LN_10).ceil() as u32;
    ctx.with_extra_guard(extra + 2)
}

/// `exp(x (alpha - sigma)/beta)`.
fn scale_factor(x: &HReal, params: &ExpansionParams, bits: u32) -> HComplex {
    let alpha = params.alpha_h(bits);
    let sigma = HComplex::from_real(params.sigma_h(bits));
    let e = &(&alpha - &sigma) / &params.beta_h(bits);
    e.scale(&Float::with_val(bits, x)).exp()
}

/// The zero-route critical function before taking the real part.
pub fn psi1_complex(
    x: &HReal,
    params: &ExpansionParams,
    zeros: &ZeroTable,
    n_zeros: usize,
    n_trivial: u64,
    kernel: Kernel,
    ctx: PrecisionContext,
) -> Result<HComplex> {
    if n_zeros > zeros.len() {
        return Err(Error::Domain(format!(
            "{n_zeros} zeros requested, table holds {}",
            zeros.len()
        )));
    }
    let wctx = ctx_at(x, params, ctx);
    let bits = wctx.bits();
    let k = Float::with_val(bits, x).exp();
    let dhat = dhat_zeros_at(params, &k, &zeros.truncated(n_zeros), n_trivial, kernel, wctx)?;
    Ok((&dhat * &scale_factor(x, params, bits)).with_prec(ctx.bits()))
}

/// `psi_1(x) = k^{(alpha-sigma)/beta} d^_k` from `n_zeros` conjugate pairs and
/// `n_trivial` trivial zeros, `k = e^x`.
pub fn psi1(
    x: &HReal,
    params: &ExpansionParams,
    zeros: &ZeroTable,
    n_zeros: usize,
    n_trivial: u64,
    kernel: Kernel,
    ctx: PrecisionContext,
) -> Result<HReal> {
    Ok(psi1_complex(x, params, zeros, n_zeros, n_trivial, kernel, ctx)?.re)
}

/// `psi_2(x) = k^{(alpha-sigma)/beta} d^_k` with `d^_k` from the prime route.
pub fn psi2(
    x: &HReal,
    params: &ExpansionParams,
    primes: &PrimeTable,
    q_max: u32,
    opts: PrimeRouteOptions,
    ctx: PrecisionContext,
) -> Result<HReal> {
    params.require_real_above_one()?;
    if primes.is_empty() {
        return Err(Error::Domain("prime table is empty".into()));
    }
    let wctx = ctx_at(x, params, ctx);
    let bits = wctx.bits();
    let k = Float::with_val(bits, x).exp();
    let first = prime_route_first_term(params, &k, opts.first_term, wctx)?;
    let sum = prime_double_sum(params, &k, primes.primes(), q_max, opts.approx_paper, wctx)?;
    let scale = scale_factor(x, params, bits).re;
    Ok(Float::with_val(ctx.bits(), (first - sum) * scale))
}

/// Shape of `psi1` over a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub points: usize,
    pub max_diff: f64,
    pub mean_psi1: f64,
    /// Sign changes of `psi1 - mean`.
    pub sign_changes: usize,
    /// Complete oscillations: `sign_changes / 2`.
    pub oscillations: usize,
    /// Median distance of the interior local extrema of `psi1` from the mean.
    pub amplitude: f64,
}

pub fn summarize(samples: &[CriticalSample]) -> SweepSummary {
    let psi: Vec<f64> = samples.iter().map(|s| s.psi1.to_f64()).collect();
    let diffs: Vec<f64> = samples.iter().map(|s| s.diff.to_f64()).collect();
    summarize_values(&psi, &diffs)
}

/// [`summarize`] on plain values; `max_diff` is 0 when `diffs` is empty.
pub fn summarize_values(psi: &[f64], diffs: &[f64]) -> SweepSummary {
    let max_diff = diffs.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let mean = if psi.is_empty() {
        0.0
    } else {
        psi.iter().sum::<f64>() / psi.len() as f64
    };
    let centered: Vec<f64> = psi.iter().map(|v| v - mean).collect();
    let sign_changes = count_sign_changes(&centered);
    let mut extrema: Vec<f64> = centered
        .windows(3)
        .filter(|w| (w[1] > w[0] && w[1] > w[2]) || (w[1] < w[0] && w[1] < w[2]))
        .map(|w| w[1].abs())
        .collect();
    extrema.sort_by(f64::total_cmp);
    let amplitude = if extrema.is_empty() {
        0.0
    } else {
        let n = extrema.len();
        if n % 2 == 1 {
            extrema[n / 2]
        } else {
            (extrema[n / 2 - 1] + extrema[n / 2]) / 2.0
        }
    };
    SweepSummary {
        points: psi.len(),
        max_diff,
        mean_psi1: mean,
        sign_changes,
        oscillations: sign_changes / 2,
        amplitude,
    }
}

/// Strict sign changes, skipping exact zeros.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// `n_points` equally spaced values from `x_min` to `x_max` inclusive.
pub fn uniform_grid(x_min: f64, x_max: f64, n_points: usize, bits: u32) -> Result<Vec<HReal>> {
    if x_min.partial_cmp(&x_max) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Domain(format!("need x_min < x_max, got {x_min} and {x_max}")));
    }
    if n_points < 2 {
        return Err(Error::Domain("a sweep needs at least 2 points".into()));
    }
    let lo = Float::with_val(bits, x_min);
    let step = Float::with_val(bits, Float::with_val(bits, x_max) - &lo) / (n_points as u32 - 1);
    Ok((0..n_points)
        .map(|i| {
            if i + 1 == n_points {
                Float::with_val(bits, x_max)
            } else {
                Float::with_val(bits, &lo + Float::with_val(bits, &step * i as u32))
            }
        })
        .collect())
}

/// `psi1`, `psi2` and their difference on a uniform `x` grid.
#[allow(clippy::too_many_arguments)]
pub fn sweep_critical(
    x_min: f64,
    x_max: f64,
    n_points: usize,
    params: &ExpansionParams,
    zeros: &ZeroTable,
    primes: &PrimeTable,
    cfg: &CriticalConfig,
    ctx: PrecisionContext,
) -> Result<(Vec<CriticalSample>, SweepSummary)> {
    params.require_real_above_one()?;
    let grid = uniform_grid(x_min, x_max, n_points, ctx.bits())?;
    let samples = grid
        .par_iter()
        .map(|x| {
            let p1 = psi1(x, params, zeros, cfg.n_zeros, cfg.n_trivial, cfg.psi1_kernel, ctx)?;
            let p2 = psi2(x, params, primes, cfg.q_max, cfg.psi2, ctx)?;
            let diff = Float::with_val(ctx.bits(), &p1 - &p2);
            Ok(CriticalSample {
                x: x.clone(),
                k: Float::with_val(ctx.bits(), x.exp_ref()),
                psi1: p1,
                psi2: p2,
                diff,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&samples);
    Ok((samples, summary))
}

/// Columns `x,k,psi1,psi2,diff`.
pub fn write_critical_csv<W: Write>(samples: &[CriticalSample], digits: usize, mut w: W) -> io::Result<()> {
    writeln!(w, "x,k,psi1,psi2,diff")?;
    for s in samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            sci(&s.x, digits),
            sci(&s.k, digits),
            sci(&s.psi1, digits),
            sci(&s.psi2, digits),
            sci(&s.diff, digits)
        )?;
    }
    Ok(())
}

/// What a single prime subtracts from `psi2`:
/// `k^{(alpha-sigma)/beta} ln p sum_q p^{-alpha q} (1 - p^{-beta q})^k`.
pub fn prime_contribution(
    p: u64,
    x_grid: &[HReal],
    params: &ExpansionParams,
    q_max: u32,
    approx_paper: bool,
    ctx: PrecisionContext,
) -> Result<Vec<(HReal, HReal)>> {
    let (alpha, beta) = params.require_real_above_one()?;
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    x_grid
        .par_iter()
        .map(|x| {
            let wctx = ctx_at(x, params, ctx);
            let bits = wctx.bits() + 16;
            let k = Float::with_val(bits, x).exp();
            let cutoff = std::f64::consts::LN_10 * (wctx.working_digits() as f64 + 4.0);
            let v = prime_term(
                p,
                &Float::with_val(bits, &alpha),
                &Float::with_val(bits, &beta),
                &k,
                k.to_f64(),
                q_max,
                approx_paper,
                cutoff,
                bits,
            );
            let scaled = v * scale_factor(x, params, bits).re;
            Ok((x.clone(), Float::with_val(ctx.bits(), scaled)))
        })
        .collect()
}

/// How `psi_infbeta` treats `k^{.../beta}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaMode {
    /// Use `beta` from the parameters.
    Finite,
    /// `beta -> infinity`: every `k`-power becomes 1.
    Infinite,
}

/// `sum_{n<=n_trivial} 1/(2n (alpha + 2n))`.
pub fn trivial_zero_sum(alpha: &HReal, n_trivial: u64, bits: u32) -> HReal {
    let mut acc = Float::new(bits);
    for n in 1..=n_trivial {
        let two_n = Float::with_val(bits, 2 * n);
        let den = Float::with_val(bits, alpha + &two_n) * two_n;
        acc += den.recip();
    }
    acc
}

/// `|sum_rho k^{-(sigma-rho)/beta} / (rho (alpha-rho)) - sum_n k^{-(sigma+2n)/beta} / (2n (alpha+2n)) + (C/alpha) k^{-sigma/beta}|`
/// with `C = ln(2 pi) - 1`; zeros are taken on the critical line.
pub fn psi_infbeta(
    k: &HReal,
    params: &ExpansionParams,
    zeros: &ZeroTable,
    n_zeros: usize,
    n_trivial: u64,
    mode: BetaMode,
    ctx: PrecisionContext,
) -> Result<HReal> {
    if n_zeros > zeros.len() {
        return Err(Error::Domain(format!(
            "{n_zeros} zeros requested, table holds {}",
            zeros.len()
        )));
    }
    if mode == BetaMode::Finite && *k <= 0 {
        return Err(Error::Domain("k must be positive".into()));
    }
    let bits = ctx.bits() + 16;
    let alpha = params.alpha_h(bits);
    if alpha.is_zero() {
        return Err(Error::Domain("alpha = 0 divides by zero".into()));
    }
    let sigma = HComplex::from_real(params.sigma_h(bits));
    let beta = params.beta_h(bits);
    let ln_k = match mode {
        BetaMode::Finite => Float::with_val(bits, k.ln_ref()),
        BetaMode::Infinite => Float::new(bits),
    };
    // k^{-w/beta}
    let power = |w: &HComplex| -> HComplex {
        match mode {
            BetaMode::Infinite => HComplex::one(bits),
            BetaMode::Finite => (-(&w.scale(&ln_k) / &beta)).exp(),
        }
    };

    let mut sum = HComplex::zero(bits);
    for rho in zero_pairs(&zeros.truncated(n_zeros), bits) {
        let am = &alpha - &rho;
        if am.is_zero() {
            return Err(Error::Domain("alpha coincides with a zero".into()));
        }
        let w = &sigma - &rho;
        sum += &(&power(&w) / &(&rho * &am));
    }

    let two = HComplex::from_real(Float::with_val(bits, 2));
    let ratio = power(&two);
    let mut pw = power(&sigma);
    let mut trivial = HComplex::zero(bits);
    for n in 1..=n_trivial {
        pw = &pw * &ratio;
        let two_n = Float::with_val(bits, 2 * n);
        let den = alpha.add_real(&two_n);
        if den.is_zero() {
            return Err(Error::Domain(format!("alpha = -{} divides by zero", 2 * n)));
        }
        trivial += &(&pw / &den.scale(&two_n));
    }
    sum -= &trivial;

    let c = HComplex::from_real(log_two_pi_minus_one(bits));
    sum += &(&(&c / &alpha) * &power(&sigma));
    Ok(Float::with_val(ctx.bits(), sum.abs()))
}

/// `(1/alpha)(1/(alpha - 1) + zeta'(alpha)/zeta(alpha))`, which tends to
/// Euler's constant as `alpha -> 1+`.
pub fn gamma_limit_primes(alpha: &HReal, ctx: PrecisionContext) -> Result<HReal> {
    if *alpha <= 1 {
        return Err(Error::Domain(format!("alpha must exceed 1, got {}", alpha.to_f64())));
    }
    let v = ZetaEngine::new(ctx).log_zeta_deriv(alpha)?;
    Ok(Float::with_val(ctx.bits(), v / alpha))
}
