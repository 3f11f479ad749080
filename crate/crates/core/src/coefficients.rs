//! Coefficient families of the Pochhammer expansions.
//!
//! * `b_k`: eta factor `(1 - 2^{1-s}) zeta(s)`
//! * `A_k`: `(s - 1) zeta(s)` with `alpha = beta = 2`
//! * `d_k`: logarithm of the eta factor
//! * `d^_k`: `d/ds ln((s - 1) zeta(s))`
//! * `d^^_k`: `f(s) = (zeta'(s)/zeta(s) + 1/(s - 1)) / s`
//! * `s_k`: `1/(s - 1)`

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use rug::{Float, Integer, Rational};

use crate::data::{PrimeTable, ZeroTable};
use crate::error::{Error, Result};
use crate::hiprec::{pi, sci, GammaEngine, HComplex, HReal, PrecisionContext, ZetaEngine};
use crate::params::{ExactComplex, ExpansionParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientKind {
    B,
    A,
    D,
    DHat,
    DHatHat,
    S,
}

impl CoefficientKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CoefficientKind::B => "B",
            CoefficientKind::A => "A",
            CoefficientKind::D => "D",
            CoefficientKind::DHat => "DHAT",
            CoefficientKind::DHatHat => "DHATHAT",
            CoefficientKind::S => "S",
        }
    }
}

impl fmt::Display for CoefficientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    Binomial,
    ZerosBeta,
    Primes,
    ClosedForm,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Binomial => "BINOMIAL",
            Route::ZerosBeta => "ZEROS_BETA",
            Route::Primes => "PRIMES",
            Route::ClosedForm => "CLOSED_FORM",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which kernel stands for `1/(s - c)` in the zero and prime routes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Kernel {
    /// `B(a, k + 1)`.
    #[default]
    ExactBeta,
    /// `Gamma(a) k^{-a}`, the large-`k` form.
    Asymptotic,
}

/// `c_0, ..., c_K` of one family.
#[derive(Clone, Debug)]
pub struct CoefficientSeries {
    pub kind: CoefficientKind,
    pub params: ExpansionParams,
    pub route: Route,
    pub ctx: PrecisionContext,
    pub values: Vec<HComplex>,
}

impl CoefficientSeries {
    pub fn get(&self, k: usize) -> Option<&HComplex> {
        self.values.get(k)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Columns `k,re,im,kind,alpha,beta,route,digits`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let digits = self.ctx.target_digits() as usize;
        writeln!(w, "k,re,im,kind,alpha,beta,route,digits")?;
        for (k, v) in self.values.iter().enumerate() {
            writeln!(
                w,
                "{k},{},{},{},{},{},{},{digits}",
                sci(&v.re, digits),
                sci(&v.im, digits),
                self.kind,
                self.params.alpha,
                self.params.beta,
                self.route,
            )?;
        }
        Ok(())
    }
}

/// `c_k = sum_{j=0..k} (-1)^j C(k, j) f_j` for every `k < f.len()`, with
/// exact binomials and ascending `j`.
pub fn binomial_transform(f: &[HComplex], bits: u32) -> Vec<HComplex> {
    (0..f.len())
        .into_par_iter()
        .map(|k| binomial_transform_at(f, k, bits))
        .collect()
}

/// A single `c_k` of [`binomial_transform`].
pub fn binomial_transform_at(f: &[HComplex], k: usize, bits: u32) -> HComplex {
    let mut acc = HComplex::zero(bits);
    let mut binom = Integer::from(1);
    for (j, fj) in f.iter().enumerate().take(k + 1) {
        let re = Float::with_val(bits, &fj.re * &binom);
        let im = Float::with_val(bits, &fj.im * &binom);
        if j % 2 == 0 {
            acc.re += re;
            acc.im += im;
        } else {
            acc.re -= re;
            acc.im -= im;
        }
        binom *= (k - j) as u64;
        binom /= (j + 1) as u64;
    }
    acc
}

fn values_at_nodes<F>(params: &ExpansionParams, k_max: u64, f: F) -> Result<Vec<HComplex>>
where
    F: Fn(u64, &ExactComplex) -> Result<HComplex> + Sync,
{
    (0..=k_max)
        .into_par_iter()
        .map(|j| f(j, &params.node(j)))
        .collect()
}

fn series(
    kind: CoefficientKind,
    params: &ExpansionParams,
    route: Route,
    ctx: PrecisionContext,
    values: Vec<HComplex>,
) -> CoefficientSeries {
    CoefficientSeries {
        kind,
        params: params.clone(),
        route,
        ctx,
        values,
    }
}

/// `b_k = sum_j (-1)^j C(k,j) (1 - 2^{1-(alpha+beta j)}) zeta(alpha + beta j)`.
pub fn compute_b(params: &ExpansionParams, k_max: u64, ctx: PrecisionContext) -> Result<CoefficientSeries> {
    ctx.require_order(k_max)?;
    for j in 0..=k_max {
        let node = params.node(j);
        if node.re.cmp0().is_le() {
            return Err(Error::Domain(format!(
                "Re(alpha + beta j) must be positive, fails at j = {j}"
            )));
        }
    }
    let engine = ZetaEngine::new(ctx);
    let bits = ctx.bits();
    let f = values_at_nodes(params, k_max, |_, node| engine.eta(&node.to_hcomplex(bits)))?;
    Ok(series(CoefficientKind::B, params, Route::Binomial, ctx, binomial_transform(&f, bits)))
}

/// `A_k = sum_j (-1)^j C(k,j) (2j + 1) zeta(2j + 2)`; the parameters are
/// fixed to `alpha = beta = 2`.
#[allow(non_snake_case)]
pub fn compute_maslanka_A(k_max: u64, ctx: PrecisionContext) -> Result<CoefficientSeries> {
    ctx.require_order(k_max)?;
    let params = ExpansionParams::riesz();
    let engine = ZetaEngine::new(ctx);
    let bits = ctx.bits();
    let f = values_at_nodes(&params, k_max, |j, node| {
        let z = engine.zeta(&node.to_hcomplex(bits))?;
        Ok(z.scale(&Float::with_val(bits, 2 * j + 1)))
    })?;
    Ok(series(CoefficientKind::A, &params, Route::Binomial, ctx, binomial_transform(&f, bits)))
}

/// `d_k = sum_j (-1)^j C(k,j) ln[(1 - 2^{1-(alpha+beta j)}) zeta(alpha + beta j)]`
/// on the real axis.
pub fn compute_d(params: &ExpansionParams, k_max: u64, ctx: PrecisionContext) -> Result<CoefficientSeries> {
    ctx.require_order(k_max)?;
    params.require_real_positive()?;
    if params.alpha.re.cmp0().is_le() {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    let engine = ZetaEngine::new(ctx);
    let bits = ctx.bits();
    let f = values_at_nodes(params, k_max, |j, node| {
        let v = engine.eta(&node.to_hcomplex(bits))?;
        if v.re <= 0 {
            return Err(Error::Domain(format!("log argument is not positive at j = {j}")));
        }
        Ok(HComplex::from_real(v.re.ln()))
    })?;
    Ok(series(CoefficientKind::D, params, Route::Binomial, ctx, binomial_transform(&f, bits)))
}

/// `d^_k` as the binomial transform of `1/(a-1) + zeta'(a)/zeta(a)` at the
/// nodes `a = alpha + beta j`.
pub fn compute_dhat_binomial(
    params: &ExpansionParams,
    k_max: u64,
    ctx: PrecisionContext,
) -> Result<CoefficientSeries> {
    ctx.require_order(k_max)?;
    params.require_real_above_one()?;
    let engine = ZetaEngine::new(ctx);
    let bits = ctx.bits();
    let f = values_at_nodes(params, k_max, |_, node| {
        let a = Float::with_val(bits, &node.re);
        Ok(HComplex::from_real(engine.log_zeta_deriv(&a)?))
    })?;
    Ok(series(CoefficientKind::DHat, params, Route::Binomial, ctx, binomial_transform(&f, bits)))
}

/// `d^^_k` as the binomial transform of `f(a) = (1/(a-1) + zeta'(a)/zeta(a)) / a`.
pub fn compute_dhathat_binomial(
    params: &ExpansionParams,
    k_max: u64,
    ctx: PrecisionContext,
) -> Result<CoefficientSeries> {
    ctx.require_order(k_max)?;
    params.require_real_above_one()?;
    let engine = ZetaEngine::new(ctx);
    let bits = ctx.bits();
    let f = values_at_nodes(params, k_max, |_, node| {
        let a = Float::with_val(bits, &node.re);
        let v = engine.log_zeta_deriv(&a)? / &a;
        Ok(HComplex::from_real(v))
    })?;
    Ok(series(
        CoefficientKind::DHatHat,
        params,
        Route::Binomial,
        ctx,
        binomial_transform(&f, bits),
    ))
}

/// `(alpha - 1)/beta` as an exact rational.
fn s_shift(params: &ExpansionParams) -> Result<Rational> {
    let (a, b) = params.require_real_above_one()?;
    Ok((a - 1u32) / b)
}

/// Above this order `s_k` comes from Gamma functions instead of the exact
/// rational product.
pub const S_EXACT_MAX_ORDER: u64 = 2000;

/// `s_k = (1/beta) B((alpha - 1)/beta, k + 1)`.
pub fn compute_s(params: &ExpansionParams, k: u64, ctx: PrecisionContext) -> Result<HReal> {
    let a = s_shift(params)?;
    let bits = ctx.bits();
    if k <= S_EXACT_MAX_ORDER {
        let mut b = Rational::from(1) / &a;
        for j in 1..=k {
            b *= Rational::from(j) / (Rational::from(j) + &a);
        }
        return Ok(Float::with_val(bits, b / &params.beta.re));
    }
    let gamma = GammaEngine::new(bits + 16);
    let x = HComplex::from_real(Float::with_val(bits + 16, &a));
    let y = HComplex::from_real(Float::with_val(bits + 16, k + 1));
    let b = gamma.beta(&x, &y)?.re / Float::with_val(bits + 16, &params.beta.re);
    Ok(Float::with_val(bits, b))
}

/// `s_0, ..., s_{k_max}` as exact rationals, via `s_k = s_{k-1} k / (a + k)`.
pub fn s_coefficients_exact(params: &ExpansionParams, k_max: u64) -> Result<Vec<Rational>> {
    let a = s_shift(params)?;
    let mut b = Rational::from(1) / &a / &params.beta.re;
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        if k > 0 {
            b *= Rational::from(k) / (Rational::from(k) + &a);
        }
        out.push(b.clone());
    }
    Ok(out)
}

/// `s_0, ..., s_{k_max}`, rounded from the exact rationals.
pub fn compute_s_series(
    params: &ExpansionParams,
    k_max: u64,
    ctx: PrecisionContext,
) -> Result<CoefficientSeries> {
    let bits = ctx.bits();
    let values = s_coefficients_exact(params, k_max)?
        .into_iter()
        .map(|b| HComplex::from_real(Float::with_val(bits, b)))
        .collect();
    Ok(series(CoefficientKind::S, params, Route::ClosedForm, ctx, values))
}

/// `B(a, k + 1)` or `Gamma(a) k^{-a}` at real, possibly non-integer `k`.
pub(crate) struct KernelEval<'a> {
    gamma: &'a GammaEngine,
    kernel: Kernel,
    ln_k: Float,
    k_plus_one: HComplex,
}

impl<'a> KernelEval<'a> {
    pub(crate) fn new(gamma: &'a GammaEngine, kernel: Kernel, k: &Float) -> Self {
        let bits = gamma.bits();
        KernelEval {
            gamma,
            kernel,
            ln_k: Float::with_val(bits, k.ln_ref()),
            k_plus_one: HComplex::from_real(Float::with_val(bits, k + 1u32)),
        }
    }

    pub(crate) fn eval(&self, a: &HComplex) -> Result<HComplex> {
        match self.kernel {
            Kernel::ExactBeta => self.gamma.beta(a, &self.k_plus_one),
            Kernel::Asymptotic => {
                let lg = self.gamma.ln_gamma(a)?;
                Ok((&lg - &a.scale(&self.ln_k)).exp().with_prec(self.gamma.bits()))
            }
        }
    }
}

/// `1/2 + i t` and `1/2 - i t` for each ordinate, in table order.
pub(crate) fn zero_pairs(zeros: &ZeroTable, bits: u32) -> Vec<HComplex> {
    let half = Float::with_val(bits, 0.5);
    zeros
        .ordinates()
        .iter()
        .flat_map(|t| {
            let t = Float::with_val(bits, t);
            [
                HComplex::new(half.clone(), t.clone()),
                HComplex::new(half.clone(), -t),
            ]
        })
        .collect()
}

fn require_k_positive(k: &Float) -> Result<()> {
    if *k <= 0 {
        return Err(Error::Domain("order k must be positive".into()));
    }
    Ok(())
}

/// Whether the trivial-zero terms of the exact kernel shrink monotonically,
/// which lets the `n`-sum stop early.
fn trivial_terms_decrease(params: &ExpansionParams, kernel: Kernel) -> bool {
    kernel == Kernel::ExactBeta && params.beta.is_real() && params.beta.re.cmp0().is_gt() && params.alpha.is_real()
}

/// `d^_k` from the zeros:
/// `(1/beta) [sum_rho K((alpha - rho)/beta) + sum_n K((alpha + 2n)/beta)]`,
/// both members of each conjugate pair summed.
pub fn compute_dhat_zeros_beta(
    params: &ExpansionParams,
    k: u64,
    zeros: &ZeroTable,
    n_trivial: u64,
    kernel: Kernel,
    ctx: PrecisionContext,
) -> Result<HComplex> {
    dhat_zeros_at(params, &Float::with_val(ctx.bits(), k), zeros, n_trivial, kernel, ctx)
}

pub(crate) fn dhat_zeros_at(
    params: &ExpansionParams,
    k: &Float,
    zeros: &ZeroTable,
    n_trivial: u64,
    kernel: Kernel,
    ctx: PrecisionContext,
) -> Result<HComplex> {
    require_k_positive(k)?;
    if zeros.is_empty() {
        return Err(Error::Domain("zero table is empty".into()));
    }
    let bits = ctx.bits() + 16;
    let gamma = GammaEngine::new(bits);
    let ev = KernelEval::new(&gamma, kernel, k);
    let alpha = params.alpha_h(bits);
    let beta = params.beta_h(bits);
    let mut sum = HComplex::zero(bits);
    for rho in zero_pairs(zeros, bits) {
        sum += &ev.eval(&(&(&alpha - &rho) / &beta))?;
    }
    let early_stop = trivial_terms_decrease(params, kernel);
    let eps = ctx.working_eps();
    for n in 1..=n_trivial {
        let a = &alpha.add_real(&Float::with_val(bits, 2 * n)) / &beta;
        let term = ev.eval(&a)?;
        sum += &term;
        if early_stop && term.abs() < Float::with_val(bits, &eps * sum.abs()) {
            break;
        }
    }
    Ok((&sum / &beta).with_prec(ctx.bits()))
}

/// Options of the prime route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PrimeRouteOptions {
    /// Replace `(1 - p^{-beta q})^k` by `exp(-k p^{-beta q})`.
    pub approx_paper: bool,
    /// First term `(1/beta) Gamma(a) k^{-a}` instead of `(1/beta) B(a, k + 1)`.
    pub first_term: Kernel,
}

/// `d^_k = (1/beta) B((alpha-1)/beta, k+1) - sum_p ln p sum_{q<=q_max} p^{-alpha q} (1 - p^{-beta q})^k`.
pub fn compute_dhat_primes(
    params: &ExpansionParams,
    k: u64,
    primes: &PrimeTable,
    q_max: u32,
    opts: PrimeRouteOptions,
    ctx: PrecisionContext,
) -> Result<HReal> {
    let kf = Float::with_val(ctx.bits(), k);
    let first = prime_route_first_term(params, &kf, opts.first_term, ctx)?;
    let sum = prime_double_sum(params, &kf, primes.primes(), q_max, opts.approx_paper, ctx)?;
    Ok(Float::with_val(ctx.bits(), first - sum))
}

/// `(1/beta) K((alpha - 1)/beta)` at order `k`.
pub(crate) fn prime_route_first_term(
    params: &ExpansionParams,
    k: &Float,
    kernel: Kernel,
    ctx: PrecisionContext,
) -> Result<HReal> {
    let a = s_shift(params)?;
    if kernel == Kernel::Asymptotic {
        require_k_positive(k)?;
    }
    let bits = ctx.bits() + 16;
    let gamma = GammaEngine::new(bits);
    let ev = KernelEval::new(&gamma, kernel, k);
    let v = ev.eval(&HComplex::from_real(Float::with_val(bits, &a)))?;
    Ok(Float::with_val(ctx.bits(), v.re / Float::with_val(bits, &params.beta.re)))
}

/// `sum_p ln p sum_q p^{-alpha q} (1 - p^{-beta q})^k`, ascending `p` then `q`.
///
/// Terms whose factor is below the working precision are skipped; the
/// `q`-loop ends once `ln p p^{-alpha q}` is negligible.
pub(crate) fn prime_double_sum(
    params: &ExpansionParams,
    k: &Float,
    primes: &[u64],
    q_max: u32,
    approx_paper: bool,
    ctx: PrecisionContext,
) -> Result<HReal> {
    let (alpha, beta) = params.require_real_above_one()?;
    if *k < 0 {
        return Err(Error::Domain("order k must be non-negative".into()));
    }
    let bits = ctx.bits() + 16;
    let alpha = Float::with_val(bits, &alpha);
    let beta = Float::with_val(bits, &beta);
    let k = Float::with_val(bits, k);
    let cutoff = std::f64::consts::LN_10 * (ctx.working_digits() as f64 + 4.0);
    let k_f64 = k.to_f64();
    let partials: Vec<Float> = primes
        .par_iter()
        .map(|&p| {
            prime_term(p, &alpha, &beta, &k, k_f64, q_max, approx_paper, cutoff, bits)
        })
        .collect();
    let mut sum = Float::new(bits);
    for t in partials {
        sum += t;
    }
    Ok(sum)
}

/// The single-`p` part `ln p sum_q p^{-alpha q} (1 - p^{-beta q})^k`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn prime_term(
    p: u64,
    alpha: &Float,
    beta: &Float,
    k: &Float,
    k_f64: f64,
    q_max: u32,
    approx_paper: bool,
    cutoff: f64,
    bits: u32,
) -> Float {
    let lp = Float::with_val(bits, p).ln();
    let lp_f64 = lp.to_f64();
    let mut inner = Float::new(bits);
    for q in 1..=q_max {
        let qf = f64::from(q);
        // log of the weight ln p * p^{-alpha q}
        let log_weight = lp_f64.ln() - alpha.to_f64() * qf * lp_f64;
        if log_weight < -cutoff {
            break;
        }
        // k p^{-beta q}
        let log_u = -beta.to_f64() * qf * lp_f64;
        let ku = k_f64 * log_u.exp();
        if k_f64 > 0.0 && ku > cutoff + 50.0 {
            continue;
        }
        let exponent = Float::with_val(bits, &lp * qf);
        let weight = Float::with_val(bits, -Float::with_val(bits, alpha * &exponent)).exp();
        let u = Float::with_val(bits, -Float::with_val(bits, beta * &exponent)).exp();
        let factor = if approx_paper {
            Float::with_val(bits, -Float::with_val(bits, k * &u)).exp()
        } else {
            let l = Float::with_val(bits, -u).ln_1p();
            Float::with_val(bits, k * &l).exp()
        };
        inner += weight * factor;
    }
    inner * lp
}

/// `ln(2 pi) - 1`.
pub fn log_two_pi_minus_one(bits: u32) -> HReal {
    let two_pi = Float::with_val(bits, pi(bits) * 2u32);
    two_pi.ln() - 1u32
}

/// `d^^_k = (1/beta) [sum_rho K((alpha-rho)/beta)/rho - sum_n K((alpha+2n)/beta)/(2n) + C K(alpha/beta)]`
/// with `C = ln(2 pi) - 1`.
pub fn compute_dhathat(
    params: &ExpansionParams,
    k: u64,
    zeros: &ZeroTable,
    n_trivial: u64,
    kernel: Kernel,
    ctx: PrecisionContext,
) -> Result<HComplex> {
    let kf = Float::with_val(ctx.bits(), k);
    require_k_positive(&kf)?;
    let bits = ctx.bits() + 16;
    let gamma = GammaEngine::new(bits);
    let ev = KernelEval::new(&gamma, kernel, &kf);
    let alpha = params.alpha_h(bits);
    let beta = params.beta_h(bits);
    let mut sum = HComplex::zero(bits);
    for rho in zero_pairs(zeros, bits) {
        let t = ev.eval(&(&(&alpha - &rho) / &beta))?;
        sum += &(&t / &rho);
    }
    let early_stop = trivial_terms_decrease(params, kernel);
    let eps = ctx.working_eps();
    for n in 1..=n_trivial {
        let two_n = Float::with_val(bits, 2 * n);
        let t = ev.eval(&(&alpha.add_real(&two_n) / &beta))?.div_real(&two_n);
        sum -= &t;
        if early_stop && t.abs() < Float::with_val(bits, &eps * sum.abs()) {
            break;
        }
    }
    let c = log_two_pi_minus_one(bits);
    sum += &ev.eval(&(&alpha / &beta))?.scale(&c);
    Ok((&sum / &beta).with_prec(ctx.bits()))
}
