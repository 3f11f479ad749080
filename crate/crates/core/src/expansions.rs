//! Truncated series `sum_{k<=K} c_k P_k((s - alpha)/beta + 1)` and the
//! functions they represent.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::coefficients::{
    compute_b, compute_d, compute_dhat_binomial, compute_dhathat_binomial, compute_maslanka_A,
    compute_s_series, s_coefficients_exact, CoefficientSeries,
};
use crate::error::{Error, Result};
use crate::hiprec::{sci, HComplex, HReal, PrecisionContext, ZetaEngine};
use crate::params::ExpansionParams;
use crate::pochhammer::PochhammerSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesTarget {
    /// `(1 - 2^{1-s}) zeta(s)` with `b_k`.
    EtaFactor,
    /// `(s - 1) zeta(s)` with `A_k`, `alpha = beta = 2`.
    Maslanka,
    /// `ln[(1 - 2^{1-s}) zeta(s)]` with `d_k`.
    LogEta,
    /// `1/(s - 1) + zeta'(s)/zeta(s)` with `d^_k`.
    LogDeriv,
    /// `(1/(s - 1) + zeta'(s)/zeta(s)) / s` with `d^^_k`.
    FFunction,
    /// `1/(s - 1)` with `s_k`.
    InvSMinus1,
}

impl SeriesTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesTarget::EtaFactor => "ETA_FACTOR",
            SeriesTarget::Maslanka => "MASLANKA",
            SeriesTarget::LogEta => "LOG_ETA",
            SeriesTarget::LogDeriv => "LOG_DERIV",
            SeriesTarget::FFunction => "F_FUNCTION",
            SeriesTarget::InvSMinus1 => "INV_S_MINUS_1",
        }
    }
}

impl fmt::Display for SeriesTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One truncated series compared against its target at a point `s`.
#[derive(Clone, Debug)]
pub struct SeriesEvaluation {
    pub target: SeriesTarget,
    pub params: ExpansionParams,
    pub order: u64,
    pub s: HComplex,
    pub partial_sum: HComplex,
    /// `None` where the target has no direct evaluation at `s`.
    pub direct_value: Option<HComplex>,
}

impl SeriesEvaluation {
    /// `|partial_sum - direct_value|`.
    pub fn abs_error(&self) -> Option<HReal> {
        self.direct_value.as_ref().map(|d| (&self.partial_sum - d).abs())
    }
}

/// Coefficients of one expansion, computed once and reused across points.
#[derive(Clone, Debug)]
pub struct ExpansionPlan {
    pub target: SeriesTarget,
    pub coefficients: CoefficientSeries,
    zeta: ZetaEngine,
}

impl ExpansionPlan {
    /// Coefficients `c_0..c_K`; `Maslanka` always uses `alpha = beta = 2`.
    pub fn new(
        target: SeriesTarget,
        params: &ExpansionParams,
        order: u64,
        ctx: PrecisionContext,
    ) -> Result<Self> {
        let coefficients = match target {
            SeriesTarget::EtaFactor => compute_b(params, order, ctx)?,
            SeriesTarget::Maslanka => compute_maslanka_A(order, ctx)?,
            SeriesTarget::LogEta => compute_d(params, order, ctx)?,
            SeriesTarget::LogDeriv => compute_dhat_binomial(params, order, ctx)?,
            SeriesTarget::FFunction => compute_dhathat_binomial(params, order, ctx)?,
            SeriesTarget::InvSMinus1 => compute_s_series(params, order, ctx)?,
        };
        Ok(ExpansionPlan {
            target,
            coefficients,
            zeta: ZetaEngine::new(ctx),
        })
    }

    pub fn params(&self) -> &ExpansionParams {
        &self.coefficients.params
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.coefficients.ctx
    }

    pub fn max_order(&self) -> u64 {
        self.coefficients.max_order() as u64
    }

    /// `sum_{k<=order} c_k P_k(z)`, `z = (s - alpha)/beta + 1`, ascending `k`.
    pub fn partial_sum(&self, s: &HComplex, order: u64) -> Result<HComplex> {
        if order > self.max_order() {
            return Err(Error::Domain(format!(
                "order {order} exceeds the {} computed coefficients",
                self.max_order()
            )));
        }
        let bits = self.ctx().bits();
        let z = self.params().shifted_arg(s, bits);
        let mut acc = HComplex::zero(bits);
        for (c, p) in self
            .coefficients
            .values
            .iter()
            .zip(PochhammerSeq::new(&z))
            .take(order as usize + 1)
        {
            acc += &(c * &p);
        }
        Ok(acc)
    }

    pub fn direct_value(&self, s: &HComplex) -> Result<Option<HComplex>> {
        direct_with(&self.zeta, self.target, s)
    }

    pub fn evaluate(&self, s: &HComplex, order: u64) -> Result<SeriesEvaluation> {
        let partial_sum = self.partial_sum(s, order)?;
        let direct_value = self.direct_value(s)?;
        Ok(SeriesEvaluation {
            target: self.target,
            params: self.params().clone(),
            order,
            s: s.clone(),
            partial_sum,
            direct_value,
        })
    }
}

/// Value of the represented function at `s`, where an independent
/// evaluation exists.
pub fn direct_value(target: SeriesTarget, s: &HComplex, ctx: PrecisionContext) -> Result<Option<HComplex>> {
    direct_with(&ZetaEngine::new(ctx), target, s)
}

fn direct_with(zeta: &ZetaEngine, target: SeriesTarget, s: &HComplex) -> Result<Option<HComplex>> {
    let bits = zeta.ctx().bits();
    let s = s.with_prec(bits);
    let one = Float::with_val(bits, 1);
    let is_one = s.re == 1 && s.im.is_zero();
    let real_above_one = s.im.is_zero() && s.re > 1;
    Ok(match target {
        SeriesTarget::EtaFactor => Some(zeta.eta_continued(&s)?),
        SeriesTarget::Maslanka => {
            if is_one {
                Some(HComplex::one(bits))
            } else {
                let z = zeta.zeta_continued(&s)?;
                Some(&z * &s.add_real(&-one))
            }
        }
        SeriesTarget::LogEta => {
            let v = zeta.eta_continued(&s)?;
            if s.im.is_zero() {
                (v.re > 0).then(|| HComplex::from_real(v.re.ln()))
            } else {
                Some(v.ln())
            }
        }
        SeriesTarget::LogDeriv => {
            if real_above_one {
                Some(HComplex::from_real(zeta.log_zeta_deriv(&s.re)?))
            } else {
                None
            }
        }
        SeriesTarget::FFunction => {
            if real_above_one {
                let v = zeta.log_zeta_deriv(&s.re)? / &s.re;
                Some(HComplex::from_real(v))
            } else {
                None
            }
        }
        SeriesTarget::InvSMinus1 => {
            if is_one {
                None
            } else {
                Some(s.add_real(&-one).recip())
            }
        }
    })
}

/// Builds the plan and evaluates it once.
pub fn eval_series(
    target: SeriesTarget,
    params: &ExpansionParams,
    order: u64,
    s: &HComplex,
    ctx: PrecisionContext,
) -> Result<SeriesEvaluation> {
    ExpansionPlan::new(target, params, order, ctx)?.evaluate(s, order)
}

/// Evaluates `plan` at every point; results keep the order of `points`.
pub fn eval_grid(plan: &ExpansionPlan, points: &[HComplex], order: u64) -> Result<Vec<SeriesEvaluation>> {
    points.par_iter().map(|s| plan.evaluate(s, order)).collect()
}

/// Order switch of the critical-line series: `K_low` up to this `t`.
pub const CRITICAL_LINE_SWITCH_T: f64 = 18.0;

/// `sum b_k P_k(t + 1)` against `(1 - 2^{1/2 - it}) zeta(1/2 + it)` with
/// `alpha = 1/2`, `beta = i`; order `k_low` for `t <= 18`, `k_high` above.
pub fn eval_critical_line_series(
    k_low: u64,
    k_high: u64,
    t_grid: &[HReal],
    ctx: PrecisionContext,
) -> Result<Vec<SeriesEvaluation>> {
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("t grid must be strictly ascending".into()));
    }
    if t_grid.iter().any(|t| *t < 0 || *t > 40) {
        return Err(Error::Domain("t grid must lie in [0, 40]".into()));
    }
    let plan = ExpansionPlan::new(
        SeriesTarget::EtaFactor,
        &ExpansionParams::critical_line(),
        k_low.max(k_high),
        ctx,
    )?;
    let bits = ctx.bits();
    let half = Float::with_val(bits, 0.5);
    t_grid
        .par_iter()
        .map(|t| {
            let order = if *t <= CRITICAL_LINE_SWITCH_T { k_low } else { k_high };
            plan.evaluate(&HComplex::new(half.clone(), Float::with_val(bits, t)), order)
        })
        .collect()
}

/// `sum_{k<=order} s_k P_k((m - alpha)/beta + 1)` in exact rational
/// arithmetic, for real rational parameters and argument.
pub fn inverse_series_exact(params: &ExpansionParams, order: u64, m: &Rational) -> Result<Rational> {
    let coeffs = s_coefficients_exact(params, order)?;
    let z = Rational::from(m - &params.alpha.re) / &params.beta.re + 1u32;
    let mut p = Rational::from(1);
    let mut acc = Rational::new();
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            p *= Rational::from(1) - Rational::from(&z / k as u64);
        }
        acc += Rational::from(c * &p);
    }
    Ok(acc)
}

/// Which coordinate labels the first CSV column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridAxis {
    /// `Im s`.
    T,
    /// `Re s`.
    Sigma,
}

/// Columns `t|sigma,K,sum_re,sum_im,direct_re,direct_im,abs_error`; missing
/// direct values are written as `nan`.
pub fn write_series_csv<W: Write>(
    evals: &[SeriesEvaluation],
    axis: GridAxis,
    digits: usize,
    mut w: W,
) -> io::Result<()> {
    let label = match axis {
        GridAxis::T => "t",
        GridAxis::Sigma => "sigma",
    };
    writeln!(w, "{label},K,sum_re,sum_im,direct_re,direct_im,abs_error")?;
    for e in evals {
        let coord = match axis {
            GridAxis::T => &e.s.im,
            GridAxis::Sigma => &e.s.re,
        };
        let (dre, dim) = match &e.direct_value {
            Some(d) => (sci(&d.re, digits), sci(&d.im, digits)),
            None => ("nan".into(), "nan".into()),
        };
        let err = e
            .abs_error()
            .map_or_else(|| "nan".into(), |x| sci(&x, digits));
        writeln!(
            w,
            "{},{},{},{},{dre},{dim},{err}",
            sci(coord, digits),
            e.order,
            sci(&e.partial_sum.re, digits),
            sci(&e.partial_sum.im, digits),
        )?;
    }
    Ok(())
}
