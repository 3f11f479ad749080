//! Pochhammer polynomials `P_k(s) = prod_{r=1..k} (1 - s/r)`, `P_0 = 1`.

use rug::Float;

use crate::error::{Error, Result};
use crate::hiprec::{HComplex, HReal, PrecisionContext};
use crate::params::ExpansionParams;

/// Above this degree the product is accumulated in log form.
pub const LOG_FORM_THRESHOLD: u64 = 10_000;

/// `s` is an integer in `[1, k]`, where `P_k(s)` vanishes exactly.
fn is_integer_root(s: &HComplex, k: u64) -> bool {
    s.im.is_zero() && s.re.is_integer() && s.re >= 1 && s.re <= k
}

/// Direct product.
pub fn pochhammer_direct(s: &HComplex, k: u64, bits: u32) -> HComplex {
    if is_integer_root(s, k) {
        return HComplex::zero(bits);
    }
    let s = s.with_prec(bits);
    let mut acc = HComplex::one(bits);
    for r in 1..=k {
        let factor = HComplex::one(bits) - s.div_real(&Float::with_val(bits, r));
        acc = &acc * &factor;
    }
    acc
}

/// Product assembled from `sum ln|1 - s/r|` and the accumulated argument of
/// each factor; the angle is never reduced to a principal branch.
pub fn pochhammer_log(s: &HComplex, k: u64, bits: u32) -> HComplex {
    if is_integer_root(s, k) {
        return HComplex::zero(bits);
    }
    let inner = bits + 16 + (k.max(2) as f64).log2().ceil() as u32;
    let s = s.with_prec(inner);
    let mut acc = LogProduct::new(inner, &s);
    for r in 1..=k {
        acc.push(&s, r);
    }
    acc.value().with_prec(bits)
}

/// Accumulates `sum ln|1 - s/r|` and the unwound argument.
///
/// Once `|s|/r <= 1/2` every factor has `|arg| <= 1.05 |s|/r`, so factors are
/// multiplied into a batch until the summed bound reaches 2.5; the batch
/// argument then equals the sum of the factor arguments and is folded in
/// without any branch ambiguity.
struct LogProduct {
    bits: u32,
    s_abs: f64,
    log_mag: Float,
    angle: Float,
    batch: HComplex,
    batch_bound: f64,
}

impl LogProduct {
    fn new(bits: u32, s: &HComplex) -> Self {
        LogProduct {
            bits,
            s_abs: s.abs().to_f64(),
            log_mag: Float::new(bits),
            angle: Float::new(bits),
            batch: HComplex::one(bits),
            batch_bound: 0.0,
        }
    }

    fn push(&mut self, s: &HComplex, r: u64) {
        let factor = HComplex::one(self.bits) - s.div_real(&Float::with_val(self.bits, r));
        let ratio = self.s_abs / r as f64;
        if ratio > 0.5 {
            self.flush();
            self.fold(&factor);
            return;
        }
        self.batch = &self.batch * &factor;
        self.batch_bound += 1.05 * ratio;
        if self.batch_bound > 2.5 {
            self.flush();
        }
    }

    fn fold(&mut self, w: &HComplex) {
        self.log_mag += Float::with_val(self.bits, w.norm_sqr().ln()) / 2u32;
        self.angle += w.arg();
    }

    fn flush(&mut self) {
        if self.batch_bound > 0.0 {
            let b = std::mem::replace(&mut self.batch, HComplex::one(self.bits));
            self.fold(&b);
            self.batch_bound = 0.0;
        }
    }

    fn log_magnitude(&mut self) -> &Float {
        self.flush();
        &self.log_mag
    }

    fn value(&mut self) -> HComplex {
        self.flush();
        HComplex::new(self.log_mag.clone(), self.angle.clone()).exp()
    }
}

/// `P_k(s)`; direct product up to [`LOG_FORM_THRESHOLD`], log form above.
pub fn eval_pochhammer(s: &HComplex, k: u64, ctx: PrecisionContext) -> HComplex {
    let bits = ctx.bits();
    if k > LOG_FORM_THRESHOLD {
        pochhammer_log(s, k, bits)
    } else {
        pochhammer_direct(s, k, bits + 8).with_prec(bits)
    }
}

/// `P_k((s - alpha)/beta + 1)`.
pub fn eval_pochhammer_shifted(
    s: &HComplex,
    params: &ExpansionParams,
    k: u64,
    ctx: PrecisionContext,
) -> Result<HComplex> {
    if params.beta.is_zero() {
        return Err(Error::Domain("beta must be nonzero".into()));
    }
    let z = params.shifted_arg(s, ctx.bits() + 16);
    Ok(eval_pochhammer(&z, k, ctx))
}

/// Successive values `P_0(z), P_1(z), ...` by the recurrence
/// `P_k = P_{k-1} (1 - z/k)`.
pub struct PochhammerSeq {
    z: HComplex,
    k: u64,
    current: HComplex,
}

impl PochhammerSeq {
    pub fn new(z: &HComplex) -> Self {
        let bits = z.prec();
        PochhammerSeq {
            z: z.clone(),
            k: 0,
            current: HComplex::one(bits),
        }
    }
}

impl Iterator for PochhammerSeq {
    type Item = HComplex;

    fn next(&mut self) -> Option<HComplex> {
        let out = self.current.clone();
        self.k += 1;
        let bits = self.z.prec();
        let factor = HComplex::one(bits) - self.z.div_real(&Float::with_val(bits, self.k));
        self.current = &self.current * &factor;
        Some(out)
    }
}

/// Outcome of [`check_decay_bound`].
#[derive(Clone, Debug)]
pub struct DecayReport {
    /// `(k, |P_k(s)| k^{Re s})` for each requested degree.
    pub scaled: Vec<(u64, f64)>,
    /// Largest scaled value: the empirical constant of the decay bound.
    pub max_scaled: HReal,
    /// The maximum reached before the last decile of `k_list` is within 5%
    /// of the overall maximum.
    pub stabilized: bool,
}

/// Tracks `|P_k(s)| k^{Re s}` over an ascending list of degrees.
pub fn check_decay_bound(s: &HComplex, k_list: &[u64], ctx: PrecisionContext) -> Result<DecayReport> {
    if k_list.is_empty() {
        return Err(Error::Domain("k_list must be nonempty".into()));
    }
    if k_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("k_list must be strictly ascending".into()));
    }
    let last = *k_list.last().unwrap();
    let bits = ctx.bits() + 16 + (last.max(2) as f64).log2().ceil() as u32;
    let s = s.with_prec(bits);
    let sigma = s.re.clone();

    let mut scaled = Vec::with_capacity(k_list.len());
    let mut max_scaled = Float::new(ctx.bits());
    let mut acc = LogProduct::new(bits, &s);
    let mut r = 0u64;
    let mut vanished = false;
    for &k in k_list {
        while r < k {
            r += 1;
            if is_integer_root(&s, r) {
                vanished = true;
            }
            if !vanished {
                acc.push(&s, r);
            }
        }
        let v = if vanished || k == 0 {
            if k == 0 {
                // 0^{Re s} * P_0
                Float::with_val(bits, if sigma > 0 { 0 } else { 1 })
            } else {
                Float::new(bits)
            }
        } else {
            let kf = Float::with_val(bits, k);
            let lk = Float::with_val(bits, kf.ln_ref());
            (Float::with_val(bits, acc.log_magnitude()) + lk * &sigma).exp()
        };
        if v > max_scaled {
            max_scaled = Float::with_val(ctx.bits(), &v);
        }
        scaled.push((k, v.to_f64()));
    }

    let n = scaled.len();
    let tail = n.div_ceil(10);
    let head_max = scaled[..n - tail]
        .iter()
        .map(|&(_, v)| v)
        .fold(0.0f64, f64::max);
    let overall = max_scaled.to_f64();
    let stabilized = n == 1 || overall <= 1.05 * head_max || overall == 0.0;
    Ok(DecayReport {
        scaled,
        max_scaled,
        stabilized,
    })
}

/// Both sides of `P_k((s-alpha)/beta + 1) = (alpha - s)/beta * (1/k) * P_{k-1}((s-alpha)/beta)`.
pub fn pochhammer_step_identity(
    s: &HComplex,
    params: &ExpansionParams,
    k: u64,
    ctx: PrecisionContext,
) -> Result<(HComplex, HComplex)> {
    if params.beta.is_zero() {
        return Err(Error::Domain("beta must be nonzero".into()));
    }
    if k == 0 {
        return Err(Error::Domain("the step identity needs k >= 1".into()));
    }
    let bits = ctx.bits() + 16;
    let z = &(&s.with_prec(bits) - &params.alpha_h(bits)) / &params.beta_h(bits);
    let lhs = eval_pochhammer(&z.add_real(&Float::with_val(bits, 1)), k, ctx);
    let prefactor = (-&z).div_real(&Float::with_val(bits, k));
    let rhs = (&prefactor * &eval_pochhammer(&z, k - 1, ctx)).with_prec(ctx.bits());
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ExactComplex;
    use proptest::prelude::*;
    use rug::Rational;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30, 10).unwrap()
    }

    fn c(re: f64, im: f64) -> HComplex {
        HComplex::from_f64(ctx().bits(), re, im)
    }

    fn diff(a: &HComplex, b: &HComplex) -> f64 {
        (a - b).abs().to_f64()
    }

    #[test]
    fn small_values() {
        let ctx = ctx();
        assert_eq!(eval_pochhammer(&c(0.37, -2.0), 0, ctx), HComplex::one(ctx.bits()));
        assert!(eval_pochhammer(&c(3.0, 0.0), 5, ctx).is_zero());
        // (1/2)(3/4)(5/6)(7/8) = 105/384
        let v = eval_pochhammer(&c(0.5, 0.0), 4, ctx);
        let expect = HComplex::from_real(Float::with_val(ctx.bits(), Rational::from((105, 384))));
        assert!(diff(&v, &expect) < 1e-38);
    }

    #[test]
    fn integer_roots_only_up_to_k() {
        let ctx = ctx();
        // P_2(3) = (1-3)(1-3/2) = 1
        let v = eval_pochhammer(&c(3.0, 0.0), 2, ctx);
        assert!(diff(&v, &c(1.0, 0.0)) < 1e-38);
        assert!(pochhammer_log(&c(7.0, 0.0), 20_000, ctx.bits()).is_zero());
    }

    #[test]
    fn shifted() {
        let ctx = ctx();
        let p = ExpansionParams::critical_default();
        let s = p.alpha_h(ctx.bits());
        for k in 1..6 {
            assert!(eval_pochhammer_shifted(&s, &p, k, ctx).unwrap().is_zero());
        }
        // alpha = 1/2, beta = i: argument t + 1
        let cl = ExpansionParams::critical_line();
        let s = c(0.5, 2.75);
        let a = eval_pochhammer_shifted(&s, &cl, 12, ctx).unwrap();
        let b = eval_pochhammer(&c(3.75, 0.0), 12, ctx);
        assert!(diff(&a, &b) < 1e-35);
        // alpha = beta = 2, s = 0: argument 0, P_k(0) = 1
        let r = ExpansionParams::riesz();
        let v = eval_pochhammer_shifted(&c(0.0, 0.0), &r, 9, ctx).unwrap();
        assert!(diff(&v, &c(1.0, 0.0)) < 1e-38);
    }

    #[test]
    fn log_and_direct_agree_at_crossover() {
        let bits = ctx().bits();
        for (re, im) in [(0.5, 0.0), (1.0, 2.0), (-3.3, 14.1), (0.25, -40.0)] {
            let s = c(re, im);
            for k in [1_000u64, LOG_FORM_THRESHOLD, 30_000] {
                let d = pochhammer_direct(&s, k, bits + 32);
                let l = pochhammer_log(&s, k, bits);
                let rel = diff(&d, &l) / d.abs().to_f64();
                assert!(rel < 1e-30, "s = {re}+{im}i, k = {k}: {rel:e}");
            }
        }
    }

    #[test]
    fn decay_report() {
        let ctx = ctx();
        let ks: Vec<u64> = (0..=20).map(|j| 1u64 << j).collect();
        let r = check_decay_bound(&c(1.0, 0.0), &ks, ctx).unwrap();
        assert_eq!(r.max_scaled.to_f64(), 0.0);
        assert!(r.stabilized);

        // |P_k(1/2)| sqrt(k) -> 1/Gamma(1/2) = 0.5641895835...
        let r = check_decay_bound(&c(0.5, 0.0), &ks, ctx).unwrap();
        assert!(r.stabilized);
        let m = r.max_scaled.to_f64();
        assert!(m < 0.564_189_6 && m > 0.564_18, "{m}");

        // |P_k(1+2i)| k -> 1/|Gamma(-2i)| = sqrt(2 sinh(2 pi) / pi)
        let r = check_decay_bound(&c(1.0, 2.0), &ks, ctx).unwrap();
        assert!(r.stabilized);
        let limit = (2.0 * (2.0 * std::f64::consts::PI).sinh() / std::f64::consts::PI).sqrt();
        let last = r.scaled.last().unwrap().1;
        assert!((last / limit - 1.0).abs() < 1e-4, "{last} vs {limit}");

        assert!(check_decay_bound(&c(0.5, 0.0), &[], ctx).is_err());
        assert!(check_decay_bound(&c(0.5, 0.0), &[4, 2], ctx).is_err());
    }

    #[test]
    fn step_identity() {
        let ctx = ctx();
        let p = ExpansionParams::critical_default();
        let (l, r) = pochhammer_step_identity(&c(0.5, 0.0), &p, 10, ctx).unwrap();
        assert!(diff(&l, &r) < 1e-30);
        // k = 1: both sides (alpha - s)/beta
        let s = c(2.0, 1.5);
        let (l, r) = pochhammer_step_identity(&s, &p, 1, ctx).unwrap();
        let expect = &(&p.alpha_h(ctx.bits()) - &s) / &p.beta_h(ctx.bits());
        assert!(diff(&l, &expect) < 1e-35 && diff(&r, &expect) < 1e-35);
        // s = alpha: both vanish
        let (l, r) = pochhammer_step_identity(&p.alpha_h(ctx.bits()), &p, 4, ctx).unwrap();
        assert!(l.is_zero() && r.is_zero());
        assert!(pochhammer_step_identity(&s, &p, 0, ctx).is_err());
        let bad = ExpansionParams {
            beta: ExactComplex::real(0),
            ..p
        };
        assert!(pochhammer_step_identity(&s, &bad, 3, ctx).is_err());
    }

    proptest! {
        #[test]
        fn recurrence(re in -10.0f64..10.0, im in -30.0f64..30.0, k in 1u64..300) {
            let ctx = ctx();
            let s = c(re, im);
            let pk = eval_pochhammer(&s, k, ctx);
            let prev = eval_pochhammer(&s, k - 1, ctx);
            let factor = HComplex::one(ctx.bits()) - s.div_real(&Float::with_val(ctx.bits(), k));
            let rhs = &prev * &factor;
            let scale = pk.abs().to_f64().max(1e-300);
            prop_assert!(diff(&pk, &rhs) / scale < 1e-30);
        }

        #[test]
        fn sequence_matches_direct(re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let ctx = ctx();
            let s = c(re, im);
            for (k, v) in PochhammerSeq::new(&s).take(40).enumerate() {
                let d = eval_pochhammer(&s, k as u64, ctx);
                prop_assert!(diff(&v, &d) <= 1e-30 * d.abs().to_f64().max(1.0));
            }
        }
    }
}
