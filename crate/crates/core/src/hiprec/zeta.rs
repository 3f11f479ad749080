//! Riemann zeta, the alternating (eta) series and the logarithmic derivative.
//!
//! `eta` uses the Cohen–Rodriguez Villegas–Zagier acceleration of the
//! alternating series. `zeta` divides by `1 - 2^{1-s}` and falls back to
//! Euler–Maclaurin summation where that factor vanishes off the real axis.
//! The logarithmic derivative on the real axis also uses Euler–Maclaurin
//! (or the plain Dirichlet series once `a` is large enough).

use std::f64::consts::LN_10;

use rug::ops::Pow;
use rug::Float;

use super::bernoulli::bernoulli_over_factorial;
use super::complex::{ln2, pow10, HComplex, HReal};
use super::precision::{digits_to_bits, PrecisionContext};
use crate::error::{Error, Result};

/// `log10(3 + sqrt 8)`: decimal digits gained per acceleration term.
const CVZ_DIGITS_PER_TERM: f64 = 0.765_551_5;

/// Below this `|1 - 2^{1-s}|` (and away from the real axis) `zeta` is
/// evaluated by Euler–Maclaurin instead of dividing the eta value.
const REMOVABLE_ZERO_THRESHOLD: f64 = 1e-3;

/// Precomputed state for repeated zeta evaluations at one precision.
#[derive(Clone, Debug)]
pub struct ZetaEngine {
    ctx: PrecisionContext,
    em_coeffs: Vec<Float>,
}

struct EmSum {
    value: HComplex,
    deriv: Option<HComplex>,
}

impl ZetaEngine {
    pub fn new(ctx: PrecisionContext) -> Self {
        let coeff_bits = ctx.bits() + 160;
        let m = ctx.working_digits() as usize / 2 + 24;
        ZetaEngine {
            ctx,
            em_coeffs: bernoulli_over_factorial(m, coeff_bits),
        }
    }

    pub fn ctx(&self) -> PrecisionContext {
        self.ctx
    }

    fn out_bits(&self) -> u32 {
        self.ctx.bits()
    }

    /// `(1 - 2^{1-s}) zeta(s) = sum_{n>=1} (-1)^{n-1} n^{-s}` for `Re s > 0`.
    pub fn eta(&self, s: &HComplex) -> Result<HComplex> {
        if s.re <= 0 {
            return Err(Error::Domain(format!(
                "alternating series needs Re(s) > 0, got {}",
                s.re.to_f64()
            )));
        }
        let digits = self.ctx.working_digits() as f64 + 2.0;
        Ok(eta_cvz(s, digits).with_prec(self.out_bits()))
    }

    /// `zeta(s)` for `Re s > 0`, `s != 1`.
    pub fn zeta(&self, s: &HComplex) -> Result<HComplex> {
        if is_one(s) {
            return Err(Error::PoleAtOne);
        }
        if s.re <= 0 {
            return Err(Error::Domain(format!(
                "zeta via the alternating series needs Re(s) > 0, got {}",
                s.re.to_f64()
            )));
        }
        let digits = self.ctx.working_digits() as f64 + 2.0;
        let den_probe = one_minus_two_pow(s, self.out_bits());
        let den_abs = den_probe.abs().to_f64();
        if den_abs < REMOVABLE_ZERO_THRESHOLD && s.im.to_f64().abs() > 0.5 {
            return self.zeta_continued(s);
        }
        let extra = (-den_abs.log10()).max(0.0).ceil() + 1.0;
        let bits = digits_to_bits((digits + extra) as u32);
        let eta = eta_cvz(s, digits + extra);
        let den = one_minus_two_pow(&s.with_prec(bits), bits);
        Ok((&eta / &den).with_prec(self.out_bits()))
    }

    /// `zeta(s)` for any `s != 1` by Euler–Maclaurin summation.
    pub fn zeta_continued(&self, s: &HComplex) -> Result<HComplex> {
        if is_one(s) {
            return Err(Error::PoleAtOne);
        }
        let digits = self.ctx.working_digits() as f64 + 2.0;
        Ok(self.em(s, false, digits)?.value.with_prec(self.out_bits()))
    }

    /// `(1 - 2^{1-s}) zeta(s)` for any `s`, by Euler–Maclaurin where the
    /// alternating series does not converge.
    pub fn eta_continued(&self, s: &HComplex) -> Result<HComplex> {
        if s.re > 0 {
            return self.eta(s);
        }
        let z = self.zeta_continued(s)?;
        let bits = self.out_bits() + 32;
        Ok((&z.with_prec(bits) * &one_minus_two_pow(&s.with_prec(bits), bits))
            .with_prec(self.out_bits()))
    }

    /// `zeta(a)` and `zeta'(a)` for real `a != 1`.
    pub fn zeta_and_derivative(&self, a: &HReal) -> Result<(HReal, HReal)> {
        let s = HComplex::from_real(a.clone());
        if is_one(&s) {
            return Err(Error::PoleAtOne);
        }
        let digits = self.ctx.working_digits() as f64 + 2.0;
        let r = self.em(&s, true, digits)?;
        let d = r.deriv.expect("derivative requested");
        Ok((
            Float::with_val(self.out_bits(), &r.value.re),
            Float::with_val(self.out_bits(), &d.re),
        ))
    }

    /// `d/da ln((a-1) zeta(a)) = 1/(a-1) + zeta'(a)/zeta(a)` for real `a > 1`.
    pub fn log_zeta_deriv(&self, a: &HReal) -> Result<HReal> {
        if *a <= 1 {
            return Err(Error::Domain(format!(
                "logarithmic derivative needs a > 1, got {}",
                a.to_f64()
            )));
        }
        let am1 = Float::with_val(a.prec().max(self.out_bits()), a - 1u32);
        let extra = (-am1.to_f64().log10()).max(0.0).ceil() + 2.0;
        let digits = self.ctx.working_digits() as f64 + 2.0 + 2.0 * extra;
        let bits = digits_to_bits(digits as u32);
        let s = HComplex::from_real(Float::with_val(bits, a));
        let r = self.em(&s, true, digits)?;
        let d = r.deriv.expect("derivative requested");
        let am1 = Float::with_val(bits, a - 1u32);
        let v = Float::with_val(bits, am1.recip_ref()) + Float::with_val(bits, &d.re / &r.value.re);
        Ok(Float::with_val(self.out_bits(), v))
    }

    /// Euler–Maclaurin (or direct Dirichlet sum for large `Re s`) with an
    /// absolute accuracy of `10^-digits`.
    fn em(&self, s: &HComplex, deriv: bool, digits: f64) -> Result<EmSum> {
        let sigma = s.re.to_f64();
        let abs_s = s.abs().to_f64();
        let t = s.im.to_f64().abs();

        if sigma > 1.0 {
            // Dirichlet-series tail: sum_{n>=N} n^-sigma <= N^-sigma + N^{1-sigma}/(sigma-1),
            // the derivative carries an extra ln N.
            let ln_n = (digits * LN_10 + 4.0 - (sigma - 1.0).min(1.0).ln()) / (sigma - 1.0);
            if ln_n < 6.0 {
                let n = (ln_n.exp().ceil() as u64).max(2);
                // absorb the ln N factor of the derivative tail
                let n = if deriv { n * 2 + 2 } else { n + 1 };
                return Ok(self.direct(s, deriv, digits, n));
            }
        }

        let avail = self.em_coeffs.len();
        let mut n = ((digits * LN_10 / (2.0 * std::f64::consts::PI)) * 0.9 + abs_s / 6.0)
            .ceil()
            .max(8.0) as u64;
        loop {
            let cancel = if sigma < 1.0 {
                (1.0 - sigma) * (n as f64).log2()
            } else {
                0.0
            };
            let phase = (t * (n as f64).ln() + 1.0).log2().max(0.0);
            let bits = digits_to_bits(digits as u32) + 24 + cancel.ceil() as u32 + phase.ceil() as u32;
            if let Some(r) = self.em_try(s, deriv, digits, n, bits, avail) {
                return Ok(r);
            }
            n = n * 3 / 2 + 1;
        }
    }

    fn direct(&self, s: &HComplex, deriv: bool, digits: f64, n: u64) -> EmSum {
        let t = s.im.to_f64().abs();
        let bits = digits_to_bits(digits as u32)
            + 16
            + (t * (n as f64).ln() + 1.0).log2().max(0.0).ceil() as u32;
        let s = s.with_prec(bits);
        let mut sum = HComplex::zero(bits);
        let mut dsum = HComplex::zero(bits);
        for k in 1..=n {
            let kf = Float::with_val(bits, k);
            let lk = Float::with_val(bits, kf.ln_ref());
            let term = (-s.scale(&lk)).exp();
            if deriv {
                dsum -= &term.scale(&lk);
            }
            sum += &term;
        }
        EmSum {
            value: sum,
            deriv: deriv.then_some(dsum),
        }
    }

    fn em_try(
        &self,
        s: &HComplex,
        deriv: bool,
        digits: f64,
        n: u64,
        bits: u32,
        avail: usize,
    ) -> Option<EmSum> {
        let s = s.with_prec(bits);
        let eps = pow10(bits, -(digits.ceil() as i32) - 1);
        let mut sum = HComplex::zero(bits);
        let mut dsum = HComplex::zero(bits);
        for k in 1..n {
            let kf = Float::with_val(bits, k);
            let lk = Float::with_val(bits, kf.ln_ref());
            let term = (-s.scale(&lk)).exp();
            if deriv {
                dsum -= &term.scale(&lk);
            }
            sum += &term;
        }
        let nf = Float::with_val(bits, n);
        let ln_n = Float::with_val(bits, nf.ln_ref());
        let n_pow = (-s.scale(&ln_n)).exp(); // N^{-s}
        let sm1 = s.add_real(&Float::with_val(bits, -1));
        let n1 = n_pow.scale(&nf); // N^{1-s}
        let head = &n1 / &sm1;
        sum += &head;
        let half = n_pow.div_real(&Float::with_val(bits, 2));
        sum += &half;
        if deriv {
            // d/ds [N^{1-s}/(s-1)] and d/ds [N^{-s}/2]
            dsum -= &head.scale(&ln_n);
            dsum -= &(&head / &sm1);
            dsum -= &half.scale(&ln_n);
        }

        // sum_j B_{2j}/(2j)! (s)_{2j-1} N^{-s-2j+1}
        let n2 = Float::with_val(bits, nf.square_ref());
        let mut power = n_pow.div_real(&nf); // N^{-s-1}
        let mut poch = s.clone();
        let mut dpoch = HComplex::one(bits);
        let mut prev = None::<f64>;
        let mut rising = 0;
        for j in 1..=avail {
            let c = Float::with_val(bits, &self.em_coeffs[j - 1]);
            let base = power.scale(&c);
            let term = &base * &poch;
            let mag = term.abs();
            sum += &term;
            if deriv {
                let d = &dpoch - &poch.scale(&ln_n);
                dsum += &(&base * &d);
            }
            // remainder is bounded by the next term times |s+2j+1|/(sigma+2j+1)
            let jj = 2.0 * j as f64;
            let sig = s.re.to_f64();
            let amp = if sig + jj + 1.0 > 0.5 {
                (s.abs().to_f64() + jj + 1.0) / (sig + jj + 1.0)
            } else {
                f64::INFINITY
            };
            let scaled = Float::with_val(bits, &mag * amp.min(1e300)) * (1.0 + ln_n.to_f64());
            if amp.is_finite() && scaled < eps {
                return Some(EmSum {
                    value: sum,
                    deriv: deriv.then_some(dsum),
                });
            }
            let m = mag.to_f64();
            if let Some(p) = prev {
                if m > p && m.is_finite() {
                    rising += 1;
                    if rising > 2 {
                        return None;
                    }
                }
            }
            prev = Some(m);

            let a = s.add_real(&Float::with_val(bits, 2 * j as u64 - 1));
            let b = s.add_real(&Float::with_val(bits, 2 * j as u64));
            let ab = &a * &b;
            if deriv {
                let two_s = s.scale(&Float::with_val(bits, 2));
                let lin = two_s.add_real(&Float::with_val(bits, 4 * j as u64 - 1));
                dpoch = &(&dpoch * &ab) + &(&poch * &lin);
            }
            poch = &poch * &ab;
            power = power.div_real(&n2);
        }
        None
    }
}

fn is_one(s: &HComplex) -> bool {
    s.im.is_zero() && s.re == 1
}

/// `1 - 2^{1-s}` computed as `-expm1((1-s) ln 2)`.
pub fn one_minus_two_pow(s: &HComplex, bits: u32) -> HComplex {
    let one_minus = HComplex::one(bits) - s.with_prec(bits);
    -(one_minus.scale(&ln2(bits)).exp_m1())
}

/// Accelerated alternating series, absolute accuracy `10^-digits`.
fn eta_cvz(s: &HComplex, digits: f64) -> HComplex {
    let sigma = s.re.to_f64();
    let t = s.im.to_f64().abs();
    // total variation of the moment measure: Gamma(sigma)/|Gamma(s)|
    let log10_var = 0.682_2 * t
        + 0.5 * (1.0 + t).log10()
        + (1.0 + 1.0 / sigma).log10()
        + if sigma < 0.5 { (1.0 + t / sigma).log10() } else { 0.0 };
    let n = ((digits + log10_var + 1.0) / CVZ_DIGITS_PER_TERM).ceil() as u64 + 2;
    let bits = digits_to_bits(digits.ceil() as u32)
        + 16
        + (n as f64).log2().ceil() as u32
        + (t * (n as f64).ln() + 1.0).log2().max(0.0).ceil() as u32;
    let s = s.with_prec(bits);

    let d0 = (Float::with_val(bits, 8).sqrt() + 3u32).pow(n as u32);
    let d = (Float::with_val(bits, d0.recip_ref()) + &d0) / 2u32;
    let mut b = Float::with_val(bits, -1);
    let mut c = Float::with_val(bits, -&d);
    let mut sum = HComplex::zero(bits);
    let ni = n as i64;
    for k in 0..n {
        c = Float::with_val(bits, &b - &c);
        let kf = Float::with_val(bits, k + 1);
        let lk = Float::with_val(bits, kf.ln_ref());
        let term = (-s.scale(&lk)).exp();
        sum += &term.scale(&c);
        let ki = k as i64;
        b *= 2 * (ki + ni) * (ki - ni);
        b /= ((2 * k + 1) * (k + 1)) as f64;
    }
    sum.div_real(&d)
}

/// `zeta(s)`; absolute error at most `10^-target_digits * max(1, |zeta(s)|)`.
pub fn eval_zeta(s: &HComplex, ctx: PrecisionContext) -> Result<HComplex> {
    ZetaEngine::new(ctx).zeta(s)
}

/// The alternating series `(1 - 2^{1-s}) zeta(s)`, `Re s > 0`.
pub fn eval_eta_factor(s: &HComplex, ctx: PrecisionContext) -> Result<HComplex> {
    ZetaEngine::new(ctx).eta(s)
}

/// `1/(a-1) + zeta'(a)/zeta(a)` for real `a > 1`.
pub fn eval_log_zeta_deriv(a: &HReal, ctx: PrecisionContext) -> Result<HReal> {
    ZetaEngine::new(ctx).log_zeta_deriv(a)
}

/// `zeta'(a)/zeta(a) = -sum_p ln p sum_q p^{-aq}` over the given primes.
///
/// Only accurate when the prime table reaches far enough that the neglected
/// tail is negligible; [`prime_series_tail_bound`] estimates it.
pub fn zeta_log_deriv_prime_series(a: &HReal, primes: &[u64], q_max: u32, bits: u32) -> HReal {
    let mut acc = Float::new(bits);
    for &p in primes {
        let pf = Float::with_val(bits, p);
        let lp = Float::with_val(bits, pf.ln_ref());
        let x = (-Float::with_val(bits, a * &lp)).exp(); // p^-a
        let mut pw = x.clone();
        let mut inner = Float::new(bits);
        for _ in 0..q_max {
            inner += &pw;
            pw *= &x;
        }
        acc -= inner * lp;
    }
    acc
}

/// Rough bound `2 P^{1-a} ln P / (a-1)` on the neglected primes `p > P`.
pub fn prime_series_tail_bound(a: f64, largest_prime: u64) -> f64 {
    let p = largest_prime as f64;
    2.0 * p.powf(1.0 - a) * p.ln() / (a - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hiprec::complex::{euler_gamma, pi};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30, 10).unwrap()
    }

    fn real(bits: u32, x: f64) -> HComplex {
        HComplex::from_f64(bits, x, 0.0)
    }

    fn assert_close(a: &Float, b: &Float, tol: f64) {
        let d = Float::with_val(a.prec(), a - b).abs().to_f64();
        assert!(d < tol, "{} vs {} (diff {d:e})", a.to_f64(), b.to_f64());
    }

    #[test]
    fn zeta_two_and_four() {
        let c = ctx();
        let b = c.bits();
        let z2 = eval_zeta(&real(b, 2.0), c).unwrap();
        let pi2 = Float::with_val(b, pi(b).square_ref()) / 6u32;
        assert_close(&z2.re, &pi2, 1e-30);
        assert!(z2.im.is_zero() || z2.im.to_f64().abs() < 1e-35);
        let z4 = eval_zeta(&real(b, 4.0), c).unwrap();
        let pi4 = Float::with_val(b, pi(b).pow(4u32)) / 90u32;
        assert_close(&z4.re, &pi4, 1e-30);
    }

    #[test]
    fn zeta_near_first_zero() {
        let c = ctx();
        let s = HComplex::parse(c.bits(), "0.5", "14.134725").unwrap();
        let z = eval_zeta(&s, c).unwrap();
        assert!(z.abs().to_f64() < 1e-4);
        let s = HComplex::parse(c.bits(), "0.5", "14.134725141734693790457251983562").unwrap();
        assert!(eval_zeta(&s, c).unwrap().abs().to_f64() < 1e-28);
    }

    #[test]
    fn zeta_errors() {
        let c = ctx();
        assert!(matches!(
            eval_zeta(&real(c.bits(), 1.0), c),
            Err(Error::PoleAtOne)
        ));
        assert!(matches!(
            eval_zeta(&real(c.bits(), -0.5), c),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_eta_factor(&real(c.bits(), 0.0), c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn eta_closed_forms() {
        let c = ctx();
        let b = c.bits();
        let e1 = eval_eta_factor(&real(b, 1.0), c).unwrap();
        assert_close(&e1.re, &ln2(b), 1e-30);
        let e2 = eval_eta_factor(&real(b, 2.0), c).unwrap();
        let pi2 = Float::with_val(b, pi(b).square_ref()) / 12u32;
        assert_close(&e2.re, &pi2, 1e-30);
        let s = HComplex::parse(b, "0.5", "25.010858").unwrap();
        assert!(eval_eta_factor(&s, c).unwrap().abs().to_f64() < 1e-3);
    }

    #[test]
    fn removable_zero_of_the_factor() {
        // s = 1 + 2 pi i / ln 2: 1 - 2^{1-s} = 0, eta(s) = 0, zeta finite.
        let c = ctx();
        let b = c.bits() + 64;
        let t = Float::with_val(b, pi(b) * 2u32) / ln2(b);
        let s = HComplex::new(Float::with_val(b, 1), t);
        let z = eval_zeta(&s, c).unwrap();
        let z_em = ZetaEngine::new(c).zeta_continued(&s).unwrap();
        assert!(z.is_finite());
        assert_close(&z.re, &z_em.re, 1e-30);
        // nearby point through the eta route agrees with Euler–Maclaurin
        let s2 = HComplex::new(Float::with_val(b, 1.01), s.im.clone());
        let a = eval_zeta(&s2, c).unwrap();
        let e = ZetaEngine::new(c).zeta_continued(&s2).unwrap();
        assert_close(&a.re, &e.re, 1e-29);
        assert_close(&a.im, &e.im, 1e-29);
    }

    #[test]
    fn continued_values() {
        let c = ctx();
        let b = c.bits();
        let eng = ZetaEngine::new(c);
        let z0 = eng.zeta_continued(&real(b, 0.0)).unwrap();
        assert_close(&z0.re, &Float::with_val(b, -0.5), 1e-30);
        let zm1 = eng.zeta_continued(&real(b, -1.0)).unwrap();
        let expect = Float::with_val(b, -1) / 12u32;
        assert_close(&zm1.re, &expect, 1e-30);
        let e0 = eng.eta_continued(&real(b, 0.0)).unwrap();
        assert_close(&e0.re, &Float::with_val(b, 0.5), 1e-30);
    }

    #[test]
    fn eta_matches_euler_maclaurin_off_axis() {
        let c = ctx();
        let b = c.bits();
        let eng = ZetaEngine::new(c);
        for (x, y) in [(0.5, 3.0), (0.2, 40.0), (3.5, -7.0), (1.0, 20.0)] {
            let s = HComplex::from_f64(b, x, y);
            let eta = eng.eta(&s).unwrap();
            let z = eng.zeta_continued(&s).unwrap();
            let other = &z * &one_minus_two_pow(&s, b);
            let d = (&eta - &other).abs().to_f64();
            assert!(d < 1e-30, "s = {x}+{y}i: diff {d:e}");
        }
    }

    #[test]
    fn log_derivative_values() {
        let c = ctx();
        let b = c.bits() + 64;
        // zeta'(2)/zeta(2) = gamma + ln(2 pi) - 12 ln A (Glaisher)
        let glaisher = Float::with_val(
            b,
            Float::parse("1.28242712910062263687534256886979172776768892732500119206374002").unwrap(),
        );
        let two_pi = Float::with_val(b, pi(b) * 2u32);
        let expect = Float::with_val(b, 1u32)
            + euler_gamma(b)
            + two_pi.ln()
            - Float::with_val(b, glaisher.ln()) * 12u32;
        let got = eval_log_zeta_deriv(&Float::with_val(b, 2), c).unwrap();
        assert_close(&got, &expect, 1e-29);

        // a -> 1+ approaches Euler's constant
        let near = eval_log_zeta_deriv(&Float::with_val(b, 1.000001), c).unwrap();
        assert!((near.to_f64() - 0.577_215_66).abs() < 1e-6);
    }

    #[test]
    fn log_derivative_large_a_against_primes() {
        let c = ctx();
        let b = c.bits();
        let primes: Vec<u64> = (2..2000u64).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect();
        let a = Float::with_val(b, 10);
        let series = zeta_log_deriv_prime_series(&a, &primes, 40, b);
        let got = eval_log_zeta_deriv(&a, c).unwrap();
        let expect = series + Float::with_val(b, 9u32).recip();
        let tail = prime_series_tail_bound(10.0, *primes.last().unwrap());
        assert_close(&got, &expect, tail.max(1e-30) * 10.0);
        let dz = Float::with_val(b, &got - Float::with_val(b, 9u32).recip());
        assert!(dz.to_f64().abs() < 1e-2);
        assert!(matches!(
            eval_log_zeta_deriv(&Float::with_val(b, 1), c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zeta_derivative_at_two() {
        let c = ctx();
        let b = c.bits();
        let eng = ZetaEngine::new(c);
        let (z, dz) = eng.zeta_and_derivative(&Float::with_val(b, 2)).unwrap();
        assert!((z.to_f64() - 1.644_934_066_848_226_4).abs() < 1e-15);
        assert!((dz.to_f64() + 0.937_548_254_315_843_8).abs() < 1e-15);
    }
}
