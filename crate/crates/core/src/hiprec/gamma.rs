//! Gamma and Beta functions via a Spouge approximation.
//!
//! `ln Gamma(w+1) = (w+1/2) ln(w+a) - (w+a) + ln(c_0 + sum_{k<a} c_k/(w+k))`
//! with relative error below `a^{-1/2} (2 pi)^{-(a+1/2)}`; the parameter `a`
//! is derived from the requested precision. The left half-plane goes through
//! the reflection formula.

use rug::Float;

use super::complex::{pi, HComplex};
use super::precision::PrecisionContext;
use crate::error::{Error, Result};

/// Spouge coefficients for one working precision.
#[derive(Clone, Debug)]
pub struct GammaEngine {
    bits: u32,
    inner_bits: u32,
    a: u64,
    coeffs: Vec<Float>,
}

impl GammaEngine {
    /// Engine whose results carry `bits` of relative accuracy (for moderate
    /// arguments; very large `|z|` gets extra internal bits automatically).
    pub fn new(bits: u32) -> Self {
        let target = bits + 32;
        let a = (f64::from(target) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI).ln())
            .ceil() as u64
            + 2;
        // the alternating coefficients cancel roughly `target` bits
        let inner_bits = 2 * target + 64;
        let af = Float::with_val(inner_bits, a);
        let mut coeffs = Vec::with_capacity(a as usize);
        let two_pi = Float::with_val(inner_bits, pi(inner_bits) * 2u32);
        coeffs.push(two_pi.sqrt());
        let mut fact = Float::with_val(inner_bits, 1); // (k-1)!
        for k in 1..a {
            let amk = Float::with_val(inner_bits, &af - k);
            // (a-k)^{k-1/2} e^{a-k} / (k-1)!
            let e = Float::with_val(inner_bits, k) - 0.5f64;
            let mut c = Float::with_val(inner_bits, amk.ln_ref()) * &e + &amk;
            c = c.exp() / &fact;
            if k % 2 == 0 {
                c = -c;
            }
            coeffs.push(c);
            fact *= k;
        }
        GammaEngine {
            bits,
            inner_bits,
            a,
            coeffs,
        }
    }

    pub fn for_ctx(ctx: PrecisionContext) -> Self {
        Self::new(ctx.bits())
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `ln Gamma(z)` modulo `2 pi i`.
    pub fn ln_gamma(&self, z: &HComplex) -> Result<HComplex> {
        check_pole(z)?;
        let mag = z.abs().to_f64();
        let extra = ((mag + 2.0) * (mag + 2.0).ln()).log2().max(0.0).ceil() as u32 + 8;
        let bits = self.inner_bits + extra;
        let z = z.with_prec(bits);
        if z.re < 0.5 {
            // ln Gamma(z) = ln pi - ln sin(pi z) - ln Gamma(1 - z)
            let pz = z.scale(&pi(bits));
            let s = pz.sin();
            let one_minus = HComplex::one(bits) - &z;
            let lg = self.spouge(&one_minus, bits);
            let lpi = HComplex::from_real(pi(bits).ln());
            return Ok((&(&lpi - &s.ln()) - &lg).with_prec(self.bits + extra));
        }
        Ok(self.spouge(&z, bits).with_prec(self.bits + extra))
    }

    fn spouge(&self, z: &HComplex, bits: u32) -> HComplex {
        let w = z.add_real(&Float::with_val(bits, -1));
        let mut sum = HComplex::from_real(Float::with_val(bits, &self.coeffs[0]));
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let wk = w.add_real(&Float::with_val(bits, k));
            sum += &wk.recip().scale(c);
        }
        let wa = w.add_real(&Float::with_val(bits, self.a));
        let wh = w.add_real(&Float::with_val(bits, 0.5));
        &(&(&wh * &wa.ln()) - &wa) + &sum.ln()
    }

    pub fn gamma(&self, z: &HComplex) -> Result<HComplex> {
        let lg = self.ln_gamma(z)?;
        let mut g = lg.exp().with_prec(self.bits);
        if z.is_real() {
            g.im = Float::new(self.bits);
        }
        Ok(g)
    }

    /// `B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)`.
    pub fn beta(&self, x: &HComplex, y: &HComplex) -> Result<HComplex> {
        let sum = x + y;
        check_pole(&sum)?;
        let l = &(&self.ln_gamma(x)? + &self.ln_gamma(y)?) - &self.ln_gamma(&sum)?;
        let mut b = l.exp().with_prec(self.bits);
        if x.is_real() && y.is_real() {
            b.im = Float::new(self.bits);
        }
        Ok(b)
    }
}

fn check_pole(z: &HComplex) -> Result<()> {
    if z.im.is_zero() && z.re <= 0 && z.re.is_integer() {
        return Err(Error::Pole(format!("{}", z.re.to_f64())));
    }
    Ok(())
}

pub fn eval_gamma(z: &HComplex, ctx: PrecisionContext) -> Result<HComplex> {
    GammaEngine::for_ctx(ctx).gamma(z)
}

pub fn eval_beta(x: &HComplex, y: &HComplex, ctx: PrecisionContext) -> Result<HComplex> {
    GammaEngine::for_ctx(ctx).beta(x, y)
}
