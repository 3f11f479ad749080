//! Expansion parameters `(alpha, beta)` and the evaluation line `sigma`.
//!
//! Parameters are kept as exact rationals so the same configuration can be
//! materialised at any working precision.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::hiprec::HComplex;

/// Complex number with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: impl Into<Rational>) -> Self {
        ExactComplex::new(re.into(), Rational::new())
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExactComplex::real(Rational::from((num, den)))
    }

    pub fn imag(im: impl Into<Rational>) -> Self {
        ExactComplex::new(Rational::new(), im.into())
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn to_hcomplex(&self, bits: u32) -> HComplex {
        HComplex::with_val(bits, &self.re, &self.im)
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.cmp0().is_lt() { "-" } else { "+" };
        let mag = Rational::from(self.im.abs_ref());
        let im = if mag == 1 {
            String::new()
        } else {
            mag.to_string()
        };
        if self.re.cmp0().is_eq() {
            let sign = if sign == "-" { "-" } else { "" };
            write!(f, "{sign}{im}i")
        } else {
            write!(f, "{}{sign}{im}i", self.re)
        }
    }
}

/// Parses `"9/2"`, `"0.5"`, `"-1.5e3"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.cmp0().is_eq() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num = Integer::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let scale = exp - frac.len() as i32;
    let pow = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    let mut r = if scale >= 0 {
        Rational::from(num * pow)
    } else {
        Rational::from((num, pow))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

impl FromStr for ExactComplex {
    type Err = Error;

    /// Accepts `a`, `bi`, `i`, `-i`, `a+bi`, `a-i` with `a`, `b` decimals or
    /// fractions.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse complex parameter {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(&t).map(ExactComplex::real).ok_or_else(bad);
        };
        // split at the last sign that is not leading and not an exponent sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => Rational::from(1),
            "-" => Rational::from(-1),
            x => parse_rational(x).ok_or_else(bad)?,
        };
        let re = parse_rational(re).ok_or_else(bad)?;
        Ok(ExactComplex::new(re, im))
    }
}

/// The pair `(alpha, beta)` of a Pochhammer expansion and the line
/// `Re(s) = sigma` it is examined on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpansionParams {
    pub alpha: ExactComplex,
    pub beta: ExactComplex,
    pub sigma: Rational,
}

impl ExpansionParams {
    pub fn new(alpha: ExactComplex, beta: ExactComplex, sigma: Rational) -> Result<Self> {
        if beta.is_zero() {
            return Err(Error::Domain("beta must be nonzero".into()));
        }
        Ok(ExpansionParams { alpha, beta, sigma })
    }

    /// `alpha = beta = 2`.
    pub fn riesz() -> Self {
        ExpansionParams {
            alpha: ExactComplex::ratio(2, 1),
            beta: ExactComplex::ratio(2, 1),
            sigma: Rational::from((1, 2)),
        }
    }

    /// `alpha = 1/2`, `beta = i`: the expansion variable becomes `t + 1` on
    /// the critical line.
    pub fn critical_line() -> Self {
        ExpansionParams {
            alpha: ExactComplex::ratio(1, 2),
            beta: ExactComplex::imag(1),
            sigma: Rational::from((1, 2)),
        }
    }

    /// `alpha = 9/2`, `beta = 4`, `sigma = 1/2`.
    pub fn critical_default() -> Self {
        ExpansionParams {
            alpha: ExactComplex::ratio(9, 2),
            beta: ExactComplex::ratio(4, 1),
            sigma: Rational::from((1, 2)),
        }
    }

    pub fn real(alpha: Rational, beta: Rational, sigma: Rational) -> Result<Self> {
        Self::new(ExactComplex::real(alpha), ExactComplex::real(beta), sigma)
    }

    pub fn alpha_h(&self, bits: u32) -> HComplex {
        self.alpha.to_hcomplex(bits)
    }

    pub fn beta_h(&self, bits: u32) -> HComplex {
        self.beta.to_hcomplex(bits)
    }

    pub fn sigma_h(&self, bits: u32) -> Float {
        Float::with_val(bits, &self.sigma)
    }

    /// `alpha + beta j`, exactly.
    pub fn node(&self, j: u64) -> ExactComplex {
        let j = Rational::from(j);
        ExactComplex::new(
            Rational::from(&self.beta.re * &j) + &self.alpha.re,
            Rational::from(&self.beta.im * &j) + &self.alpha.im,
        )
    }

    /// `(s - alpha)/beta + 1`.
    pub fn shifted_arg(&self, s: &HComplex, bits: u32) -> HComplex {
        let z = &(&s.with_prec(bits) - &self.alpha_h(bits)) / &self.beta_h(bits);
        z.add_real(&Float::with_val(bits, 1))
    }

    /// Real `alpha > 1`, real `beta > 0`: the families built on the prime
    /// side and on `1/(s-1)` need this.
    pub fn require_real_above_one(&self) -> Result<(Rational, Rational)> {
        let (a, b) = self.require_real_positive()?;
        if a <= 1 {
            return Err(Error::Domain(format!("alpha must exceed 1, got {a}")));
        }
        Ok((a, b))
    }

    /// Real `alpha`, real `beta > 0`.
    pub fn require_real_positive(&self) -> Result<(Rational, Rational)> {
        if !self.alpha.is_real() || !self.beta.is_real() {
            return Err(Error::Domain(
                "this family needs real alpha and beta".into(),
            ));
        }
        if self.beta.re.cmp0().is_le() {
            return Err(Error::Domain(format!(
                "beta must be positive, got {}",
                self.beta.re
            )));
        }
        Ok((self.alpha.re.clone(), self.beta.re.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("9/2"), Some(Rational::from((9, 2))));
        assert_eq!(parse_rational("0.5"), Some(Rational::from((1, 2))));
        assert_eq!(parse_rational("-1.25"), Some(Rational::from((-5, 4))));
        assert_eq!(parse_rational("1e6"), Some(Rational::from(1_000_000)));
        assert_eq!(parse_rational("2.5e-1"), Some(Rational::from((1, 4))));
        assert_eq!(parse_rational(".5"), Some(Rational::from((1, 2))));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn complex_parsing() {
        let p = |s: &str| s.parse::<ExactComplex>().unwrap();
        assert_eq!(p("i"), ExactComplex::imag(1));
        assert_eq!(p("-i"), ExactComplex::imag(-1));
        assert_eq!(p("4"), ExactComplex::ratio(4, 1));
        assert_eq!(p("2.5i"), ExactComplex::imag(Rational::from((5, 2))));
        assert_eq!(
            p("1/2+3i"),
            ExactComplex::new(Rational::from((1, 2)), Rational::from(3))
        );
        assert_eq!(
            p("1e-1-i"),
            ExactComplex::new(Rational::from((1, 10)), Rational::from(-1))
        );
        assert!("1+2j".parse::<ExactComplex>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in ["9/2", "i", "-i", "1/2+3i", "2-5/3i"] {
            let c: ExactComplex = s.parse().unwrap();
            assert_eq!(c.to_string().parse::<ExactComplex>().unwrap(), c);
        }
    }

    #[test]
    fn params() {
        assert!(ExpansionParams::new(
            ExactComplex::ratio(1, 1),
            ExactComplex::real(0),
            Rational::new()
        )
        .is_err());
        let p = ExpansionParams::critical_default();
        assert_eq!(p.node(3), ExactComplex::ratio(33, 2));
        assert!(p.require_real_above_one().is_ok());
        assert!(ExpansionParams::critical_line()
            .require_real_positive()
            .is_err());
        // (s - 1/2)/i + 1 = t + 1 on s = 1/2 + i t
        let cl = ExpansionParams::critical_line();
        let s = HComplex::from_f64(128, 0.5, 3.25);
        let z = cl.shifted_arg(&s, 128);
        assert_eq!(z.re.to_f64(), 4.25);
        assert_eq!(z.im.to_f64(), 0.0);
    }
}
