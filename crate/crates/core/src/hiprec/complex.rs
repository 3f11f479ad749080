use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float};

/// Arbitrary-precision real scalar.
pub type HReal = Float;

/// Arbitrary-precision complex scalar `re + i im`.
///
/// Arithmetic between two values is carried out at the larger of the two
/// precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct HComplex {
    pub re: HReal,
    pub im: HReal,
}

impl HComplex {
    pub fn new(re: HReal, im: HReal) -> Self {
        HComplex { re, im }
    }

    pub fn with_val<R, I>(bits: u32, re: R, im: I) -> Self
    where
        Float: Assign<R> + Assign<I>,
    {
        HComplex {
            re: Float::with_val(bits, re),
            im: Float::with_val(bits, im),
        }
    }

    pub fn zero(bits: u32) -> Self {
        Self::with_val(bits, 0, 0)
    }

    pub fn one(bits: u32) -> Self {
        Self::with_val(bits, 1, 0)
    }

    pub fn i(bits: u32) -> Self {
        Self::with_val(bits, 0, 1)
    }

    pub fn from_real(re: HReal) -> Self {
        let im = Float::new(re.prec());
        HComplex { re, im }
    }

    pub fn from_f64(bits: u32, re: f64, im: f64) -> Self {
        Self::with_val(bits, re, im)
    }

    /// Parses decimal strings for both parts.
    pub fn parse(bits: u32, re: &str, im: &str) -> Option<Self> {
        let re = Float::parse(re).ok()?;
        let im = Float::parse(im).ok()?;
        Some(Self::with_val(bits, re, im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, bits: u32) -> Self {
        Self::with_val(bits, &self.re, &self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        HComplex::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> HReal {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> HReal {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> HReal {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn scale(&self, k: &HReal) -> Self {
        let p = self.prec().max(k.prec());
        HComplex::new(
            Float::with_val(p, &self.re * k),
            Float::with_val(p, &self.im * k),
        )
    }

    pub fn div_real(&self, k: &HReal) -> Self {
        let p = self.prec().max(k.prec());
        HComplex::new(
            Float::with_val(p, &self.re / k),
            Float::with_val(p, &self.im / k),
        )
    }

    pub fn add_real(&self, k: &HReal) -> Self {
        let p = self.prec().max(k.prec());
        HComplex::new(Float::with_val(p, &self.re + k), self.im.clone())
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        HComplex::new(
            Float::with_val(n.prec(), &self.re / &n),
            -Float::with_val(n.prec(), &self.im / &n),
        )
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = sin_cos(&self.im);
        HComplex::new(Float::with_val(p, &r * &c), r * s)
    }

    /// `exp(self) - 1` without cancellation near zero.
    pub fn exp_m1(&self) -> Self {
        let p = self.prec();
        let em1 = Float::with_val(p, self.re.exp_m1_ref());
        let (s, c) = sin_cos(&self.im);
        // cos y - 1 = -2 sin^2(y/2)
        let half = Float::with_val(p, &self.im / 2u32);
        let sh = Float::with_val(p, half.sin_ref());
        let cm1 = Float::with_val(p, sh.square_ref()) * -2i32;
        let re = Float::with_val(p, &em1 * &c) + cm1;
        let e = em1 + 1u32;
        HComplex::new(re, e * s)
    }

    /// Principal branch logarithm.
    pub fn ln(&self) -> Self {
        HComplex::new(self.abs().ln(), self.arg())
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = sin_cos(&self.re);
        let sh = Float::with_val(p, self.im.sinh_ref());
        let ch = Float::with_val(p, self.im.cosh_ref());
        HComplex::new(s * ch, c * sh)
    }

    pub fn sqrt(&self) -> Self {
        // sqrt(z) = sqrt((|z|+re)/2) + i sign(im) sqrt((|z|-re)/2)
        let p = self.prec();
        let r = self.abs();
        let a = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
        let mut b = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
        if self.im.is_sign_negative() {
            b = -b;
        }
        HComplex::new(a, b)
    }

    /// `base^self` for a positive real base.
    pub fn real_base_pow(base: &HReal, exponent: &HComplex) -> HComplex {
        let p = exponent.prec().max(base.prec());
        let lb = Float::with_val(p, base.ln_ref());
        exponent.scale(&lb).exp()
    }

    /// `self^exponent` on the principal branch.
    pub fn pow(&self, exponent: &HComplex) -> HComplex {
        (exponent * &self.ln()).exp()
    }

    pub fn powi(&self, n: u32) -> HComplex {
        let mut acc = HComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Scientific-notation rendering of both parts with `digits` significant
    /// digits.
    pub fn to_sci(&self, digits: usize) -> (String, String) {
        (sci(&self.re, digits), sci(&self.im, digits))
    }
}

pub(crate) fn sin_cos(x: &Float) -> (Float, Float) {
    let p = x.prec();
    let mut s = Float::new(p);
    let mut c = Float::new(p);
    (&mut s, &mut c).assign(x.sin_cos_ref());
    (s, c)
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

pub fn ln2(bits: u32) -> Float {
    Float::with_val(bits, Constant::Log2)
}

pub fn euler_gamma(bits: u32) -> Float {
    Float::with_val(bits, Constant::Euler)
}

/// `x` in scientific notation with `digits` significant digits; fixed format
/// independent of locale.
pub fn sci(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return format!("{:.*e}", digits.saturating_sub(1), 0.0f64);
    }
    // rug counts significant digits rather than digits after the point
    format!("{:.*e}", digits.max(1), x)
}

/// `10^e` at the given precision.
pub fn pow10(bits: u32, e: i32) -> Float {
    Float::with_val(bits, 10).pow(e)
}

impl fmt::Display for HComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(17);
        let (re, im) = self.to_sci(d);
        if im.starts_with('-') {
            write!(f, "{re}{im}i")
        } else {
            write!(f, "{re}+{im}i")
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<HComplex> for HComplex {
            type Output = HComplex;
            fn $m(self, rhs: HComplex) -> HComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&HComplex> for HComplex {
            type Output = HComplex;
            fn $m(self, rhs: &HComplex) -> HComplex {
                (&self).$m(rhs)
            }
        }
        impl $tr<HComplex> for &HComplex {
            type Output = HComplex;
            fn $m(self, rhs: HComplex) -> HComplex {
                self.$m(&rhs)
            }
        }
    };
}

impl Add<&HComplex> for &HComplex {
    type Output = HComplex;
    fn add(self, rhs: &HComplex) -> HComplex {
        let p = self.prec().max(rhs.prec());
        HComplex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl Sub<&HComplex> for &HComplex {
    type Output = HComplex;
    fn sub(self, rhs: &HComplex) -> HComplex {
        let p = self.prec().max(rhs.prec());
        HComplex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl Mul<&HComplex> for &HComplex {
    type Output = HComplex;
    fn mul(self, rhs: &HComplex) -> HComplex {
        let p = self.prec().max(rhs.prec());
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        HComplex::new(ac - bd, ad + bc)
    }
}

impl Div<&HComplex> for &HComplex {
    type Output = HComplex;
    fn div(self, rhs: &HComplex) -> HComplex {
        if rhs.is_real() {
            return self.div_real(&rhs.re);
        }
        let p = self.prec().max(rhs.prec());
        let n = Float::with_val(p, rhs.norm_sqr());
        let ac = Float::with_val(p, &self.re * &rhs.re);
        let bd = Float::with_val(p, &self.im * &rhs.im);
        let bc = Float::with_val(p, &self.im * &rhs.re);
        let ad = Float::with_val(p, &self.re * &rhs.im);
        HComplex::new((ac + bd) / &n, (bc - ad) / n)
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for HComplex {
    type Output = HComplex;
    fn neg(self) -> HComplex {
        HComplex::new(-self.re, -self.im)
    }
}

impl Neg for &HComplex {
    type Output = HComplex;
    fn neg(self) -> HComplex {
        -self.clone()
    }
}

impl AddAssign<&HComplex> for HComplex {
    fn add_assign(&mut self, rhs: &HComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl AddAssign<HComplex> for HComplex {
    fn add_assign(&mut self, rhs: HComplex) {
        *self += &rhs;
    }
}

impl SubAssign<&HComplex> for HComplex {
    fn sub_assign(&mut self, rhs: &HComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl SubAssign<HComplex> for HComplex {
    fn sub_assign(&mut self, rhs: HComplex) {
        *self -= &rhs;
    }
}

impl MulAssign<&HComplex> for HComplex {
    fn mul_assign(&mut self, rhs: &HComplex) {
        *self = &*self * rhs;
    }
}
