use rug::Float;
use serde::{Deserialize, Serialize};

use super::complex::pow10;
use crate::error::{Error, Result};

/// Smallest accepted `target_digits`.
pub const MIN_TARGET_DIGITS: u32 = 10;

/// Decimal digits of accuracy requested from an evaluation, plus the guard
/// digits spent on intermediate cancellation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
}

/// Guard digits an order-`k` alternating binomial transform needs.
///
/// The largest binomial weight `C(k, k/2)` is about `2^k`, i.e. `0.302 k`
/// decimal digits are cancelled away.
pub fn required_guard(order: u64) -> u32 {
    (0.302 * order as f64).ceil() as u32 + 10
}

pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

impl PrecisionContext {
    pub fn new(target_digits: u32, guard_digits: u32) -> Result<Self> {
        if target_digits < MIN_TARGET_DIGITS {
            return Err(Error::InvalidContext(format!(
                "target_digits = {target_digits} is below the minimum {MIN_TARGET_DIGITS}"
            )));
        }
        Ok(PrecisionContext {
            target_digits,
            guard_digits,
        })
    }

    /// Context whose guard digits satisfy the policy for binomial
    /// transforms up to order `max_order`.
    pub fn for_order(target_digits: u32, max_order: u64) -> Result<Self> {
        Self::new(target_digits, required_guard(max_order))
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    /// Binary precision matching `working_digits`.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    pub fn with_guard(self, guard_digits: u32) -> Self {
        PrecisionContext {
            guard_digits,
            ..self
        }
    }

    pub fn with_extra_guard(self, extra: u32) -> Self {
        self.with_guard(self.guard_digits + extra)
    }

    pub fn doubled_guard(self) -> Self {
        self.with_guard(self.guard_digits * 2)
    }

    /// Same target, twice the working digits.
    pub fn doubled_working(self) -> Self {
        self.with_guard(self.guard_digits + self.working_digits())
    }

    /// Fails with [`Error::Precision`] unless the guard digits cover an
    /// order-`order` binomial transform.
    pub fn require_order(&self, order: u64) -> Result<()> {
        let need = required_guard(order);
        if self.guard_digits < need {
            return Err(Error::Precision {
                order,
                have: self.guard_digits,
                need,
            });
        }
        Ok(())
    }

    /// `10^-target_digits` at working precision.
    pub fn tolerance(&self) -> Float {
        pow10(self.bits(), -(self.target_digits as i32))
    }

    /// `10^-working_digits` at working precision.
    pub fn working_eps(&self) -> Float {
        pow10(self.bits(), -(self.working_digits() as i32))
    }
}
