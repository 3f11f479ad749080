//! Arbitrary-precision scalars and the special functions built on them.

mod bernoulli;
mod complex;
mod gamma;
mod precision;
mod zeta;

pub use bernoulli::{bernoulli_even, bernoulli_over_factorial};
pub use complex::{euler_gamma, ln2, pi, pow10, sci, HComplex, HReal};
pub use gamma::{eval_beta, eval_gamma, GammaEngine};
pub use precision::{digits_to_bits, required_guard, PrecisionContext, MIN_TARGET_DIGITS};
pub use zeta::{
    eval_eta_factor, eval_log_zeta_deriv, eval_zeta, one_minus_two_pow, prime_series_tail_bound,
    zeta_log_deriv_prime_series, ZetaEngine,
};
