//! Prime and zeta-zero tables.

mod primes;
mod zeros;

pub use primes::{
    is_prime, sieve_primes, sieve_primes_with_budget, PrimeLimit, PrimeTable, DEFAULT_SIEVE_BUDGET,
    SEGMENT_LEN,
};
pub use zeros::{bundled_zeros, load_zeros, parse_zeros, verify_zero, ZeroCheck, ZeroTable};
