//! Segmented sieve of Eratosthenes.

use crate::error::{Error, Result};

/// Length of one sieve segment.
pub const SEGMENT_LEN: u64 = 1_000_000;

/// Largest sieve bound accepted by [`sieve_primes`].
pub const DEFAULT_SIEVE_BUDGET: u64 = 1 << 34;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeLimit {
    /// The first `n` primes.
    FirstN(u64),
    /// All primes `<= m`.
    UpTo(u64),
}

/// Ascending list of primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: PrimeLimit,
}

impl PrimeTable {
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn limit(&self) -> PrimeLimit {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn largest(&self) -> Option<u64> {
        self.primes.last().copied()
    }

    /// The `n`-th prime, 1-based.
    pub fn nth(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }
}

pub fn sieve_primes(limit: PrimeLimit) -> Result<PrimeTable> {
    sieve_primes_with_budget(limit, DEFAULT_SIEVE_BUDGET)
}

/// Like [`sieve_primes`], but refuses sieve bounds above `budget`.
pub fn sieve_primes_with_budget(limit: PrimeLimit, budget: u64) -> Result<PrimeTable> {
    let primes = match limit {
        PrimeLimit::UpTo(m) => {
            if m < 2 {
                return Err(Error::Domain(format!("UP_TO bound must be >= 2, got {m}")));
            }
            if m > budget {
                return Err(Error::Capacity { requested: m, limit: budget });
            }
            segmented(m, u64::MAX)
        }
        PrimeLimit::FirstN(n) => {
            if n == 0 {
                return Err(Error::Domain("FIRST_N count must be >= 1".into()));
            }
            let bound = nth_prime_upper_bound(n);
            if bound > budget {
                return Err(Error::Capacity { requested: bound, limit: budget });
            }
            segmented(bound, n)
        }
    };
    Ok(PrimeTable { primes, limit })
}

/// Rosser's bound `p_n < n (ln n + ln ln n)` for `n >= 6`.
fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

fn small_primes(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes `<= bound`, stopping once `max_count` have been found.
fn segmented(bound: u64, max_count: u64) -> Vec<u64> {
    let base = small_primes((bound as f64).sqrt() as u64 + 1);
    let mut out = Vec::new();
    let mut lo = 2u64;
    let mut mark = Vec::new();
    while lo <= bound {
        let hi = (lo + SEGMENT_LEN - 1).min(bound);
        mark.clear();
        mark.resize((hi - lo + 1) as usize, true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = (p * p).max(lo.div_ceil(p) * p);
            while m <= hi {
                mark[(m - lo) as usize] = false;
                m += p;
            }
        }
        for (i, &is_prime) in mark.iter().enumerate() {
            if is_prime {
                out.push(lo + i as u64);
                if out.len() as u64 == max_count {
                    return out;
                }
            }
        }
        lo = hi + 1;
    }
    out
}

/// Trial division; for checking single small candidates.
pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_primes() {
        let t = sieve_primes(PrimeLimit::FirstN(10)).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(t.nth(10), Some(29));
        let t = sieve_primes(PrimeLimit::FirstN(100)).unwrap();
        assert_eq!(t.nth(50), Some(229));
        assert_eq!(t.nth(100), Some(541));
        assert_eq!(sieve_primes(PrimeLimit::UpTo(2)).unwrap().primes(), &[2]);
        assert_eq!(sieve_primes(PrimeLimit::FirstN(1)).unwrap().primes(), &[2]);
    }

    #[test]
    fn counts_and_is_prime() {
        for n in [1u64, 5, 6, 7, 5000, 100_000] {
            assert_eq!(sieve_primes(PrimeLimit::FirstN(n)).unwrap().len() as u64, n);
        }
        let t = sieve_primes(PrimeLimit::UpTo(10_000)).unwrap();
        let expect: Vec<u64> = (2..=10_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(t.primes(), &expect[..]);
        assert_eq!(sieve_primes(PrimeLimit::FirstN(5000)).unwrap().largest(), Some(48_611));
    }

    #[test]
    fn crosses_segments() {
        let t = sieve_primes(PrimeLimit::UpTo(2_500_000)).unwrap();
        assert_eq!(t.len(), 183_072);
        assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
        for &p in &t.primes()[t.len() - 50..] {
            assert!(is_prime(p));
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(sieve_primes(PrimeLimit::UpTo(1)), Err(Error::Domain(_))));
        assert!(matches!(sieve_primes(PrimeLimit::FirstN(0)), Err(Error::Domain(_))));
        assert!(matches!(
            sieve_primes_with_budget(PrimeLimit::UpTo(1000), 100),
            Err(Error::Capacity { .. })
        ));
    }
}
