//! Bernoulli numbers through the tangent-number recurrence (integer only).

use rug::{Float, Integer, Rational};

/// Tangent numbers `T_1, T_3, ..., T_{2m-1}` (returned as `t[j-1]`).
fn tangent_numbers(m: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); m];
    if m == 0 {
        return t;
    }
    t[0] = Integer::from(1);
    for k in 1..m {
        t[k] = Integer::from(&t[k - 1] * k as u64);
    }
    for k in 1..m {
        for j in k..m {
            let a = Integer::from(&t[j - 1] * (j - k) as u64);
            let b = Integer::from(&t[j] * (j - k + 2) as u64);
            t[j] = a + b;
        }
    }
    t
}

/// Exact `B_2, B_4, ..., B_{2m}`.
pub fn bernoulli_even(m: usize) -> Vec<Rational> {
    tangent_numbers(m)
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            let j = (i + 1) as u32;
            // B_{2j} = (-1)^{j-1} 2j T_j / (4^j (4^j - 1))
            let four_j = Integer::from(1) << (2 * j);
            let den = Integer::from(&four_j - 1u32) * four_j;
            let mut num = t * (2 * j);
            if j.is_multiple_of(2) {
                num = -num;
            }
            Rational::from((num, den))
        })
        .collect()
}

/// `B_{2j} / (2j)!` for `j = 1..=m` as floats of precision `bits`.
pub fn bernoulli_over_factorial(m: usize, bits: u32) -> Vec<Float> {
    let mut fact = Integer::from(1);
    bernoulli_even(m)
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            let j = (i + 1) as u32;
            fact *= (2 * j - 1) * (2 * j);
            Float::with_val(bits, b / &fact)
        })
        .collect()
}
