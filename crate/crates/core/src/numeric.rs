//! Arbitrary-precision counts and the factorial family.
//!
//! Every count in this crate, and every intermediate term of every
//! alternating sum, is a [`BigCount`]. The sums evaluated here contain
//! terms vastly larger than their totals, so fixed-width arithmetic would
//! corrupt results silently; everything is exact from the start.


use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// An exact, signed, arbitrary-precision count.
pub type BigCount = BigInt;

/// `n!` computed by repeated multiplication.
pub fn factorial(n: u64) -> BigCount {
    let mut acc = BigCount::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// The falling factorial `x (x-1) ... (x-k+1)`; `1` when `k = 0`.
pub fn falling(x: i64, k: u64) -> BigCount {
    let mut acc = BigCount::one();
    for i in 0..k as i64 {
        acc *= x - i;
    }
    acc
}

/// The rising factorial `x (x+1) ... (x+k-1)`; `1` when `k = 0`.
pub fn rising(x: i64, k: u64) -> BigCount {
    let mut acc = BigCount::one();
    for i in 0..k as i64 {
        acc *= x + i;
    }
    acc
}

/// The signed factorial `rising(-q, q) = (-1)^q q!`.
///
/// This realizes the "negative argument" factorial that appears in the
/// signless forms of the alternating sums of [`crate::general`].
pub fn neg_bang(q: u64) -> BigCount {
    rising(-(q as i64), q)
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigCount::one();
    for i in 0..k {
        acc = exact_div(acc * (n - i), &BigCount::from(i + 1))
            .expect("binomial products divide stepwise");
    }
    acc
}

/// Multinomial coefficient `n! / (x_1! ... x_s! (n - sum x_i)!)`.
///
/// The last part is implicit. Rejects parts summing past `n`.
pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigCount> {
    let parts_sum: u64 = parts.iter().sum();
    if parts_sum > n {
        return Err(Error::PartsExceedTotal { total: n, parts_sum });
    }
    let mut acc = BigCount::one();
    let mut remaining = n;
    for &part in parts {
        acc *= binomial(remaining, part);
        remaining -= part;
    }
    Ok(acc)
}

/// Exact division; errors if `den` does not divide `num`.
pub fn exact_div(num: BigCount, den: &BigCount) -> Result<BigCount> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NonIntegerAggregate)
    }
}

/// Parity helper: `(-1)^k` applied to a count.
pub fn negate_if_odd(value: BigCount, k: u64) -> BigCount {
    if k % 2 == 1 {
        -value
    } else {
        value
    }
}

/// `k!` as a `u128`, for hot loops over small arguments.
///
/// Panics if `k!` overflows `u128` (first at `k = 35`); callers guard the
/// argument range through their work budgets.
pub fn factorial_u128(k: u64) -> u128 {
    assert!(k < 35, "factorial_u128 argument too large");
    let mut acc: u128 = 1;
    for i in 2..=k as u128 {
        acc *= i;
    }
    acc
}

/// Decimal rendering used by every output path.
pub fn to_decimal(value: &BigCount) -> alloc::string::String {
    use alloc::string::ToString;
    value.to_string()
}

/// Sum of an iterator of counts.
pub fn sum<I: IntoIterator<Item = BigCount>>(iter: I) -> BigCount {
    iter.into_iter().fold(BigCount::zero(), |a, b| a + b)
}

/// `|value|` convenience re-export used by tests.
pub fn abs(value: &BigCount) -> BigCount {
    value.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn factorial_base_cases() {
        assert_eq!(factorial(0), BigCount::from(1));
        assert_eq!(factorial(1), BigCount::from(1));
        assert_eq!(factorial(12), BigCount::from(479_001_600u64));
    }

    #[test]
    fn falling_examples() {
        assert_eq!(falling(5, 0), BigCount::from(1));
        assert_eq!(falling(5, 5), BigCount::from(120));
        assert_eq!(falling(-2, 3), BigCount::from(-24));
    }

    #[test]
    fn rising_examples() {
        assert_eq!(rising(3, 2), BigCount::from(12));
        assert_eq!(rising(-4, 4), BigCount::from(24));
        for n in 0..10u64 {
            assert_eq!(rising(1, n), factorial(n));
        }
    }

    #[test]
    fn neg_bang_examples() {
        assert_eq!(neg_bang(0), BigCount::from(1));
        assert_eq!(neg_bang(1), BigCount::from(-1));
        assert_eq!(neg_bang(3), BigCount::from(-6));
    }

    #[test]
    fn neg_bang_is_signed_factorial() {
        for q in 0..=30u64 {
            assert_eq!(neg_bang(q), negate_if_odd(factorial(q), q));
        }
    }

    #[test]
    fn factorial_family_agrees() {
        for n in 0..=20u64 {
            assert_eq!(falling(n as i64, n), factorial(n));
            assert_eq!(rising(1, n), factorial(n));
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(4, &[4]).unwrap(), BigCount::from(1));
        assert_eq!(multinomial(4, &[2, 2]).unwrap(), BigCount::from(6));
        assert_eq!(multinomial(3, &[1, 1, 1]).unwrap(), BigCount::from(6));
        assert_eq!(
            multinomial(3, &[2, 2]),
            Err(Error::PartsExceedTotal { total: 3, parts_sum: 4 })
        );
    }

    #[test]
    fn multinomial_product_identity() {
        // multinomial(n, parts) * prod parts! * (n - sum)! = n!
        let cases: Vec<(u64, Vec<u64>)> =
            vec![(7, vec![2, 3]), (9, vec![1, 1, 4]), (5, vec![]), (6, vec![6])];
        for (n, parts) in cases {
            let sum: u64 = parts.iter().sum();
            let mut product = multinomial(n, &parts).unwrap();
            for &p in &parts {
                product *= factorial(p);
            }
            product *= factorial(n - sum);
            assert_eq!(product, factorial(n));
        }
    }

    #[test]
    fn factorial_u128_matches() {
        for k in 0..=20u64 {
            assert_eq!(BigCount::from(factorial_u128(k)), factorial(k));
        }
    }

    #[test]
    fn exact_div_rejects_remainders() {
        assert_eq!(
            exact_div(BigCount::from(10), &BigCount::from(5)).unwrap(),
            BigCount::from(2)
        );
        assert!(exact_div(BigCount::from(10), &BigCount::from(4)).is_err());
    }
}
