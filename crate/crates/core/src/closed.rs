//! Closed-form evaluators for the fixed-order counts.
//!
//! * [`derangements`] — fixed-point-free permutations `D_n`, equal to
//!   `K(2, n)`.
//! * [`touchard`] — menage numbers `U_n`, counting permutations discordant
//!   with both the identity and the unit cyclic shift (`V(2, n)`).
//! * [`k3_yamamoto`], [`k3_riordan`] — two independent routes to `K(3, n)`.
//! * [`k4_explicit`] — `K(4, n)` as a 15- or 17-variable alternating
//!   multi-sum, in the two published arrangements.
//!
//! Every evaluator transcribes its sum term by term, iterating the free
//! variables outermost-to-innermost in the order they are displayed, so
//! each can be audited directly and cross-checked against the others and
//! against [`crate::oracle`].

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::compositions::Compositions;
use crate::numeric::{
    binomial, exact_div, factorial, multinomial, negate_if_odd, BigCount,
};
use crate::{Error, Result};

/// Number of permutations of `[n]` without fixed points:
/// `D_n = sum_k (-1)^k n!/k!`.
pub fn derangements(n: u64) -> BigCount {
    let mut term = factorial(n); // n!/k! at k = 0
    let mut acc = BigCount::zero();
    for k in 0..=n {
        if k > 0 {
            term = exact_div(term, &BigCount::from(k)).expect("n!/k! divides stepwise");
        }
        acc += negate_if_odd(term.clone(), k);
    }
    acc
}

/// Menage numbers: `U_n = sum_k (-1)^k (2n/(2n-k)) C(2n-k, k) (n-k)!`.
///
/// The factor `2n C(2n-k, k) / (2n-k)` is an integer; it is computed by
/// exact division. `U_0 = 1` by the stated convention (the sum itself
/// degenerates at `n = 0`); `U_1 = -1` and `U_2 = 0` come straight out of
/// the formula, whose discordance reading only bites from `n = 3` on.
pub fn touchard(n: u64) -> BigCount {
    if n == 0 {
        return BigCount::one();
    }
    let mut acc = BigCount::zero();
    for k in 0..=n {
        let coeff = exact_div(
            BigCount::from(2 * n) * binomial(2 * n - k, k),
            &BigCount::from(2 * n - k),
        )
        .expect("2n C(2n-k, k) is divisible by 2n-k");
        acc += negate_if_odd(coeff * factorial(n - k), k);
    }
    acc
}

/// `K(3, n)` as `n! sum_{a+b+c=n} (-1)^b 2^c (a!/c!) C(3a+b+2, b)`.
///
/// Individual terms are rationals (the `a!/c!` factor); the sum of the
/// series times `n!` must come out an integer, which is asserted.
pub fn k3_yamamoto(n: u64) -> BigCount {
    let mut acc = BigRational::zero();
    for parts in Compositions::new(n, 3) {
        let (a, b, c) = (parts[0], parts[1], parts[2]);
        let num = BigCount::from(2u8).pow(c as u32) * factorial(a) * binomial(3 * a + b + 2, b);
        let term = BigRational::new(negate_if_odd(num, b), factorial(c));
        acc += term;
    }
    let total = acc * BigRational::from_integer(factorial(n));
    assert!(total.is_integer(), "three-row sum must aggregate to an integer");
    total.to_integer()
}

/// `K(3, n)` as `sum_{k<=n/2} C(n, k) D_k D_{n-k} U_{n-2k}` with `U_0 = 1`.
pub fn k3_riordan(n: u64) -> BigCount {
    let mut acc = BigCount::zero();
    for k in 0..=n / 2 {
        acc += binomial(n, k) * derangements(k) * derangements(n - k) * touchard(n - 2 * k);
    }
    acc
}

/// Which arrangement of the four-row sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K4Variant {
    /// The 17-variable arrangement (five `f` classes kept separate).
    Pranesachar,
    /// The 15-variable arrangement (`f` classes aggregated into one).
    Simplified,
}

/// Indices into the ten-variable block `rbar`, in display order.
const R1000: usize = 0;
const R1200: usize = 1;
const R2100: usize = 2;
const R0100: usize = 3;
const R0010: usize = 4;
const R3010: usize = 5;
const R0200: usize = 6;
const R3000: usize = 7;
const R2000: usize = 8;
const R0000: usize = 9;

struct K4Blocks {
    /// Pair-class totals, each shared by two `rbar` variables.
    q_pairs: [u64; 6],
    /// Singleton-class totals over the surviving variables.
    qbar: [u64; 4],
    sign_exponent: u64,
}

fn k4_blocks(f0: u64, rbar: &[u64; 10]) -> K4Blocks {
    let q_pairs = [
        rbar[R1000] + rbar[R1200],
        rbar[R2100] + rbar[R0100],
        rbar[R0010] + rbar[R3010],
        rbar[R0200] + rbar[R1200],
        rbar[R2000] + rbar[R2100],
        rbar[R3000] + rbar[R3010],
    ];
    let qbar = [
        rbar[R0000] + rbar[R3000] + rbar[R2000] + rbar[R0200],
        rbar[R0000] + rbar[R3000] + rbar[R0100] + rbar[R1000],
        rbar[R0000] + rbar[R2000] + rbar[R1000] + rbar[R0010],
        rbar[R0000] + rbar[R0100] + rbar[R0010] + rbar[R0200],
    ];
    let sign_exponent = f0
        + rbar[R1000]
        + rbar[R0100]
        + rbar[R0010]
        + rbar[R3000]
        + rbar[R2000]
        + rbar[R0200];
    K4Blocks {
        q_pairs,
        qbar,
        sign_exponent,
    }
}

/// The seven dependent column variables, eliminated through the pair and
/// singleton identities. `None` when the free choice leaves the remaining
/// singleton variable negative (the point is outside the domain).
fn k4_dependent_c(
    blocks: &K4Blocks,
    c1200: u64,
    c2100: u64,
    c3010: u64,
) -> Option<[u64; 7]> {
    let q = &blocks.q_pairs;
    let c1000 = q[0].checked_sub(c1200)?;
    let c0100 = q[1].checked_sub(c2100)?;
    let c0010 = q[2].checked_sub(c3010)?;
    let c0200 = q[3].checked_sub(c1200)?;
    let c2000 = q[4].checked_sub(c2100)?;
    let c3000 = q[5].checked_sub(c3010)?;
    let c0000 = blocks.qbar[0].checked_sub(c3000 + c2000 + c0200)?;
    Some([c1000, c0100, c0010, c0200, c2000, c3000, c0000])
}

/// `K(4, n)` by direct evaluation of the chosen multi-sum.
///
/// Both variants run over the composition
/// `f_0 + (f classes) + (ten rbar) = n` with the three free column
/// variables inside, differing only in whether the `f` classes stay
/// separate (with their class totals in the factorials) or are collapsed
/// into a single `f` with a binomial carrying the convolution.
pub fn k4_explicit(n: u64, variant: K4Variant) -> Result<BigCount> {
    if n < 4 {
        return Err(Error::BadDimensions { m: 4, n: n as usize });
    }
    let mut acc = BigCount::zero();
    match variant {
        K4Variant::Pranesachar => {
            for parts in Compositions::new(n, 15) {
                let f: [u64; 5] = parts[0..5].try_into().unwrap();
                let rbar: [u64; 10] = parts[5..15].try_into().unwrap();
                acc += k4_term_sum_pranesachar(n, &f, &rbar)?;
            }
        }
        K4Variant::Simplified => {
            for parts in Compositions::new(n, 12) {
                let f0 = parts[0];
                let f = parts[1];
                let rbar: [u64; 10] = parts[2..12].try_into().unwrap();
                acc += k4_term_sum_simplified(n, f0, f, &rbar)?;
            }
        }
    }
    Ok(acc)
}

fn k4_term_sum_pranesachar(n: u64, f: &[u64; 5], rbar: &[u64; 10]) -> Result<BigCount> {
    let blocks = k4_blocks(f[0], rbar);
    let q = &blocks.q_pairs;
    let mut acc = BigCount::zero();
    let mut all_parts: Vec<u64> = Vec::with_capacity(15);
    all_parts.extend_from_slice(f);
    all_parts.extend_from_slice(rbar);
    let base = BigCount::from(6u8).pow(f[0] as u32)
        * BigCount::from(2u8).pow((f[1] + f[2] + f[3] + f[4]) as u32)
        * multinomial(n, &all_parts)?
        * factorial(f[1] + blocks.qbar[0])
        * factorial(f[2] + blocks.qbar[1])
        * factorial(f[3] + blocks.qbar[2])
        * factorial(f[4] + blocks.qbar[3])
        * factorial(q[3])
        * factorial(q[4])
        * factorial(q[5]);
    for c1200 in 0..=q[0].min(q[3]) {
        for c2100 in 0..=q[1].min(q[4]) {
            for c3010 in 0..=q[2].min(q[5]) {
                let Some(dep) = k4_dependent_c(&blocks, c1200, c2100, c3010) else {
                    continue;
                };
                let [c1000, c0100, c0010, c0200, c2000, c3000, c0000] = dep;
                let num = base.clone()
                    * factorial(q[0])
                    * factorial(q[1])
                    * factorial(q[2]);
                let den = factorial(c0000)
                    * factorial(c3000)
                    * factorial(c2000)
                    * factorial(c0200)
                    * factorial(c1000)
                    * factorial(c1200)
                    * factorial(c2100)
                    * factorial(c0100)
                    * factorial(c0010)
                    * factorial(c3010);
                acc += negate_if_odd(exact_div(num, &den)?, blocks.sign_exponent);
            }
        }
    }
    Ok(acc)
}

fn k4_term_sum_simplified(n: u64, f0: u64, f: u64, rbar: &[u64; 10]) -> Result<BigCount> {
    let blocks = k4_blocks(f0, rbar);
    let q = &blocks.q_pairs;
    let mut acc = BigCount::zero();
    let mut all_parts: Vec<u64> = vec![f0, f];
    all_parts.extend_from_slice(rbar);
    let qbar_sum: u64 = blocks.qbar.iter().sum();
    let base = BigCount::from(6u8).pow(f0 as u32)
        * BigCount::from(2u8).pow(f as u32)
        * multinomial(n, &all_parts)?
        * blocks.qbar.iter().map(|&v| factorial(v)).product::<BigCount>()
        * q.iter().map(|&v| factorial(v)).product::<BigCount>()
        * binomial(f + qbar_sum + 3, f)
        * factorial(f); // multinomial already divided by f!; the collapsed
                        // convolution wants it only inside the binomial
    for c1200 in 0..=q[0].min(q[3]) {
        for c2100 in 0..=q[1].min(q[4]) {
            for c3010 in 0..=q[2].min(q[5]) {
                let Some(dep) = k4_dependent_c(&blocks, c1200, c2100, c3010) else {
                    continue;
                };
                let [c1000, c0100, c0010, c0200, c2000, c3000, c0000] = dep;
                let den = factorial(c0000)
                    * factorial(c3000)
                    * factorial(c2000)
                    * factorial(c0200)
                    * factorial(c1000)
                    * factorial(c1200)
                    * factorial(c2100)
                    * factorial(c0100)
                    * factorial(c0010)
                    * factorial(c3010);
                acc += negate_if_odd(exact_div(base.clone(), &den)?, blocks.sign_exponent);
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Board;
    use crate::perm::all_permutations;

    #[test]
    fn derangement_values() {
        let expect = [1u64, 0, 1, 2, 9, 44, 265, 1854, 14833, 133496];
        for (n, &d) in expect.iter().enumerate() {
            assert_eq!(derangements(n as u64), BigCount::from(d), "D_{n}");
        }
    }

    #[test]
    fn derangements_match_brute_force() {
        for n in 1..=7usize {
            let brute = all_permutations(n)
                .unwrap()
                .filter(|p| (1..=n).all(|i| p.apply(i) as usize != i))
                .count();
            assert_eq!(derangements(n as u64), BigCount::from(brute as u64));
        }
    }

    #[test]
    fn derangement_recurrence() {
        // D_n = (n-1)(D_{n-1} + D_{n-2}), a standard consistency oracle.
        for n in 2..=20u64 {
            assert_eq!(
                derangements(n),
                BigCount::from(n - 1) * (derangements(n - 1) + derangements(n - 2))
            );
        }
    }

    #[test]
    fn derangements_are_diagonal_misses() {
        for n in 1..=7u32 {
            let hits = Board::diagonal(n).hit_numbers(n).unwrap();
            assert_eq!(hits[0], derangements(n as u64));
        }
    }

    #[test]
    fn touchard_values() {
        assert_eq!(touchard(0), BigCount::from(1));
        assert_eq!(touchard(1), BigCount::from(-1));
        assert_eq!(touchard(2), BigCount::from(0));
        let expect = [1i64, 2, 13, 80, 579, 4738, 43387];
        for (i, &u) in expect.iter().enumerate() {
            assert_eq!(touchard(i as u64 + 3), BigCount::from(u), "U_{}", i + 3);
        }
    }

    #[test]
    fn three_row_formulas_agree_with_the_oracle() {
        // Values produced by the exhaustive oracle.
        let expect: [(u64, u64); 3] = [(3, 2), (4, 24), (5, 552)];
        for (n, k) in expect {
            assert_eq!(k3_yamamoto(n), BigCount::from(k), "yamamoto n={n}");
            assert_eq!(k3_riordan(n), BigCount::from(k), "riordan n={n}");
        }
        for n in 1..=8u64 {
            assert_eq!(k3_yamamoto(n), k3_riordan(n), "cross-formula n={n}");
        }
    }

    #[test]
    fn four_row_variants_agree_with_the_oracle() {
        // Values produced by the exhaustive oracle.
        let expect: [(u64, u64); 2] = [(4, 24), (5, 1344)];
        for (n, k) in expect {
            assert_eq!(
                k4_explicit(n, K4Variant::Pranesachar).unwrap(),
                BigCount::from(k),
                "pranesachar n={n}"
            );
            assert_eq!(
                k4_explicit(n, K4Variant::Simplified).unwrap(),
                BigCount::from(k),
                "simplified n={n}"
            );
        }
        assert!(k4_explicit(3, K4Variant::Simplified).is_err());
    }
}
