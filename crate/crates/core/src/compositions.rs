//! Enumeration of weak compositions `(c_1, ..., c_k)` of `n` into `k`
//! nonnegative parts, in ascending lexicographic order.
//!
//! The multi-sum evaluators iterate these spaces as their outer loop, and
//! the parallel driver splits them by rank, so the order here is part of
//! the determinism contract: identical ranks always name identical
//! compositions.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::numeric::{binomial, BigCount};

/// Number of weak compositions of `n` into `k` parts: `C(n + k - 1, k - 1)`.
pub fn count_compositions(n: u64, k: usize) -> BigCount {
    if k == 0 {
        return BigCount::from(u8::from(n == 0));
    }
    binomial(n + k as u64 - 1, k as u64 - 1)
}

/// As [`count_compositions`] but `None` when the count overflows `u64`.
pub fn count_compositions_u64(n: u64, k: usize) -> Option<u64> {
    count_compositions(n, k).to_u64()
}

/// First composition in lexicographic order: `(0, ..., 0, n)`.
pub fn first_composition(n: u64, k: usize) -> Vec<u64> {
    let mut c = vec![0; k];
    if k > 0 {
        c[k - 1] = n;
    }
    c
}

/// Advances `c` to its lexicographic successor in place.
///
/// Returns `false` when `c` was the last composition `(n, 0, ..., 0)`.
pub fn next_composition(c: &mut [u64]) -> bool {
    let k = c.len();
    // Move one unit leftwards from the rightmost nonzero part; everything
    // it was carrying past that point is flushed to the last position.
    let j = match c.iter().rposition(|&v| v > 0) {
        Some(j) => j,
        None => return false, // n = 0: single empty composition
    };
    if j == 0 {
        return false;
    }
    let carry = c[j] - 1;
    c[j] = 0;
    c[j - 1] += 1;
    c[k - 1] += carry;
    true
}

/// The composition of `n` into `k` parts with the given lexicographic rank.
///
/// Panics if `rank` is out of range; ranks come from
/// [`count_compositions_u64`], which callers bound through their budgets.
pub fn composition_at_rank(n: u64, k: usize, rank: u64) -> Vec<u64> {
    let mut c = vec![0u64; k];
    let mut rank = rank as u128;
    let mut remaining = n;
    for i in 0..k {
        if i == k - 1 {
            c[i] = remaining;
            break;
        }
        // Compositions with c_i = v form a contiguous ascending block.
        for v in 0..=remaining {
            let block = count_compositions(remaining - v, k - i - 1)
                .to_u128()
                .expect("block size within budgeted range");
            if rank < block {
                c[i] = v;
                remaining -= v;
                break;
            }
            rank -= block;
            assert!(v < remaining, "composition rank out of range");
        }
    }
    c
}

/// Iterator over all weak compositions of `n` into `k` parts, ascending.
pub struct Compositions {
    current: Option<Vec<u64>>,
}

impl Compositions {
    pub fn new(n: u64, k: usize) -> Self {
        let current = if k == 0 && n > 0 {
            None
        } else {
            Some(first_composition(n, k))
        };
        Compositions { current }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let mut succ = out.clone();
        self.current = next_composition(&mut succ).then_some(succ);
        Some(out)
    }
}
