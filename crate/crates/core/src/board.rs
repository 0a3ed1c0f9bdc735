//! Boards, rook numbers, and hit numbers.
//!
//! A board is a finite set of `(row, column)` cells. `r_k` counts the ways
//! to place `k` mutually non-attacking rooks on it, and the hit numbers
//! `N_s` classify the permutations of `[n]` by how many cells of their
//! graph land on the board:
//!
//! `N_s = sum_{k=s}^{n} (-1)^{k-s} C(k, s) (n-k)! r_k`
//!
//! which is the inclusion-exclusion backbone of every formula in
//! [`crate::closed`] and [`crate::general`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::numeric::{binomial, factorial, negate_if_odd, BigCount};
use crate::perm::Permutation;
use crate::{Error, Result};

/// A finite set of cells in the positive quadrant.
///
/// The empty board is admitted as the identity for placement counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Board {
    cells: BTreeSet<(u32, u32)>,
}

impl Board {
    pub fn new<I: IntoIterator<Item = (u32, u32)>>(cells: I) -> Self {
        Board {
            cells: cells.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Board::default()
    }

    /// The diagonal `{(i, i) : i in [n]}`.
    pub fn diagonal(n: u32) -> Self {
        Board::new((1..=n).map(|i| (i, i)))
    }

    /// The graph of a permutation: cells `(i, sigma(i))`.
    pub fn from_permutation(p: &Permutation) -> Self {
        Board::new((1..=p.degree()).map(|i| (i as u32, p.apply(i) as u32)))
    }

    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Rook numbers `r_0, ..., r_K` where `K` is the largest placeable
    /// count. `r_0 = 1` always.
    pub fn rook_numbers(&self) -> Vec<BigCount> {
        let mut memo = BTreeMap::new();
        let cells: Vec<(u32, u32)> = self.cells().collect();
        rook_numbers_rec(&cells, &mut memo)
    }

    /// Hit numbers `N_0, ..., N_n` over permutations of `[n]`.
    ///
    /// Rejects boards with cells outside `[n] x [n]`.
    pub fn hit_numbers(&self, n: u32) -> Result<Vec<BigCount>> {
        for (r, c) in self.cells() {
            if r == 0 || c == 0 || r > n || c > n {
                return Err(Error::CellOutOfRange { row: r, col: c, n });
            }
        }
        let rook = self.rook_numbers();
        let r = |k: usize| rook.get(k).cloned().unwrap_or_else(BigCount::zero);
        let n = n as usize;
        let mut out = Vec::with_capacity(n + 1);
        for s in 0..=n {
            let mut acc = BigCount::zero();
            for k in s..=n {
                let term = binomial(k as u64, s as u64)
                    * factorial((n - k) as u64)
                    * r(k);
                acc += negate_if_odd(term, (k - s) as u64);
            }
            out.push(acc);
        }
        Ok(out)
    }
}

/// Order-preserving relabel of rows and columns so congruent sub-boards
/// share a memo entry.
fn canonical(cells: &[(u32, u32)]) -> Vec<(u8, u8)> {
    let rows: BTreeSet<u32> = cells.iter().map(|&(r, _)| r).collect();
    let cols: BTreeSet<u32> = cells.iter().map(|&(_, c)| c).collect();
    let row_index: BTreeMap<u32, u8> = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| (r, i as u8))
        .collect();
    let col_index: BTreeMap<u32, u8> = cols
        .into_iter()
        .enumerate()
        .map(|(i, c)| (c, i as u8))
        .collect();
    let mut out: Vec<(u8, u8)> = cells
        .iter()
        .map(|&(r, c)| (row_index[&r], col_index[&c]))
        .collect();
    out.sort_unstable();
    out
}

fn rook_numbers_rec(
    cells: &[(u32, u32)],
    memo: &mut BTreeMap<Vec<(u8, u8)>, Vec<BigCount>>,
) -> Vec<BigCount> {
    if cells.is_empty() {
        return vec![BigCount::one()];
    }
    let key = canonical(cells);
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    // Split on one cell: placements avoiding it, plus placements using it
    // (which exclude its whole row and column).
    let (row, col) = cells[0];
    let without: Vec<(u32, u32)> = cells[1..].to_vec();
    let reduced: Vec<(u32, u32)> = cells[1..]
        .iter()
        .copied()
        .filter(|&(r, c)| r != row && c != col)
        .collect();
    let skip = rook_numbers_rec(&without, memo);
    let with = rook_numbers_rec(&reduced, memo);
    let len = skip.len().max(with.len() + 1);
    let mut out = vec![BigCount::zero(); len];
    for (k, v) in skip.into_iter().enumerate() {
        out[k] += v;
    }
    for (k, v) in with.into_iter().enumerate() {
        out[k + 1] += v;
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    memo.insert(key, out.clone());
    out
}
