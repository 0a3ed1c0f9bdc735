//! Ground truth by exhaustive backtracking.
//!
//! Everything else in this crate is an algebraic shortcut; the oracle is
//! the arbiter. It counts reduced Latin rectangles, Latin squares, and
//! discordant permutations by depth-first search with per-column symbol
//! bitsets, never materializing the objects it counts (memory stays
//! `O(m n)`). A node budget makes refusal predictable instead of letting a
//! careless call run for hours.

use alloc::vec;
use alloc::vec::Vec;

use crate::numeric::{factorial, BigCount};
use crate::{Error, Result};

/// Work limits for the exhaustive searches.
#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Maximum number of search-tree nodes visited before aborting.
    /// The default comfortably covers rectangles with `m <= 4, n <= 7`,
    /// squares up to order 5, and discordance counts up to `n = 10`.
    pub max_nodes: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_nodes: 4_000_000_000,
        }
    }
}

struct Search {
    nodes: u64,
    max_nodes: u64,
}

impl Search {
    fn new(opts: &OracleOptions) -> Self {
        Search {
            nodes: 0,
            max_nodes: opts.max_nodes,
        }
    }

    #[inline]
    fn visit(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            Err(Error::BudgetExceeded {
                estimate: self.nodes as u128,
                budget: self.max_nodes,
                what: "search nodes (count is a lower bound)",
            })
        } else {
            Ok(())
        }
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 || m > n || n > 16 {
        return Err(Error::BadDimensions { m, n });
    }
    Ok(())
}

/// Counts reduced `m x n` Latin rectangles (first row fixed to `1 2 .. n`)
/// by extending row by row, each row filled left to right over symbols
/// unused in its row and column.
pub fn brute_reduced_rectangles(m: usize, n: usize, opts: &OracleOptions) -> Result<BigCount> {
    check_dims(m, n)?;
    let mut col_used: Vec<u32> = (0..n).map(|c| 1u32 << c).collect();
    let mut search = Search::new(opts);
    let mut count = 0u64;
    if m == 1 {
        return Ok(BigCount::from(1u8));
    }
    fill_rows(2, m, n, &mut col_used, &mut search, &mut count)?;
    Ok(BigCount::from(count))
}

/// First reduced rectangle in row-major lexicographic order, as rows of
/// 1-based symbols. `None` only if none exists (never for `m <= n`).
pub fn first_reduced_rectangle(
    m: usize,
    n: usize,
    opts: &OracleOptions,
) -> Result<Option<Vec<Vec<u8>>>> {
    check_dims(m, n)?;
    let first_row: Vec<u8> = (1..=n as u8).collect();
    if m == 1 {
        return Ok(Some(vec![first_row]));
    }
    let mut col_used: Vec<u32> = (0..n).map(|c| 1u32 << c).collect();
    let mut search = Search::new(opts);
    let mut rows: Vec<Vec<u8>> = vec![vec![0u8; n]; m - 1];
    let found = first_fill(2, m, n, &mut col_used, &mut search, &mut rows)?;
    Ok(found.then(|| {
        let mut out = vec![first_row];
        out.extend(rows);
        out
    }))
}

/// DFS over rows `row..=m`, bumping `count` at each completed rectangle.
fn fill_rows(
    row: usize,
    m: usize,
    n: usize,
    col_used: &mut Vec<u32>,
    search: &mut Search,
    count: &mut u64,
) -> Result<()> {
    let full = (1u32 << n) - 1;
    fn cell(
        col: usize,
        row: usize,
        m: usize,
        n: usize,
        row_used: u32,
        full: u32,
        col_used: &mut Vec<u32>,
        search: &mut Search,
        count: &mut u64,
    ) -> Result<()> {
        search.visit()?;
        if col == n {
            if row == m {
                *count += 1;
                return Ok(());
            }
            return cell(0, row + 1, m, n, 0, full, col_used, search, count);
        }
        let mut avail = full & !(row_used | col_used[col]);
        while avail != 0 {
            let bit = avail & avail.wrapping_neg();
            avail &= avail - 1;
            col_used[col] |= bit;
            cell(col + 1, row, m, n, row_used | bit, full, col_used, search, count)?;
            col_used[col] &= !bit;
        }
        Ok(())
    }
    cell(0, row, m, n, 0, full, col_used, search, count)
}

/// Lexicographically-first completion; symbols tried in ascending order, so
/// the first full rectangle found is the witness.
fn first_fill(
    row: usize,
    m: usize,
    n: usize,
    col_used: &mut Vec<u32>,
    search: &mut Search,
    rows: &mut [Vec<u8>],
) -> Result<bool> {
    let full = (1u32 << n) - 1;
    fn cell(
        col: usize,
        row: usize,
        m: usize,
        n: usize,
        row_used: u32,
        full: u32,
        col_used: &mut Vec<u32>,
        search: &mut Search,
        rows: &mut [Vec<u8>],
    ) -> Result<bool> {
        search.visit()?;
        if col == n {
            if row == m {
                return Ok(true);
            }
            return cell(0, row + 1, m, n, 0, full, col_used, search, rows);
        }
        let mut avail = full & !(row_used | col_used[col]);
        while avail != 0 {
            let bit = avail & avail.wrapping_neg();
            avail &= avail - 1;
            rows[row - 2][col] = bit.trailing_zeros() as u8 + 1;
            col_used[col] |= bit;
            if cell(col + 1, row, m, n, row_used | bit, full, col_used, search, rows)? {
                return Ok(true);
            }
            col_used[col] &= !bit;
        }
        Ok(false)
    }
    cell(0, row, m, n, 0, full, col_used, search, rows)
}

/// Counts `n x n` Latin squares. Computed as `n! * K(n, n)`, and for
/// `n <= 4` additionally by unrestricted enumeration (no fixed first row);
/// the two counts must agree.
pub fn brute_latin_squares(n: usize, opts: &OracleOptions) -> Result<BigCount> {
    check_dims(n, n)?;
    let via_reduced = factorial(n as u64) * brute_reduced_rectangles(n, n, opts)?;
    if n <= 4 {
        let mut col_used: Vec<u32> = vec![0; n];
        let mut search = Search::new(opts);
        let mut count = 0u64;
        fill_rows(1, n, n, &mut col_used, &mut search, &mut count)?;
        assert_eq!(
            via_reduced,
            BigCount::from(count),
            "reduced-scaled and unrestricted square counts must agree"
        );
    }
    Ok(via_reduced)
}

/// Counts permutations of `[n]` with `sigma(i) - i` never congruent to
/// `0, 1, ..., m-1` modulo `n` — the rows admissible below the `m` cyclic
/// shifts of the identity.
pub fn brute_very_reduced(m: usize, n: usize, opts: &OracleOptions) -> Result<BigCount> {
    if m == 0 || m >= n || n > 16 {
        return Err(Error::BadDimensions { m, n });
    }
    // allowed[i]: symbol bitset for 0-based position i.
    let allowed: Vec<u32> = (0..n)
        .map(|i| {
            let mut mask = 0u32;
            for s in 0..n {
                if (s + n - i) % n >= m {
                    mask |= 1 << s;
                }
            }
            mask
        })
        .collect();
    let mut search = Search::new(opts);
    let mut count = 0u64;
    fn place(
        i: usize,
        n: usize,
        used: u32,
        allowed: &[u32],
        search: &mut Search,
        count: &mut u64,
    ) -> Result<()> {
        search.visit()?;
        if i == n {
            *count += 1;
            return Ok(());
        }
        let mut avail = allowed[i] & !used;
        while avail != 0 {
            let bit = avail & avail.wrapping_neg();
            avail &= avail - 1;
            place(i + 1, n, used | bit, allowed, search, count)?;
        }
        Ok(())
    }
    place(0, n, 0, &allowed, &mut search, &mut count)?;
    Ok(BigCount::from(count))
}
