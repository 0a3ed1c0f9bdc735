//! Permutations of `[m]` in the coordinate systems the counting formulas
//! use: one-line word, standard cycle representation, inversion table, and
//! covering table.
//!
//! The standard representation writes each cycle with its largest element
//! first and lists cycles in increasing order of those leaders, so every
//! cycle head is a left-to-right maximum of the concatenated word. Both
//! tables are read off that representation:
//!
//! * inversion table: `b_i` = how many elements larger than `i` stand to
//!   the left of `i`;
//! * covering table: `k_i = m + 1 - t` where `t` is the nearest larger
//!   element to the left of `i` (`0` if none, i.e. `i` is a cycle head).
//!
//! Both tables range over the box `0 <= x_i <= m - i` and both maps are
//! bijections onto it; the covering table is the one that transports
//! permutations onto the covering tuples of [`crate::tuples`].

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// A permutation of `{1, ..., m}` in one-line (word) form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    word: Vec<u8>,
}

/// Disjoint cycles in standard representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleForm {
    cycles: Vec<Vec<u8>>,
}

/// The inversion table `(b_1, ..., b_m)` of a permutation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InversionTable {
    entries: Vec<u8>,
}

/// The covering table `(k_1, ..., k_m)` of a permutation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoveringTable {
    entries: Vec<u8>,
}

fn check_box(entries: &[u8]) -> Result<()> {
    let m = entries.len();
    for (idx, &v) in entries.iter().enumerate() {
        let bound = (m - idx - 1) as u8;
        if v > bound {
            return Err(Error::InvalidTableEntry {
                position: idx + 1,
                value: v,
                bound,
            });
        }
    }
    Ok(())
}

impl Permutation {
    /// Builds a permutation from its word `a_1 .. a_m` (`a_i = sigma(i)`).
    pub fn from_word(word: Vec<u8>) -> Result<Self> {
        let m = word.len();
        let mut seen = vec![false; m + 1];
        for &a in &word {
            if a == 0 || a as usize > m || seen[a as usize] {
                return Err(Error::InvalidWord);
            }
            seen[a as usize] = true;
        }
        Ok(Permutation { word })
    }

    /// The identity of `[m]`.
    pub fn identity(m: usize) -> Self {
        Permutation {
            word: (1..=m as u8).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// `sigma(i)` for `i` in `1..=m`.
    pub fn apply(&self, i: usize) -> u8 {
        self.word[i - 1]
    }

    /// The inverse permutation (needed only by tests and the oracle checks).
    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0u8; self.word.len()];
        for (i, &a) in self.word.iter().enumerate() {
            word[a as usize - 1] = (i + 1) as u8;
        }
        Permutation { word }
    }

    /// The standard cycle representation.
    pub fn standard_cycles(&self) -> CycleForm {
        let m = self.degree();
        let mut seen = vec![false; m + 1];
        let mut cycles: Vec<Vec<u8>> = Vec::new();
        for start in 1..=m as u8 {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            loop {
                seen[cur as usize] = true;
                cycle.push(cur);
                cur = self.apply(cur as usize);
                if cur == start {
                    break;
                }
            }
            // Rotate so the largest element leads.
            let max_at = cycle
                .iter()
                .enumerate()
                .max_by_key(|(_, &v)| v)
                .map(|(i, _)| i)
                .unwrap();
            cycle.rotate_left(max_at);
            cycles.push(cycle);
        }
        cycles.sort_by_key(|c| c[0]);
        CycleForm { cycles }
    }

    /// The word `s_1 .. s_m` of the standard representation.
    pub fn standard_word(&self) -> Vec<u8> {
        self.standard_cycles().concatenation()
    }

    /// The inversion table of the standard representation.
    pub fn inversion_table(&self) -> InversionTable {
        let s = self.standard_word();
        let m = s.len();
        let mut entries = vec![0u8; m];
        for (pos, &v) in s.iter().enumerate() {
            entries[v as usize - 1] = s[..pos].iter().filter(|&&u| u > v).count() as u8;
        }
        debug_assert!(check_box(&entries).is_ok());
        InversionTable { entries }
    }

    /// The covering table of the standard representation.
    pub fn covering_table(&self) -> CoveringTable {
        let s = self.standard_word();
        let m = s.len();
        let mut entries = vec![0u8; m];
        for (pos, &v) in s.iter().enumerate() {
            // Nearest larger element to the left, if any.
            let t = s[..pos].iter().rev().find(|&&u| u > v);
            entries[v as usize - 1] = match t {
                Some(&t) => (m as u8) + 1 - t,
                None => 0,
            };
        }
        debug_assert!(check_box(&entries).is_ok());
        CoveringTable { entries }
    }
}

impl CycleForm {
    pub fn cycles(&self) -> &[Vec<u8>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// Multiset of cycle lengths, ascending.
    pub fn cycle_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    /// The concatenated word `s_1 .. s_m`.
    pub fn concatenation(&self) -> Vec<u8> {
        self.cycles.iter().flatten().copied().collect()
    }

    /// The permutation these cycles describe.
    pub fn to_permutation(&self) -> Permutation {
        let m: usize = self.cycles.iter().map(Vec::len).sum();
        let mut word = vec![0u8; m];
        for cycle in &self.cycles {
            for (i, &v) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                word[v as usize - 1] = next;
            }
        }
        Permutation { word }
    }
}

/// Parses a standard-representation word back into cycles: each cycle
/// starts at a left-to-right maximum.
fn cycles_from_standard_word(s: &[u8]) -> CycleForm {
    let mut cycles = Vec::new();
    let mut current: Vec<u8> = Vec::new();
    let mut max_seen = 0u8;
    for &v in s {
        if v > max_seen {
            if !current.is_empty() {
                cycles.push(core::mem::take(&mut current));
            }
            max_seen = v;
        }
        current.push(v);
    }
    if !current.is_empty() {
        cycles.push(current);
    }
    CycleForm { cycles }
}

impl InversionTable {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        check_box(&entries)?;
        Ok(InversionTable { entries })
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// The unique permutation with this inversion table.
    ///
    /// Values are placed into the standard representation largest first;
    /// value `i` goes at index `b_i`, which puts exactly `b_i` larger
    /// elements to its left (everything placed later is smaller).
    pub fn to_permutation(&self) -> Permutation {
        let m = self.entries.len();
        let mut s: Vec<u8> = Vec::with_capacity(m);
        for i in (1..=m as u8).rev() {
            let idx = self.entries[i as usize - 1] as usize;
            s.insert(idx, i);
        }
        cycles_from_standard_word(&s).to_permutation()
    }
}

impl CoveringTable {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        check_box(&entries)?;
        Ok(CoveringTable { entries })
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// The unique permutation with this covering table.
    ///
    /// Values are placed largest first. `k_i = 0` forces `i` before any
    /// larger element; otherwise `i` goes immediately after `t = m+1-k_i`,
    /// which makes `t` its nearest larger left neighbour no matter what
    /// smaller values are inserted afterwards.
    pub fn to_permutation(&self) -> Permutation {
        let m = self.entries.len();
        let mut s: Vec<u8> = Vec::with_capacity(m);
        for i in (1..=m as u8).rev() {
            let k = self.entries[i as usize - 1];
            if k == 0 {
                s.insert(0, i);
            } else {
                let t = (m as u8) + 1 - k;
                let at = s.iter().position(|&u| u == t).expect("t placed earlier");
                s.insert(at + 1, i);
            }
        }
        cycles_from_standard_word(&s).to_permutation()
    }
}

/// All permutations of `[m]` in lexicographic word order.
///
/// Guarded to `1 <= m <= 8` so a stray argument cannot demand a
/// billion-element walk.
pub fn all_permutations(m: usize) -> Result<impl Iterator<Item = Permutation>> {
    if !(1..=8).contains(&m) {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            min: 1,
            max: 8,
        });
    }
    let mut next: Option<Vec<u8>> = Some((1..=m as u8).collect());
    Ok(core::iter::from_fn(move || {
        let word = next.take()?;
        let mut succ = word.clone();
        if next_word(&mut succ) {
            next = Some(succ);
        }
        Some(Permutation { word })
    }))
}

/// Advances a word to its lexicographic successor; false at the last one.
fn next_word(w: &mut [u8]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}
