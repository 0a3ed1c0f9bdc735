//! Covering tuples `(a_m, ..., a_1)` with `0 <= a_j <= j - 1`, their
//! component decomposition, and the counting results built on it.
//!
//! Entry `a_i > 0` *covers* position `a_i` (always a strictly smaller
//! position), so iterated covering walks every position down to a
//! zero-valued anchor. The positions reaching a common anchor form a
//! *component*; the partition into components is the tuple's *structure*,
//! and `zeta` — the number of zero entries — equals the number of
//! components. Under the covering-table bijection of [`crate::perm`]
//! these tuples correspond to permutations of `[m]` with components
//! matching cycles, which is what lets the general formula in
//! [`crate::general`] be read in either language.
//!
//! A component is identified by its full content, the set of
//! `(position, value)` pairs it carries — two different tuples may share
//! an identical component, and the constraint system of the general
//! formula groups variables exactly by that shared content.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::numeric::{binomial, exact_div, factorial, BigCount};
use crate::perm::{CoveringTable, Permutation};
use crate::{Error, Result};

/// A covering tuple of degree `m`.
///
/// Ordering is lexicographic on the displayed sequence `(a_m, ..., a_1)`,
/// which is the deterministic iteration order used everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexTuple {
    /// `alpha[j - 1]` is the entry at position `j`.
    alpha: Vec<u8>,
}

impl IndexTuple {
    /// Builds a tuple from the displayed order `(a_m, ..., a_1)`.
    pub fn from_desc(desc: &[u8]) -> Result<Self> {
        let mut alpha: Vec<u8> = desc.to_vec();
        alpha.reverse();
        let m = alpha.len();
        for (idx, &v) in alpha.iter().enumerate() {
            let bound = idx as u8; // position idx + 1 allows 0..=idx
            if v > bound {
                return Err(Error::InvalidTableEntry {
                    position: idx + 1,
                    value: v,
                    bound,
                });
            }
        }
        if m == 0 {
            return Err(Error::DegreeOutOfRange {
                degree: 0,
                min: 1,
                max: 8,
            });
        }
        Ok(IndexTuple { alpha })
    }

    /// The all-zero tuple of degree `m`.
    pub fn zeros(m: usize) -> Self {
        IndexTuple {
            alpha: vec![0; m],
        }
    }

    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    /// Entry `a_j` at position `j` in `1..=m`.
    pub fn value_at(&self, position: usize) -> u8 {
        self.alpha[position - 1]
    }

    /// Entries in displayed order `(a_m, ..., a_1)`.
    pub fn digits_desc(&self) -> Vec<u8> {
        self.alpha.iter().rev().copied().collect()
    }

    /// Compact label like `3010`, reading `(a_m, ..., a_1)`.
    pub fn label(&self) -> String {
        self.alpha
            .iter()
            .rev()
            .map(|d| char::from(b'0' + d))
            .collect()
    }

    /// Number of zero entries; equals the number of components.
    pub fn zeta(&self) -> usize {
        self.alpha.iter().filter(|&&v| v == 0).count()
    }

    /// The covering map at position `i`: the covered position when
    /// `a_i > 0`, `None` when `a_i = 0`.
    pub fn kappa(&self, i: usize) -> Result<Option<usize>> {
        if i == 0 || i > self.degree() {
            return Err(Error::PositionOutOfRange {
                position: i,
                degree: self.degree(),
            });
        }
        Ok(match self.value_at(i) {
            0 => None,
            v => Some(v as usize),
        })
    }

    /// Partition of the positions into components.
    pub fn structure(&self) -> Structure {
        let m = self.degree();
        // Pointers strictly decrease, so an ascending pass resolves every
        // position's anchor in one step.
        let mut anchor = vec![0usize; m + 1];
        for i in 1..=m {
            anchor[i] = match self.value_at(i) {
                0 => i,
                v => anchor[v as usize],
            };
        }
        let mut by_anchor: BTreeMap<usize, Vec<(usize, u8)>> = BTreeMap::new();
        for i in 1..=m {
            by_anchor
                .entry(anchor[i])
                .or_default()
                .push((i, self.value_at(i)));
        }
        let components = by_anchor
            .into_values()
            .map(|members| Component { members })
            .collect();
        Structure { components }
    }
}

impl PartialOrd for IndexTuple {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IndexTuple {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.alpha.iter().rev().cmp(other.alpha.iter().rev())
    }
}

/// One component: the `(position, value)` pairs flowing into a common
/// anchor. Content equality is what makes two components "the same".
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    /// Sorted by position; the anchor is the (unique) zero-valued entry.
    members: Vec<(usize, u8)>,
}

impl Component {
    pub fn members(&self) -> &[(usize, u8)] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// The anchor position: the zero-valued member, always the smallest.
    pub fn anchor(&self) -> usize {
        self.members
            .iter()
            .find(|&&(_, v)| v == 0)
            .expect("every component has a zero anchor")
            .0
    }

    /// Positions covered by this component.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&(p, _)| p)
    }
}

/// The structure of a tuple: its components, sorted by anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    components: Vec<Component>,
}

impl Structure {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Number of components; always equals the tuple's zero count.
    pub fn zeta(&self) -> usize {
        self.components.len()
    }

    /// The component anchored at `position`, if any.
    pub fn component_at_anchor(&self, position: usize) -> Option<&Component> {
        self.components.iter().find(|c| c.anchor() == position)
    }

    /// The component containing `position`.
    pub fn component_containing(&self, position: usize) -> &Component {
        self.components
            .iter()
            .find(|c| c.positions().any(|p| p == position))
            .expect("components cover all positions")
    }

    /// Component sizes as an ascending multiset.
    pub fn size_multiset(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.components.iter().map(Component::size).collect();
        sizes.sort_unstable();
        sizes
    }
}

/// All covering tuples of degree `m` in lexicographic `(a_m, ..., a_1)`
/// order. There are `m!` of them.
pub fn all_index_tuples(m: usize) -> Result<Vec<IndexTuple>> {
    if !(1..=8).contains(&m) {
        return Err(Error::DegreeOutOfRange {
            degree: m,
            min: 1,
            max: 8,
        });
    }
    let mut out = Vec::new();
    let mut digits = vec![0u8; m]; // digits[0] = a_m downto digits[m-1] = a_1
    loop {
        out.push(IndexTuple {
            alpha: digits.iter().rev().copied().collect(),
        });
        // Odometer increment, most significant digit first.
        let mut pos = m;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            let position = m - pos; // digits[pos] holds a_{position}
            if (digits[pos] as usize) < position - 1 {
                digits[pos] += 1;
                for d in digits[pos + 1..].iter_mut() {
                    *d = 0;
                }
                break;
            }
        }
    }
}

/// Counting result for structures split as `Z_1` against the rest `Z`:
/// with `z` positions outside `Z_1`, returns
/// `(C(m-1, z) z!, (m-1-z)!)` — the number of possible `Z`
/// configurations, and the number of tuples per fixed configuration.
pub fn prop41_counts(m: usize, z: usize) -> Result<(BigCount, BigCount)> {
    if m == 0 {
        return Err(Error::DegreeOutOfRange {
            degree: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    if z >= m {
        return Err(Error::ZeroCountOutOfRange { zeros: z, degree: m });
    }
    let configurations = binomial(m as u64 - 1, z as u64) * factorial(z as u64);
    let per_configuration = factorial((m - 1 - z) as u64);
    Ok((configurations, per_configuration))
}

/// Number of tuples whose component sizes realize the partition of `m`
/// given by multiplicities `lambda[s] = lambda_s`:
/// `m! / (prod_s s^{lambda_s} lambda_s!)`.
pub fn prop42_count(m: usize, lambda: &BTreeMap<usize, usize>) -> Result<BigCount> {
    let weighted: usize = lambda.iter().map(|(&s, &mult)| s * mult).sum();
    if weighted != m {
        return Err(Error::NotAPartition {
            weighted_sum: weighted,
            expected: m,
        });
    }
    let mut den = BigCount::from(1u8);
    for (&s, &mult) in lambda {
        den *= BigCount::from(s as u64).pow(mult as u32);
        den *= factorial(mult as u64);
    }
    exact_div(factorial(m as u64), &den)
}

/// The covering tuple of a permutation: `a_j = k_{m+1-j}` where `k` is
/// the covering table. Components of the tuple correspond to cycles of
/// the permutation, the component anchored at `m+1-h` matching the cycle
/// headed by `h`.
pub fn tuple_from_permutation(p: &Permutation) -> IndexTuple {
    let m = p.degree();
    let table = p.covering_table();
    let mut alpha = vec![0u8; m];
    for j in 1..=m {
        alpha[j - 1] = table.entries()[m - j];
    }
    IndexTuple { alpha }
}

/// Inverse of [`tuple_from_permutation`].
pub fn permutation_from_tuple(t: &IndexTuple) -> Permutation {
    let m = t.degree();
    let mut entries = vec![0u8; m];
    for i in 1..=m {
        entries[i - 1] = t.value_at(m + 1 - i);
    }
    CoveringTable::new(entries)
        .expect("tuple box equals table box")
        .to_permutation()
}
