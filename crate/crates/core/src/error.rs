use core::fmt;

/// Errors reported by the counting library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `multinomial` was called with parts summing past the total.
    PartsExceedTotal { total: u64, parts_sum: u64 },
    /// A position index fell outside `1..=m`.
    PositionOutOfRange { position: usize, degree: usize },
    /// A degree (permutation size, tuple degree, rectangle order) fell
    /// outside the supported range.
    DegreeOutOfRange { degree: usize, min: usize, max: usize },
    /// `prop41_counts` was called with a zero-entry count `z >= m`.
    ZeroCountOutOfRange { zeros: usize, degree: usize },
    /// A part-size multiset does not sum to the stated integer.
    NotAPartition { weighted_sum: usize, expected: usize },
    /// A word is not a permutation of `1..=m`.
    InvalidWord,
    /// A table entry violates its box bound `0 <= x_i <= m - i`.
    InvalidTableEntry { position: usize, value: u8, bound: u8 },
    /// A board cell lies outside `[n] x [n]`.
    CellOutOfRange { row: u32, col: u32, n: u32 },
    /// The requested evaluation exceeds the configured work budget.
    BudgetExceeded {
        estimate: u128,
        budget: u64,
        what: &'static str,
    },
    /// An aggregated alternating sum failed its integrality check. This
    /// signals an implementation bug, never a property of the input.
    NonIntegerAggregate,
    /// A rectangle order/size pair violates `1 <= m <= n` (or `m < n` for
    /// the discordance count).
    BadDimensions { m: usize, n: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PartsExceedTotal { total, parts_sum } => write!(
                f,
                "multinomial parts sum to {parts_sum}, exceeding the total {total}"
            ),
            Error::PositionOutOfRange { position, degree } => {
                write!(f, "position {position} outside 1..={degree}")
            }
            Error::DegreeOutOfRange { degree, min, max } => {
                write!(f, "degree {degree} outside supported range {min}..={max}")
            }
            Error::ZeroCountOutOfRange { zeros, degree } => {
                write!(f, "zero-entry count {zeros} must be < degree {degree}")
            }
            Error::NotAPartition {
                weighted_sum,
                expected,
            } => write!(
                f,
                "part sizes weigh {weighted_sum}, not a partition of {expected}"
            ),
            Error::InvalidWord => write!(f, "word is not a permutation of 1..=m"),
            Error::InvalidTableEntry {
                position,
                value,
                bound,
            } => write!(
                f,
                "table entry {value} at position {position} exceeds bound {bound}"
            ),
            Error::CellOutOfRange { row, col, n } => {
                write!(f, "cell ({row}, {col}) outside [{n}] x [{n}]")
            }
            Error::BudgetExceeded {
                estimate,
                budget,
                what,
            } => write!(
                f,
                "budget exceeded: estimated {estimate} {what}, budget {budget} \
                 (raise the budget to force evaluation)"
            ),
            Error::NonIntegerAggregate => write!(
                f,
                "aggregated sum has a non-unit denominator (implementation bug)"
            ),
            Error::BadDimensions { m, n } => {
                write!(f, "invalid dimensions m={m}, n={n}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
