//! The closed set of counting methods the harness can run, with their
//! applicability rules and parallel drivers.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail};
use latin_census_core::closed::{
    derangements, k3_riordan, k3_yamamoto, k4_explicit, touchard, K4Variant,
};
use latin_census_core::general::{
    k_general, k_general_partial, plan, EvalOptions, GeneralForm,
};
use latin_census_core::numeric::factorial;
use latin_census_core::oracle::{
    brute_latin_squares, brute_reduced_rectangles, brute_very_reduced, OracleOptions,
};
use latin_census_core::{BigCount, Error};

/// What a table or verification cell counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    /// Reduced rectangles `K(m, n)` (first row pinned).
    K,
    /// Latin squares `L(n)`.
    L,
    /// Discordant permutations `V(m, n)`.
    V,
    /// Derangements `D_n`.
    D,
    /// Menage numbers `U_n`.
    U,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::K => "K",
            Quantity::L => "L",
            Quantity::V => "V",
            Quantity::D => "D",
            Quantity::U => "U",
        }
    }
}

impl FromStr for Quantity {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "K" | "k" => Ok(Quantity::K),
            "L" | "l" => Ok(Quantity::L),
            "V" | "v" => Ok(Quantity::V),
            "D" | "d" => Ok(Quantity::D),
            "U" | "u" => Ok(Quantity::U),
            _ => Err(anyhow!("unknown quantity {s:?} (expected K, L, V, D, or U)")),
        }
    }
}

/// Identifier of one counting method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MethodId {
    Oracle,
    Derangements,
    Touchard,
    K3Yamamoto,
    K3Riordan,
    K4Pranesachar,
    K4Simplified,
    GeneralEq56,
    GeneralEq57,
    GeneralEq65,
    GeneralEq81,
    LatinSquaresEq91,
}

impl MethodId {
    pub const ALL: [MethodId; 12] = [
        MethodId::Oracle,
        MethodId::Derangements,
        MethodId::Touchard,
        MethodId::K3Yamamoto,
        MethodId::K3Riordan,
        MethodId::K4Pranesachar,
        MethodId::K4Simplified,
        MethodId::GeneralEq56,
        MethodId::GeneralEq57,
        MethodId::GeneralEq65,
        MethodId::GeneralEq81,
        MethodId::LatinSquaresEq91,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodId::Oracle => "oracle",
            MethodId::Derangements => "derangements",
            MethodId::Touchard => "touchard",
            MethodId::K3Yamamoto => "k3_yamamoto",
            MethodId::K3Riordan => "k3_riordan",
            MethodId::K4Pranesachar => "k4_pranesachar",
            MethodId::K4Simplified => "k4_simplified",
            MethodId::GeneralEq56 => "general_eq56",
            MethodId::GeneralEq57 => "general_eq57",
            MethodId::GeneralEq65 => "general_eq65",
            MethodId::GeneralEq81 => "general_eq81",
            MethodId::LatinSquaresEq91 => "latin_squares_eq91",
        }
    }

    /// The general-formula methods, whose high-order verdicts are
    /// reported rather than asserted.
    pub fn is_general(self) -> bool {
        matches!(
            self,
            MethodId::GeneralEq56
                | MethodId::GeneralEq57
                | MethodId::GeneralEq65
                | MethodId::GeneralEq81
                | MethodId::LatinSquaresEq91
        )
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        MethodId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = MethodId::ALL.iter().map(|m| m.name()).collect();
                anyhow!("unknown method {s:?} (expected one of {})", names.join(", "))
            })
    }
}

/// Work limits and parallelism shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub jobs: usize,
    pub eval: EvalOptions,
    pub oracle: OracleOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            jobs: 1,
            eval: EvalOptions::default(),
            oracle: OracleOptions::default(),
        }
    }
}

/// The quantity a method computes at a `(m, n)` cell, or `None` when it
/// does not apply there.
pub fn method_quantity(method: MethodId, m: usize, n: u64) -> Option<Quantity> {
    let n_us = n as usize;
    match method {
        MethodId::Oracle => None, // polymorphic; resolved per quantity
        MethodId::Derangements => (m == 2 && n_us >= m).then_some(Quantity::K),
        MethodId::Touchard => (m == 2 && n_us > m).then_some(Quantity::V),
        MethodId::K3Yamamoto | MethodId::K3Riordan => {
            (m == 3 && n_us >= 3).then_some(Quantity::K)
        }
        MethodId::K4Pranesachar | MethodId::K4Simplified => {
            (m == 4 && n_us >= 4).then_some(Quantity::K)
        }
        MethodId::GeneralEq56
        | MethodId::GeneralEq57
        | MethodId::GeneralEq65
        | MethodId::GeneralEq81 => (m >= 1 && n_us >= m).then_some(Quantity::K),
        MethodId::LatinSquaresEq91 => (m == n_us && m >= 1).then_some(Quantity::L),
    }
}

/// Whether `method` applies to `(m, n)` for the given quantity (the
/// oracle covers all three verification quantities).
pub fn applies(method: MethodId, quantity: Quantity, m: usize, n: u64) -> bool {
    match method {
        MethodId::Oracle => match quantity {
            Quantity::K => m >= 1 && n as usize >= m,
            Quantity::V => m >= 1 && n as usize > m,
            Quantity::L => m == n as usize && m >= 1,
            _ => false,
        },
        _ => method_quantity(method, m, n) == Some(quantity),
    }
}

/// Runs one method at one cell. Errors bubble out exactly; a budget
/// refusal is an `Error::BudgetExceeded` from the core.
pub fn compute(
    method: MethodId,
    quantity: Quantity,
    m: usize,
    n: u64,
    run: &RunOptions,
) -> Result<BigCount, Error> {
    match (method, quantity) {
        (MethodId::Oracle, Quantity::K) => brute_reduced_rectangles(m, n as usize, &run.oracle),
        (MethodId::Oracle, Quantity::V) => brute_very_reduced(m, n as usize, &run.oracle),
        (MethodId::Oracle, Quantity::L) => brute_latin_squares(n as usize, &run.oracle),
        (MethodId::Oracle, Quantity::D) => brute_reduced_rectangles(2, n as usize, &run.oracle),
        (MethodId::Derangements, _) => Ok(derangements(n)),
        (MethodId::Touchard, _) => Ok(touchard(n)),
        (MethodId::K3Yamamoto, _) => Ok(k3_yamamoto(n)),
        (MethodId::K3Riordan, _) => Ok(k3_riordan(n)),
        (MethodId::K4Pranesachar, _) => k4_explicit(n, K4Variant::Pranesachar),
        (MethodId::K4Simplified, _) => k4_explicit(n, K4Variant::Simplified),
        (MethodId::GeneralEq56, _) => general_parallel(m, n, GeneralForm::Eq56, run),
        (MethodId::GeneralEq57, _) => general_parallel(m, n, GeneralForm::Eq57, run),
        (MethodId::GeneralEq65, _) => general_parallel(m, n, GeneralForm::Eq65, run),
        (MethodId::GeneralEq81, _) => general_parallel(m, n, GeneralForm::Eq81, run),
        (MethodId::LatinSquaresEq91, _) => {
            Ok(factorial(n) * general_parallel(n as usize, n, GeneralForm::Eq56, run)?)
        }
        (MethodId::Oracle, _) => unreachable!("oracle quantity resolved by applies()"),
    }
}

/// Splits the outer composition space into rank chunks and sums the exact
/// partial sums in rank order; bit-identical to the sequential run for
/// any worker count.
pub fn general_parallel(
    m: usize,
    n: u64,
    form: GeneralForm,
    run: &RunOptions,
) -> Result<BigCount, Error> {
    let plan = plan(m, n, form, &run.eval)?;
    if run.jobs <= 1 || plan.outer_size < 2048 {
        return k_general(m, n, form, &run.eval);
    }
    let chunks = (run.jobs * 4).min(plan.outer_size as usize).max(1) as u64;
    let step = plan.outer_size.div_ceil(chunks);
    let ranges: Vec<std::ops::Range<u64>> = (0..chunks)
        .map(|i| (i * step).min(plan.outer_size)..((i + 1) * step).min(plan.outer_size))
        .collect();
    use rayon::prelude::*;
    let partials: Vec<Result<BigCount, Error>> = ranges
        .into_par_iter()
        .map(|range| k_general_partial(m, n, form, range, &run.eval))
        .collect();
    let mut acc = BigCount::from(0u8);
    for p in partials {
        acc += p?;
    }
    Ok(acc)
}

/// Validates a `count` invocation: the method must be meaningful at the
/// requested cell. Returns the quantity it computes there.
pub fn count_quantity(method: MethodId, m: usize, n: u64) -> anyhow::Result<Quantity> {
    if let MethodId::Oracle = method {
        if m >= 1 && n as usize >= m {
            return Ok(Quantity::K);
        }
        bail!("oracle needs 1 <= m <= n, got m={m}, n={n}");
    }
    method_quantity(method, m, n)
        .ok_or_else(|| anyhow!("method {} does not apply to m={m}, n={n}", method.name()))
}
