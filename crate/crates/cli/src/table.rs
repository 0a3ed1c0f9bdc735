//! Value tables over a cell range, one row per cell, with the method
//! chosen automatically: the oracle on its documented grid first, then
//! the fixed-order closed form, then the aggregated general route. The
//! chosen method is always recorded in the row.

use std::time::Instant;

use latin_census_core::general::{plan, GeneralForm};
use serde::Serialize;

use crate::cache::{cache_key, Cache};
use crate::methods::{compute, MethodId, Quantity, RunOptions};

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub quantity: String,
    pub m: usize,
    pub n: u64,
    pub method: String,
    pub value: String,
    pub elapsed_ms: u64,
}

/// The cells a table request expands to: `(m, n)` pairs.
pub fn table_cells(quantity: Quantity, rows: &[usize], cols: &[u64]) -> Vec<(usize, u64)> {
    match quantity {
        Quantity::K | Quantity::V => rows
            .iter()
            .flat_map(|&m| cols.iter().map(move |&n| (m, n)))
            .collect(),
        // Single-parameter families; the row index is the identity's own:
        // derangements and menage numbers sit at order 2, squares at n.
        Quantity::D | Quantity::U => cols.iter().map(|&n| (2usize, n)).collect(),
        Quantity::L => cols.iter().map(|&n| (n as usize, n)).collect(),
    }
}

/// The method the auto-selection rules name for a cell, before any value
/// is computed (so cache keys are stable), or `None` for off-domain or
/// over-budget cells.
pub fn select_method(quantity: Quantity, m: usize, n: u64, run: &RunOptions) -> Option<MethodId> {
    let n_us = n as usize;
    match quantity {
        Quantity::D => Some(MethodId::Derangements),
        Quantity::U => Some(MethodId::Touchard),
        Quantity::V => {
            if m == 0 || m >= n_us {
                None
            } else if n_us <= 10 {
                Some(MethodId::Oracle)
            } else if m == 2 {
                Some(MethodId::Touchard)
            } else {
                None
            }
        }
        Quantity::L => {
            if n == 0 {
                None
            } else if n_us <= 5 {
                Some(MethodId::Oracle)
            } else if plan(n_us, n, GeneralForm::Eq56, &run.eval).is_ok() {
                Some(MethodId::LatinSquaresEq91)
            } else {
                None
            }
        }
        Quantity::K => {
            if m == 0 || m > n_us {
                return None;
            }
            let oracle_grid = (m <= 4 && n_us <= 7) || (m == n_us && n_us <= 5);
            if oracle_grid {
                Some(MethodId::Oracle)
            } else if m == 2 {
                Some(MethodId::Derangements)
            } else if m == 3 {
                Some(MethodId::K3Riordan)
            } else if m == 4 {
                Some(MethodId::K4Simplified)
            } else if plan(m, n, GeneralForm::Eq65, &run.eval).is_ok() {
                Some(MethodId::GeneralEq65)
            } else {
                None
            }
        }
    }
}

/// Builds the table, consulting the cache when one is configured.
pub fn run_table(
    quantity: Quantity,
    rows: &[usize],
    cols: &[u64],
    run: &RunOptions,
    cache: Option<&Cache>,
    no_timing: bool,
) -> anyhow::Result<Vec<TableRow>> {
    let mut out = Vec::new();
    for (m, n) in table_cells(quantity, rows, cols) {
        let Some(method) = select_method(quantity, m, n, run) else {
            out.push(TableRow {
                quantity: quantity.name().to_string(),
                m,
                n,
                method: "skipped".to_string(),
                value: String::new(),
                elapsed_ms: 0,
            });
            continue;
        };
        let key = cache_key(quantity.name(), m, n, method.name());
        let started = Instant::now();
        let cached = cache.and_then(|c| c.get(&key));
        let value = match cached {
            Some(v) => Some(v),
            None => match compute(method, quantity, m, n, run) {
                Ok(v) => {
                    let rendered = v.to_string();
                    if let Some(c) = cache {
                        c.put(&key, &rendered)?;
                    }
                    Some(rendered)
                }
                Err(_) => None,
            },
        };
        let elapsed_ms = if no_timing {
            0
        } else {
            started.elapsed().as_millis() as u64
        };
        match value {
            Some(value) => out.push(TableRow {
                quantity: quantity.name().to_string(),
                m,
                n,
                method: method.name().to_string(),
                value,
                elapsed_ms,
            }),
            None => out.push(TableRow {
                quantity: quantity.name().to_string(),
                m,
                n,
                method: "skipped".to_string(),
                value: String::new(),
                elapsed_ms: 0,
            }),
        }
    }
    Ok(out)
}

pub fn render_csv(rows: &[TableRow]) -> String {
    use std::fmt::Write;
    let mut out = String::from("quantity,m,n,method,value,elapsed_ms\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.quantity, r.m, r.n, r.method, r.value, r.elapsed_ms
        );
    }
    out
}

pub fn render_json(rows: &[TableRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_prefers_oracle_then_closed_then_general() {
        let run = RunOptions::default();
        assert_eq!(select_method(Quantity::K, 3, 6, &run), Some(MethodId::Oracle));
        assert_eq!(
            select_method(Quantity::K, 3, 9, &run),
            Some(MethodId::K3Riordan)
        );
        assert_eq!(
            select_method(Quantity::K, 4, 12, &run),
            Some(MethodId::K4Simplified)
        );
        assert_eq!(select_method(Quantity::K, 5, 4, &run), None);
        assert_eq!(select_method(Quantity::L, 6, 6, &run), None);
        assert_eq!(select_method(Quantity::V, 2, 12, &run), Some(MethodId::Touchard));
    }

    #[test]
    fn derangement_table_medium() {
        let rows = run_table(
            Quantity::D,
            &[],
            &[0, 1, 2, 3, 4, 5, 6],
            &RunOptions::default(),
            None,
            true,
        )
        .unwrap();
        let values: Vec<&str> = rows.iter().map(|r| r.value.as_str()).collect();
        assert_eq!(values, ["1", "0", "1", "2", "9", "44", "265"]);
        assert!(rows.iter().all(|r| r.method == "derangements" && r.m == 2));
    }
}
