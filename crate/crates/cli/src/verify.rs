//! Cross-validation: run every applicable method pair per grid cell,
//! compare exact values, and classify each verdict.
//!
//! Identities among closed forms, the oracle at orders up to three, and
//! the mutual equivalence of the general-sum routes are *mandatory*: any
//! mismatch fails the run. The general formula against the oracle at
//! order four and up (including Latin squares beyond order three) is
//! *reported*: the verdict is printed with both exact values either way
//! and never affects the exit status, because that comparison is the
//! empirical test the harness exists to perform, not a regression check.

use std::time::Instant;

use latin_census_core::{BigCount, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::methods::{applies, compute, MethodId, Quantity, RunOptions};

pub type AppliesFn = Box<dyn Fn(usize, u64) -> bool + Sync>;
pub type ComputeFn = Box<dyn Fn(usize, u64, &RunOptions) -> Result<BigCount, Error> + Sync>;

/// One method slot in the verification table. The standard table wraps
/// [`MethodId`]; tests may inject arbitrary implementations.
pub struct MethodSpec {
    pub name: String,
    /// Counts as a general-formula route for classification.
    pub general: bool,
    pub quantity: Quantity,
    pub applies: AppliesFn,
    pub compute: ComputeFn,
}

/// The standard verification table over the closed method set, filtered
/// to `wanted` (all methods when empty).
pub fn standard_methods(wanted: &[MethodId]) -> Vec<MethodSpec> {
    let mut specs = Vec::new();
    for id in MethodId::ALL {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let quantities: &[Quantity] = match id {
            MethodId::Oracle => &[Quantity::K, Quantity::V, Quantity::L],
            MethodId::Touchard => &[Quantity::V],
            MethodId::LatinSquaresEq91 => &[Quantity::L],
            _ => &[Quantity::K],
        };
        for &quantity in quantities {
            specs.push(MethodSpec {
                name: id.name().to_string(),
                general: id.is_general(),
                quantity,
                applies: Box::new(move |m, n| applies(id, quantity, m, n)),
                compute: Box::new(move |m, n, run| compute(id, quantity, m, n, run)),
            });
        }
    }
    specs
}

/// Inclusive verification grid; cells are `(m, n)` with `m <= n`.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub min_m: usize,
    pub max_m: usize,
    pub min_n: u64,
    pub max_n: u64,
}

impl Grid {
    pub fn cells(&self) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        for m in self.min_m..=self.max_m {
            for n in (m as u64).max(self.min_n)..=self.max_n {
                out.push((m, n));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub quantity: String,
    pub m: usize,
    pub n: u64,
    pub method_a: String,
    pub method_b: String,
    pub value_a: String,
    pub value_b: String,
    pub equal: bool,
    /// `mandatory` verdicts gate the exit code; `reported` ones never do.
    pub class: String,
    pub elapsed_ms_a: u64,
    pub elapsed_ms_b: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skip {
    pub quantity: String,
    pub m: usize,
    pub n: u64,
    pub method: String,
    pub reason: String,
}

#[derive(Debug, Default, Serialize)]
pub struct VerifyReport {
    pub verdicts: Vec<Verdict>,
    pub skipped: Vec<Skip>,
    pub mandatory_failures: usize,
    pub reported_mismatches: usize,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.mandatory_failures > 0 {
            1
        } else {
            0
        }
    }
}

/// A high-order comparison against a general route is evidence about the
/// formula itself, not about the build.
fn classify(quantity: Quantity, m: usize, a: &MethodSpec, b: &MethodSpec) -> &'static str {
    let involves_general = a.general || b.general;
    let high_order = m >= 4;
    if involves_general && high_order && matches!(quantity, Quantity::K | Quantity::L) {
        "reported"
    } else {
        "mandatory"
    }
}

/// Runs the grid. Method values are computed once per cell and quantity,
/// in parallel across cells; verdicts come out in deterministic order.
pub fn run_verify(grid: &Grid, methods: &[MethodSpec], run: &RunOptions, no_timing: bool) -> VerifyReport {
    let quantities = [Quantity::K, Quantity::V, Quantity::L];
    // Job list: one entry per applicable (cell, quantity, method).
    let mut jobs: Vec<(usize, u64, Quantity, usize)> = Vec::new();
    for &(m, n) in &grid.cells() {
        for &q in &quantities {
            for (idx, spec) in methods.iter().enumerate() {
                if spec.quantity == q && (spec.applies)(m, n) {
                    jobs.push((m, n, q, idx));
                }
            }
        }
    }
    type Outcome = Result<(BigCount, u64), String>;
    let results: Vec<Outcome> = jobs
        .par_iter()
        .map(|&(m, n, _q, idx)| {
            let started = Instant::now();
            match (methods[idx].compute)(m, n, run) {
                Ok(value) => {
                    let ms = if no_timing {
                        0
                    } else {
                        started.elapsed().as_millis() as u64
                    };
                    Ok((value, ms))
                }
                Err(e) => Err(e.to_string()),
            }
        })
        .collect();

    let mut report = VerifyReport::default();
    // Group back by (cell, quantity) preserving method order.
    let mut i = 0;
    while i < jobs.len() {
        let (m, n, q, _) = jobs[i];
        let mut group: Vec<(usize, &Outcome)> = Vec::new();
        while i < jobs.len() && (jobs[i].0, jobs[i].1, jobs[i].2) == (m, n, q) {
            group.push((jobs[i].3, &results[i]));
            i += 1;
        }
        let mut computed: Vec<(usize, &BigCount, u64)> = Vec::new();
        for (idx, outcome) in group {
            match outcome {
                Ok((value, ms)) => computed.push((idx, value, *ms)),
                Err(reason) => report.skipped.push(Skip {
                    quantity: q.name().to_string(),
                    m,
                    n,
                    method: methods[idx].name.clone(),
                    reason: reason.clone(),
                }),
            }
        }
        for (ai, &(ia, va, ta)) in computed.iter().enumerate() {
            for &(ib, vb, tb) in computed.iter().skip(ai + 1) {
                let class = classify(q, m, &methods[ia], &methods[ib]);
                let equal = va == vb;
                if !equal {
                    if class == "mandatory" {
                        report.mandatory_failures += 1;
                    } else {
                        report.reported_mismatches += 1;
                    }
                }
                report.verdicts.push(Verdict {
                    quantity: q.name().to_string(),
                    m,
                    n,
                    method_a: methods[ia].name.clone(),
                    method_b: methods[ib].name.clone(),
                    value_a: va.to_string(),
                    value_b: vb.to_string(),
                    equal,
                    class: class.to_string(),
                    elapsed_ms_a: ta,
                    elapsed_ms_b: tb,
                });
            }
        }
    }
    report
}

/// Plain-text rendering: one line per verdict, skips, then a summary that
/// repeats every mismatch with both exact values.
pub fn render_text(report: &VerifyReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    for v in &report.verdicts {
        let mark = if v.equal { "EQUAL   " } else { "MISMATCH" };
        let _ = writeln!(
            out,
            "{mark} {}({},{}) {}={} {}={} [{}] ({} ms / {} ms)",
            v.quantity,
            v.m,
            v.n,
            v.method_a,
            v.value_a,
            v.method_b,
            v.value_b,
            v.class,
            v.elapsed_ms_a,
            v.elapsed_ms_b,
        );
    }
    for s in &report.skipped {
        let _ = writeln!(
            out,
            "SKIPPED  {}({},{}) {}: {}",
            s.quantity, s.m, s.n, s.method, s.reason
        );
    }
    let _ = writeln!(
        out,
        "summary: {} verdicts, {} skipped, {} mandatory failures, {} reported mismatches",
        report.verdicts.len(),
        report.skipped.len(),
        report.mandatory_failures,
        report.reported_mismatches,
    );
    for v in report.verdicts.iter().filter(|v| !v.equal) {
        let _ = writeln!(
            out,
            "  {} mismatch at {}({},{}): {} = {} but {} = {}",
            v.class, v.quantity, v.m, v.n, v.method_a, v.value_a, v.method_b, v.value_b
        );
    }
    let _ = writeln!(
        out,
        "result: {}",
        if report.mandatory_failures == 0 {
            "all mandatory identities hold"
        } else {
            "MANDATORY IDENTITY VIOLATED"
        }
    );
    out
}

/// CSV rendering of the verdict stream.
pub fn render_csv(report: &VerifyReport) -> String {
    use std::fmt::Write;
    let mut out = String::from(
        "quantity,m,n,method_a,method_b,value_a,value_b,equal,class,elapsed_ms_a,elapsed_ms_b\n",
    );
    for v in &report.verdicts {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            v.quantity,
            v.m,
            v.n,
            v.method_a,
            v.method_b,
            v.value_a,
            v.value_b,
            v.equal,
            v.class,
            v.elapsed_ms_a,
            v.elapsed_ms_b,
        );
    }
    out
}

pub fn render_json(report: &VerifyReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
