//! `latin-census`: exact counts of Latin rectangles and squares, computed
//! by independent routes and cross-validated.
//!
//! Subcommands:
//! * `count`  — one value by one method, printed as an exact decimal.
//! * `verify` — every applicable method pair over a grid of cells, with a
//!   machine-readable verdict stream.
//! * `table`  — value tables in CSV or JSON, with an optional persistent
//!   result cache (`--cache` or the `LATIN_CENSUS_CACHE` variable).
//!
//! Exit codes: 0 success (including reported-only disagreements), 1 a
//! mandatory identity failed under `verify`, 2 usage or inapplicable
//! method, 3 work-budget refusal.

mod cache;
mod methods;
mod table;
mod verify;

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use latin_census_core::general::EvalOptions;
use latin_census_core::oracle::{first_reduced_rectangle, OracleOptions};
use latin_census_core::Error;

use cache::Cache;
use methods::{compute, count_quantity, MethodId, Quantity, RunOptions};

#[derive(Parser)]
#[command(name = "latin-census", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Worker threads for partitioned sums and verification cells.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Override the default work limits: maximum estimated (R, C) pairs
    /// for the general sum and maximum search nodes for the oracle.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Largest order the general sum accepts (its cost grows
    /// super-exponentially; raise deliberately).
    #[arg(long, global = true, default_value_t = 4)]
    max_degree: usize,
    /// Result-cache path; LATIN_CENSUS_CACHE is honored when unset.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Report all elapsed times as 0 so outputs are byte-reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one count with one method.
    Count {
        /// Number of rows (order) of the cell.
        #[arg(long)]
        m: usize,
        /// Number of columns (size) of the cell.
        #[arg(long)]
        n: u64,
        /// Method name, e.g. oracle, k3_yamamoto, general_eq56.
        #[arg(long)]
        method: String,
        /// With the oracle: also print the first rectangle found.
        #[arg(long)]
        witness: bool,
    },
    /// Cross-validate all applicable method pairs over a grid.
    Verify {
        #[arg(long, default_value_t = 2)]
        min_m: usize,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[arg(long, default_value_t = 1)]
        min_n: u64,
        #[arg(long, default_value_t = 5)]
        max_n: u64,
        /// Comma-separated method names; all methods when omitted.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// text, csv, or json.
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Emit a value table.
    Table {
        /// K, L, V, D, or U.
        #[arg(long)]
        quantity: String,
        /// Row orders, e.g. `3` or `2..4` (inclusive); required for K and V.
        #[arg(long)]
        rows: Option<String>,
        /// Column sizes, e.g. `0..6` (inclusive).
        #[arg(long)]
        cols: String,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `a`, `a..b`, or `a..=b` as an inclusive range.
fn parse_range(s: &str) -> anyhow::Result<(u64, u64)> {
    let parse_end = |t: &str| {
        t.parse::<u64>()
            .with_context(|| format!("invalid range endpoint {t:?}"))
    };
    if let Some((a, b)) = s.split_once("..=").or_else(|| s.split_once("..")) {
        let (a, b) = (parse_end(a)?, parse_end(b)?);
        if a > b {
            bail!("empty range {s:?}");
        }
        Ok((a, b))
    } else {
        let v = parse_end(s)?;
        Ok((v, v))
    }
}

fn run_options(global: &GlobalArgs) -> RunOptions {
    let mut eval = EvalOptions {
        max_degree: global.max_degree,
        ..EvalOptions::default()
    };
    let mut oracle = OracleOptions::default();
    if let Some(budget) = global.budget {
        eval.max_pairs = budget;
        oracle.max_nodes = budget;
    }
    RunOptions {
        jobs: global.jobs.max(1),
        eval,
        oracle,
    }
}

fn open_cache(global: &GlobalArgs) -> Option<Cache> {
    global
        .cache
        .clone()
        .or_else(|| std::env::var_os("LATIN_CENSUS_CACHE").map(PathBuf::from))
        .map(Cache::new)
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => 3,
        Some(Error::DegreeOutOfRange { .. }) => 3,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let run = run_options(&cli.global);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(run.jobs)
        .build()
        .expect("worker pool");
    let code = pool.install(|| match dispatch(&cli, &run) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    });
    std::process::exit(code);
}

fn dispatch(cli: &Cli, run: &RunOptions) -> anyhow::Result<i32> {
    match &cli.command {
        Command::Count {
            m,
            n,
            method,
            witness,
        } => cmd_count(cli, run, *m, *n, method, *witness),
        Command::Verify {
            min_m,
            max_m,
            min_n,
            max_n,
            methods,
            format,
        } => cmd_verify(cli, run, *min_m, *max_m, *min_n, *max_n, methods, format),
        Command::Table {
            quantity,
            rows,
            cols,
            format,
            out,
        } => cmd_table(cli, run, quantity, rows.as_deref(), cols, format, out.as_deref()),
    }
}

fn cmd_count(
    _cli: &Cli,
    run: &RunOptions,
    m: usize,
    n: u64,
    method: &str,
    witness: bool,
) -> anyhow::Result<i32> {
    let method = MethodId::from_str(method)?;
    let quantity = count_quantity(method, m, n)?;
    let value = compute(method, quantity, m, n, run).map_err(anyhow::Error::from)?;
    println!("{value}");
    if witness {
        if method != MethodId::Oracle {
            bail!("--witness is only meaningful with the oracle");
        }
        if let Some(rect) = first_reduced_rectangle(m, n as usize, &run.oracle)? {
            for row in rect {
                let cells: Vec<String> = row.iter().map(u8::to_string).collect();
                println!("{}", cells.join(" "));
            }
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    _cli: &Cli,
    run: &RunOptions,
    min_m: usize,
    max_m: usize,
    min_n: u64,
    max_n: u64,
    methods: &[String],
    format: &str,
) -> anyhow::Result<i32> {
    if min_m == 0 || min_m > max_m || min_n > max_n {
        bail!("empty verification grid");
    }
    let wanted: Vec<MethodId> = methods
        .iter()
        .map(|s| MethodId::from_str(s))
        .collect::<anyhow::Result<_>>()?;
    let specs = verify::standard_methods(&wanted);
    let grid = verify::Grid {
        min_m,
        max_m,
        min_n,
        max_n,
    };
    let report = verify::run_verify(&grid, &specs, run, _cli.global.no_timing);
    let rendered = match format {
        "text" => verify::render_text(&report),
        "csv" => verify::render_csv(&report),
        "json" => verify::render_json(&report),
        other => bail!("unknown format {other:?} (expected text, csv, or json)"),
    };
    print!("{rendered}");
    Ok(report.exit_code())
}

fn cmd_table(
    cli: &Cli,
    run: &RunOptions,
    quantity: &str,
    rows: Option<&str>,
    cols: &str,
    format: &str,
    out: Option<&std::path::Path>,
) -> anyhow::Result<i32> {
    let quantity = Quantity::from_str(quantity)?;
    let (c0, c1) = parse_range(cols)?;
    let cols: Vec<u64> = (c0..=c1).collect();
    let rows: Vec<usize> = match (quantity, rows) {
        (Quantity::K | Quantity::V, Some(r)) => {
            let (r0, r1) = parse_range(r)?;
            (r0..=r1).map(|v| v as usize).collect()
        }
        (Quantity::K | Quantity::V, None) => {
            return Err(anyhow!("--rows is required for quantity {}", quantity.name()))
        }
        _ => Vec::new(),
    };
    let cache = open_cache(&cli.global);
    let table = table::run_table(
        quantity,
        &rows,
        &cols,
        run,
        cache.as_ref(),
        cli.global.no_timing,
    )?;
    let rendered = match format {
        "csv" => table::render_csv(&table),
        "json" => table::render_json(&table),
        other => bail!("unknown format {other:?} (expected csv or json)"),
    };
    match out {
        Some(path) => std::fs::write(path, rendered.as_bytes())
            .with_context(|| format!("writing table to {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(0)
}
