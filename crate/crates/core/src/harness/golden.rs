//! Regression against reference error tables.
//!
//! A golden file is a small text format:
//!
//! ```text
//! # comment
//! title = Example 1, r = 4
//! r = 4
//! rel_tol = 0.01
//! abs_tol = 5e-14
//! abs_below = 1e-13
//! N,example1:l2,example1:e_node
//! scale,1.4142135623730951,1
//! 2,1.8618e-03,1.1874e-05
//! 32,6.3240e-09,---
//! ```
//!
//! Each data column is `problem:functional`. The optional `scale` row multiplies the computed
//! value before comparison (reference tables that integrate over a doubled element measure carry
//! `sqrt(2)` there). `---` cells are skipped. Cells whose reference value is at most `abs_below` (default
//! `1e-13`) are compared with absolute tolerance `abs_tol`; all others with relative tolerance
//! `rel_tol`.

use std::collections::BTreeMap;
use std::fmt;

use super::study::{run_study, StudyConfig, StudyResult};
use crate::error::{FvmError, Result};
use crate::norms::FUNCTIONAL_NAMES;
use crate::problems;

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenColumn {
    pub problem: String,
    pub functional: String,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenTable {
    pub title: String,
    pub r: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub abs_below: f64,
    pub columns: Vec<GoldenColumn>,
    /// `(N, cells)`; `None` marks a `---` cell.
    pub rows: Vec<(usize, Vec<Option<f64>>)>,
}

const BUILTIN_TABLES: [(&str, &str); 4] = [
    ("table1", include_str!("../../data/golden/table1.golden")),
    ("table2", include_str!("../../data/golden/table2.golden")),
    (
        "table3_r4",
        include_str!("../../data/golden/table3_r4.golden"),
    ),
    (
        "table3_r5",
        include_str!("../../data/golden/table3_r5.golden"),
    ),
];

/// The reference tables shipped with the crate, by name.
pub fn builtin_tables() -> Vec<(&'static str, GoldenTable)> {
    BUILTIN_TABLES
        .iter()
        .map(|(name, text)| {
            (
                *name,
                GoldenTable::parse(text).expect("bundled golden file parses"),
            )
        })
        .collect()
}

fn fmt_err(msg: impl Into<String>) -> FvmError {
    FvmError::Format(msg.into())
}

impl GoldenTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut meta: BTreeMap<&str, &str> = BTreeMap::new();
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = loop {
            let line = lines
                .next()
                .ok_or_else(|| fmt_err("missing column header"))?;
            if line.starts_with("N,") || line == "N" {
                break line;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| fmt_err(format!("expected 'key = value', got '{line}'")))?;
            meta.insert(k.trim(), v.trim());
        };
        let num = |key: &str| -> Result<f64> {
            meta.get(key)
                .ok_or_else(|| fmt_err(format!("missing '{key}'")))?
                .parse()
                .map_err(|_| fmt_err(format!("'{key}' is not a number")))
        };
        let r = meta
            .get("r")
            .ok_or_else(|| fmt_err("missing 'r'"))?
            .parse()
            .map_err(|_| fmt_err("'r' is not an integer"))?;
        let rel_tol = num("rel_tol")?;
        let abs_tol = num("abs_tol")?;
        let abs_below = if meta.contains_key("abs_below") {
            num("abs_below")?
        } else {
            1e-13
        };
        let title = meta.get("title").unwrap_or(&"").to_string();

        let mut columns = Vec::new();
        for cell in header.split(',').skip(1) {
            let (problem, functional) = cell
                .trim()
                .split_once(':')
                .ok_or_else(|| fmt_err(format!("column '{cell}' is not problem:functional")))?;
            if !FUNCTIONAL_NAMES.contains(&functional) {
                return Err(fmt_err(format!("unknown functional '{functional}'")));
            }
            columns.push(GoldenColumn {
                problem: problem.to_string(),
                functional: functional.to_string(),
                scale: 1.0,
            });
        }
        let split_row = |line: &str| -> Result<Vec<String>> {
            let cells: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
            if cells.len() != columns.len() + 1 {
                return Err(fmt_err(format!(
                    "row '{line}' has {} cells, expected {}",
                    cells.len(),
                    columns.len() + 1
                )));
            }
            Ok(cells)
        };

        let mut rows = Vec::new();
        let mut scales = None;
        for line in lines {
            let cells = split_row(line)?;
            if cells[0] == "scale" {
                let parsed = cells[1..]
                    .iter()
                    .map(|c| {
                        c.parse::<f64>()
                            .map_err(|_| fmt_err(format!("bad scale '{c}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                scales = Some(parsed);
                continue;
            }
            let n: usize = cells[0]
                .parse()
                .map_err(|_| fmt_err(format!("bad N '{}'", cells[0])))?;
            let values = cells[1..]
                .iter()
                .map(|c| {
                    if c == "---" {
                        Ok(None)
                    } else {
                        c.parse::<f64>()
                            .map(Some)
                            .map_err(|_| fmt_err(format!("bad cell '{c}'")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push((n, values));
        }
        if let Some(scales) = scales {
            for (col, s) in columns.iter_mut().zip(scales) {
                col.scale = s;
            }
        }
        if rows.is_empty() {
            return Err(fmt_err("no data rows"));
        }
        Ok(Self {
            title,
            r,
            rel_tol,
            abs_tol,
            abs_below,
            columns,
            rows,
        })
    }

    /// Distinct problems referenced by the columns, in column order.
    pub fn problems(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for c in &self.columns {
            if !out.contains(&c.problem) {
                out.push(c.problem.clone());
            }
        }
        out
    }

    pub fn refinements(&self) -> Vec<usize> {
        self.rows.iter().map(|(n, _)| *n).collect()
    }

    /// A table whose cells are the values of `result` itself.
    pub fn from_result(result: &StudyResult, r: usize, functionals: &[&str]) -> Self {
        let columns = functionals
            .iter()
            .map(|f| GoldenColumn {
                problem: result.problem.clone(),
                functional: f.to_string(),
                scale: 1.0,
            })
            .collect();
        let rows = result
            .runs
            .iter()
            .filter(|run| run.r == r)
            .map(|run| {
                let cells = functionals.iter().map(|f| run.report.get(f)).collect();
                (run.n, cells)
            })
            .collect();
        Self {
            title: format!("{} r = {r}", result.problem),
            r,
            rel_tol: 0.0,
            abs_tol: 0.0,
            abs_below: 0.0,
            columns,
            rows,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub n: usize,
    pub problem: String,
    pub functional: String,
    pub expected: f64,
    /// Scaled computed value, `None` if the run was missing from the results.
    pub computed: Option<f64>,
    pub rel_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct GoldenReport {
    pub title: String,
    pub cells: Vec<CellOutcome>,
    pub skipped: usize,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellOutcome> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for GoldenReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        writeln!(
            f,
            "{}: {} cells checked, {} skipped, {} failed",
            self.title,
            self.cells.len(),
            self.skipped,
            failed
        )?;
        for c in &self.cells {
            let computed = c
                .computed
                .map_or_else(|| "missing".to_string(), |v| format!("{v:.4e}"));
            writeln!(
                f,
                "  {} N={:<3} {:>8}:{:<16} expected {:.4e} computed {:>11} rel {:.2e}",
                if c.pass { "ok  " } else { "FAIL" },
                c.n,
                c.problem,
                c.functional,
                c.expected,
                computed,
                c.rel_err
            )?;
        }
        Ok(())
    }
}

/// Compares `results` (one per problem) against `table`.
pub fn golden_check(results: &[StudyResult], table: &GoldenTable) -> GoldenReport {
    let mut cells = Vec::new();
    let mut skipped = 0;
    for (n, row) in &table.rows {
        for (col, expected) in table.columns.iter().zip(row) {
            let Some(expected) = *expected else {
                skipped += 1;
                continue;
            };
            let computed = results
                .iter()
                .find(|res| res.problem == col.problem)
                .and_then(|res| res.run(table.r, *n))
                .and_then(|run| run.report.get(&col.functional))
                .map(|v| v * col.scale);
            let (rel_err, pass) = match computed {
                Some(c) => {
                    let diff = (c - expected).abs();
                    let rel = if expected != 0.0 {
                        diff / expected.abs()
                    } else {
                        diff
                    };
                    let pass = if expected.abs() <= table.abs_below {
                        diff <= table.abs_tol
                    } else {
                        rel <= table.rel_tol
                    };
                    (rel, pass)
                }
                None => (f64::INFINITY, false),
            };
            cells.push(CellOutcome {
                n: *n,
                problem: col.problem.clone(),
                functional: col.functional.clone(),
                expected,
                computed,
                rel_err,
                pass,
            });
        }
    }
    GoldenReport {
        title: table.title.clone(),
        cells,
        skipped,
    }
}

/// Runs every problem the table references at its `r` and `N` values, then checks it.
pub fn run_golden(table: &GoldenTable) -> Result<GoldenReport> {
    let config = StudyConfig::new(vec![table.r], table.refinements());
    let results = table
        .problems()
        .iter()
        .map(|name| {
            let problem = problems::builtin(name).or_else(|_| super::config::load_problem(name))?;
            run_study(&problem, &config)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(golden_check(&results, table))
}
