//! Convergence studies over `(r, N)` grids.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::assembly::Discretization;
use crate::error::{FvmError, Result};
use crate::mesh::Mesh;
use crate::norms::{error_report, ErrorReport, FUNCTIONAL_NAMES};
use crate::problem::Problem;

/// Errors at or below this level are rounding noise and excluded from rate estimates.
pub const RATE_FLOOR: f64 = 1e-14;

pub const CSV_HEADER: &str =
    "r,N,h,l2,h1,h1_semi,interp_h1,g1,aver1,l0_lobatto,aver0,e_node,sup_gauss_deriv";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshFamily {
    Uniform,
    /// Geometric grading, `h_{i+1} = ratio * h_i`.
    Graded(f64),
}

impl MeshFamily {
    pub fn build(&self, a: f64, b: f64, n: usize) -> Result<Mesh<f64>> {
        match *self {
            MeshFamily::Uniform => Mesh::uniform(a, b, n),
            MeshFamily::Graded(ratio) => Mesh::graded(a, b, n, ratio),
        }
    }
}

impl FromStr for MeshFamily {
    type Err = FvmError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "uniform" {
            return Ok(MeshFamily::Uniform);
        }
        if let Some(ratio) = s.strip_prefix("graded:") {
            let ratio: f64 = ratio
                .parse()
                .map_err(|_| FvmError::InvalidConfig(format!("bad grading ratio in '{s}'")))?;
            if ratio > 0.0 && ratio.is_finite() {
                return Ok(MeshFamily::Graded(ratio));
            }
        }
        Err(FvmError::InvalidConfig(format!(
            "mesh family must be 'uniform' or 'graded:<ratio>', got '{s}'"
        )))
    }
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub degrees: Vec<usize>,
    pub refinements: Vec<usize>,
    pub mesh: MeshFamily,
    pub quad_order: Option<usize>,
    pub norm_order: Option<usize>,
    /// Functionals shown in console summaries; the CSV always carries all of them.
    pub functionals: Vec<String>,
}

impl StudyConfig {
    pub fn new(degrees: Vec<usize>, refinements: Vec<usize>) -> Self {
        Self {
            degrees,
            refinements,
            mesh: MeshFamily::Uniform,
            quad_order: None,
            norm_order: None,
            functionals: FUNCTIONAL_NAMES.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() || self.refinements.is_empty() {
            return Err(FvmError::InvalidConfig(
                "need at least one r and one N".into(),
            ));
        }
        if self.degrees.contains(&0) {
            return Err(FvmError::InvalidConfig("degrees must be positive".into()));
        }
        if self.refinements[0] == 0 || self.refinements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FvmError::InvalidConfig(
                "N list must be positive and strictly increasing".into(),
            ));
        }
        if let Some(name) = self
            .functionals
            .iter()
            .find(|f| !FUNCTIONAL_NAMES.contains(&f.as_str()))
        {
            return Err(FvmError::InvalidConfig(format!(
                "unknown functional '{name}'"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub r: usize,
    pub n: usize,
    pub h: f64,
    pub report: ErrorReport<f64>,
    pub wall_time: Duration,
}

/// Observed orders between two consecutive refinements of the same degree.
#[derive(Debug, Clone)]
pub struct OrderRecord {
    pub r: usize,
    pub n_coarse: usize,
    pub n_fine: usize,
    /// One entry per functional in [`FUNCTIONAL_NAMES`] order; `None` below [`RATE_FLOOR`].
    pub orders: [Option<f64>; 10],
}

impl OrderRecord {
    pub fn get(&self, name: &str) -> Option<f64> {
        FUNCTIONAL_NAMES
            .iter()
            .position(|&n| n == name)
            .and_then(|i| self.orders[i])
    }
}

#[derive(Debug, Clone)]
pub struct StudyResult {
    pub problem: String,
    pub runs: Vec<RunRecord>,
    pub orders: Vec<OrderRecord>,
}

/// `log2(e_coarse / e_fine)`, the order under one mesh halving.
pub fn observed_order(e_coarse: f64, e_fine: f64) -> Result<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0) {
        return Err(FvmError::DegenerateError {
            coarse: e_coarse,
            fine: e_fine,
        });
    }
    Ok((e_coarse / e_fine).log2())
}

/// Order between two refinements with an arbitrary `N` ratio; `None` when either error is at
/// the rounding floor.
pub fn order_between(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    if e_coarse > RATE_FLOOR && e_fine > RATE_FLOOR {
        let p = observed_order(e_coarse, e_fine).ok()?;
        Some(p / (n_fine as f64 / n_coarse as f64).log2())
    } else {
        None
    }
}

/// Solves one `(r, N)` case and measures every functional.
pub fn run_case(
    problem: &Problem<f64>,
    config: &StudyConfig,
    r: usize,
    n: usize,
) -> Result<RunRecord> {
    let start = Instant::now();
    let attach = |e: FvmError| FvmError::Run {
        r,
        n,
        source: Box::new(e),
    };
    let mesh = config.mesh.build(problem.a, problem.b, n).map_err(attach)?;
    let h = mesh.hmax();
    let d = Discretization::new(mesh, r, config.quad_order).map_err(attach)?;
    let sol = d.solve(problem).map_err(attach)?;
    let report = error_report(problem, &sol, &d.dual, config.norm_order).map_err(attach)?;
    Ok(RunRecord {
        r,
        n,
        h,
        report,
        wall_time: start.elapsed(),
    })
}

/// Runs every `(r, N)` pair; runs execute in parallel but results are ordered by `(r, N)`.
pub fn run_study(problem: &Problem<f64>, config: &StudyConfig) -> Result<StudyResult> {
    config.validate()?;
    let cases: Vec<(usize, usize)> = config
        .degrees
        .iter()
        .flat_map(|&r| config.refinements.iter().map(move |&n| (r, n)))
        .collect();
    let runs = cases
        .par_iter()
        .map(|&(r, n)| run_case(problem, config, r, n))
        .collect::<Result<Vec<_>>>()?;
    let orders = compute_orders(&runs);
    Ok(StudyResult {
        problem: problem.name.clone(),
        runs,
        orders,
    })
}

fn compute_orders(runs: &[RunRecord]) -> Vec<OrderRecord> {
    runs.windows(2)
        .filter(|w| w[0].r == w[1].r)
        .map(|w| {
            let (c, f) = (&w[0], &w[1]);
            let (vc, vf) = (c.report.values(), f.report.values());
            let mut orders = [None; 10];
            for i in 0..10 {
                orders[i] = order_between(vc[i], vf[i], c.n, f.n);
            }
            OrderRecord {
                r: c.r,
                n_coarse: c.n,
                n_fine: f.n,
                orders,
            }
        })
        .collect()
}

impl StudyResult {
    pub fn run(&self, r: usize, n: usize) -> Option<&RunRecord> {
        self.runs.iter().find(|run| run.r == r && run.n == n)
    }

    /// Order of `functional` at the finest pair of degree `r` where it is defined.
    pub fn finest_order(&self, r: usize, functional: &str) -> Option<(usize, usize, f64)> {
        self.orders
            .iter()
            .rev()
            .filter(|o| o.r == r)
            .find_map(|o| o.get(functional).map(|p| (o.n_coarse, o.n_fine, p)))
    }

    /// CSV text: one row per run, then the order rows (`order:<Nc>-<Nf>` in the `N` column).
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(256 * (self.runs.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for run in &self.runs {
            write!(out, "{},{},{}", run.r, run.n, sci6(run.h)).unwrap();
            for v in run.report.values() {
                write!(out, ",{}", sci6(v)).unwrap();
            }
            out.push('\n');
        }
        for o in &self.orders {
            write!(out, "{},order:{}-{},", o.r, o.n_coarse, o.n_fine).unwrap();
            for p in o.orders {
                match p {
                    Some(p) => write!(out, ",{p:.4}").unwrap(),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Lowercase scientific notation with six significant digits and a signed two-digit exponent,
/// e.g. `1.86180e-03`.
pub fn sci6(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}").to_lowercase();
    }
    let s = format!("{v:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}
