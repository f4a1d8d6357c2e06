use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fvm1d::harness::config::load_problem;
use fvm1d::harness::golden::{builtin_tables, run_golden, GoldenTable};
use fvm1d::harness::study::{run_case, run_study, sci6, MeshFamily, StudyConfig};
use fvm1d::norms::FUNCTIONAL_NAMES;
use fvm1d::postprocess::{recover, sample_grid};
use fvm1d::{infsup_estimate, Discretization, Problem64};

#[derive(Parser)]
#[command(
    name = "fvm1d",
    version,
    about = "Arbitrary-order finite volume solver for 1D elliptic problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (r, N) case and print every error functional.
    Solve(CaseArgs),
    /// Sweep degrees and refinements and write the results as CSV.
    Study {
        #[command(flatten)]
        common: CommonArgs,
        /// Degrees, comma separated.
        #[arg(long = "r", value_delimiter = ',', default_value = "4")]
        r: Vec<usize>,
        /// Element counts, comma separated and increasing.
        #[arg(long = "n", value_delimiter = ',', default_value = "2,4,8,16,32,64")]
        n: Vec<usize>,
        /// Write CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the bundled reference tables (or the given golden files).
    Golden {
        /// Golden file paths or bundled table names; defaults to all bundled tables.
        tables: Vec<String>,
    },
    /// Sample the recovered derivative on a uniform grid plus the mesh nodes.
    Recover {
        #[command(flatten)]
        case: CaseArgs,
        /// Number of uniform sample points.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Write CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the discrete inf-sup estimate for each N.
    Diag {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "r", default_value_t = 4)]
        r: usize,
        #[arg(long = "n", value_delimiter = ',', default_value = "2,4,8,16,32")]
        n: Vec<usize>,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// Built-in problem name or path to a problem description file.
    #[arg(long, default_value = "example1")]
    problem: String,
    /// `uniform` or `graded:<ratio>`.
    #[arg(long, default_value = "uniform")]
    mesh: MeshFamily,
    /// Gauss order for the load and lower-order integrals.
    #[arg(long)]
    quad_order: Option<usize>,
}

#[derive(Args)]
struct CaseArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long = "r", default_value_t = 4)]
    r: usize,
    #[arg(long = "n", default_value_t = 8)]
    n: usize,
}

fn problem(name: &str) -> Result<Problem64> {
    load_problem(name).with_context(|| format!("loading problem '{name}'"))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(args: &CaseArgs) -> Result<()> {
    let p = problem(&args.common.problem)?;
    let mut config = StudyConfig::new(vec![args.r], vec![args.n]);
    config.mesh = args.common.mesh;
    config.quad_order = args.common.quad_order;
    let run = run_case(&p, &config, args.r, args.n)?;
    println!(
        "problem {}  r = {}  N = {}  h = {}",
        p.name,
        run.r,
        run.n,
        sci6(run.h)
    );
    for (name, v) in FUNCTIONAL_NAMES.iter().zip(run.report.values()) {
        println!("  {name:<16} {}", sci6(v));
    }
    println!(
        "  wall time        {:.3} ms",
        run.wall_time.as_secs_f64() * 1e3
    );
    Ok(())
}

fn study(common: &CommonArgs, r: Vec<usize>, n: Vec<usize>, out: Option<&Path>) -> Result<()> {
    let p = problem(&common.problem)?;
    let mut config = StudyConfig::new(r, n);
    config.mesh = common.mesh;
    config.quad_order = common.quad_order;
    let result = run_study(&p, &config)?;
    emit(&result.to_csv(), out)
}

fn golden(names: &[String]) -> Result<bool> {
    let bundled = builtin_tables();
    let tables: Vec<GoldenTable> = if names.is_empty() {
        bundled.into_iter().map(|(_, t)| t).collect()
    } else {
        names
            .iter()
            .map(|name| match bundled.iter().find(|(n, _)| n == name) {
                Some((_, t)) => Ok(t.clone()),
                None => {
                    let text =
                        fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
                    GoldenTable::parse(&text).with_context(|| format!("parsing {name}"))
                }
            })
            .collect::<Result<_>>()?
    };
    let mut all_pass = true;
    for table in &tables {
        let report = run_golden(table)?;
        print!("{report}");
        all_pass &= report.passed();
    }
    Ok(all_pass)
}

fn recover_cmd(args: &CaseArgs, grid: usize, out: Option<&Path>) -> Result<()> {
    if grid < 2 {
        bail!("--grid must be at least 2");
    }
    let p = problem(&args.common.problem)?;
    let mesh = args.common.mesh.build(p.a, p.b, args.n)?;
    let d = Discretization::new(mesh, args.r, args.common.quad_order)?;
    let sol = d.solve(&p)?;
    let rec = recover(&sol, &d.dual)?;
    let exact = p.exact_du();
    let mut text = String::from(if exact.is_some() {
        "x,recovered,exact\n"
    } else {
        "x,recovered\n"
    });
    for x in sample_grid(rec.mesh(), grid) {
        let v = rec.evaluate(x)?;
        match &exact {
            Some(du) => text.push_str(&format!("{},{},{}\n", sci6(x), sci6(v), sci6(du(x)))),
            None => text.push_str(&format!("{},{}\n", sci6(x), sci6(v))),
        }
    }
    emit(&text, out)
}

fn diag(common: &CommonArgs, r: usize, n: &[usize]) -> Result<()> {
    let p = problem(&common.problem)?;
    println!("N,infsup");
    for &ni in n {
        let mesh = common.mesh.build(p.a, p.b, ni)?;
        let c = infsup_estimate(&p, &mesh, r)?;
        println!("{ni},{}", sci6(c));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(args) => solve(args).map(|_| true),
        Command::Study { common, r, n, out } => {
            study(common, r.clone(), n.clone(), out.as_deref()).map(|_| true)
        }
        Command::Golden { tables } => golden(tables),
        Command::Recover { case, grid, out } => {
            recover_cmd(case, *grid, out.as_deref()).map(|_| true)
        }
        Command::Diag { common, r, n } => diag(common, *r, n).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
