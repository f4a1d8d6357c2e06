//! Prints errors and observed orders for the sine-polynomial problem at degree 4.

use fvm1d::builtin;
use fvm1d::harness::study::{run_study, sci6, StudyConfig};

fn main() -> fvm1d::Result<()> {
    let problem = builtin("example1")?;
    let result = run_study(&problem, &StudyConfig::new(vec![4], vec![2, 4, 8, 16, 32]))?;
    println!(
        "{:>4} {:>12} {:>12} {:>12} {:>12}",
        "N", "l2", "h1", "aver0", "e_node"
    );
    for run in &result.runs {
        let e = &run.report;
        println!(
            "{:>4} {:>12} {:>12} {:>12} {:>12}",
            run.n,
            sci6(e.l2),
            sci6(e.h1),
            sci6(e.aver0),
            sci6(e.e_node)
        );
    }
    for o in &result.orders {
        println!(
            "order {:>2} -> {:<2}  l2 {:.2}  h1 {:.2}",
            o.n_coarse,
            o.n_fine,
            o.get("l2").unwrap_or(f64::NAN),
            o.get("h1").unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
