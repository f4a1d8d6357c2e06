#![allow(dead_code)]

use std::sync::Arc;

use fvm1d::assembly::{project_to_test, weighted_gauss_derivatives};
use fvm1d::basis::Solution;
use fvm1d::diagnostics::{test_gram, test_norms};
use fvm1d::norms::continuous_norms;
use fvm1d::problem::{func, ExactSolution, Problem};
use fvm1d::{Discretization, DualPartition, Mesh, TrialSpace};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mesh of `[a, b]` with `n` elements whose widths vary by up to a factor of about 5.
pub fn random_mesh(rng: &mut ChaCha8Rng, a: f64, b: f64, n: usize) -> Mesh<f64> {
    let widths: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..1.0)).collect();
    let total: f64 = widths.iter().sum();
    let mut nodes = Vec::with_capacity(n + 1);
    let mut x = a;
    nodes.push(a);
    for w in &widths[..n - 1] {
        x += (b - a) * w / total;
        nodes.push(x);
    }
    nodes.push(b);
    Mesh::from_nodes(nodes).unwrap()
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// Constant-coefficient problem on `[a, b]` whose exact solution is
/// `(x - a)(b - x) q(x)` with `q` given by its monomial coefficients.
pub fn in_space_problem(
    (a, b): (f64, f64),
    (alpha, beta, gamma): (f64, f64, f64),
    q: &[f64],
) -> Problem<f64> {
    // (x - a)(b - x) = -ab + (a + b) x - x^2
    let mut u = vec![0.0; q.len() + 2];
    for (k, &qk) in q.iter().enumerate() {
        u[k] += -a * b * qk;
        u[k + 1] += (a + b) * qk;
        u[k + 2] -= qk;
    }
    let du = poly_deriv(&u);
    let ddu = poly_deriv(&du);
    let exact = ExactSolution {
        u: func(move |x| poly(&u, x)),
        du: Some(func(move |x| poly(&du, x))),
        ddu: Some(func(move |x| poly(&ddu, x))),
    };
    Problem::manufactured(
        "in-space",
        (a, b),
        func(move |_| alpha),
        func(|_| 0.0),
        func(move |_| beta),
        func(move |_| gamma),
        exact,
    )
    .unwrap()
}

/// Largest deviation between the discrete and exact solutions at the trial DOFs, relative to
/// `max(1, max |u|)`.
pub fn dof_error(d: &Discretization<f64>, p: &Problem<f64>) -> f64 {
    let sol = d.solve(p).unwrap();
    let u = p.exact_u().unwrap();
    let xs = d.space.dof_positions();
    let scale = xs.iter().map(|&x| u(x).abs()).fold(1.0, f64::max);
    xs.iter()
        .zip(sol.coefficients())
        .map(|(&x, &c)| (u(x) - c).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Relative defect of the telescoping identity `sum_q A_q v'(g_q) = 0`.
pub fn telescoping_defect(v: &Solution<f64>, dual: &DualPartition<f64>) -> f64 {
    let terms = weighted_gauss_derivatives(dual, v);
    let scale: f64 = terms
        .iter()
        .map(|t| t.abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let w = project_to_test(dual, v);
    let last = *w.last().unwrap_or(&0.0);
    // closing jump of Π_P v equals the last weighted derivative
    (-last - terms[terms.len() - 1]).abs() / scale
}

pub fn random_solution(rng: &mut ChaCha8Rng, space: &Arc<TrialSpace<f64>>) -> Solution<f64> {
    let c = (0..space.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    Solution::new(space.clone(), c).unwrap()
}

/// Sharp constant in `‖w‖_{0,P'} <= C |w|_{1,P'}`: square root of the largest generalized
/// eigenvalue of (mass, jump) Gram matrices.
pub fn poincare_constant(mesh: &Mesh<f64>, dual: &DualPartition<f64>) -> f64 {
    let n = dual.num_active();
    let full = test_gram(mesh, dual);
    let mass = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            mesh.width(dual.element_of_point(i))
        } else {
            0.0
        }
    });
    let jump = &full - &mass;
    let l = jump.cholesky().expect("jump Gram is positive definite").l();
    let li = l.clone().try_inverse().unwrap();
    let sym = &li * mass * li.transpose();
    let eig = sym.symmetric_eigenvalues();
    eig.iter().copied().fold(0.0, f64::max).sqrt()
}

/// Largest `‖w‖_0 / |w|_1` over `samples` random test vectors.
pub fn poincare_sample_max(
    rng: &mut ChaCha8Rng,
    mesh: &Mesh<f64>,
    dual: &DualPartition<f64>,
    samples: usize,
) -> f64 {
    (0..samples)
        .map(|_| {
            let w: Vec<f64> = (0..dual.num_active())
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let nrm = test_norms(&w, mesh, dual).unwrap();
            nrm.norm0 / nrm.seminorm1
        })
        .fold(0.0, f64::max)
}

/// `|Π_P v|_{1,P'} / |v|_{1,P}` for random trial functions; returns `(min, max)`.
pub fn projection_ratio_range(
    rng: &mut ChaCha8Rng,
    d: &Discretization<f64>,
    samples: usize,
) -> (f64, f64) {
    let mesh = d.space.mesh();
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for _ in 0..samples {
        let v = random_solution(rng, &d.space);
        let w = project_to_test(&d.dual, &v);
        let num = test_norms(&w, mesh, &d.dual).unwrap().seminorm1;
        let (_, den) = continuous_norms(
            |_, _| 0.0,
            |e, x| v.deriv_in_element(e, x),
            mesh,
            d.space.degree() + 1,
        )
        .unwrap();
        let ratio = num / den;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    (lo, hi)
}

/// Checks `lo <= x <= hi` and formats a failure message otherwise.
pub fn window(label: &str, x: Option<f64>, lo: f64, hi: f64) -> Result<String, String> {
    match x {
        Some(v) if v >= lo && v <= hi => Ok(format!("{label} {v:.3} in [{lo:.1}, {hi:.1}]")),
        Some(v) => Err(format!("{label} {v:.3} outside [{lo:.1}, {hi:.1}]")),
        None => Err(format!("{label}: no resolved pair")),
    }
}
