//! Flux-balance equations on the control volumes and their solution.
//!
//! Row `k` of the system is the balance over active control volume `[g_k, g_{k+1}]`:
//!
//! ```text
//! α(g_k) u'(g_k) - α(g_{k+1}) u'(g_{k+1}) + ∫ (β u' + γ u) = ∫ f
//! ```
//!
//! with the fluxes sampled pointwise and the volume integrals split at a straddled primal node.

use std::sync::Arc;

use crate::banded::BandMatrix;
use crate::basis::{Solution, TrialSpace};
use crate::error::{FvmError, Result};
use crate::mesh::DualPartition;
use crate::problem::Problem;
use crate::quadrature::{gauss_rule, QuadRule};
use crate::scalar::Real;

/// Volume-integral rule order used when none is given.
pub fn default_quad_order(r: usize) -> usize {
    (r + 2).max(8)
}

/// Assembled linear system: row `k` is control volume `k`, column `m` is trial DOF `m`.
#[derive(Debug, Clone)]
pub struct FvmSystem<T> {
    pub matrix: BandMatrix<T>,
    pub rhs: Vec<T>,
    space: Arc<TrialSpace<T>>,
}

impl<T: Real> FvmSystem<T> {
    pub fn space(&self) -> &Arc<TrialSpace<T>> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    /// `a_P(v, w)` for trial coefficients `v` and test coefficients `w`.
    pub fn bilinear(&self, v: &[T], w: &[T]) -> T {
        self.matrix
            .mul_vec(v)
            .iter()
            .zip(w)
            .map(|(av, wk)| *av * *wk)
            .sum()
    }

    /// Row-wise residual `A x - b`.
    pub fn residual(&self, x: &[T]) -> Vec<T> {
        self.matrix
            .mul_vec(x)
            .into_iter()
            .zip(&self.rhs)
            .map(|(ax, b)| ax - *b)
            .collect()
    }
}

fn check_compatible<T: Real>(space: &TrialSpace<T>, dual: &DualPartition<T>) -> Result<()> {
    let n = space.mesh().num_elements();
    if dual.order() != space.degree() || dual.gauss_points().len() != n * space.degree() {
        return Err(FvmError::InvalidConfig(format!(
            "dual partition (order {}, {} points) does not match trial space (degree {}, N = {n})",
            dual.order(),
            dual.gauss_points().len(),
            space.degree()
        )));
    }
    Ok(())
}

struct ElementEvaluator<'a, T> {
    space: &'a TrialSpace<T>,
    values: Vec<T>,
    derivs: Vec<T>,
}

impl<'a, T: Real> ElementEvaluator<'a, T> {
    fn new(space: &'a TrialSpace<T>) -> Self {
        let n = space.degree() + 1;
        Self {
            space,
            values: vec![T::zero(); n],
            derivs: vec![T::zero(); n],
        }
    }

    /// Fills shape values and physical derivatives of element `e` at `x`.
    fn at(&mut self, e: usize, x: T) {
        let t = self.space.to_reference(e, x);
        self.space
            .reference()
            .eval_all(t, &mut self.values, &mut self.derivs);
        let jac = T::lit(2.0) / self.space.mesh().width(e);
        for d in &mut self.derivs {
            *d *= jac;
        }
    }
}

/// Assembles the finite volume system for `problem`.
pub fn assemble<T: Real>(
    problem: &Problem<T>,
    space: &Arc<TrialSpace<T>>,
    dual: &DualPartition<T>,
    quad_order: usize,
) -> Result<FvmSystem<T>> {
    check_compatible(space, dual)?;
    let r = space.degree();
    if quad_order < r + 2 {
        return Err(FvmError::InvalidConfig(format!(
            "quadrature order {quad_order} below r + 2 = {}",
            r + 2
        )));
    }
    let rule: QuadRule<T> = gauss_rule(quad_order)?;
    let mesh = space.mesh();
    let n = space.dim();
    let mut matrix = BandMatrix::zeros(n, r, r);
    let mut rhs = vec![T::zero(); n];
    let mut eval = ElementEvaluator::new(space);
    let points = dual.gauss_points();

    for (k, volume) in dual.volumes().iter().enumerate() {
        let sides = [(k, T::one()), (k + 1, -T::one())];
        for (q, sign) in sides {
            let e = dual.element_of_point(q);
            let g = points[q];
            let flux = sign * (problem.alpha)(g);
            eval.at(e, g);
            for j in 0..=r {
                if let Some(m) = space.dof(e, j) {
                    matrix.add(k, m, flux * eval.derivs[j]);
                }
            }
        }

        let left_elem = dual.element_of_point(k);
        let segments: Vec<(usize, T, T)> = match volume.straddled {
            Some(x) => vec![
                (left_elem, volume.left, x),
                (left_elem + 1, x, volume.right),
            ],
            None => vec![(left_elem, volume.left, volume.right)],
        };
        debug_assert!(segments.iter().all(|&(e, l, rr)| {
            let (xl, xr) = mesh.element(e);
            l >= xl && rr <= xr
        }));
        for (e, lo, hi) in segments {
            let half = (hi - lo) * T::lit(0.5);
            let mid = (hi + lo) * T::lit(0.5);
            for (t, w) in rule.points() {
                let x = mid + half * t;
                let wx = half * w;
                let (beta, gamma) = ((problem.beta)(x), (problem.gamma)(x));
                rhs[k] += wx * (problem.f)(x);
                eval.at(e, x);
                for j in 0..=r {
                    if let Some(m) = space.dof(e, j) {
                        matrix.add(k, m, wx * (beta * eval.derivs[j] + gamma * eval.values[j]));
                    }
                }
            }
        }
    }
    Ok(FvmSystem {
        matrix,
        rhs,
        space: Arc::clone(space),
    })
}

/// Solves the system by banded LU with partial pivoting.
pub fn solve<T: Real>(system: &FvmSystem<T>) -> Result<Solution<T>> {
    let lu = system.matrix.clone().factor()?;
    let x = lu.solve(&system.rhs)?;
    Solution::new(Arc::clone(&system.space), x)
}

/// Coefficients of `Π_P v`: test values built left to right from the jumps `A_{i,j} v'(g_{i,j})`.
pub fn project_to_test<T: Real>(dual: &DualPartition<T>, v: &Solution<T>) -> Vec<T> {
    let jumps = weighted_gauss_derivatives(dual, v);
    let mut acc = T::zero();
    jumps[..jumps.len() - 1]
        .iter()
        .map(|&jump| {
            acc += jump;
            acc
        })
        .collect()
}

/// `A_{i,j} v'(g_{i,j})` at every Gauss point in order.
pub fn weighted_gauss_derivatives<T: Real>(dual: &DualPartition<T>, v: &Solution<T>) -> Vec<T> {
    dual.gauss_points()
        .iter()
        .zip(dual.gauss_weights())
        .enumerate()
        .map(|(q, (&g, &a))| a * v.deriv_in_element(dual.element_of_point(q), g))
        .collect()
}

/// Trial space, dual partition and rule order bundled for one `(mesh, r)` pair.
#[derive(Debug, Clone)]
pub struct Discretization<T> {
    pub space: Arc<TrialSpace<T>>,
    pub dual: DualPartition<T>,
    pub quad_order: usize,
}

impl<T: Real> Discretization<T> {
    pub fn new(mesh: crate::mesh::Mesh<T>, r: usize, quad_order: Option<usize>) -> Result<Self> {
        let rule = gauss_rule(r)?;
        let dual = DualPartition::build(&mesh, &rule)?;
        let space = Arc::new(TrialSpace::new(mesh, r)?);
        Ok(Self {
            space,
            dual,
            quad_order: quad_order.unwrap_or_else(|| default_quad_order(r)),
        })
    }

    pub fn assemble(&self, problem: &Problem<T>) -> Result<FvmSystem<T>> {
        assemble(problem, &self.space, &self.dual, self.quad_order)
    }

    pub fn solve(&self, problem: &Problem<T>) -> Result<Solution<T>> {
        solve(&self.assemble(problem)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::interpolate;
    use crate::mesh::Mesh;
    use crate::problem::func;
    use crate::problems::builtin;
    use approx::assert_abs_diff_eq;

    fn poisson(f: f64) -> Problem<f64> {
        Problem::new(
            "poisson",
            (0.0, 1.0),
            func(|_| 1.0),
            func(|_| 0.0),
            func(|_| 0.0),
            func(move |_| f),
        )
        .with_bounds(1.0, 0.0)
    }

    fn disc(n: usize, r: usize) -> Discretization<f64> {
        Discretization::new(Mesh::uniform(0.0, 1.0, n).unwrap(), r, None).unwrap()
    }

    #[test]
    fn linear_poisson_stencil() {
        // midpoint fluxes of hat functions: [-1/h, 2/h, -1/h] with h = 1/4
        let sys = disc(4, 1).assemble(&poisson(0.0)).unwrap();
        assert_eq!(sys.dim(), 3);
        assert_abs_diff_eq!(sys.matrix.get(1, 0), -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sys.matrix.get(1, 1), 8.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sys.matrix.get(1, 2), -4.0, epsilon = 1e-12);
    }

    #[test]
    fn pure_diffusion_rows_annihilate_constants() {
        for (n, r) in [(3, 2), (4, 3), (2, 5)] {
            let d = disc(n, r);
            let sys = d.assemble(&poisson(1.0)).unwrap();
            // a volume away from the boundary sees every DOF of its elements
            for k in 0..sys.dim() {
                let (g_l, g_r) = (k, k + 1);
                let e_l = d.dual.element_of_point(g_l);
                let e_r = d.dual.element_of_point(g_r);
                let touches_boundary = e_l == 0 || e_r + 1 == n;
                if touches_boundary {
                    continue;
                }
                let sum: f64 = sys.matrix.row_range(k).map(|m| sys.matrix.get(k, m)).sum();
                assert_abs_diff_eq!(sum, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn example1_dimension() {
        let d = disc(2, 4);
        let sys = d.assemble(&builtin("example1").unwrap()).unwrap();
        assert_eq!(sys.dim(), 7);
        assert_eq!(sys.matrix.dim(), 7);
    }

    #[test]
    fn bandwidth_respected() {
        let d = disc(5, 3);
        let sys = d.assemble(&builtin("example1").unwrap()).unwrap();
        let dense = sys.matrix.to_dense();
        for (k, row) in dense.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                if k.abs_diff(m) > 2 * 3 {
                    assert_eq!(*v, 0.0);
                }
            }
        }
    }

    #[test]
    fn parabola_solved_exactly() {
        for n in [1, 2, 3, 7] {
            let d = disc(n, 2);
            let sol = d.solve(&poisson(2.0)).unwrap();
            for (x, c) in d.space.dof_positions().iter().zip(sol.coefficients()) {
                assert_abs_diff_eq!(*c, x * (1.0 - x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn zero_source_gives_zero() {
        let sol = disc(4, 3).solve(&poisson(0.0)).unwrap();
        assert!(sol.coefficients().iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn residual_within_tolerance() {
        let d = disc(8, 4);
        let sys = d.assemble(&builtin("example1").unwrap()).unwrap();
        let sol = solve(&sys).unwrap();
        let x = sol.coefficients();
        let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bn = sys.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = 1e-10 * (sys.matrix.norm_inf() * xn + bn);
        assert!(sys.residual(x).iter().all(|r| r.abs() <= tol));
    }

    #[test]
    fn quad_order_too_low_rejected() {
        let d = disc(2, 4);
        let p = builtin("example1").unwrap();
        assert!(assemble(&p, &d.space, &d.dual, 5).is_err());
    }

    #[test]
    fn projection_of_hat() {
        // r = 1, N = 2: v' = ±2 at the midpoints, A = 1/2, so the single coefficient is 1
        let d = disc(2, 1);
        let v = Solution::new(Arc::clone(&d.space), vec![1.0]).unwrap();
        let w = project_to_test(&d.dual, &v);
        assert_eq!(w.len(), 1);
        assert_abs_diff_eq!(w[0], 1.0, epsilon = 1e-15);
        let zero = Solution::zero(Arc::clone(&d.space));
        assert!(project_to_test(&d.dual, &zero).iter().all(|&c| c == 0.0));
    }

    #[test]
    fn projection_telescopes() {
        let d = disc(5, 3);
        let v = interpolate(Arc::clone(&d.space), |x: f64| {
            (3.0 * x).sin() * x * (1.0 - x)
        })
        .unwrap();
        let jumps = weighted_gauss_derivatives(&d.dual, &v);
        assert_abs_diff_eq!(jumps.iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        let w = project_to_test(&d.dual, &v);
        let closing = 0.0 - w[w.len() - 1];
        assert_abs_diff_eq!(closing, jumps[jumps.len() - 1], epsilon = 1e-10);
    }

    #[test]
    fn mismatched_dual_rejected() {
        let d3 = disc(3, 3);
        let d2 = disc(3, 2);
        let p = poisson(1.0);
        assert!(assemble(&p, &d3.space, &d2.dual, 8).is_err());
    }
}
