//! Continuous piecewise-polynomial trial space with Lagrange nodes at the Lobatto points.

use std::sync::Arc;

use crate::error::{FvmError, Result};
use crate::mesh::Mesh;
use crate::quadrature::{lobatto_rule, QuadRule};
use crate::scalar::Real;

/// Lagrange cardinal functions on a fixed set of reference nodes.
///
/// Uses the first barycentric form `l_j(t) = w_j * prod_{k != j} (t - t_k)`, which needs no
/// special case when `t` hits a node.
#[derive(Debug, Clone)]
pub struct LagrangeBasis<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> LagrangeBasis<T> {
    /// Panics if two nodes coincide.
    pub fn new(nodes: Vec<T>) -> Self {
        let weights = barycentric_weights(&nodes);
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Value and derivative of cardinal function `j` at `t`.
    pub fn eval(&self, j: usize, t: T) -> (T, T) {
        let n = self.nodes.len();
        let mut value = T::one();
        let mut deriv = T::zero();
        // running product and its derivative over k != j
        for k in (0..n).filter(|&k| k != j) {
            let d = t - self.nodes[k];
            deriv = deriv * d + value;
            value *= d;
        }
        (self.weights[j] * value, self.weights[j] * deriv)
    }

    /// Values and derivatives of every cardinal function at `t`.
    pub fn eval_all(&self, t: T, values: &mut [T], derivs: &mut [T]) {
        for j in 0..self.nodes.len() {
            let (v, d) = self.eval(j, t);
            values[j] = v;
            derivs[j] = d;
        }
    }

    /// Interpolant with nodal `values` evaluated at `t`.
    pub fn interpolate(&self, values: &[T], t: T) -> T {
        (0..self.nodes.len())
            .map(|j| values[j] * self.eval(j, t).0)
            .sum()
    }

    /// Derivative of the interpolant with nodal `values` at `t`.
    pub fn interpolate_deriv(&self, values: &[T], t: T) -> T {
        (0..self.nodes.len())
            .map(|j| values[j] * self.eval(j, t).1)
            .sum()
    }
}

pub(crate) fn barycentric_weights<T: Real>(nodes: &[T]) -> Vec<T> {
    (0..nodes.len())
        .map(|j| {
            let prod = nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .fold(T::one(), |acc, (_, &x)| acc * (nodes[j] - x));
            assert!(prod != T::zero(), "interpolation nodes must be distinct");
            T::one() / prod
        })
        .collect()
}

/// Value and derivative of cardinal function `j` on `nodes` at `t`.
pub fn shape_eval<T: Real>(nodes: &[T], j: usize, t: T) -> (T, T) {
    LagrangeBasis::new(nodes.to_vec()).eval(j, t)
}

/// Degree-`r` continuous Lagrange space on a mesh with homogeneous Dirichlet conditions.
///
/// Global node `e * r + j` is the `j`-th Lobatto point of element `e`; nodes `0` and `N r` are
/// the boundary and carry no unknown, so DOF `m` is global node `m + 1`.
#[derive(Debug, Clone)]
pub struct TrialSpace<T> {
    mesh: Mesh<T>,
    degree: usize,
    lobatto: QuadRule<T>,
    reference: LagrangeBasis<T>,
}

impl<T: Real> TrialSpace<T> {
    pub fn new(mesh: Mesh<T>, degree: usize) -> Result<Self> {
        let lobatto = lobatto_rule(degree)?;
        let reference = LagrangeBasis::new(lobatto.nodes().to_vec());
        Ok(Self {
            mesh,
            degree,
            lobatto,
            reference,
        })
    }

    pub fn mesh(&self) -> &Mesh<T> {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn lobatto(&self) -> &QuadRule<T> {
        &self.lobatto
    }

    pub fn reference(&self) -> &LagrangeBasis<T> {
        &self.reference
    }

    /// Number of unknowns `N r - 1`.
    pub fn dim(&self) -> usize {
        self.mesh.num_elements() * self.degree - 1
    }

    /// DOF carried by local node `j` of element `e`, or `None` on the boundary.
    pub fn dof(&self, e: usize, j: usize) -> Option<usize> {
        let global = e * self.degree + j;
        if global == 0 || global == self.mesh.num_elements() * self.degree {
            None
        } else {
            Some(global - 1)
        }
    }

    /// Lobatto points `l_{e,0..=r}` of element `e`.
    pub fn lobatto_points(&self, e: usize) -> impl Iterator<Item = T> + '_ {
        self.lobatto
            .nodes()
            .iter()
            .map(move |&t| self.mesh.map_to_element(e, t))
    }

    /// Physical position of every DOF.
    pub fn dof_positions(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.dim());
        for e in 0..self.mesh.num_elements() {
            for (j, x) in self.lobatto_points(e).enumerate() {
                if j == 0 {
                    continue;
                }
                if self.dof(e, j).is_some() {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Reference coordinate of `x` in element `e`.
    pub fn to_reference(&self, e: usize, x: T) -> T {
        let (l, r) = self.mesh.element(e);
        (T::lit(2.0) * x - l - r) / (r - l)
    }
}

/// A member of the trial space given by its values at the interior Lobatto points.
#[derive(Debug, Clone)]
pub struct Solution<T> {
    space: Arc<TrialSpace<T>>,
    coefficients: Vec<T>,
}

impl<T: Real> Solution<T> {
    pub fn new(space: Arc<TrialSpace<T>>, coefficients: Vec<T>) -> Result<Self> {
        if coefficients.len() != space.dim() {
            return Err(FvmError::LengthMismatch {
                expected: space.dim(),
                got: coefficients.len(),
            });
        }
        Ok(Self {
            space,
            coefficients,
        })
    }

    pub fn zero(space: Arc<TrialSpace<T>>) -> Self {
        let n = space.dim();
        Self {
            space,
            coefficients: vec![T::zero(); n],
        }
    }

    pub fn space(&self) -> &Arc<TrialSpace<T>> {
        &self.space
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    /// Nodal values `0..=r` of element `e`, boundary zeros included.
    pub fn element_values(&self, e: usize) -> Vec<T> {
        (0..=self.space.degree)
            .map(|j| {
                self.space
                    .dof(e, j)
                    .map_or(T::zero(), |m| self.coefficients[m])
            })
            .collect()
    }

    /// Value at reference coordinate `t` of element `e`.
    pub fn eval_local(&self, e: usize, t: T) -> T {
        self.space.reference.interpolate(&self.element_values(e), t)
    }

    /// Physical derivative at reference coordinate `t` of element `e`.
    pub fn deriv_local(&self, e: usize, t: T) -> T {
        let jac = T::lit(2.0) / self.space.mesh.width(e);
        jac * self
            .space
            .reference
            .interpolate_deriv(&self.element_values(e), t)
    }

    pub fn evaluate(&self, x: T) -> Result<T> {
        let e = self.space.mesh.locate(x)?;
        if x == self.space.mesh.a() || x == self.space.mesh.b() {
            return Ok(T::zero());
        }
        Ok(self.eval_local(e, self.space.to_reference(e, x)))
    }

    /// Derivative at `x`; at an interior primal node the left element is used.
    pub fn evaluate_deriv(&self, x: T) -> Result<T> {
        let e = self.space.mesh.locate(x)?;
        Ok(self.deriv_local(e, self.space.to_reference(e, x)))
    }

    /// Derivative at `x` using element `e` explicitly (one-sided limits at nodes).
    pub fn deriv_in_element(&self, e: usize, x: T) -> T {
        self.deriv_local(e, self.space.to_reference(e, x))
    }

    pub fn eval_in_element(&self, e: usize, x: T) -> T {
        self.eval_local(e, self.space.to_reference(e, x))
    }
}

/// Lobatto interpolant `u_I` of `u`, which must vanish at both ends of the domain.
pub fn interpolate<T: Real>(space: Arc<TrialSpace<T>>, u: impl Fn(T) -> T) -> Result<Solution<T>> {
    let ua = u(space.mesh().a());
    let ub = u(space.mesh().b());
    let tol = T::lit(1e-12);
    if !(ua.abs() <= tol && ub.abs() <= tol) {
        return Err(FvmError::BoundaryMismatch {
            ua: ua.as_f64(),
            ub: ub.as_f64(),
        });
    }
    let coefficients = space.dof_positions().into_iter().map(u).collect();
    Solution::new(space, coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn space(n: usize, r: usize) -> Arc<TrialSpace<f64>> {
        Arc::new(TrialSpace::new(Mesh::uniform(0.0, 1.0, n).unwrap(), r).unwrap())
    }

    #[test]
    fn shape_examples() {
        let lob1 = lobatto_rule::<f64>(1).unwrap();
        assert_eq!(shape_eval(lob1.nodes(), 0, -1.0), (1.0, -0.5));

        let lob2 = lobatto_rule::<f64>(2).unwrap();
        let (v, d) = shape_eval(lob2.nodes(), 1, 0.0);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-15);

        let lob3 = lobatto_rule::<f64>(3).unwrap();
        let (v, _) = shape_eval(lob3.nodes(), 2, lob3.nodes()[2]);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cardinal_and_partition_of_unity() {
        for r in 1..=20 {
            let lob = lobatto_rule::<f64>(r).unwrap();
            let basis = LagrangeBasis::new(lob.nodes().to_vec());
            for (k, &tk) in lob.nodes().iter().enumerate() {
                for j in 0..=r {
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(basis.eval(j, tk).0, want, epsilon = 1e-12);
                }
            }
            for i in 0..=50 {
                let t = -1.0 + 2.0 * i as f64 / 50.0;
                let sum: f64 = (0..=r).map(|j| basis.eval(j, t).0).sum();
                let dsum: f64 = (0..=r).map(|j| basis.eval(j, t).1).sum();
                assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-13);
                assert_abs_diff_eq!(dsum, 0.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn dimension_and_dofs() {
        let s = space(3, 4);
        assert_eq!(s.dim(), 11);
        assert_eq!(s.dof(0, 0), None);
        assert_eq!(s.dof(0, 4), Some(3));
        assert_eq!(s.dof(1, 0), Some(3));
        assert_eq!(s.dof(2, 4), None);
        assert_eq!(s.dof_positions().len(), s.dim());
    }

    #[test]
    fn zero_solution_and_boundary() {
        let sol = Solution::zero(space(4, 3));
        for i in 0..=20 {
            assert_eq!(sol.evaluate(i as f64 / 20.0).unwrap(), 0.0);
        }
        assert!(matches!(
            sol.evaluate(1.1),
            Err(FvmError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn quadratic_reproduced() {
        for n in [1, 2, 5] {
            let sol = interpolate(space(n, 2), |x| x * (1.0 - x)).unwrap();
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                assert_abs_diff_eq!(sol.evaluate(x).unwrap(), x * (1.0 - x), epsilon = 1e-13);
                assert_abs_diff_eq!(
                    sol.evaluate_deriv(x).unwrap(),
                    1.0 - 2.0 * x,
                    epsilon = 1e-12
                );
            }
            assert_abs_diff_eq!(sol.evaluate_deriv(0.5).unwrap(), 0.0, epsilon = 1e-12);
        }
        let sol = interpolate(space(1, 2), |x| x * (1.0 - x)).unwrap();
        assert_eq!(sol.coefficients(), &[0.25]);
    }

    #[test]
    fn interpolation_rejects_nonzero_boundary() {
        assert!(matches!(
            interpolate(space(2, 2), |x| x + 1.0),
            Err(FvmError::BoundaryMismatch { .. })
        ));
    }

    #[test]
    fn coefficient_length_checked() {
        assert!(Solution::new(space(2, 2), vec![0.0; 2]).is_err());
    }
}
