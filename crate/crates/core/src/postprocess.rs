//! Recovery of `u'` on the whole domain from the Gauss-point derivatives of `u_P`.
//!
//! For every interior node `x_i` a polynomial of degree `2r - 1` interpolates `u_P'` at the
//! `2r` Gauss points of the two elements sharing `x_i`. The first and last elements use their
//! single stencil; every other element averages the two stencils that cover it.

use crate::basis::{LagrangeBasis, Solution};
use crate::error::{FvmError, Result};
use crate::mesh::{DualPartition, Mesh};
use crate::scalar::Real;

/// Degree `2r - 1` interpolant on `[x_{i-1}, x_{i+1}]`, stored in reference coordinates.
#[derive(Debug, Clone)]
pub struct Stencil<T> {
    left: T,
    right: T,
    basis: LagrangeBasis<T>,
    values: Vec<T>,
}

impl<T: Real> Stencil<T> {
    fn new(left: T, right: T, points: &[T], values: Vec<T>) -> Self {
        let nodes = points
            .iter()
            .map(|&x| (T::lit(2.0) * x - left - right) / (right - left))
            .collect();
        Self {
            left,
            right,
            basis: LagrangeBasis::new(nodes),
            values,
        }
    }

    pub fn eval(&self, x: T) -> T {
        let t = (T::lit(2.0) * x - self.left - self.right) / (self.right - self.left);
        self.basis.interpolate(&self.values, t)
    }

    pub fn span(&self) -> (T, T) {
        (self.left, self.right)
    }
}

/// Piecewise recovered derivative `v`.
#[derive(Debug, Clone)]
pub struct RecoveredDerivative<T> {
    mesh: Mesh<T>,
    stencils: Vec<Stencil<T>>,
}

impl<T: Real> RecoveredDerivative<T> {
    pub fn stencils(&self) -> &[Stencil<T>] {
        &self.stencils
    }

    /// Stencils contributing on element `e` (one at either end, two in between).
    pub fn pieces(&self, e: usize) -> &[Stencil<T>] {
        let n = self.mesh.num_elements();
        if e == 0 {
            &self.stencils[..1]
        } else if e + 1 == n {
            &self.stencils[n - 2..]
        } else {
            &self.stencils[e - 1..=e]
        }
    }

    /// `v` on element `e` (used for one-sided limits at primal nodes).
    pub fn eval_in_element(&self, e: usize, x: T) -> T {
        let pieces = self.pieces(e);
        let sum: T = pieces.iter().map(|s| s.eval(x)).sum();
        sum / T::from_index(pieces.len())
    }

    /// `v(x)`; at an interior primal node the left element is used.
    pub fn evaluate(&self, x: T) -> Result<T> {
        let e = self.mesh.locate(x)?;
        Ok(self.eval_in_element(e, x))
    }

    pub fn mesh(&self) -> &Mesh<T> {
        &self.mesh
    }
}

/// Builds the recovered derivative of `sol`; needs at least two elements.
pub fn recover<T: Real>(
    sol: &Solution<T>,
    dual: &DualPartition<T>,
) -> Result<RecoveredDerivative<T>> {
    let derivs: Vec<T> = dual
        .gauss_points()
        .iter()
        .enumerate()
        .map(|(q, &g)| sol.deriv_in_element(dual.element_of_point(q), g))
        .collect();
    recover_from_values(sol.space().mesh(), dual, &derivs)
}

/// Recovery from arbitrary derivative values at the `N r` Gauss points of `dual`.
pub fn recover_from_values<T: Real>(
    mesh: &Mesh<T>,
    dual: &DualPartition<T>,
    derivs: &[T],
) -> Result<RecoveredDerivative<T>> {
    let mesh = mesh.clone();
    let n = mesh.num_elements();
    if n < 2 {
        return Err(FvmError::MeshTooCoarse(n));
    }
    let points = dual.gauss_points();
    if derivs.len() != points.len() {
        return Err(FvmError::LengthMismatch {
            expected: points.len(),
            got: derivs.len(),
        });
    }
    let r = dual.order();
    let stencils = (0..n - 1)
        .map(|i| {
            let range = i * r..(i + 2) * r;
            Stencil::new(
                mesh.nodes()[i],
                mesh.nodes()[i + 2],
                &points[range.clone()],
                derivs[range].to_vec(),
            )
        })
        .collect();
    Ok(RecoveredDerivative { mesh, stencils })
}

/// Sample abscissae: a uniform grid of `grid_points` merged with the primal nodes.
pub fn sample_grid<T: Real>(mesh: &Mesh<T>, grid_points: usize) -> Vec<T> {
    let (a, b) = (mesh.a(), mesh.b());
    let steps = grid_points.max(2) - 1;
    let mut xs: Vec<T> = (0..=steps)
        .map(|k| a + (b - a) * T::from_index(k) / T::from_index(steps))
        .chain(mesh.nodes().iter().copied())
        .collect();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("finite abscissae"));
    xs.dedup();
    xs
}

/// `max |u'(x) - v(x)|` over [`sample_grid`], taking both one-sided limits at primal nodes.
pub fn recovered_sup_error<T: Real>(
    rec: &RecoveredDerivative<T>,
    u_prime: impl Fn(T) -> T,
    grid_points: usize,
) -> Result<T> {
    if grid_points < 2 {
        return Err(FvmError::InvalidConfig(format!(
            "need at least 2 grid points, got {grid_points}"
        )));
    }
    let mesh = &rec.mesh;
    let mut worst = T::zero();
    for x in sample_grid(mesh, grid_points) {
        let e = mesh.locate(x)?;
        let exact = u_prime(x);
        worst = worst.max((exact - rec.eval_in_element(e, x)).abs());
        if e + 1 < mesh.num_elements() && x == mesh.nodes()[e + 1] {
            worst = worst.max((exact - rec.eval_in_element(e + 1, x)).abs());
        }
    }
    Ok(worst)
}
