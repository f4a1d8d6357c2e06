//! Error functionals: broken Sobolev norms and the discrete Gauss, Lobatto and nodal measures.

use std::sync::Arc;

use crate::basis::{interpolate, Solution};
use crate::error::{FvmError, Result};
use crate::mesh::{DualPartition, Mesh};
use crate::problem::Problem;
use crate::quadrature::gauss_rule;
use crate::scalar::Real;

/// Element quadrature order used for the continuous norms when none is given.
pub fn default_norm_order(r: usize) -> usize {
    (r + 3).max(10)
}

/// Every error functional of one solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport<T> {
    /// `‖u - u_P‖_0`
    pub l2: T,
    /// `‖u - u_P‖_1`
    pub h1: T,
    /// `|u - u_P|_1` (broken)
    pub h1_semi: T,
    /// `|u_I - u_P|_1`
    pub interp_h1: T,
    /// Gauss-weighted derivative error `|u - u_P|_{G,1}`.
    pub g1: T,
    /// RMS derivative error over the Gauss points, `|u - u_P|_{aver,1}`.
    pub aver1: T,
    /// Lobatto-weighted value error `|u - u_P|_{L,0}`.
    pub l0_lobatto: T,
    /// `|u - u_P|_{aver,0}`.
    pub aver0: T,
    /// RMS of the nodal errors.
    pub e_node: T,
    /// Largest derivative error over the Gauss points.
    pub sup_gauss_deriv: T,
}

/// Names of the [`ErrorReport`] fields in column order.
pub const FUNCTIONAL_NAMES: [&str; 10] = [
    "l2",
    "h1",
    "h1_semi",
    "interp_h1",
    "g1",
    "aver1",
    "l0_lobatto",
    "aver0",
    "e_node",
    "sup_gauss_deriv",
];

impl<T: Real> ErrorReport<T> {
    pub fn values(&self) -> [T; 10] {
        [
            self.l2,
            self.h1,
            self.h1_semi,
            self.interp_h1,
            self.g1,
            self.aver1,
            self.l0_lobatto,
            self.aver0,
            self.e_node,
            self.sup_gauss_deriv,
        ]
    }

    /// Value of the functional called `name`.
    pub fn get(&self, name: &str) -> Option<T> {
        FUNCTIONAL_NAMES
            .iter()
            .position(|&n| n == name)
            .map(|i| self.values()[i])
    }
}

/// `(‖e‖_0, |e|_1)` by element-wise Gauss quadrature; both callbacks receive the element index.
pub fn continuous_norms<T: Real>(
    err: impl Fn(usize, T) -> T,
    err_deriv: impl Fn(usize, T) -> T,
    mesh: &Mesh<T>,
    quad_order: usize,
) -> Result<(T, T)> {
    let rule = gauss_rule::<T>(quad_order)?;
    let mut l2 = T::zero();
    let mut semi = T::zero();
    for e in 0..mesh.num_elements() {
        let (lo, hi) = mesh.element(e);
        l2 += rule.integrate(|x| err(e, x).powi(2), lo, hi);
        semi += rule.integrate(|x| err_deriv(e, x).powi(2), lo, hi);
    }
    Ok((l2.sqrt(), semi.sqrt()))
}

/// `(|e|_{G,1}, |e|_{aver,1}, max |e'|)` for `e = u - u_P` over all `N r` Gauss points.
pub fn gauss_functionals<T: Real>(
    u_prime: impl Fn(T) -> T,
    sol: &Solution<T>,
    dual: &DualPartition<T>,
) -> (T, T, T) {
    let mut weighted = T::zero();
    let mut plain = T::zero();
    let mut sup = T::zero();
    for (q, (&g, &a)) in dual
        .gauss_points()
        .iter()
        .zip(dual.gauss_weights())
        .enumerate()
    {
        let d = u_prime(g) - sol.deriv_in_element(dual.element_of_point(q), g);
        weighted += a * d * d;
        plain += d * d;
        sup = sup.max(d.abs());
    }
    let count = T::from_index(dual.gauss_points().len());
    (weighted.sqrt(), (plain / count).sqrt(), sup)
}

/// `(|e|_{L,0}, |e|_{aver,0})` over the Lobatto points of every element.
///
/// Both sums run over `j = 0..=r` per element, so interior primal nodes enter twice; the
/// averaged form divides by `N r`.
pub fn lobatto_functionals<T: Real>(u: impl Fn(T) -> T, sol: &Solution<T>) -> (T, T) {
    let space = sol.space();
    let mesh = space.mesh();
    let lob = space.lobatto();
    let mut weighted = T::zero();
    let mut plain = T::zero();
    for e in 0..mesh.num_elements() {
        let half = mesh.width(e) * T::lit(0.5);
        let values = sol.element_values(e);
        for ((x, w), uh) in space.lobatto_points(e).zip(lob.weights()).zip(values) {
            let d = u(x) - uh;
            weighted += half * *w * d * d;
            plain += d * d;
        }
    }
    let count = T::from_index(mesh.num_elements() * space.degree());
    (weighted.sqrt(), (plain / count).sqrt())
}

/// RMS of `(u - u_P)(x_i)` over `i = 1..=N`.
pub fn node_functional<T: Real>(u: impl Fn(T) -> T, sol: &Solution<T>) -> T {
    let space = sol.space();
    let mesh = space.mesh();
    let n = mesh.num_elements();
    let r = space.degree();
    let sum: T = (1..=n)
        .map(|i| {
            let uh = space
                .dof(i - 1, r)
                .map_or(T::zero(), |m| sol.coefficients()[m]);
            let d = u(mesh.nodes()[i]) - uh;
            d * d
        })
        .sum();
    (sum / T::from_index(n)).sqrt()
}

/// Computes every functional of `sol` against the exact solution of `problem`.
pub fn error_report<T: Real>(
    problem: &Problem<T>,
    sol: &Solution<T>,
    dual: &DualPartition<T>,
    norm_order: Option<usize>,
) -> Result<ErrorReport<T>> {
    let u = problem
        .exact_u()
        .ok_or(FvmError::MissingDerivative("an exact solution"))?
        .clone();
    let du = problem
        .exact_du()
        .ok_or(FvmError::MissingDerivative("u'"))?
        .clone();
    let space = sol.space();
    let mesh = space.mesh();
    let order = norm_order.unwrap_or_else(|| default_norm_order(space.degree()));

    let (l2, h1_semi) = continuous_norms(
        |e, x| u(x) - sol.eval_in_element(e, x),
        |e, x| du(x) - sol.deriv_in_element(e, x),
        mesh,
        order,
    )?;
    let interp = interpolate(Arc::clone(space), |x| u(x))?;
    let (_, interp_h1) = continuous_norms(
        |_, _| T::zero(),
        |e, x| interp.deriv_in_element(e, x) - sol.deriv_in_element(e, x),
        mesh,
        order,
    )?;
    let (g1, aver1, sup_gauss_deriv) = gauss_functionals(|x| du(x), sol, dual);
    let (l0_lobatto, aver0) = lobatto_functionals(|x| u(x), sol);
    let e_node = node_functional(|x| u(x), sol);
    Ok(ErrorReport {
        l2,
        h1: (l2 * l2 + h1_semi * h1_semi).sqrt(),
        h1_semi,
        interp_h1,
        g1,
        aver1,
        l0_lobatto,
        aver0,
        e_node,
        sup_gauss_deriv,
    })
}
