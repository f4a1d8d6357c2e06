//! Legendre polynomials and Gauss / Lobatto rules on the reference interval `[-1, 1]`.

use std::f64::consts::PI;

use crate::error::{FvmError, Result};
use crate::scalar::Real;

/// Highest rule order supported by the Newton node solver.
pub const MAX_ORDER: usize = 64;

const MAX_NEWTON_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Roots of `P_r`; `r` nodes, exact to degree `2r - 1`.
    Gauss,
    /// `±1` plus the roots of `P'_r`; `r + 1` nodes, exact to degree `2r - 1`.
    Lobatto,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Gauss => "Gauss",
            Family::Lobatto => "Lobatto",
        }
    }
}

/// Nodes and weights of a quadrature rule on `[-1, 1]`, nodes strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule<T> {
    family: Family,
    order: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> QuadRule<T> {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness_degree(&self) -> usize {
        2 * self.order - 1
    }

    /// Iterator over `(node, weight)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Applies the rule to `g` on `[a, b]` through the affine map from `[-1, 1]`.
    pub fn integrate<F: Fn(T) -> T>(&self, g: F, a: T, b: T) -> T {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        half * self.points().map(|(t, w)| w * g(mid + half * t)).sum::<T>()
    }

    /// Maps the nodes into `[a, b]`.
    pub fn mapped_nodes(&self, a: T, b: T) -> impl Iterator<Item = T> + '_ {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        self.nodes.iter().map(move |&t| mid + half * t)
    }
}

/// `(P_r(t), P'_r(t))` by the three-term recurrence.
pub fn legendre_eval<T: Real>(r: usize, t: T) -> (T, T) {
    let (p, dp, _) = legendre_with_second(r, t);
    (p, dp)
}

/// `(P_r, P'_r, P''_r)` at `t`.
///
/// The derivatives use `P'_{k+1} = P'_{k-1} + (2k+1) P_k` (and its differentiated form),
/// which stays exact at `t = ±1` where the Legendre ODE form degenerates.
pub(crate) fn legendre_with_second<T: Real>(r: usize, t: T) -> (T, T, T) {
    let (mut p_prev, mut p) = (T::one(), t);
    let (mut dp_prev, mut dp) = (T::zero(), T::one());
    let (mut ddp_prev, mut ddp) = (T::zero(), T::zero());
    if r == 0 {
        return (p_prev, dp_prev, ddp_prev);
    }
    for k in 1..r {
        let kf = T::from_index(k);
        let two_k1 = T::from_index(2 * k + 1);
        let p_next = (two_k1 * t * p - kf * p_prev) / (kf + T::one());
        let dp_next = dp_prev + two_k1 * p;
        let ddp_next = ddp_prev + two_k1 * dp;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
        ddp_prev = ddp;
        ddp = ddp_next;
    }
    (p, dp, ddp)
}

fn check_order(r: usize) -> Result<()> {
    if r == 0 || r > MAX_ORDER {
        Err(FvmError::InvalidOrder(r))
    } else {
        Ok(())
    }
}

/// Newton iteration for a root of `value` starting from `x0`.
fn newton_root<T: Real>(
    x0: f64,
    family: Family,
    order: usize,
    value_and_slope: impl Fn(T) -> (T, T),
) -> Result<T> {
    let tol = T::lit(2.0) * T::epsilon();
    let mut x = T::lit(x0);
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let (f, df) = value_and_slope(x);
        if df == T::zero() || !df.is_finite() {
            break;
        }
        let step = f / df;
        x -= step;
        if step.abs() <= tol * x.abs().max(T::one()) {
            return Ok(x);
        }
    }
    Err(FvmError::NonConvergence {
        family: family.name(),
        order,
    })
}

/// Gauss–Legendre rule with `r` nodes.
pub fn gauss_rule<T: Real>(r: usize) -> Result<QuadRule<T>> {
    check_order(r)?;
    let mut nodes = vec![T::zero(); r];
    let mut weights = vec![T::zero(); r];
    // roots are symmetric; solve for the non-negative half and mirror
    for k in 0..r.div_ceil(2) {
        let guess = (PI * (k as f64 + 0.75) / (r as f64 + 0.5)).cos();
        let root: T = if 2 * k + 1 == r {
            T::zero()
        } else {
            newton_root(guess, Family::Gauss, r, |x| legendre_eval(r, x))?
        };
        let (_, dp) = legendre_eval(r, root);
        let w = T::lit(2.0) / ((T::one() - root * root) * dp * dp);
        nodes[r - 1 - k] = root;
        nodes[k] = -root;
        weights[r - 1 - k] = w;
        weights[k] = w;
    }
    Ok(QuadRule {
        family: Family::Gauss,
        order: r,
        nodes,
        weights,
    })
}

/// Gauss–Lobatto rule with `r + 1` nodes including both endpoints.
pub fn lobatto_rule<T: Real>(r: usize) -> Result<QuadRule<T>> {
    check_order(r)?;
    let n = r + 1;
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let scale = T::from_index(r * (r + 1));
    for k in 0..n.div_ceil(2) {
        let root: T = if k == 0 {
            T::one()
        } else if 2 * k == r {
            T::zero()
        } else {
            let guess = (PI * k as f64 / r as f64).cos();
            newton_root(guess, Family::Lobatto, r, |x| {
                let (_, dp, ddp) = legendre_with_second(r, x);
                (dp, ddp)
            })?
        };
        let (p, _) = legendre_eval(r, root);
        let w = T::lit(2.0) / (scale * p * p);
        nodes[r - k] = root;
        nodes[k] = -root;
        weights[r - k] = w;
        weights[k] = w;
    }
    Ok(QuadRule {
        family: Family::Lobatto,
        order: r,
        nodes,
        weights,
    })
}

/// Integrates `g` over `[a, b]`, applying `rule` separately on every sub-segment cut at
/// `breakpoints`.
pub fn composite_integrate<T: Real, F: Fn(T) -> T>(
    g: F,
    a: T,
    b: T,
    breakpoints: &[T],
    rule: &QuadRule<T>,
) -> Result<T> {
    if !(a < b) {
        return Err(FvmError::InvalidInterval {
            a: a.as_f64(),
            b: b.as_f64(),
        });
    }
    let mut total = T::zero();
    let mut left = a;
    for &bp in breakpoints.iter().chain(std::iter::once(&b)) {
        if !(bp > left && bp <= b) {
            return Err(FvmError::InvalidInterval {
                a: left.as_f64(),
                b: bp.as_f64(),
            });
        }
        total += rule.integrate(&g, left, bp);
        left = bp;
    }
    Ok(total)
}
