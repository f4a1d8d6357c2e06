//! Two-point boundary value problem `-(α u')' + β u' + γ u = f`, `u(a) = u(b) = 0`.

use std::fmt;
use std::sync::Arc;

use crate::error::{FvmError, Result};
use crate::scalar::Real;

/// Shared real function of one variable.
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Wraps a closure as a [`ScalarFn`].
pub fn func<T, F>(f: F) -> ScalarFn<T>
where
    F: Fn(T) -> T + Send + Sync + 'static,
{
    Arc::new(f)
}

/// Manufactured exact solution with its first two derivatives.
#[derive(Clone)]
pub struct ExactSolution<T> {
    pub u: ScalarFn<T>,
    pub du: Option<ScalarFn<T>>,
    pub ddu: Option<ScalarFn<T>>,
}

#[derive(Clone)]
pub struct Problem<T> {
    pub name: String,
    pub a: T,
    pub b: T,
    pub alpha: ScalarFn<T>,
    pub beta: ScalarFn<T>,
    pub gamma: ScalarFn<T>,
    pub f: ScalarFn<T>,
    /// Declared lower bound `α_0` of `α`.
    pub alpha_min: T,
    /// Declared lower bound `κ` of `γ - β'/2`.
    pub kappa: T,
    pub dalpha: Option<ScalarFn<T>>,
    pub dbeta: Option<ScalarFn<T>>,
    pub exact: Option<ExactSolution<T>>,
}

impl<T: Real> fmt::Debug for Problem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("alpha_min", &self.alpha_min)
            .field("kappa", &self.kappa)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

const AUDIT_POINTS: usize = 1001;

impl<T: Real> Problem<T> {
    /// Problem with a user-supplied source and no exact solution.
    pub fn new(
        name: impl Into<String>,
        (a, b): (T, T),
        alpha: ScalarFn<T>,
        beta: ScalarFn<T>,
        gamma: ScalarFn<T>,
        f: ScalarFn<T>,
    ) -> Self {
        Self {
            name: name.into(),
            a,
            b,
            alpha,
            beta,
            gamma,
            f,
            alpha_min: T::zero(),
            kappa: T::zero(),
            dalpha: None,
            dbeta: None,
            exact: None,
        }
    }

    /// Problem whose source is manufactured from `exact` (needs `u'`, `u''` and `α'`).
    #[allow(clippy::too_many_arguments)]
    pub fn manufactured(
        name: impl Into<String>,
        (a, b): (T, T),
        alpha: ScalarFn<T>,
        dalpha: ScalarFn<T>,
        beta: ScalarFn<T>,
        gamma: ScalarFn<T>,
        exact: ExactSolution<T>,
    ) -> Result<Self> {
        let zero = func(|_| T::zero());
        let mut p = Self::new(name, (a, b), alpha, beta, gamma, zero);
        p.dalpha = Some(dalpha);
        p.exact = Some(exact);
        p.f = manufactured_source(&p)?;
        Ok(p)
    }

    pub fn with_bounds(mut self, alpha_min: T, kappa: T) -> Self {
        self.alpha_min = alpha_min;
        self.kappa = kappa;
        self
    }

    pub fn with_dbeta(mut self, dbeta: ScalarFn<T>) -> Self {
        self.dbeta = Some(dbeta);
        self
    }

    /// Checks `α >= α_0` and, when `β'` is known, `γ - β'/2 >= κ` on a uniform audit grid.
    pub fn audit(&self) -> Result<()> {
        crate::mesh::check_interval(self.a, self.b)?;
        if self.alpha_min < T::zero() || self.kappa < T::zero() {
            return Err(FvmError::Ellipticity(
                "declared bounds must be non-negative".into(),
            ));
        }
        let slack = T::lit(1e-12);
        let step = (self.b - self.a) / T::from_index(AUDIT_POINTS - 1);
        for k in 0..AUDIT_POINTS {
            let x = self.a + T::from_index(k) * step;
            let alpha = (self.alpha)(x);
            if !(alpha > T::zero() && alpha >= self.alpha_min - slack) {
                return Err(FvmError::Ellipticity(format!(
                    "alpha({x}) = {alpha} below declared bound {}",
                    self.alpha_min
                )));
            }
            if let Some(dbeta) = &self.dbeta {
                let reaction = (self.gamma)(x) - dbeta(x) * T::lit(0.5);
                if !(reaction >= self.kappa - slack) {
                    return Err(FvmError::Ellipticity(format!(
                        "gamma - beta'/2 = {reaction} at x = {x} below declared bound {}",
                        self.kappa
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn exact_u(&self) -> Option<&ScalarFn<T>> {
        self.exact.as_ref().map(|e| &e.u)
    }

    pub fn exact_du(&self) -> Option<&ScalarFn<T>> {
        self.exact.as_ref().and_then(|e| e.du.as_ref())
    }
}

/// `f = -α' u' - α u'' + β u' + γ u` from the exact solution of `problem`.
pub fn manufactured_source<T: Real>(problem: &Problem<T>) -> Result<ScalarFn<T>> {
    let exact = problem
        .exact
        .as_ref()
        .ok_or(FvmError::MissingDerivative("an exact solution"))?;
    let du = exact.du.clone().ok_or(FvmError::MissingDerivative("u'"))?;
    let ddu = exact
        .ddu
        .clone()
        .ok_or(FvmError::MissingDerivative("u''"))?;
    let dalpha = problem
        .dalpha
        .clone()
        .ok_or(FvmError::MissingDerivative("alpha'"))?;
    let u = exact.u.clone();
    let (alpha, beta, gamma) = (
        problem.alpha.clone(),
        problem.beta.clone(),
        problem.gamma.clone(),
    );
    Ok(func(move |x| {
        let d1 = du(x);
        -dalpha(x) * d1 - alpha(x) * ddu(x) + beta(x) * d1 + gamma(x) * u(x)
    }))
}
