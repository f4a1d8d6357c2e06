//! Built-in manufactured test problems on `[0, 1]`.
//!
//! All share the exact solution `u(x) = sin(x) (x^12 - x^11)` and the diffusion `α(x) = e^x`;
//! they differ in the convection and reaction terms:
//!
//! | name       | β(x)    | γ(x) |
//! |------------|---------|------|
//! | `example1` | cos x   | x    |
//! | `case1`    | cos x   | x    |
//! | `case2`    | 0       | x    |
//! | `case3`    | 0       | 0    |

use crate::error::{FvmError, Result};
use crate::problem::{func, ExactSolution, Problem};
use crate::scalar::Real;

pub const BUILTIN_NAMES: [&str; 4] = ["example1", "case1", "case2", "case3"];

/// `sin(x) (x^12 - x^11)` with hand-derived first and second derivatives.
pub fn sine_polynomial_solution<T: Real>() -> ExactSolution<T> {
    let c12 = T::lit(12.0);
    let c11 = T::lit(11.0);
    let c132 = T::lit(132.0);
    let c110 = T::lit(110.0);
    // p = x^12 - x^11, p' = 12 x^11 - 11 x^10, p'' = 132 x^10 - 110 x^9
    let p = |x: T| x.powi(12) - x.powi(11);
    let dp = move |x: T| c12 * x.powi(11) - c11 * x.powi(10);
    let ddp = move |x: T| c132 * x.powi(10) - c110 * x.powi(9);
    ExactSolution {
        u: func(move |x: T| x.sin() * p(x)),
        du: Some(func(move |x: T| x.cos() * p(x) + x.sin() * dp(x))),
        ddu: Some(func(move |x: T| {
            -x.sin() * p(x) + T::lit(2.0) * x.cos() * dp(x) + x.sin() * ddp(x)
        })),
    }
}

/// Looks up a built-in problem by name.
pub fn builtin<T: Real>(name: &str) -> Result<Problem<T>> {
    let convective = match name {
        "example1" | "case1" => true,
        "case2" | "case3" => false,
        other => return Err(FvmError::UnknownProblem(other.to_string())),
    };
    let reactive = name != "case3";
    let (beta, dbeta) = if convective {
        (func(T::cos), func(|x: T| -x.sin()))
    } else {
        (func(|_| T::zero()), func(|_| T::zero()))
    };
    let gamma = if reactive {
        func(|x: T| x)
    } else {
        func(|_| T::zero())
    };
    // γ - β'/2 vanishes at x = 0 for every case, so only κ = 0 can be declared
    let problem = Problem::manufactured(
        name,
        (T::zero(), T::one()),
        func(T::exp),
        func(T::exp),
        beta,
        gamma,
        sine_polynomial_solution(),
    )?
    .with_bounds(T::one(), T::zero())
    .with_dbeta(dbeta);
    Ok(problem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coefficient_tables() {
        let c3 = builtin::<f64>("case3").unwrap();
        for x in [0.1, 0.5, 0.9] {
            assert_eq!((c3.alpha)(x), x.exp());
            assert_eq!((c3.beta)(x), 0.0);
            assert_eq!((c3.gamma)(x), 0.0);
        }
        let c2 = builtin::<f64>("case2").unwrap();
        assert_eq!((c2.beta)(0.4), 0.0);
        assert_eq!((c2.gamma)(0.4), 0.4);
        let e1 = builtin::<f64>("example1").unwrap();
        assert_eq!((e1.beta)(0.4), 0.4_f64.cos());
        assert_eq!((e1.gamma)(0.4), 0.4);
    }

    #[test]
    fn exact_solution_vanishes_at_ends() {
        let e1 = builtin::<f64>("example1").unwrap();
        let u = e1.exact_u().unwrap();
        assert_eq!(u(0.0), 0.0);
        assert_eq!(u(1.0), 0.0);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(
            builtin::<f64>("example3"),
            Err(FvmError::UnknownProblem(_))
        ));
    }

    #[test]
    fn all_builtins_pass_audit() {
        for name in BUILTIN_NAMES {
            builtin::<f64>(name).unwrap().audit().unwrap();
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in BUILTIN_NAMES {
            let p = builtin::<f64>(name).unwrap();
            let ex = p.exact.as_ref().unwrap();
            let (u, du, ddu) = (&ex.u, ex.du.as_ref().unwrap(), ex.ddu.as_ref().unwrap());
            for _ in 0..100 {
                let x: f64 = rng.gen_range(0.05..0.95);
                let h = 1e-5;
                let fd1 = (u(x + h) - u(x - h)) / (2.0 * h);
                let fd2 = (du(x + h) - du(x - h)) / (2.0 * h);
                let tol = |v: f64| 1e-6 * v.abs().max(1e-3);
                assert!((fd1 - du(x)).abs() <= tol(du(x)), "{name} u' at {x}");
                assert!((fd2 - ddu(x)).abs() <= tol(ddu(x)), "{name} u'' at {x}");
            }
        }
    }

    #[test]
    fn example1_source_matches_finite_differences() {
        // oracle: f = -(α u')' + β u' + γ u with the flux differenced numerically
        let p = builtin::<f64>("example1").unwrap();
        let ex = p.exact.as_ref().unwrap();
        let (u, du) = (&ex.u, ex.du.as_ref().unwrap());
        let x = 0.5;
        let h = 1e-6;
        let flux = |y: f64| y.exp() * du(y);
        let oracle = -(flux(x + h) - flux(x - h)) / (2.0 * h) + x.cos() * du(x) + x * u(x);
        let got = (p.f)(x);
        assert!(((got - oracle) / oracle).abs() <= 1e-6, "{got} vs {oracle}");
    }
}
