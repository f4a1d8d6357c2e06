//! Problem description files.
//!
//! One `key = value` pair per line; `#` starts a comment. Recognised keys:
//!
//! * `name`: label used in reports
//! * `alpha`, `beta`, `gamma`: coefficient expressions (required)
//! * `u`, `du`, `ddu`, `dalpha`: exact solution, its derivatives and `α'`; when present the
//!   source is manufactured from them
//! * `f`: explicit source, used when no exact solution is given
//! * `dbeta`: `β'`, enables the `γ - β'/2` audit
//! * `a`, `b`: domain (default `[0, 1]`); `alpha_min`, `kappa`: declared bounds (default 0)
//!
//! ```text
//! name   = example1
//! alpha  = exp(x)
//! dalpha = exp(x)
//! beta   = cos(x)
//! gamma  = x
//! u      = sin(x)*(x^12 - x^11)
//! du     = cos(x)*(x^12 - x^11) + sin(x)*(12*x^11 - 11*x^10)
//! ddu    = -sin(x)*(x^12 - x^11) + 2*cos(x)*(12*x^11 - 11*x^10) + sin(x)*(132*x^10 - 110*x^9)
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use super::expr::Expr;
use crate::error::{FvmError, Result};
use crate::problem::{ExactSolution, Problem, ScalarFn};
use crate::problems;
use crate::scalar::Real;

const KEYS: [&str; 14] = [
    "name",
    "alpha",
    "beta",
    "gamma",
    "u",
    "du",
    "ddu",
    "dalpha",
    "dbeta",
    "f",
    "a",
    "b",
    "alpha_min",
    "kappa",
];

/// Parsed problem description with its coefficient expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    entries: BTreeMap<String, Expr>,
    pub domain: (f64, f64),
    pub alpha_min: f64,
    pub kappa: f64,
}

impl ProblemSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                FvmError::Format(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(FvmError::Format(format!(
                    "line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            if raw.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(FvmError::Format(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        let name = raw.remove("name").unwrap_or_else(|| "custom".to_string());
        let number = |raw: &mut BTreeMap<String, String>, key: &str, default: f64| -> Result<f64> {
            match raw.remove(key) {
                None => Ok(default),
                Some(v) => v
                    .parse()
                    .map_err(|_| FvmError::Format(format!("'{key}' must be a number, got '{v}'"))),
            }
        };
        let a = number(&mut raw, "a", 0.0)?;
        let b = number(&mut raw, "b", 1.0)?;
        let alpha_min = number(&mut raw, "alpha_min", 0.0)?;
        let kappa = number(&mut raw, "kappa", 0.0)?;
        let mut entries = BTreeMap::new();
        for (key, value) in raw {
            let expr =
                Expr::parse(&value).map_err(|e| FvmError::Format(format!("key '{key}': {e}")))?;
            entries.insert(key, expr);
        }
        for key in ["alpha", "beta", "gamma"] {
            if !entries.contains_key(key) {
                return Err(FvmError::Format(format!("missing required key '{key}'")));
            }
        }
        Ok(Self {
            name,
            entries,
            domain: (a, b),
            alpha_min,
            kappa,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn expr(&self, key: &str) -> Option<&Expr> {
        self.entries.get(key)
    }

    fn function<T: Real>(&self, key: &str) -> Option<ScalarFn<T>> {
        self.entries.get(key).map(|e| {
            let e = e.clone();
            Arc::new(move |x: T| e.eval(x)) as ScalarFn<T>
        })
    }

    /// Builds the problem, manufacturing `f` when an exact solution is supplied.
    pub fn to_problem<T: Real>(&self) -> Result<Problem<T>> {
        let req = |k: &str| {
            self.function::<T>(k)
                .expect("required key checked at parse")
        };
        let (a, b) = (T::lit(self.domain.0), T::lit(self.domain.1));
        let mut problem = if let Some(u) = self.function::<T>("u") {
            let exact = ExactSolution {
                u,
                du: self.function("du"),
                ddu: self.function("ddu"),
            };
            let dalpha = self
                .function("dalpha")
                .ok_or(FvmError::MissingDerivative("alpha'"))?;
            Problem::manufactured(
                self.name.clone(),
                (a, b),
                req("alpha"),
                dalpha,
                req("beta"),
                req("gamma"),
                exact,
            )?
        } else {
            let f = self.function("f").ok_or_else(|| {
                FvmError::Format("need either 'u' (with derivatives) or 'f'".into())
            })?;
            let mut p = Problem::new(
                self.name.clone(),
                (a, b),
                req("alpha"),
                req("beta"),
                req("gamma"),
                f,
            );
            p.dalpha = self.function("dalpha");
            p
        };
        problem = problem.with_bounds(T::lit(self.alpha_min), T::lit(self.kappa));
        problem.dbeta = self.function("dbeta");
        problem.audit()?;
        Ok(problem)
    }
}

/// Resolves a built-in problem name or a path to a description file.
pub fn load_problem<T: Real>(name_or_path: &str) -> Result<Problem<T>> {
    if problems::BUILTIN_NAMES.contains(&name_or_path) {
        return problems::builtin(name_or_path);
    }
    let path = Path::new(name_or_path);
    if path.exists() {
        ProblemSpec::load(path)?.to_problem()
    } else {
        Err(FvmError::UnknownProblem(name_or_path.to_string()))
    }
}
