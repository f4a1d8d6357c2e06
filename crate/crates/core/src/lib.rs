//! Arbitrary-order finite volume schemes for two-point elliptic boundary value problems.
//!
//! The trial space is the continuous degree-`r` Lagrange space with nodes at the Lobatto points
//! of each element. Control volumes are bounded by the Gauss points of the elements, so the
//! scheme balances fluxes between consecutive Gauss points. The crate also provides the
//! superconvergence error functionals, a two-element derivative recovery, stability
//! diagnostics and a convergence-study harness.
//!
//! Numerical types are generic over [`Real`] (`f32` or `f64`); the `*64` aliases fix `f64`.

// `!(a < b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembly;
pub mod banded;
pub mod basis;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod mesh;
pub mod norms;
pub mod postprocess;
pub mod problem;
pub mod problems;
pub mod quadrature;
pub mod scalar;

pub use assembly::{assemble, project_to_test, solve, Discretization, FvmSystem};
pub use basis::{interpolate, LagrangeBasis, Solution, TrialSpace};
pub use diagnostics::infsup_estimate;
pub use error::{FvmError, Result};
pub use harness::golden::{golden_check, GoldenTable};
pub use harness::study::{run_study, MeshFamily, StudyConfig, StudyResult};
pub use mesh::{ControlVolume, DualPartition, Mesh};
pub use norms::ErrorReport;
pub use postprocess::{recover, RecoveredDerivative};
pub use problem::{func, ExactSolution, Problem, ScalarFn};
pub use problems::builtin;
pub use quadrature::{gauss_rule, legendre_eval, lobatto_rule, Family, QuadRule};
pub use scalar::Real;

pub type Mesh64 = Mesh<f64>;
pub type QuadRule64 = QuadRule<f64>;
pub type Problem64 = Problem<f64>;
pub type Solution64 = Solution<f64>;
pub type TrialSpace64 = TrialSpace<f64>;
pub type DualPartition64 = DualPartition<f64>;
pub type FvmSystem64 = FvmSystem<f64>;
pub type ErrorReport64 = ErrorReport<f64>;
pub type Discretization64 = Discretization<f64>;
pub type RecoveredDerivative64 = RecoveredDerivative<f64>;
