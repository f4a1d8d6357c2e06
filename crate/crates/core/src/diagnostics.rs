//! Stability probes: discrete test-space norms and a numerical inf-sup constant.

use nalgebra::DMatrix;

use crate::assembly::{project_to_test, Discretization, FvmSystem};
use crate::basis::{Solution, TrialSpace};
use crate::error::{FvmError, Result};
use crate::mesh::{DualPartition, Mesh};
use crate::problem::Problem;
use crate::quadrature::gauss_rule;
use crate::scalar::Real;

/// `|w|_{1,P'}`, `‖w‖_{0,P'}` and `‖w‖_{P'}` of a test-coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestNorms<T> {
    pub seminorm1: T,
    pub norm0: T,
    pub full: T,
}

/// Jumps of `w` at all `N r` Gauss points, with zero test values outside the active volumes.
pub fn test_jumps<T: Real>(w: &[T]) -> Vec<T> {
    let mut prev = T::zero();
    let mut jumps: Vec<T> = w
        .iter()
        .map(|&wk| {
            let j = wk - prev;
            prev = wk;
            j
        })
        .collect();
    jumps.push(-prev);
    jumps
}

pub fn test_norms<T: Real>(
    w: &[T],
    mesh: &Mesh<T>,
    dual: &DualPartition<T>,
) -> Result<TestNorms<T>> {
    if w.len() != dual.num_active() {
        return Err(FvmError::LengthMismatch {
            expected: dual.num_active(),
            got: w.len(),
        });
    }
    let semi: T = test_jumps(w)
        .iter()
        .enumerate()
        .map(|(q, &j)| j * j / mesh.width(dual.element_of_point(q)))
        .sum();
    let norm0: T = w
        .iter()
        .enumerate()
        .map(|(k, &wk)| mesh.width(dual.element_of_point(k)) * wk * wk)
        .sum();
    Ok(TestNorms {
        seminorm1: semi.sqrt(),
        norm0: norm0.sqrt(),
        full: (semi + norm0).sqrt(),
    })
}

/// Gram matrix of `‖·‖_{1,P}` (mass plus stiffness) on the trial basis.
pub fn trial_gram<T: Real>(space: &TrialSpace<T>) -> Result<DMatrix<f64>> {
    let r = space.degree();
    let rule = gauss_rule::<T>(r + 1)?;
    let mesh = space.mesh();
    let n = space.dim();
    let mut gram = DMatrix::zeros(n, n);
    let mut values = vec![T::zero(); r + 1];
    let mut derivs = vec![T::zero(); r + 1];
    for e in 0..mesh.num_elements() {
        let half = mesh.width(e) * T::lit(0.5);
        let jac = T::one() / half;
        for (t, w) in rule.points() {
            space.reference().eval_all(t, &mut values, &mut derivs);
            let wx = w * half;
            for a in 0..=r {
                let Some(ma) = space.dof(e, a) else { continue };
                for b in 0..=r {
                    let Some(mb) = space.dof(e, b) else { continue };
                    let v = wx * (values[a] * values[b] + jac * jac * derivs[a] * derivs[b]);
                    gram[(ma, mb)] += v.as_f64();
                }
            }
        }
    }
    Ok(gram)
}

/// Gram matrix of `‖·‖_{P'}` on the characteristic functions of the active volumes.
pub fn test_gram<T: Real>(mesh: &Mesh<T>, dual: &DualPartition<T>) -> DMatrix<f64> {
    let n = dual.num_active();
    let mut gram = DMatrix::zeros(n, n);
    for k in 0..n {
        gram[(k, k)] += mesh.width(dual.element_of_point(k)).as_f64();
    }
    // jump at Gauss point q couples volumes q-1 and q
    for q in 0..=n {
        let inv_h = 1.0 / mesh.width(dual.element_of_point(q)).as_f64();
        let touched: Vec<(usize, f64)> = [(q.wrapping_sub(1), -1.0), (q, 1.0)]
            .into_iter()
            .filter(|&(k, _)| k < n)
            .collect();
        for &(i, si) in &touched {
            for &(j, sj) in &touched {
                gram[(i, j)] += inv_h * si * sj;
            }
        }
    }
    gram
}

fn system_dense<T: Real>(system: &FvmSystem<T>) -> DMatrix<f64> {
    let n = system.dim();
    DMatrix::from_fn(n, n, |i, j| system.matrix.get(i, j).as_f64())
}

/// Smallest singular value of `L_W^{-1} A L_V^{-T}` where `L_V`, `L_W` are the Cholesky factors
/// of the trial and test Gram matrices: the discrete inf-sup constant for `‖·‖_{1,P}` against
/// `‖·‖_{P'}`.
pub fn infsup_from_system<T: Real>(system: &FvmSystem<T>, dual: &DualPartition<T>) -> Result<T> {
    let space = system.space();
    if system.dim() == 0 {
        return Err(FvmError::InvalidMesh(
            "trial space is empty (r = 1 needs at least two elements)".into(),
        ));
    }
    let lv = trial_gram(space)?
        .cholesky()
        .ok_or(FvmError::SingularGram("trial"))?
        .l();
    let lw = test_gram(space.mesh(), dual)
        .cholesky()
        .ok_or(FvmError::SingularGram("test"))?
        .l();
    let a = system_dense(system);
    // X = L_W^{-1} A, then B = X L_V^{-T}  <=>  B^T = L_V^{-1} X^T
    let x = lw
        .solve_lower_triangular(&a)
        .ok_or(FvmError::SingularGram("test"))?;
    let bt = lv
        .solve_lower_triangular(&x.transpose())
        .ok_or(FvmError::SingularGram("trial"))?;
    let sv = bt.singular_values();
    let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(T::lit(smallest))
}

/// Numerical inf-sup estimate for `problem` on `mesh` with degree `r`.
pub fn infsup_estimate<T: Real>(problem: &Problem<T>, mesh: &Mesh<T>, r: usize) -> Result<T> {
    let d = Discretization::new(mesh.clone(), r, None)?;
    let system = d.assemble(problem)?;
    infsup_from_system(&system, &d.dual)
}

/// `|Π_P v|_{1,P'} / |v|_{1,P}` for a nonzero trial function.
pub fn projection_ratio<T: Real>(v: &Solution<T>, dual: &DualPartition<T>) -> Result<T> {
    let mesh = v.space().mesh();
    let w = project_to_test(dual, v);
    let num = test_norms(&w, mesh, dual)?.seminorm1;
    let (_, den) = crate::norms::continuous_norms(
        |_, _| T::zero(),
        |e, x| v.deriv_in_element(e, x),
        mesh,
        v.space().degree() + 1,
    )?;
    Ok(num / den)
}

/// `a_P(v, Π_P v)`.
pub fn coercivity_form<T: Real>(
    system: &FvmSystem<T>,
    dual: &DualPartition<T>,
    v: &Solution<T>,
) -> T {
    let w = project_to_test(dual, v);
    system.bilinear(v.coefficients(), &w)
}
