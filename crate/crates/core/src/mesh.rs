//! Primal partition of `[a, b]` and the Gauss-point dual partition built on it.

use crate::error::{FvmError, Result};
use crate::quadrature::{Family, QuadRule};
use crate::scalar::Real;

/// Primal partition `a = x_0 < x_1 < ... < x_N = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    nodes: Vec<T>,
}

impl<T: Real> Mesh<T> {
    /// Builds a mesh from explicit nodes; they must be strictly increasing with `N >= 1`.
    pub fn from_nodes(nodes: Vec<T>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(FvmError::InvalidMesh(format!(
                "need at least two nodes, got {}",
                nodes.len()
            )));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(FvmError::InvalidMesh("non-finite node".into()));
        }
        if let Some(k) = nodes.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(FvmError::InvalidMesh(format!(
                "nodes not strictly increasing at index {}",
                k + 1
            )));
        }
        Ok(Self { nodes })
    }

    /// `N` equal elements on `[a, b]`.
    pub fn uniform(a: T, b: T, n: usize) -> Result<Self> {
        check_interval(a, b)?;
        if n == 0 {
            return Err(FvmError::InvalidMesh("N must be positive".into()));
        }
        let h = (b - a) / T::from_index(n);
        let mut nodes: Vec<T> = (0..=n).map(|i| a + T::from_index(i) * h).collect();
        nodes[n] = b;
        Self::from_nodes(nodes)
    }

    /// Geometrically graded mesh with `h_{i+1} = ratio * h_i`.
    pub fn graded(a: T, b: T, n: usize, ratio: T) -> Result<Self> {
        check_interval(a, b)?;
        if n == 0 {
            return Err(FvmError::InvalidMesh("N must be positive".into()));
        }
        if !(ratio > T::zero()) || !ratio.is_finite() {
            return Err(FvmError::InvalidMesh(format!(
                "grading ratio {ratio} must be positive"
            )));
        }
        let mut widths = Vec::with_capacity(n);
        let mut w = T::one();
        for _ in 0..n {
            widths.push(w);
            w *= ratio;
        }
        let total: T = widths.iter().copied().sum();
        let scale = (b - a) / total;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut x = a;
        nodes.push(a);
        for &w in &widths[..n - 1] {
            x += w * scale;
            nodes.push(x);
        }
        nodes.push(b);
        Self::from_nodes(nodes)
    }

    pub fn a(&self) -> T {
        self.nodes[0]
    }

    pub fn b(&self) -> T {
        self.nodes[self.nodes.len() - 1]
    }

    /// Number of elements `N`.
    pub fn num_elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    /// Element `e` (0-based) as `(x_{e}, x_{e+1})`.
    pub fn element(&self, e: usize) -> (T, T) {
        (self.nodes[e], self.nodes[e + 1])
    }

    pub fn width(&self, e: usize) -> T {
        self.nodes[e + 1] - self.nodes[e]
    }

    pub fn widths(&self) -> impl Iterator<Item = T> + '_ {
        self.nodes.windows(2).map(|w| w[1] - w[0])
    }

    pub fn hmax(&self) -> T {
        self.widths().fold(T::zero(), T::max)
    }

    /// Affine image of reference coordinate `t` in element `e`.
    pub fn map_to_element(&self, e: usize, t: T) -> T {
        let (l, r) = self.element(e);
        (l + r + (r - l) * t) * T::lit(0.5)
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.a() && x <= self.b()
    }

    /// Element index containing `x`; a primal node belongs to the element on its left.
    pub fn locate(&self, x: T) -> Result<usize> {
        if !self.contains(x) {
            return Err(FvmError::OutOfDomain {
                x: x.as_f64(),
                a: self.a().as_f64(),
                b: self.b().as_f64(),
            });
        }
        // first node >= x, minus one, clamped to the first element
        let k = self.nodes.partition_point(|&node| node < x);
        Ok(k.saturating_sub(1).min(self.num_elements() - 1))
    }
}

pub(crate) fn check_interval<T: Real>(a: T, b: T) -> Result<()> {
    if a < b && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(FvmError::InvalidInterval {
            a: a.as_f64(),
            b: b.as_f64(),
        })
    }
}

/// Control volume `[left, right]` with the primal node it straddles, if any.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlVolume<T> {
    pub left: T,
    pub right: T,
    /// Primal node strictly inside the volume.
    pub straddled: Option<T>,
}

impl<T: Real> ControlVolume<T> {
    pub fn length(&self) -> T {
        self.right - self.left
    }

    /// Sub-segment breakpoints (at most one interior node).
    pub fn breakpoints(&self) -> &[T] {
        match &self.straddled {
            Some(x) => std::slice::from_ref(x),
            None => &[],
        }
    }
}

/// Dual partition made of control volumes between consecutive Gauss points.
///
/// Gauss points are stored flattened: point `q = e * r + j` is the `j`-th (0-based) Gauss point
/// of element `e`. Active volume `k` spans `[g_k, g_{k+1}]` for `k` in `0..N*r - 1`; the slivers
/// `[a, g_0]` and `[g_{Nr-1}, b]` carry no test function.
#[derive(Debug, Clone)]
pub struct DualPartition<T> {
    order: usize,
    gauss_points: Vec<T>,
    weights: Vec<T>,
    volumes: Vec<ControlVolume<T>>,
    a: T,
    b: T,
}

impl<T: Real> DualPartition<T> {
    /// Builds the dual partition from the reference Gauss rule of order `r`.
    pub fn build(mesh: &Mesh<T>, rule: &QuadRule<T>) -> Result<Self> {
        if rule.family() != Family::Gauss {
            return Err(FvmError::InvalidConfig(
                "dual partition needs a Gauss rule".into(),
            ));
        }
        let r = rule.order();
        let n = mesh.num_elements();
        let mut gauss_points = Vec::with_capacity(n * r);
        let mut weights = Vec::with_capacity(n * r);
        for e in 0..n {
            let half = mesh.width(e) * T::lit(0.5);
            for (t, w) in rule.points() {
                gauss_points.push(mesh.map_to_element(e, t));
                weights.push(half * w);
            }
        }
        let volumes = (0..n * r - 1)
            .map(|k| {
                let e = k / r;
                let straddled = if (k + 1) % r == 0 {
                    Some(mesh.nodes()[e + 1])
                } else {
                    None
                };
                ControlVolume {
                    left: gauss_points[k],
                    right: gauss_points[k + 1],
                    straddled,
                }
            })
            .collect();
        Ok(Self {
            order: r,
            gauss_points,
            weights,
            volumes,
            a: mesh.a(),
            b: mesh.b(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// All `N r` Gauss points in increasing order.
    pub fn gauss_points(&self) -> &[T] {
        &self.gauss_points
    }

    /// Element-scaled Gauss weights `A_{i,j} = h_i A_j / 2`, aligned with [`Self::gauss_points`].
    pub fn gauss_weights(&self) -> &[T] {
        &self.weights
    }

    /// Element owning Gauss point `q`.
    pub fn element_of_point(&self, q: usize) -> usize {
        q / self.order
    }

    /// Active control volumes in left-to-right order.
    pub fn volumes(&self) -> &[ControlVolume<T>] {
        &self.volumes
    }

    pub fn num_active(&self) -> usize {
        self.volumes.len()
    }

    /// The two inactive boundary slivers `[a, g_first]` and `[g_last, b]`.
    pub fn slivers(&self) -> [(T, T); 2] {
        [
            (self.a, self.gauss_points[0]),
            (self.gauss_points[self.gauss_points.len() - 1], self.b),
        ]
    }

    /// `r_i` of element `e` (0-based): `r` except `r - 1` on the last element.
    pub fn volumes_in_element(&self, e: usize) -> usize {
        let n = self.gauss_points.len() / self.order;
        if e + 1 == n {
            self.order - 1
        } else {
            self.order
        }
    }
}
