//! Fractional Poisson problem on the unit ball by the Green representation
//! `w(x) = ∫ G_s(x,y) h(y) dy`, plus solution gradients, truncated data and
//! Riesz potentials.

pub mod datum;
mod engine;
pub mod oracle;

use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{boundary_distance, norm, GridFunction, Point, QuadratureGrid};
use crate::kernel::{GreenKernel, KernelError};

pub use datum::{parse_targets, truncate, DatumSpec};
pub use engine::{QuadOptions, RieszKernel, Row, SingularKernel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PoissonError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("target ({0}, {1}, {2}) lies outside the domain")]
    Outside(f64, f64, f64),
    #[error("target coincides with a grid node and local correction is disabled")]
    OnNode,
    #[error("target at distance {delta:e} from the boundary; the gradient needs more than {need:e}")]
    NearBoundary { delta: f64, need: f64 },
    #[error("datum is not finite at node {0}")]
    NonFinite(usize),
    #[error("Riesz exponent {0} outside (0, N)")]
    Exponent(f64),
    #[error("datum grid does not match the solver grid")]
    GridMismatch,
    #[error("{0}")]
    Spec(String),
}

#[derive(Debug, Clone)]
pub struct PoissonSolve {
    pub s: f64,
    pub targets: Vec<Point>,
    pub values: Vec<f64>,
    pub gradient: Option<Vec<Point>>,
    pub tol: f64,
}

impl PoissonSolve {
    pub const CSV_HEADER: &'static str = "x1,x2,delta,w,grad_norm,w_over_delta_s";

    /// Rows `x1,x2,delta,w,grad_norm,w_over_delta_s`; `grad_norm` is empty
    /// where no gradient was computed.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (i, x) in self.targets.iter().enumerate() {
            let d = boundary_distance(x);
            let g = match &self.gradient {
                Some(gs) if gs[i][0].is_finite() => format!("{:.10e}", norm(&gs[i])),
                _ => String::new(),
            };
            out.push_str(&format!(
                "{:.10e},{:.10e},{:.10e},{:.10e},{},{:.10e}\n",
                x[0],
                x[1],
                d,
                self.values[i],
                g,
                self.values[i] / d.powf(self.s)
            ));
        }
        out
    }
}

/// Quadrature solver for one order `s` on one grid.
#[derive(Debug, Clone)]
pub struct Solver {
    grid: Arc<QuadratureGrid>,
    kernel: GreenKernel,
    opts: QuadOptions,
}

impl Solver {
    pub fn new(s: f64, grid: Arc<QuadratureGrid>) -> Result<Self, PoissonError> {
        let kernel = GreenKernel::new(s, grid.domain())?;
        Ok(Solver { grid, kernel, opts: QuadOptions::default() })
    }

    pub fn with_options(mut self, opts: QuadOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn s(&self) -> f64 {
        self.kernel.s()
    }

    pub fn kernel(&self) -> &GreenKernel {
        &self.kernel
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn options(&self) -> &QuadOptions {
        &self.opts
    }

    fn check_target(&self, x: &Point) -> Result<(), PoissonError> {
        if !self.grid.domain().contains(x) {
            return Err(PoissonError::Outside(x[0], x[1], x[2]));
        }
        if !self.opts.local_correction && self.grid.nodes().iter().any(|y| y == x) {
            return Err(PoissonError::OnNode);
        }
        Ok(())
    }

    /// Smallest boundary distance at which `gradient` accepts a target: twice
    /// the radial width of the cell containing it.
    pub fn gradient_clearance(&self, x: &Point) -> f64 {
        let (i, _, _) = self.grid.locate(x);
        2.0 * self.grid.ring_width(i)
    }

    fn check_datum(&self, h: &GridFunction) -> Result<(), PoissonError> {
        if h.grid().len() != self.grid.len() {
            return Err(PoissonError::GridMismatch);
        }
        if let Some(k) = h.values().iter().position(|v| !v.is_finite()) {
            return Err(PoissonError::NonFinite(k));
        }
        Ok(())
    }

    pub fn row(&self, x: &Point, want_grad: bool) -> Row {
        engine::row(&self.kernel, &self.grid, x, want_grad, &self.opts)
    }

    pub fn solve(&self, h: &GridFunction, targets: &[Point]) -> Result<PoissonSolve, PoissonError> {
        self.check_datum(h)?;
        for x in targets {
            self.check_target(x)?;
        }
        let values = crate::exec::map_slice(targets, |x| self.row(x, false).dot(h.values()));
        Ok(PoissonSolve { s: self.s(), targets: targets.to_vec(), values, gradient: None, tol: self.opts.tol })
    }

    /// Values and gradients; targets closer to the boundary than
    /// `gradient_clearance` get a NaN gradient.
    pub fn solve_with_gradient(&self, h: &GridFunction, targets: &[Point]) -> Result<PoissonSolve, PoissonError> {
        self.check_datum(h)?;
        for x in targets {
            self.check_target(x)?;
        }
        let out = crate::exec::map_slice(targets, |x| {
            let ok = boundary_distance(x) > self.gradient_clearance(x);
            let row = self.row(x, ok);
            let g = if ok { row.dot_grad(h.values()).unwrap() } else { [f64::NAN; 3] };
            (row.dot(h.values()), g)
        });
        let (values, grads) = out.into_iter().unzip();
        Ok(PoissonSolve { s: self.s(), targets: targets.to_vec(), values, gradient: Some(grads), tol: self.opts.tol })
    }

    /// Solution on the grid nodes.
    pub fn solve_nodes(&self, h: &GridFunction) -> Result<GridFunction, PoissonError> {
        let sol = self.solve(h, self.grid.nodes())?;
        Ok(GridFunction::new(self.grid.clone(), sol.values).expect("one value per node"))
    }

    pub fn solve_truncated(&self, h: &GridFunction, n: f64, targets: &[Point]) -> Result<PoissonSolve, PoissonError> {
        self.solve(&truncate(h, n), targets)
    }

    /// `∇w` at the targets, each of which must clear the boundary by
    /// `gradient_clearance`.
    pub fn gradient(&self, h: &GridFunction, targets: &[Point]) -> Result<Vec<Point>, PoissonError> {
        self.check_datum(h)?;
        for x in targets {
            self.check_target(x)?;
            let need = self.gradient_clearance(x);
            let delta = boundary_distance(x);
            if delta <= need {
                return Err(PoissonError::NearBoundary { delta, need });
            }
        }
        Ok(crate::exec::map_slice(targets, |x| self.row(x, true).dot_grad(h.values()).unwrap()))
    }

    /// Dense operator on the grid nodes: values everywhere, gradients on the
    /// nodes where `grad_mask` is set (zero rows elsewhere).
    pub fn node_operator(&self, grad_mask: Option<&[bool]>) -> NodeOperator {
        build_node_operator(&self.kernel, &self.grid, grad_mask, &self.opts)
    }
}

/// Dense node-to-node operator of any kernel.
pub fn build_node_operator<K: SingularKernel>(
    kernel: &K,
    grid: &QuadratureGrid,
    grad_mask: Option<&[bool]>,
    opts: &QuadOptions,
) -> NodeOperator {
    let n = grid.len();
    let rows = crate::exec::map_range(n, |k| {
        let want = grad_mask.is_some_and(|m| m[k]);
        engine::row(kernel, grid, &grid.nodes()[k], want, opts)
    });
    let mut value = Vec::with_capacity(n * n);
    let mut grad = grad_mask.map(|_| Vec::with_capacity(n * n));
    for r in rows {
        value.extend_from_slice(&r.value);
        if let Some(g) = grad.as_mut() {
            match r.grad {
                Some(rg) => g.extend_from_slice(&rg),
                None => g.extend(std::iter::repeat_n([0.0; 3], n)),
            }
        }
    }
    NodeOperator { n, value, grad }
}

/// Node operator of `J_λ`.
pub fn riesz_operator(lambda: f64, grid: &QuadratureGrid, opts: &QuadOptions) -> Result<NodeOperator, PoissonError> {
    if !(lambda > 0.0 && lambda < grid.dim() as f64) {
        return Err(PoissonError::Exponent(lambda));
    }
    Ok(build_node_operator(&RieszKernel { lambda }, grid, None, opts))
}

/// Precomputed node-to-node weights.
#[derive(Debug, Clone)]
pub struct NodeOperator {
    n: usize,
    value: Vec<f64>,
    grad: Option<Vec<Point>>,
}

impl NodeOperator {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn apply(&self, h: &[f64]) -> Vec<f64> {
        crate::exec::map_range(self.n, |i| {
            let row = &self.value[i * self.n..(i + 1) * self.n];
            row.iter().zip(h).map(|(w, v)| w * v).sum()
        })
    }

    pub fn apply_grad(&self, h: &[f64]) -> Option<Vec<Point>> {
        let g = self.grad.as_ref()?;
        Some(crate::exec::map_range(self.n, |i| {
            let row = &g[i * self.n..(i + 1) * self.n];
            let mut out = [0.0; 3];
            for (w, v) in row.iter().zip(h) {
                out[0] += w[0] * v;
                out[1] += w[1] * v;
                out[2] += w[2] * v;
            }
            out
        }))
    }
}

/// `J_λ(g)(x) = ∫ g(y) |x-y|^{-λ} dy` with the same near-field correction.
pub fn riesz_potential(lambda: f64, g: &GridFunction, targets: &[Point], opts: &QuadOptions) -> Result<Vec<f64>, PoissonError> {
    let dim = g.grid().dim() as f64;
    if !(lambda > 0.0 && lambda < dim) {
        return Err(PoissonError::Exponent(lambda));
    }
    let kernel = RieszKernel { lambda };
    let grid = g.grid().clone();
    Ok(crate::exec::map_slice(targets, |x| engine::row(&kernel, &grid, x, false, opts).dot(g.values())))
}

/// Kernel exponent of the operator `ℙ`: `N - (2s2 - s1 - a(1-s1))` for
/// `a >= 1`, `N - 2s2 + 1` for `0 <= a < 1`.
pub fn p_exponent(dim: usize, s1: f64, s2: f64, a: f64) -> f64 {
    let n = dim as f64;
    if a >= 1.0 {
        n - (2.0 * s2 - s1 - a * (1.0 - s1))
    } else {
        n - 2.0 * s2 + 1.0
    }
}

/// `ℙ(g)`; with `s1 = s2` this is the single-order operator `𝕀m`.
pub fn p_operator(s1: f64, s2: f64, a: f64, g: &GridFunction, targets: &[Point], opts: &QuadOptions) -> Result<Vec<f64>, PoissonError> {
    if !(a >= 0.0 && a < s2 / (1.0 - s1)) {
        return Err(PoissonError::Spec(format!("a = {a} outside [0, s2/(1-s1))")));
    }
    riesz_potential(p_exponent(g.grid().dim(), s1, s2, a), g, targets, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_grid, Domain};
    use crate::kernel::torsion;

    fn grid(nr: usize, na: usize) -> Arc<QuadratureGrid> {
        Arc::new(build_grid(Domain::disk(), nr, na, 2.0).unwrap())
    }

    #[test]
    fn torsion_at_moderate_resolution() {
        let g = grid(32, 32);
        let solver = Solver::new(0.75, g.clone()).unwrap();
        let h = GridFunction::constant(g, 1.0);
        let targets: Vec<Point> = (0..8).map(|i| [0.1 * i as f64 + 0.013, 0.02, 0.0]).collect();
        let sol = solver.solve(&h, &targets).unwrap();
        for (x, w) in targets.iter().zip(&sol.values) {
            let exact = torsion(2, 0.75, x);
            assert!((w - exact).abs() / exact < 2e-2, "{x:?}: {w} vs {exact}");
        }
    }

    #[test]
    fn riesz_center_value() {
        let exact = 2.0 * std::f64::consts::PI;
        let mut errs = Vec::new();
        for n in [24, 48] {
            let one = GridFunction::constant(grid(n, n), 1.0);
            let v = riesz_potential(1.0, &one, &[[0.0; 3]], &QuadOptions::default()).unwrap();
            errs.push((v[0] - exact).abs() / exact);
        }
        // halves under refinement until it reaches rounding level
        assert!(errs[0] < 1e-3 && (errs[1] < errs[0] / 2.0 || errs[1] < 1e-13), "{errs:?}");
        let one = GridFunction::constant(grid(8, 8), 1.0);
        assert!(riesz_potential(2.0, &one, &[[0.0; 3]], &QuadOptions::default()).is_err());
    }

    #[test]
    fn p_operator_branches() {
        assert_eq!(p_exponent(2, 0.75, 0.9, 0.0), 2.0 - 1.8 + 1.0);
        assert!((p_exponent(2, 0.8, 0.8, 1.5) - (2.0 - (0.8 - 1.5 * 0.2))).abs() < 1e-15);
    }
}
