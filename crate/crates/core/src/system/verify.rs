//! Weak-form residuals: `∫u(-Δ)^{s}φ` against `∫(source)φ` for smooth bumps
//! `φ`, with `(-Δ)^sφ` from the principal-value oracle.
//!
//! Both integrals are taken on a finer quadrature grid, with the nodal
//! solution and source interpolated onto it: `(-Δ)^sφ` varies on the scale
//! of the bump, which the solver grid resolves poorly near the center.

use std::sync::Arc;

use crate::exec;
use crate::geometry::{build_grid, Domain, Point, QuadratureGrid};
use crate::poisson::oracle::{bump, fractional_laplacian, PvOptions, Support};

use super::{PicardRun, Problem, SystemError, SystemSolver};

/// Bump `exp(1 - 1/(1 - |x-c|²/R²))` with its support inside the ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub center: Point,
    pub radius: f64,
}

impl TestFunction {
    /// Six bumps spread over the unit ball.
    pub fn family() -> Vec<TestFunction> {
        [([0.0, 0.0], 0.5), ([0.0, 0.0], 0.3), ([0.4, 0.0], 0.3), ([-0.3, 0.3], 0.3), ([0.0, -0.5], 0.3), ([0.2, 0.45], 0.3)]
            .iter()
            .map(|&(c, radius)| TestFunction { center: [c[0], c[1], 0.0], radius })
            .collect()
    }

    fn support(&self) -> Support {
        Support { center: self.center, radius: self.radius, kink: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub pv: PvOptions,
    /// Radial and angular resolution of the integration grid.
    pub fine: (usize, usize),
    pub grading: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { pv: PvOptions::default(), fine: (128, 256), grading: 1.25 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualRow {
    /// 1 for the `s1` equation, 2 for the `s2` equation.
    pub equation: u8,
    pub test: usize,
    /// `∫ w (-Δ)^s φ`.
    pub lhs: f64,
    /// `∫ source · φ`.
    pub rhs: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
}

impl ResidualReport {
    pub fn max_relative(&self) -> f64 {
        self.rows.iter().map(|r| r.relative).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("equation,test,lhs,rhs,relative\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{:.10e},{:.10e},{:.6e}\n", r.equation, r.test, r.lhs, r.rhs, r.relative));
        }
        out
    }
}

pub fn relative(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / scale
    }
}

/// Integration grid and the test functions with their fractional Laplacians
/// on it, reusable across solutions of the same order.
pub struct WeakForm {
    fine: Arc<QuadratureGrid>,
    phi: Vec<Vec<f64>>,
    lap: Vec<Vec<f64>>,
}

impl WeakForm {
    pub fn new(dim: usize, s: f64, tests: &[TestFunction], opts: &VerifyOptions) -> Result<Self, SystemError> {
        let fine = Arc::new(build_grid(Domain::new(dim)?, opts.fine.0, opts.fine.1, opts.grading)?);
        let mut phi = Vec::new();
        let mut lap = Vec::new();
        for t in tests {
            let b = bump(t.center, t.radius);
            let sup = t.support();
            phi.push(fine.nodes().iter().map(b).collect());
            lap.push(exec::map_slice(fine.nodes(), |x| fractional_laplacian(dim, s, x, b, &sup, &opts.pv)));
        }
        Ok(WeakForm { fine, phi, lap })
    }

    /// `(∫ w(-Δ)^sφ, ∫ source·φ)` per test function, with `w` and `source`
    /// given at the nodes of `grid`.
    pub fn pairs(&self, grid: &QuadratureGrid, w: &[f64], source: &[f64]) -> Vec<(f64, f64)> {
        let fine = &self.fine;
        let wf: Vec<f64> = exec::map_slice(fine.nodes(), |x| grid.interpolate(w, x, Some(0.0)));
        let sf: Vec<f64> = exec::map_slice(fine.nodes(), |x| grid.interpolate(source, x, None));
        self.lap
            .iter()
            .zip(&self.phi)
            .map(|(lap, phi)| (fine.sum(|k| wf[k] * lap[k]), fine.sum(|k| sf[k] * phi[k])))
            .collect()
    }
}

/// Residuals of both equations of a finished run over `tests`.
pub fn verify_weak_solution(
    solver: &SystemSolver,
    run: &PicardRun,
    pr: &Problem,
    tests: &[TestFunction],
    opts: &VerifyOptions,
) -> Result<ResidualReport, SystemError> {
    let grid = solver.grid();
    let (s1, s2) = solver.orders();
    // sources at the final iterate
    let src1: Vec<f64> = solver.power(&run.grad_v, pr.q).iter().zip(&pr.f).map(|(a, f)| a + pr.lambda * f).collect();
    let src2: Vec<f64> = solver.power(&run.grad_u, pr.p).iter().zip(&pr.g).map(|(a, g)| a + pr.mu * g).collect();
    let mut rows = Vec::new();
    for (eq, s, w, src) in [(1u8, s1, &run.u, &src1), (2u8, s2, &run.v, &src2)] {
        let form = WeakForm::new(grid.dim(), s, tests, opts)?;
        for (test, (lhs, rhs)) in form.pairs(grid, w, src).into_iter().enumerate() {
            rows.push(ResidualRow { equation: eq, test, lhs, rhs, relative: relative(lhs, rhs) });
        }
    }
    rows.sort_by_key(|r| (r.test, r.equation));
    Ok(ResidualReport { rows })
}
