//! Damped Picard iteration for the coupled system
//! `(-Δ)^{s1}u = |∇v|^q + λf`, `(-Δ)^{s2}v = |∇u|^p + μg` on the unit ball,
//! with the smallness budget, the admissible set `Π`, the invariant set `H`,
//! weak-form residuals and empirical blow-up thresholds.

pub mod config;
pub mod threshold;
pub mod verify;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exponents::{derive, ExponentError, ExponentProfile, ExtRational};
use crate::geometry::{build_grid, norm, Domain, GeometryError, GridFunction, Point, QuadratureGrid};
use crate::norms::{weighted_lp_values, WeightedNormSpec};
use crate::poisson::{DatumSpec, NodeOperator, PoissonError, QuadOptions, Solver};

pub use config::{parse_key_values, ConfigError, SystemConfig};
pub use threshold::{nonexistence_probe, threshold_bisect, BisectResult, NonexistenceReport};
pub use verify::{verify_weak_solution, ResidualReport, TestFunction, VerifyOptions, WeakForm};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// `pq ≤ 1`: the concavity argument behind the budget does not apply.
    #[error("smallness budget needs pq > 1, got pq = {0}")]
    Budget(f64),
    #[error("{0}")]
    Invalid(String),
    /// A bisection probe contradicted a monotone flip.
    #[error("non-monotone classification: {0}")]
    NonMonotone(String),
}

/// `Υ(α) = α^{1/pq} - C̃α`, maximized at `ℓ` with value `Λ*`; `A = Λ*/C̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallnessBudget {
    pub pq: f64,
    pub c_tilde: f64,
    pub ell: f64,
    pub lambda_star: f64,
    pub a: f64,
}

impl SmallnessBudget {
    pub fn upsilon(&self, alpha: f64) -> f64 {
        upsilon(self.pq, self.c_tilde, alpha)
    }

    /// Radius `ℓ^{1/pq}` of the invariant set.
    pub fn h_radius(&self) -> f64 {
        self.ell.powf(1.0 / self.pq)
    }
}

fn upsilon(pq: f64, c: f64, alpha: f64) -> f64 {
    // α(α^{1/pq-1} - C̃) keeps digits when pq is close to 1
    alpha * ((1.0 / pq - 1.0) * alpha.ln()).exp() - c * alpha
}

/// Closed-form budget, cross-checked by golden-section search in `ln α`.
pub fn smallness_budget(pq: f64, c_tilde: f64) -> Result<SmallnessBudget, SystemError> {
    if !(pq > 1.0 && pq.is_finite()) {
        return Err(SystemError::Budget(pq));
    }
    if !(c_tilde > 0.0 && c_tilde.is_finite()) {
        return Err(SystemError::Invalid(format!("C̃ = {c_tilde} must be positive")));
    }
    let e = pq / (1.0 - pq);
    let ell = (e * (pq * c_tilde).ln()).exp();
    // at the maximizer C̃ℓ^{1-1/pq} = 1/pq
    let lambda_star = ell.powf(1.0 / pq) * (1.0 - 1.0 / pq);
    if !(ell.is_finite() && ell > 0.0 && lambda_star > 0.0) {
        return Err(SystemError::Invalid(format!("budget out of floating range for pq = {pq}, C̃ = {c_tilde}")));
    }
    let budget = SmallnessBudget { pq, c_tilde, ell, lambda_star, a: lambda_star / c_tilde };
    let (t, v) = golden_max(|t| upsilon(pq, c_tilde, t.exp()), ell.ln() - 40.0, ell.ln() + 40.0);
    let scale = lambda_star.abs();
    if (v - lambda_star).abs() > 1e-8 * scale || (t - ell.ln()).abs() > 1e-3 {
        return Err(SystemError::Invalid(format!(
            "golden-section check failed: max {v} at ln α = {t}, closed form {lambda_star} at {}",
            ell.ln()
        )));
    }
    Ok(budget)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, f(t))
}

/// `L^e` norm for an exponent that may be `∞`.
fn lebesgue(grid: &QuadratureGrid, v: &[f64], e: &ExtRational) -> f64 {
    weighted_lp_values(grid, v, &WeightedNormSpec { gamma: e.to_f64(), weight: 0.0 }, None)
}

/// `λ^p‖f‖_m^p + μ‖g‖_σ ≤ A`.
pub fn pi_membership(budget: &SmallnessBudget, profile: &ExponentProfile, lambda: f64, mu: f64, f: &GridFunction, g: &GridFunction) -> bool {
    pi_load(profile, lambda, mu, f, g) <= budget.a
}

/// Left side of the `Π` test.
pub fn pi_load(profile: &ExponentProfile, lambda: f64, mu: f64, f: &GridFunction, g: &GridFunction) -> f64 {
    let p = crate::exponents::rational::to_f64(&profile.p);
    let nf = lebesgue(f.grid(), f.values(), &profile.m);
    let ng = lebesgue(g.grid(), g.values(), &profile.sigma);
    (lambda * nf).powf(p) + mu * ng
}

/// Default exponent of the `H` norm: midway in `(qm, σ̂_{s1,s2,p})`, `2qm`
/// when the upper end is infinite, and 8 when `m = ∞` leaves no window.
pub fn default_r(profile: &ExponentProfile) -> f64 {
    let q = crate::exponents::rational::to_f64(&profile.q);
    let hi = derive(profile).sigma_hat_s1s2_p.to_f64();
    match profile.m.to_f64() * q {
        qm if qm.is_infinite() => 8.0,
        qm if hi.is_infinite() => 2.0 * qm,
        qm => 0.5 * (qm + hi),
    }
}

/// Node operators of both orders with gradient rows on the nodes kept by the
/// boundary-ring convention.
pub struct SystemSolver {
    grid: Arc<QuadratureGrid>,
    s1: f64,
    s2: f64,
    op1: NodeOperator,
    op2: NodeOperator,
    mask: Vec<bool>,
    trim: usize,
}

/// Numerical inputs of one run.
#[derive(Debug, Clone)]
pub struct Problem {
    pub p: f64,
    pub q: f64,
    /// Exponents of `‖|∇u|δ^{1-s1}‖` (`pσ`) and of the `H` norm.
    pub u_norm: f64,
    pub r: f64,
    pub lambda: f64,
    pub mu: f64,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub damping: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub blowup_factor: f64,
    /// `ℓ^{1/pq}`, when a budget is available.
    pub h_radius: Option<f64>,
}

/// One application of `T`: `u` from `v`, then the new `v` from `u`, with
/// gradients.
#[derive(Debug, Clone)]
pub struct Step {
    pub u: Vec<f64>,
    pub grad_u: Vec<Point>,
    pub v: Vec<f64>,
    pub grad_v: Vec<Point>,
}

impl SystemSolver {
    pub fn new(grid: Arc<QuadratureGrid>, s1: f64, s2: f64, opts: QuadOptions) -> Result<Self, SystemError> {
        let trim = grid.gradient_trim().max(1);
        let mask = grid.interior_mask(trim);
        let op1 = Solver::new(s1, grid.clone())?.with_options(opts).node_operator(Some(&mask));
        let op2 = Solver::new(s2, grid.clone())?.with_options(opts).node_operator(Some(&mask));
        Ok(SystemSolver { grid, s1, s2, op1, op2, mask, trim })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn orders(&self) -> (f64, f64) {
        (self.s1, self.s2)
    }

    /// Measure of the boundary rings where gradients are not evaluated.
    pub fn trimmed_measure(&self) -> f64 {
        self.grid.trimmed_measure(self.trim)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn solve1(&self, h: &[f64]) -> (Vec<f64>, Vec<Point>) {
        (self.op1.apply(h), self.op1.apply_grad(h).expect("gradient rows"))
    }

    pub fn solve2(&self, h: &[f64]) -> (Vec<f64>, Vec<Point>) {
        (self.op2.apply(h), self.op2.apply_grad(h).expect("gradient rows"))
    }

    /// `|∇w|^e` on the kept nodes, 0 on the trimmed rings.
    fn power(&self, grad: &[Point], e: f64) -> Vec<f64> {
        grad.iter().zip(&self.mask).map(|(g, &keep)| if keep { norm(g).powf(e) } else { 0.0 }).collect()
    }

    /// `T(φ)` given `∇φ`.
    pub fn step(&self, grad_phi: &[Point], pr: &Problem) -> Step {
        let h1: Vec<f64> = self.power(grad_phi, pr.q).iter().zip(&pr.f).map(|(a, f)| a + pr.lambda * f).collect();
        let (u, grad_u) = self.solve1(&h1);
        let h2: Vec<f64> = self.power(&grad_u, pr.p).iter().zip(&pr.g).map(|(a, g)| a + pr.mu * g).collect();
        let (v, grad_v) = self.solve2(&h2);
        Step { u, grad_u, v, grad_v }
    }

    /// `‖|∇w|δ^{1-s1}‖_e` over the kept nodes.
    pub fn weighted_grad_norm(&self, grad: &[Point], e: f64) -> f64 {
        let mags: Vec<f64> = grad.iter().map(norm).collect();
        weighted_lp_values(&self.grid, &mags, &WeightedNormSpec { gamma: e, weight: 1.0 - self.s1 }, Some(&self.mask))
    }

    /// Iterate `v_{k+1} = (1-θ)v_k + θT(v_k)` from `v_0 = 0`.
    pub fn picard(&self, pr: &Problem) -> PicardRun {
        let n = self.grid.len();
        let mut v = vec![0.0; n];
        let mut grad_v = vec![[0.0; 3]; n];
        let mut u = vec![0.0; n];
        let mut grad_u = vec![[0.0; 3]; n];
        let mut trace = Vec::new();
        let mut cap = f64::INFINITY;
        let (mut calm, mut hot) = (0usize, 0usize);
        let th = pr.damping;
        let mut outcome = Outcome::Inconclusive { iterations: pr.max_iters };
        let mut settled = false;
        for k in 1..=pr.max_iters {
            let st = self.step(&grad_v, pr);
            let dv: Vec<Point> = st.grad_v.iter().zip(&grad_v).map(|(a, b)| sub(a, b)).collect();
            for i in 0..n {
                v[i] = (1.0 - th) * v[i] + th * st.v[i];
                grad_v[i] = lin(1.0 - th, &grad_v[i], th, &st.grad_v[i]);
            }
            u = st.u;
            grad_u = st.grad_u;
            let norm_v = self.weighted_grad_norm(&grad_v, pr.r);
            let norm_u = self.weighted_grad_norm(&grad_u, pr.u_norm);
            // ‖∇(v_{k+1} - v_k)‖ = θ‖∇(T v_k - v_k)‖
            let diff_abs = th * self.weighted_grad_norm(&dv, pr.r);
            let diff = if norm_v > 0.0 { diff_abs / norm_v } else { diff_abs };
            let in_h = pr.h_radius.map(|rad| norm_v <= rad);
            trace.push(IterRecord { iter: k, norm_grad_u: norm_u, norm_grad_v_r: norm_v, in_h, diff });
            let finite = norm_v.is_finite() && norm_u.is_finite() && v.iter().all(|x| x.is_finite()) && u.iter().all(|x| x.is_finite());
            if !finite {
                outcome = Outcome::Diverged { at: k };
                break;
            }
            if k == 1 {
                // initial RHS response: the monitored norm of T(0)
                cap = pr.blowup_factor * self.weighted_grad_norm(&st.grad_v, pr.r);
            }
            hot = if norm_v > cap { hot + 1 } else { 0 };
            if hot >= 3 {
                outcome = Outcome::Diverged { at: k };
                break;
            }
            calm = if diff < pr.tol { calm + 1 } else { 0 };
            if calm >= 3 {
                settled = true;
                outcome = if in_h != Some(false) {
                    Outcome::Converged { iterations: k }
                } else {
                    Outcome::Inconclusive { iterations: k }
                };
                break;
            }
        }
        PicardRun { trace, outcome, settled, u, v, grad_u, grad_v, cap, r: pr.r, trimmed_measure: self.trimmed_measure() }
    }
}

fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn lin(a: f64, x: &Point, b: f64, y: &Point) -> Point {
    [a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged { iterations: usize },
    Diverged { at: usize },
    Inconclusive { iterations: usize },
}

impl Outcome {
    pub fn is_converged(&self) -> bool {
        matches!(self, Outcome::Converged { .. })
    }

    pub fn is_diverged(&self) -> bool {
        matches!(self, Outcome::Diverged { .. })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Converged { iterations } => write!(f, "Converged({iterations})"),
            Outcome::Diverged { at } => write!(f, "Diverged({at})"),
            Outcome::Inconclusive { iterations } => write!(f, "Inconclusive({iterations})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    /// `‖|∇u_k|δ^{1-s1}‖_{pσ}`.
    pub norm_grad_u: f64,
    /// `‖|∇v_k|δ^{1-s1}‖_r`.
    pub norm_grad_v_r: f64,
    pub in_h: Option<bool>,
    /// Relative weighted norm of `∇(v_k - v_{k-1})`.
    pub diff: f64,
}

#[derive(Debug, Clone)]
pub struct PicardRun {
    pub trace: Vec<IterRecord>,
    pub outcome: Outcome,
    /// The difference test passed, whether or not the limit lies in `H`.
    pub settled: bool,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub grad_u: Vec<Point>,
    pub grad_v: Vec<Point>,
    /// Blow-up cap on `‖|∇v|δ^{1-s1}‖_r`.
    pub cap: f64,
    pub r: f64,
    pub trimmed_measure: f64,
}

impl PicardRun {
    /// `iter,norm_grad_u,norm_grad_v_r,in_H,diff_norm`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("iter,norm_grad_u,norm_grad_v_r,in_H,diff_norm\n");
        for r in &self.trace {
            let h = r.in_h.map_or(String::new(), |b| b.to_string());
            out.push_str(&format!("{},{:.10e},{:.10e},{},{:.10e}\n", r.iter, r.norm_grad_u, r.norm_grad_v_r, h, r.diff));
        }
        out
    }

    /// Node table `x1,x2[,x3],delta,u,v`.
    pub fn solution_csv(&self, grid: &QuadratureGrid) -> String {
        let three = grid.dim() == 3;
        let mut out = String::from(if three { "x1,x2,x3,delta,u,v\n" } else { "x1,x2,delta,u,v\n" });
        for (k, x) in grid.nodes().iter().enumerate() {
            let pos = if three { format!("{:.10e},{:.10e},{:.10e}", x[0], x[1], x[2]) } else { format!("{:.10e},{:.10e}", x[0], x[1]) };
            out.push_str(&format!("{pos},{:.10e},{:.10e},{:.10e}\n", grid.delta()[k], self.u[k], self.v[k]));
        }
        out
    }

    /// `H` membership held at every recorded iteration.
    pub fn h_invariant(&self) -> bool {
        self.trace.iter().all(|r| r.in_h != Some(false))
    }
}

/// A configured experiment: grid, operators, data and budget.
pub struct SystemRun {
    pub config: SystemConfig,
    pub solver: Arc<SystemSolver>,
    pub f: GridFunction,
    pub g: GridFunction,
    pub budget: Option<SmallnessBudget>,
}

impl SystemRun {
    /// Build operators for `config` and calibrate `C̃` unless it is given.
    pub fn new(config: SystemConfig) -> Result<Self, SystemError> {
        let grid = Arc::new(build_grid(Domain::new(config.profile.n as usize)?, config.n_radial, config.n_angular, config.grading)?);
        let solver = Arc::new(SystemSolver::new(grid, config.s1(), config.s2(), QuadOptions::default())?);
        Self::with_solver(config, solver)
    }

    /// Reuse operators built for the same grid and orders.
    pub fn with_solver(config: SystemConfig, solver: Arc<SystemSolver>) -> Result<Self, SystemError> {
        let grid = solver.grid().clone();
        if solver.orders() != (config.s1(), config.s2()) || grid.resolution().0 != config.n_radial {
            return Err(SystemError::Invalid("operators were built for a different configuration".into()));
        }
        let f = realize_datum(&config.f, &grid)?;
        let g = realize_datum(&config.g, &grid)?;
        let mut run = SystemRun { config, solver, f, g, budget: None };
        let pq = run.pq();
        if pq > 1.0 {
            let c = match run.config.c_tilde {
                Some(c) => c,
                None => run.calibrate_c_tilde(),
            };
            run.budget = Some(smallness_budget(pq, c)?);
        }
        Ok(run)
    }

    fn pq(&self) -> f64 {
        self.config.p() * self.config.q()
    }

    pub fn problem(&self, lambda: f64, mu: f64) -> Problem {
        let c = &self.config;
        Problem {
            p: c.p(),
            q: c.q(),
            u_norm: (c.p() * c.profile.sigma.to_f64()).max(1.0),
            r: c.r(),
            lambda,
            mu,
            f: self.f.values().to_vec(),
            g: self.g.values().to_vec(),
            damping: c.damping,
            max_iters: c.max_iters,
            tol: c.tol,
            blowup_factor: c.blowup_factor,
            h_radius: self.budget.map(|b| b.h_radius()),
        }
    }

    pub fn solve(&self) -> PicardRun {
        self.solver.picard(&self.problem(self.config.lambda, self.config.mu))
    }

    pub fn in_pi(&self, lambda: f64, mu: f64) -> Option<bool> {
        self.budget.map(|b| pi_membership(&b, &self.config.profile, lambda, mu, &self.f, &self.g))
    }

    /// Largest observed ratio in the one-step inequality
    /// `‖|∇T(φ)|δ^{1-s1}‖_r ≤ C̃(‖|∇φ|δ^{1-s1}‖_r^{pq} + μ‖g‖_σ + λ^p‖f‖_m^p)`
    /// over unit data, data-free shapes at several amplitudes and mixtures.
    pub fn calibrate_c_tilde(&self) -> f64 {
        let s = &self.solver;
        let grid = s.grid();
        let c = &self.config;
        let (p, pq, r) = (c.p(), self.pq(), c.r());
        let nf = lebesgue(grid, self.f.values(), &c.profile.m);
        let ng = lebesgue(grid, self.g.values(), &c.profile.sigma);
        // shapes: responses to the data and to a centered bump
        let one = vec![1.0; grid.len()];
        let bump: Vec<f64> = grid.nodes().iter().map(|x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * 6.0).exp()).collect();
        let shapes: Vec<Vec<Point>> = [self.f.values(), self.g.values(), &one, &bump]
            .iter()
            .map(|h| s.solve2(h).1)
            .filter(|gr| s.weighted_grad_norm(gr, r) > 0.0)
            .collect();
        let mut cases: Vec<(Vec<Point>, f64, f64)> = vec![(vec![[0.0; 3]; grid.len()], 1.0, 0.0), (vec![[0.0; 3]; grid.len()], 0.0, 1.0)];
        for sh in &shapes {
            let base = s.weighted_grad_norm(sh, r);
            for amp in [1e-2, 1.0, 1e2] {
                let k = amp / base;
                let scaled: Vec<Point> = sh.iter().map(|g| [k * g[0], k * g[1], k * g[2]]).collect();
                for (l, m) in [(0.0, 0.0), (1.0, 1.0), (1e-2, 1e-2)] {
                    cases.push((scaled.clone(), l, m));
                }
            }
        }
        let mut worst: f64 = 0.0;
        for (grad_phi, l, m) in cases {
            let mut pr = self.problem(l, m);
            pr.max_iters = 1;
            let st = s.step(&grad_phi, &pr);
            let lhs = s.weighted_grad_norm(&st.grad_v, r);
            let rhs = s.weighted_grad_norm(&grad_phi, r).powf(pq) + m * ng + (l * nf).powf(p);
            if rhs > 0.0 && lhs.is_finite() {
                worst = worst.max(lhs / rhs);
            }
        }
        worst
    }
}

pub fn realize_datum(spec: &DatumSpec, grid: &Arc<QuadratureGrid>) -> Result<GridFunction, SystemError> {
    let h = spec.realize(grid)?;
    if let Some(k) = h.values().iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(SystemError::Invalid(format!("datum must be finite and nonnegative (node {k})")));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_closed_form() {
        let b = smallness_budget(2.0, 0.5).unwrap();
        assert!((b.ell - 1.0).abs() < 1e-12);
        assert!((b.lambda_star - 0.5).abs() < 1e-12);
        assert!((b.a - 1.0).abs() < 1e-12);
        assert!((b.lambda_star - (b.ell.powf(0.5) - 0.5 * b.ell)).abs() < 1e-12);
        assert!(matches!(smallness_budget(1.0, 0.5), Err(SystemError::Budget(_))));
    }

    #[test]
    fn budget_near_pq_one() {
        let pq = 1.0 + 1e-6;
        let b = smallness_budget(pq, 1.0).unwrap();
        let ell = (pq * 1.0f64).powf(pq / (1.0 - pq));
        assert!((b.ell - ell).abs() < 1e-9 * ell);
        assert!(b.lambda_star > 0.0 && b.lambda_star.is_finite());
    }

    #[test]
    fn budget_decreases_in_c_tilde() {
        let mut prev = smallness_budget(1.5, 0.1).unwrap();
        for c in [0.2, 0.5, 1.0, 3.0] {
            let b = smallness_budget(1.5, c).unwrap();
            assert!(b.ell < prev.ell && b.lambda_star < prev.lambda_star);
            for alpha in [0.1 * b.ell, 0.5 * b.ell, 2.0 * b.ell, 10.0 * b.ell] {
                assert!(b.upsilon(alpha) <= b.lambda_star);
            }
            prev = b;
        }
    }
}
