//! Empirical blow-up thresholds in `λ` and small-data nonexistence sweeps.

use std::sync::Arc;

use crate::geometry::{build_grid, Domain};
use crate::norms::{weighted_lp, WeightedNormSpec};
use crate::poisson::datum::singular_datum;

use super::{Outcome, SystemError, SystemRun};

/// Printed on every nonexistence report: divergence on a grid is evidence,
/// not a proof.
pub const DESK_SCALE: &str = "suggestive at desk scale";

#[derive(Debug, Clone, PartialEq)]
pub struct BisectResult {
    /// Geometric midpoint of the final bracket.
    pub lambda_hat: f64,
    /// Largest converged and smallest diverged `λ`.
    pub bracket: (f64, f64),
    pub probes: Vec<(f64, Outcome)>,
}

impl BisectResult {
    pub fn relative_width(&self) -> f64 {
        (self.bracket.1 - self.bracket.0) / self.bracket.0
    }
}

/// Bisect in `ln λ` (with `μ` from the config) until the bracket is
/// relatively narrower than `rel_width`. A probe counts as converged when the
/// iterates settle, inside `H` or not, and as diverged on blow-up; one that
/// does neither aborts the bisection.
pub fn threshold_bisect(run: &SystemRun, lo: f64, hi: f64, rel_width: f64) -> Result<BisectResult, SystemError> {
    if !(lo > 0.0 && hi > lo && rel_width > 0.0) {
        return Err(SystemError::Invalid(format!("need 0 < lo < hi and a positive width, got [{lo}, {hi}]")));
    }
    let mu = run.config.mu;
    let classify = |l: f64| {
        let res = run.solver.picard(&run.problem(l, mu));
        match res.outcome {
            Outcome::Inconclusive { iterations } if res.settled => Outcome::Converged { iterations },
            o => o,
        }
    };
    let mut probes = Vec::new();
    let at_lo = classify(lo);
    probes.push((lo, at_lo));
    if !at_lo.is_converged() {
        return Err(SystemError::Invalid(format!("lower end λ = {lo} is {at_lo}, expected Converged")));
    }
    let at_hi = classify(hi);
    probes.push((hi, at_hi));
    if !at_hi.is_diverged() {
        return Err(SystemError::Invalid(format!("upper end λ = {hi} is {at_hi}, expected Diverged")));
    }
    let (mut a, mut b) = (lo, hi);
    while (b - a) / a >= rel_width {
        let mid = (a * b).sqrt();
        let o = classify(mid);
        probes.push((mid, o));
        match o {
            Outcome::Converged { .. } => a = mid,
            Outcome::Diverged { .. } => b = mid,
            Outcome::Inconclusive { .. } => {
                return Err(SystemError::NonMonotone(format!(
                    "λ = {mid:e} inside [{a:e}, {b:e}] is {o}; the grid may be too coarse"
                )))
            }
        }
    }
    Ok(BisectResult { lambda_hat: (a * b).sqrt(), bracket: (a, b), probes })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonexistenceRow {
    pub lambda: f64,
    pub outcome: Outcome,
    pub in_pi: Option<bool>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonexistenceReport {
    pub rows: Vec<NonexistenceRow>,
    pub label: &'static str,
}

impl NonexistenceReport {
    pub fn all_diverged(&self) -> bool {
        self.rows.iter().all(|r| r.outcome.is_diverged())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,outcome,in_pi,iterations,note\n");
        for r in &self.rows {
            let pi = r.in_pi.map_or(String::new(), |b| b.to_string());
            out.push_str(&format!("{:e},{},{},{},{}\n", r.lambda, r.outcome, pi, r.iterations, self.label));
        }
        out
    }
}

/// `λ = 10^{-1}, …, 10^{-6}`.
pub fn default_lambdas() -> Vec<f64> {
    (1..=6).map(|k| 10f64.powi(-k)).collect()
}

/// Run the iteration at each `λ` (with `μ` from the config).
pub fn nonexistence_probe(run: &SystemRun, lambdas: &[f64]) -> NonexistenceReport {
    let mu = run.config.mu;
    let rows = lambdas
        .iter()
        .map(|&l| {
            let res = run.solver.picard(&run.problem(l, mu));
            NonexistenceRow { lambda: l, outcome: res.outcome, in_pi: run.in_pi(l, mu), iterations: res.trace.len() }
        })
        .collect();
    NonexistenceReport { rows, label: DESK_SCALE }
}

/// `‖|x|^{-(N-ε)/m}‖_{L^m(B_1)} = (|S^{N-1}|/ε)^{1/m}`.
pub fn singular_norm_exact(dim: usize, m: f64, eps: f64) -> f64 {
    (Domain::new(dim).map(|d| d.sphere_area()).unwrap_or(f64::NAN) / eps).powf(1.0 / m)
}

/// Grid `L^m` norm of the singular datum against the closed form on a ladder
/// of radial resolutions: rows `(n_radial, grid, exact, relative error)`.
pub fn singular_norm_ladder(dim: usize, m: f64, eps: f64, radial: &[usize], angular: usize, grading: f64) -> Result<Vec<(usize, f64, f64, f64)>, SystemError> {
    let exact = singular_norm_exact(dim, m, eps);
    radial
        .iter()
        .map(|&n| {
            let grid = Arc::new(build_grid(Domain::new(dim)?, n, angular, grading)?);
            let f = singular_datum(m, eps, &grid)?;
            let got = weighted_lp(&f, &WeightedNormSpec { gamma: m, weight: 0.0 }, None);
            Ok((n, got, exact, (got - exact).abs() / exact))
        })
        .collect()
}
