//! Closed-form Green's function of `(-Δ)^s` on the unit ball, the comparison
//! kernels of the two-sided and gradient estimates, and quasi-random ratio
//! scans against them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::gamma::{gamma, ln_gamma};
use thiserror::Error;

use crate::geometry::{boundary_distance, dist, norm, Domain, Point};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("order s = {0} outside (0, 1)")]
    Order(f64),
    #[error("gradient estimates need s in (1/2, 1), got {0}")]
    GradientOrder(f64),
    #[error("x = y: the Green's function is singular on the diagonal")]
    Coincident,
    #[error("x lies outside the domain")]
    Outside,
    #[error("finite-difference step {0:e} too small: x is too close to y or to the boundary")]
    Unreliable(f64),
    #[error("eta = {0} outside (0, 1)")]
    Eta(f64),
    #[error("unknown estimate `{0}` (expected 2.2-lower, 2.2-upper, 2.3, 2.4-left, 2.4-right, 2.5, 2.6)")]
    Estimate(String),
    #[error("sample size {0} below 100")]
    Samples(usize),
}

/// `G_s(x, y) = κ(N,s) |x-y|^{2s-N} ∫_0^{r0} t^{s-1} (1+t)^{-N/2} dt`,
/// `r0 = (1-|x|²)(1-|y|²)/|x-y|²`, with the profile integral written as a
/// regularized incomplete Beta function.
#[derive(Debug, Clone, Copy)]
pub struct GreenKernel {
    s: f64,
    domain: Domain,
    kappa: f64,
    beta_full: f64,
    /// Chebyshev coefficients on `[0, 1/2]` of `₂F₁(a+b, 1; a+1; ·)` and
    /// `₂F₁(a+b, 1; b+1; ·)`, `a = s`, `b = N/2 - s`.
    lower: [f64; CHEB],
    upper: [f64; CHEB],
}

const CHEB: usize = 26;

/// `₂F₁(c, 1; e; z)` by its power series, `|z| ≤ 1/2`.
fn hyp_series(c: f64, e: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..400 {
        term *= (c + k as f64) / (e + k as f64) * z;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn cheb_fit(f: impl Fn(f64) -> f64) -> [f64; CHEB] {
    let n = CHEB;
    let vals: Vec<f64> = (0..n)
        .map(|j| {
            let t = (PI * (j as f64 + 0.5) / n as f64).cos();
            f(0.25 * (t + 1.0))
        })
        .collect();
    let mut c = [0.0; CHEB];
    for (k, ck) in c.iter_mut().enumerate() {
        let sum: f64 = vals
            .iter()
            .enumerate()
            .map(|(j, v)| v * (PI * k as f64 * (j as f64 + 0.5) / n as f64).cos())
            .sum();
        *ck = 2.0 * sum / n as f64;
    }
    c[0] *= 0.5;
    c
}

/// Clenshaw evaluation on `[0, 1/2]`.
fn cheb_eval(c: &[f64; CHEB], z: f64) -> f64 {
    let t = 4.0 * z - 1.0;
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    t * b1 - b2 + c[0]
}

impl GreenKernel {
    pub fn new(s: f64, domain: Domain) -> Result<Self, KernelError> {
        if !(s > 0.0 && s < 1.0) {
            return Err(KernelError::Order(s));
        }
        let n = domain.dim() as f64;
        let kappa = gamma(n / 2.0) / (4f64.powf(s) * PI.powf(n / 2.0) * gamma(s) * gamma(s));
        let (a, b) = (s, n / 2.0 - s);
        let beta_full = ln_beta(a, b).exp();
        let lower = cheb_fit(|z| hyp_series(a + b, a + 1.0, z));
        let upper = cheb_fit(|z| hyp_series(a + b, b + 1.0, z));
        Ok(GreenKernel { s, domain, kappa, beta_full, lower, upper })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// `κ(N,s) = Γ(N/2) / (4^s π^{N/2} Γ(s)²)`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    fn dim(&self) -> f64 {
        self.domain.dim() as f64
    }

    /// `∫_0^{r0} t^{s-1}(1+t)^{-N/2} dt`.
    pub fn profile(&self, r0: f64) -> f64 {
        if r0 <= 0.0 {
            return 0.0;
        }
        // B·I_z(a, b) = z^a (1-z)^b ₂F₁(a+b, 1; a+1; z) / a with z = r0/(1+r0),
        // and the reflected form above z = 1/2
        let (a, b) = (self.s, self.dim() / 2.0 - self.s);
        if r0 <= 1.0 {
            let z = r0 / (1.0 + r0);
            r0.powf(a) * (1.0 + r0).powf(-(a + b)) * cheb_eval(&self.lower, z) / a
        } else {
            let w = 1.0 / (1.0 + r0);
            self.beta_full - w.powf(b) * (1.0 - w).powf(a) * cheb_eval(&self.upper, w) / b
        }
    }

    /// `profile` through the incomplete Beta function of `statrs`; slower,
    /// kept as a cross-check.
    pub fn profile_beta(&self, r0: f64) -> f64 {
        if r0 <= 0.0 {
            return 0.0;
        }
        let b = self.dim() / 2.0 - self.s;
        if r0 > 1.0 {
            self.beta_full * (1.0 - beta_reg(b, self.s, 1.0 / (1.0 + r0)))
        } else {
            self.beta_full * beta_reg(self.s, b, r0 / (1.0 + r0))
        }
    }

    /// Derivative of `profile` in `r0`.
    pub fn profile_derivative(&self, r0: f64) -> f64 {
        r0.powf(self.s - 1.0) * (1.0 + r0).powf(-self.dim() / 2.0)
    }

    pub fn green(&self, x: &Point, y: &Point) -> Result<f64, KernelError> {
        if x == y {
            return Err(KernelError::Coincident);
        }
        Ok(self.eval(x, y))
    }

    /// `|x-y|^{2s-N}` times the profile, from `A = (1-|x|²)(1-|y|²)`,
    /// `D = |x-y|²` and `Q = A^s (D+A)^{-N/2}`; this form needs a single
    /// power when `r0 ≤ 1`.
    fn scaled_profile(&self, a: f64, d: f64, q: f64) -> f64 {
        let half = self.dim() / 2.0;
        if a <= d {
            q * cheb_eval(&self.lower, a / (d + a)) / self.s
        } else {
            let b = half - self.s;
            self.beta_full * d.powf(self.s - half) - q * cheb_eval(&self.upper, d / (d + a)) / b
        }
    }

    fn q_factor(&self, a: f64, d: f64) -> f64 {
        let sum = d + a;
        let inv = if self.domain.dim() == 2 { 1.0 / sum } else { 1.0 / (sum * sum.sqrt()) };
        a.powf(self.s) * inv
    }

    /// `G_s(x, y)` without the diagonal check; 0 if either point is outside.
    pub fn eval(&self, x: &Point, y: &Point) -> f64 {
        let ax = 1.0 - sq(x);
        let ay = 1.0 - sq(y);
        if ax <= 0.0 || ay <= 0.0 {
            return 0.0;
        }
        let a = ax * ay;
        let d = dist2(x, y);
        self.kappa * self.scaled_profile(a, d, self.q_factor(a, d))
    }

    /// `G_s(x, y)` and the analytic gradient in `x`.
    pub fn eval_grad(&self, x: &Point, y: &Point) -> (f64, Point) {
        let ax = 1.0 - sq(x);
        let ay = 1.0 - sq(y);
        if ax <= 0.0 || ay <= 0.0 {
            return (0.0, [0.0; 3]);
        }
        let n = self.dim();
        let a = ax * ay;
        let d = dist2(x, y);
        let r0 = a / d;
        let q = self.q_factor(a, d);
        // |x-y|^{2s-N} P(r0) and |x-y|^{2s-N} P'(r0)
        let pp = self.scaled_profile(a, d, q);
        let dp = q * d / a;
        let mut grad = [0.0; 3];
        for c in 0..3 {
            let diff = x[c] - y[c];
            let dr0 = (-2.0 * x[c] * ay - 2.0 * r0 * diff) / d;
            grad[c] = self.kappa * ((2.0 * self.s - n) * diff / d * pp + dp * dr0);
        }
        (self.kappa * pp, grad)
    }

    /// Analytic `∇_x G` (the quadrature path).
    pub fn grad_x(&self, x: &Point, y: &Point) -> Point {
        self.eval_grad(x, y).1
    }

    /// `∇_x G` by central differences with step `h = min(|x-y|, δ(x))/64` and
    /// one Richardson step. `consistency` is the relative change between the
    /// steps `h` and `h/2`.
    pub fn grad_green_x(&self, x: &Point, y: &Point) -> Result<FdGradient, KernelError> {
        if x == y {
            return Err(KernelError::Coincident);
        }
        let dx = boundary_distance(x);
        if dx <= 0.0 {
            return Err(KernelError::Outside);
        }
        let h = dist(x, y).min(dx) / 64.0;
        if h < 1e-9 {
            return Err(KernelError::Unreliable(h));
        }
        let d = self.domain.dim();
        let central = |h: f64| {
            let mut g = [0.0; 3];
            for c in 0..d {
                let mut xp = *x;
                let mut xm = *x;
                xp[c] += h;
                xm[c] -= h;
                g[c] = (self.eval(&xp, y) - self.eval(&xm, y)) / (2.0 * h);
            }
            g
        };
        let g1 = central(h);
        let g2 = central(h / 2.0);
        let mut grad = [0.0; 3];
        for c in 0..3 {
            grad[c] = (4.0 * g2[c] - g1[c]) / 3.0;
        }
        let diff = norm(&[g1[0] - g2[0], g1[1] - g2[1], g1[2] - g2[2]]);
        let consistency = diff / norm(&g2).max(f64::MIN_POSITIVE);
        Ok(FdGradient { grad, step: h, consistency })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGradient {
    pub grad: Point,
    pub step: f64,
    pub consistency: f64,
}

fn sq(x: &Point) -> f64 {
    x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
}

fn dist2(x: &Point, y: &Point) -> f64 {
    let a = x[0] - y[0];
    let b = x[1] - y[1];
    let c = x[2] - y[2];
    a * a + b * b + c * c
}

/// Torsion coefficient: `(-Δ)^s [c (1-|x|²)_+^s] = 1` on the ball for
/// `c = Γ(N/2) / (4^s Γ(N/2 + s) Γ(1 + s))`.
pub fn torsion_coefficient(dim: usize, s: f64) -> f64 {
    let n = dim as f64;
    (ln_gamma(n / 2.0) - s * 4f64.ln() - ln_gamma(n / 2.0 + s) - ln_gamma(1.0 + s)).exp()
}

pub fn torsion(dim: usize, s: f64, x: &Point) -> f64 {
    let a = 1.0 - sq(x);
    if a <= 0.0 {
        0.0
    } else {
        torsion_coefficient(dim, s) * a.powf(s)
    }
}

/// Right-hand side of the two-sided estimate:
/// `|x-y|^{2s-N} (δ^s(x)/|x-y|^s ∧ 1)(δ^s(y)/|x-y|^s ∧ 1)`.
pub fn comparison_first(dim: usize, x: &Point, y: &Point, s: f64) -> f64 {
    let r = dist(x, y);
    let rs = r.powf(s);
    let fx = (boundary_distance(x).powf(s) / rs).min(1.0);
    let fy = (boundary_distance(y).powf(s) / rs).min(1.0);
    r.powf(2.0 * s - dim as f64) * fx * fy
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonMenu {
    /// `min{|x-y|^{2s-N}, δ^s(x)|x-y|^{s-N}, δ^s(y)|x-y|^{s-N}}`
    pub min_bound: f64,
    /// `δ^{ηs}(y) δ^{(1-η)s}(x) |x-y|^{s-N}`
    pub eta_left: f64,
    /// `δ^{ηs}(y) |x-y|^{-(N - s(2-η))}`
    pub eta_right: f64,
}

pub fn comparison_menu(dim: usize, x: &Point, y: &Point, s: f64, eta: f64) -> Result<ComparisonMenu, KernelError> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(KernelError::Eta(eta));
    }
    let n = dim as f64;
    let r = dist(x, y);
    let dx = boundary_distance(x);
    let dy = boundary_distance(y);
    let tail = r.powf(s - n);
    let min_bound = r.powf(2.0 * s - n).min(dx.powf(s) * tail).min(dy.powf(s) * tail);
    Ok(ComparisonMenu {
        min_bound,
        eta_left: dy.powf(eta * s) * dx.powf((1.0 - eta) * s) * tail,
        eta_right: dy.powf(eta * s) * r.powf(-(n - s * (2.0 - eta))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimate {
    TwoSidedLower,
    TwoSidedUpper,
    MinBound,
    EtaLeft,
    EtaRight,
    GradRatio,
    GradBound,
}

impl Estimate {
    pub const ALL: [Estimate; 7] = [
        Estimate::TwoSidedLower,
        Estimate::TwoSidedUpper,
        Estimate::MinBound,
        Estimate::EtaLeft,
        Estimate::EtaRight,
        Estimate::GradRatio,
        Estimate::GradBound,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Estimate::TwoSidedLower => "2.2-lower",
            Estimate::TwoSidedUpper => "2.2-upper",
            Estimate::MinBound => "2.3",
            Estimate::EtaLeft => "2.4-left",
            Estimate::EtaRight => "2.4-right",
            Estimate::GradRatio => "2.5",
            Estimate::GradBound => "2.6",
        }
    }

    pub fn uses_gradient(&self) -> bool {
        matches!(self, Estimate::GradRatio | Estimate::GradBound)
    }

    /// The scanned quantity at one pair.
    pub fn ratio(&self, kernel: &GreenKernel, x: &Point, y: &Point, eta: f64) -> f64 {
        let dim = kernel.domain().dim();
        let s = kernel.s();
        match self {
            Estimate::TwoSidedLower | Estimate::TwoSidedUpper => kernel.eval(x, y) / comparison_first(dim, x, y, s),
            Estimate::MinBound | Estimate::EtaLeft | Estimate::EtaRight => {
                let menu = comparison_menu(dim, x, y, s, eta).expect("eta checked by the scan");
                let den = match self {
                    Estimate::MinBound => menu.min_bound,
                    Estimate::EtaLeft => menu.eta_left,
                    _ => menu.eta_right,
                };
                kernel.eval(x, y) / den
            }
            Estimate::GradRatio => {
                let (g, grad) = kernel.eval_grad(x, y);
                let r = dist(x, y);
                norm(&grad) / (g * (1.0 / r).max(1.0 / boundary_distance(x)))
            }
            Estimate::GradBound => {
                let grad = kernel.grad_x(x, y);
                let r = dist(x, y);
                norm(&grad) * r.powf(dim as f64 - 2.0 * s + 1.0) * boundary_distance(x).powf(1.0 - s)
            }
        }
    }
}

impl FromStr for Estimate {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = if s == "2.2" { "2.2-upper" } else { s };
        Estimate::ALL.iter().copied().find(|e| e.id() == s).ok_or_else(|| KernelError::Estimate(s.to_string()))
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Halton sequence in the first `dims` prime bases with a Cranley-Patterson
/// rotation drawn from a seeded ChaCha stream.
#[derive(Debug, Clone)]
pub struct Halton {
    index: u64,
    shift: Vec<f64>,
}

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

impl Halton {
    pub fn new(dims: usize, seed: u64) -> Self {
        assert!(dims <= PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dims).map(|_| rng.gen::<f64>()).collect();
        Halton { index: 1, shift }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        let i = self.index;
        self.index += 1;
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(sh, b)| {
                let v = radical_inverse(i, b) + sh;
                v - v.floor()
            })
            .collect()
    }
}

/// Uniform map of the unit cube onto the ball.
pub fn cube_to_ball(dim: usize, u: &[f64]) -> Point {
    if dim == 2 {
        let r = u[0].sqrt();
        let t = 2.0 * PI * u[1];
        [r * t.cos(), r * t.sin(), 0.0]
    } else {
        let r = u[0].cbrt();
        let z = 2.0 * u[1] - 1.0;
        let t = 2.0 * PI * u[2];
        let rho = (1.0 - z * z).max(0.0).sqrt();
        [r * rho * t.cos(), r * rho * t.sin(), r * z]
    }
}

/// Quasi-random interior pairs with `|x-y| >= strip` and `δ >= strip`.
pub fn sample_pairs(dim: usize, count: usize, strip: f64, seed: u64) -> Vec<(Point, Point)> {
    let mut h = Halton::new(2 * dim, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = h.next_point();
        let x = cube_to_ball(dim, &u[..dim]);
        let y = cube_to_ball(dim, &u[dim..]);
        if dist(&x, &y) < strip || boundary_distance(&x) < strip || boundary_distance(&y) < strip {
            continue;
        }
        out.push((x, y));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRatioReport {
    pub estimate: Estimate,
    pub s: f64,
    pub eta: Option<f64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub samples: usize,
}

impl EstimateRatioReport {
    pub const CSV_HEADER: &'static str = "estimate,s,min_ratio,max_ratio,samples";

    pub fn spread(&self) -> f64 {
        self.max_ratio / self.min_ratio
    }

    pub fn csv_row(&self, s_label: &str) -> String {
        format!("{},{},{:.10e},{:.10e},{}", self.estimate, s_label, self.min_ratio, self.max_ratio, self.samples)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub samples: usize,
    pub eta: f64,
    pub strip: f64,
    pub seed: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { samples: 10_000, eta: 0.5, strip: 1e-4, seed: DEFAULT_SEED }
    }
}

pub fn ratio_scan(kernel: &GreenKernel, estimate: Estimate, opts: &ScanOptions) -> Result<EstimateRatioReport, KernelError> {
    if opts.samples < 100 {
        return Err(KernelError::Samples(opts.samples));
    }
    if estimate.uses_gradient() && kernel.s() <= 0.5 {
        return Err(KernelError::GradientOrder(kernel.s()));
    }
    if !(opts.eta > 0.0 && opts.eta < 1.0) {
        return Err(KernelError::Eta(opts.eta));
    }
    let pairs = sample_pairs(kernel.domain().dim(), opts.samples, opts.strip, opts.seed);
    let ratios = crate::exec::map_slice(&pairs, |(x, y)| estimate.ratio(kernel, x, y, opts.eta));
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let eta = matches!(estimate, Estimate::EtaLeft | Estimate::EtaRight).then_some(opts.eta);
    Ok(EstimateRatioReport { estimate, s: kernel.s(), eta, min_ratio, max_ratio, samples: pairs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn k(s: f64) -> GreenKernel {
        GreenKernel::new(s, Domain::disk()).unwrap()
    }

    #[test]
    fn profile_matches_direct_quadrature() {
        for &s in &[0.55, 0.75, 0.9] {
            for dim in [2usize, 3] {
                let g = GreenKernel::new(s, Domain::new(dim).unwrap()).unwrap();
                for &r0 in &[1e-3f64, 0.3, 1.0, 4.0, 250.0] {
                    // t = u^{1/s} removes the endpoint singularity
                    let f = |u: f64| {
                        let t = u.powf(1.0 / s);
                        (1.0 + t).powf(-(dim as f64) / 2.0) / s
                    };
                    let direct = quad::adaptive(&f, 0.0, r0.powf(s), 1e-13);
                    let rel = (g.profile(r0) - direct).abs() / direct;
                    assert!(rel < 1e-10, "s = {s}, N = {dim}, r0 = {r0}: rel = {rel:e}");
                }
            }
        }
    }

    #[test]
    fn chebyshev_profile_matches_incomplete_beta() {
        for &s in &[0.3, 0.55, 0.75, 0.9, 0.99] {
            for dim in [2usize, 3] {
                let g = GreenKernel::new(s, Domain::new(dim).unwrap()).unwrap();
                for i in 0..400 {
                    let r0 = 10f64.powf(-6.0 + 12.0 * i as f64 / 399.0);
                    let (a, b) = (g.profile(r0), g.profile_beta(r0));
                    assert!((a - b).abs() < 1e-12 * b, "s = {s}, N = {dim}, r0 = {r0}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn symmetric_and_positive() {
        let g = k(0.75);
        for (x, y) in sample_pairs(2, 2000, 1e-4, 7) {
            let a = g.eval(&x, &y);
            let b = g.eval(&y, &x);
            assert!(a > 0.0);
            assert!((a - b).abs() < 1e-12 * a.max(1.0));
        }
        assert_eq!(g.eval(&[0.0, 0.0, 0.0], &[1.2, 0.0, 0.0]), 0.0);
        assert_eq!(g.green(&[0.1, 0.0, 0.0], &[0.1, 0.0, 0.0]), Err(KernelError::Coincident));
    }

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let g = k(0.75);
        for (x, y) in sample_pairs(2, 200, 1e-2, 11) {
            let fd = g.grad_green_x(&x, &y).unwrap();
            let an = g.grad_x(&x, &y);
            let err = norm(&[fd.grad[0] - an[0], fd.grad[1] - an[1], 0.0]) / norm(&an);
            assert!(err < 1e-4, "{err:e}");
            assert!(fd.consistency < 1e-3);
        }
    }

    #[test]
    fn gradient_along_diameter_is_radial() {
        let g = k(0.6);
        let grad = g.grad_x(&[0.3, 0.0, 0.0], &[-0.5, 0.0, 0.0]);
        assert!(grad[1].abs() < 1e-14 * grad[0].abs());
    }

    #[test]
    fn boundary_rate_is_delta_power_s() {
        let g = k(0.75);
        let x = [0.1, 0.2, 0.0];
        let ratio = |d: f64| {
            let y = [1.0 - d, 0.0, 0.0];
            g.eval(&x, &y) / d.powf(0.75)
        };
        let a = ratio(1e-5);
        let b = ratio(1e-7);
        assert!(a > 0.0 && (a - b).abs() / a < 1e-4);
    }

    #[test]
    fn comparison_examples() {
        let x = [0.0, 0.0, 0.0];
        let y = [0.1, 0.0, 0.0];
        let v = comparison_first(2, &x, &y, 0.75);
        assert!((v - 0.1f64.powf(-0.5)).abs() < 1e-12);
        assert_eq!(comparison_first(2, &x, &[1.0, 0.0, 0.0], 0.75), 0.0);
        let m = comparison_menu(2, &[0.5, 0.0, 0.0], &[0.0, 0.0, 0.0], 0.6, 0.999_999).unwrap();
        let lim = 1.0 * 0.5f64.powf(0.6 - 2.0);
        assert!((m.eta_left - lim).abs() / lim < 1e-5);
        assert!(comparison_menu(2, &x, &y, 0.6, 1.0).is_err());
    }

    #[test]
    fn scan_rejects_small_samples_and_parses_ids() {
        let g = k(0.75);
        let opts = ScanOptions { samples: 50, ..Default::default() };
        assert!(ratio_scan(&g, Estimate::MinBound, &opts).is_err());
        assert_eq!("2.4-right".parse::<Estimate>().unwrap(), Estimate::EtaRight);
        assert!("2.9".parse::<Estimate>().is_err());
    }
}
