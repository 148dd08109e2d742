//! Direct evaluation of `(-Δ)^s u(x) = a_{N,s} P.V. ∫ (u(x)-u(y))/|x-y|^{N+2s} dy`
//! for functions supported in a ball. Used only to verify the solver.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::geometry::Point;
use crate::quad::{self, gauss_legendre};

/// `a_{N,s} = s 4^s Γ((N+2s)/2) / (π^{N/2} Γ(1-s))`.
pub fn normalization(dim: usize, s: f64) -> f64 {
    let n = dim as f64;
    s * (s * 4f64.ln() + ln_gamma((n + 2.0 * s) / 2.0) - (n / 2.0) * PI.ln() - ln_gamma(1.0 - s)).exp()
}

/// Closed ball containing the support of the function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub center: Point,
    pub radius: f64,
    /// The function has a `dist^s`-type kink on the sphere (e.g. the torsion
    /// profile); radial pieces are then graded toward the crossings.
    pub kink: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvOptions {
    pub directions: usize,
    pub polar: usize,
    pub order: usize,
    pub levels: u32,
}

impl Default for PvOptions {
    fn default() -> Self {
        PvOptions { directions: 64, polar: 24, order: 10, levels: 30 }
    }
}

/// Positive roots `ρ` of `|x + ρω - c| = R`.
fn crossings(x: &Point, w: &Point, sup: &Support) -> Vec<f64> {
    let d = [x[0] - sup.center[0], x[1] - sup.center[1], x[2] - sup.center[2]];
    let b = d[0] * w[0] + d[1] * w[1] + d[2] * w[2];
    let c = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] - sup.radius * sup.radius;
    let disc = b * b - c;
    if disc <= 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    [-b - sq, -b + sq].into_iter().filter(|&r| r > 0.0).collect()
}

fn segment<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, ga: bool, gb: bool, opts: &PvOptions) -> f64 {
    if b <= a {
        return 0.0;
    }
    let breaks = quad::graded_breaks(a, b, ga, gb, opts.levels);
    let mut f = f;
    breaks.windows(2).filter(|w| w[1] > w[0]).map(|w| quad::integrate(&mut f, w[0], w[1], opts.order)).sum()
}

/// Radial integral `∫_0^∞ ρ^{-1-2s} (2u(x) - u(x+ρω) - u(x-ρω)) dρ`.
fn radial<F: Fn(&Point) -> f64>(s: f64, x: &Point, w: &Point, u: &F, ux: f64, sup: &Support, opts: &PvOptions) -> f64 {
    let mw = [-w[0], -w[1], -w[2]];
    let mut breaks: Vec<f64> = crossings(x, w, sup);
    breaks.extend(crossings(x, &mw, sup));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let diff = |r: f64| {
        let p = [x[0] + r * w[0], x[1] + r * w[1], x[2] + r * w[2]];
        let m = [x[0] - r * w[0], x[1] - r * w[1], x[2] - r * w[2]];
        2.0 * ux - u(&p) - u(&m)
    };
    let integrand = |r: f64| r.powf(-1.0 - 2.0 * s) * diff(r);
    let Some(&last) = breaks.last() else {
        // the line misses the support: the difference is 2u(x) = 0
        return 0.0;
    };
    let first = breaks[0];
    let eps0 = 1e-3 * first;
    // second-order Taylor piece on [0, eps0]
    let mut total = diff(eps0) * eps0.powf(-2.0 * s) / (2.0 - 2.0 * s);
    total += segment(integrand, eps0, first, true, sup.kink, opts);
    for pair in breaks.windows(2) {
        total += segment(integrand, pair[0], pair[1], sup.kink, sup.kink, opts);
    }
    total + 2.0 * ux * last.powf(-2.0 * s) / (2.0 * s)
}

/// `(-Δ)^s u(x)` for `u` supported in `sup`.
pub fn fractional_laplacian<F: Fn(&Point) -> f64 + Sync>(
    dim: usize,
    s: f64,
    x: &Point,
    u: F,
    sup: &Support,
    opts: &PvOptions,
) -> f64 {
    let ux = u(x);
    let a = normalization(dim, s);
    let m = opts.directions;
    let sphere = if dim == 2 {
        let h = 2.0 * PI / m as f64;
        (0..m)
            .map(|k| {
                let t = (k as f64 + 0.5) * h;
                h * radial(s, x, &[t.cos(), t.sin(), 0.0], &u, ux, sup, opts)
            })
            .sum::<f64>()
    } else {
        let rule = gauss_legendre(opts.polar);
        let h = 2.0 * PI / m as f64;
        let mut acc = 0.0;
        for (z, wz) in rule.nodes.iter().zip(&rule.weights) {
            let rho = (1.0 - z * z).sqrt();
            for k in 0..m {
                let t = (k as f64 + 0.5) * h;
                acc += wz * h * radial(s, x, &[rho * t.cos(), rho * t.sin(), *z], &u, ux, sup, opts);
            }
        }
        acc
    };
    // each line is visited from both ends of the sphere
    0.5 * a * sphere
}

/// Smooth bump `exp(1 - 1/(1 - |x-c|²/R²))` on the ball `B(c, R)`, equal to 1
/// at the center.
pub fn bump(center: Point, radius: f64) -> impl Fn(&Point) -> f64 + Sync + Copy {
    move |x: &Point| {
        let d2 = ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2) + (x[2] - center[2]).powi(2)) / (radius * radius);
        if d2 >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - d2)).exp()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::torsion;

    #[test]
    fn torsion_is_mapped_to_one() {
        let sup = Support { center: [0.0; 3], radius: 1.0, kink: true };
        for &s in &[0.6, 0.75, 0.9] {
            for &x in &[[0.0, 0.0, 0.0], [0.3, 0.4, 0.0], [-0.8, 0.1, 0.0]] {
                let v = fractional_laplacian(2, s, &x, |y| torsion(2, s, y), &sup, &PvOptions::default());
                assert!((v - 1.0).abs() < 1e-6, "s = {s}, x = {x:?}: {v}");
            }
        }
    }

    #[test]
    fn torsion_in_three_dimensions() {
        let sup = Support { center: [0.0; 3], radius: 1.0, kink: true };
        let opts = PvOptions { directions: 24, polar: 12, ..Default::default() };
        let v = fractional_laplacian(3, 0.75, &[0.2, -0.1, 0.3], |y| torsion(3, 0.75, y), &sup, &opts);
        assert!((v - 1.0).abs() < 1e-5, "{v}");
    }
}
