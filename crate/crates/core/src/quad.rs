//! One-dimensional Gauss-Legendre rules and a few composite schemes built on
//! them.

use std::sync::OnceLock;

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn compute(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// The `n`-point rule on `[-1, 1]`, `1 <= n <= MAX_ORDER`.
pub fn gauss_legendre(n: usize) -> &'static Rule {
    static RULES: OnceLock<Vec<Rule>> = OnceLock::new();
    let rules = RULES.get_or_init(|| (1..=MAX_ORDER).map(compute).collect());
    &rules[n.clamp(1, MAX_ORDER) - 1]
}

/// `∫_a^b f` with the `n`-point rule.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// Adaptive bisection with a 10/20-point pair, to relative tolerance `tol`.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn go<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, coarse: f64, tol: f64, scale: f64, depth: u32) -> f64 {
        let fine = integrate(f, a, b, 20);
        if (fine - coarse).abs() <= tol * scale.max(fine.abs()) || depth == 0 {
            return fine;
        }
        let m = 0.5 * (a + b);
        let l = integrate(f, a, m, 10);
        let r = integrate(f, m, b, 10);
        go(f, a, m, l, tol, scale, depth - 1) + go(f, m, b, r, tol, scale, depth - 1)
    }
    let coarse = integrate(f, a, b, 10);
    let scale = integrate(f, a, b, 20).abs();
    go(f, a, b, coarse, tol, scale, 40)
}

/// Breakpoints of `[a, b]` refined geometrically toward the ends flagged in
/// `toward`: segment lengths shrink by half down to `2^-levels * (b - a)`.
pub fn graded_breaks(a: f64, b: f64, toward_a: bool, toward_b: bool, levels: u32) -> Vec<f64> {
    let len = b - a;
    let end = if toward_a { a.abs() } else { b.abs() };
    let floor = 1e3 * f64::EPSILON * end;
    let mut levels = levels;
    while levels > 0 && len * 0.5f64.powi(levels as i32) < floor {
        levels -= 1;
    }
    let mut pts = vec![a, b];
    if toward_a && toward_b {
        let m = a + 0.5 * len;
        let mut left = graded_breaks(a, m, true, false, levels);
        let right = graded_breaks(m, b, false, true, levels);
        left.pop();
        left.extend(right);
        return left;
    }
    if toward_a {
        pts = (0..=levels).map(|k| a + len * 0.5f64.powi(k as i32)).collect();
        pts.push(a);
        pts.reverse();
    } else if toward_b {
        pts = (0..=levels).map(|k| b - len * 0.5f64.powi(k as i32)).collect();
        pts.push(b);
    }
    pts.dedup();
    pts
}

/// `∫_a^b f` on geometric segments graded toward the flagged ends, `n` points
/// per segment. Suited to integrable endpoint singularities.
pub fn graded<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, toward_a: bool, toward_b: bool, n: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let breaks = graded_breaks(a, b, toward_a, toward_b, 60);
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| integrate(&mut f, w[0], w[1], n))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_polynomials() {
        for n in [1usize, 2, 5, 16, 33, 64] {
            let rule = gauss_legendre(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n = {n}");
            for k in 0..(2 * n).min(40) {
                let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
                let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn graded_handles_endpoint_singularity() {
        let got = graded(|x| x.powf(-0.5) + (1.0 - x).powf(-0.25), 0.0, 1.0, true, true, 12);
        assert!((got - (2.0 + 4.0 / 3.0)).abs() < 1e-9, "{got}");
    }

    #[test]
    fn adaptive_smooth() {
        let got = adaptive(&|x: f64| x.exp(), 0.0, 3.0, 1e-13);
        assert!((got - (3f64.exp() - 1.0)).abs() < 1e-11);
    }
}
