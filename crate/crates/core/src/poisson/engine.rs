//! Product integration of weakly singular kernels against piecewise-constant
//! cell data. Far cells use the one-point rule (or, with `mid_field`, small
//! tensor Gauss rules); cells near the target are re-integrated by a Duffy
//! split in polar parameter space.

use std::f64::consts::PI;

use crate::geometry::{dist, norm, polar_coords, polar_jacobian, polar_point, Cell, Point, QuadratureGrid};
use crate::quad::gauss_legendre;

/// A kernel `K(x, y)` with `|K| ~ |x-y|^{order}` at the diagonal.
pub trait SingularKernel: Sync {
    fn order(&self) -> f64;
    fn value(&self, x: &Point, y: &Point) -> f64;
    /// Value and `∇_x K`.
    fn value_grad(&self, x: &Point, y: &Point) -> (f64, Point);
}

impl SingularKernel for crate::kernel::GreenKernel {
    fn order(&self) -> f64 {
        2.0 * self.s() - self.domain().dim() as f64
    }

    fn value(&self, x: &Point, y: &Point) -> f64 {
        self.eval(x, y)
    }

    fn value_grad(&self, x: &Point, y: &Point) -> (f64, Point) {
        self.eval_grad(x, y)
    }
}

/// `|x-y|^{-λ}`.
#[derive(Debug, Clone, Copy)]
pub struct RieszKernel {
    pub lambda: f64,
}

impl SingularKernel for RieszKernel {
    fn order(&self) -> f64 {
        -self.lambda
    }

    fn value(&self, x: &Point, y: &Point) -> f64 {
        dist(x, y).powf(-self.lambda)
    }

    fn value_grad(&self, x: &Point, y: &Point) -> (f64, Point) {
        let r = dist(x, y);
        let v = r.powf(-self.lambda);
        let c = -self.lambda * v / (r * r);
        (v, [c * (x[0] - y[0]), c * (x[1] - y[1]), c * (x[2] - y[2])])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    /// Relative tolerance of the local correction.
    pub tol: f64,
    /// Cells whose node lies within `reach` cell diameters of the target are
    /// re-integrated.
    pub reach: f64,
    /// Largest Gauss order per Duffy direction.
    pub max_order: usize,
    pub local_correction: bool,
    /// Tensor Gauss rules on cells that are not small against their distance
    /// to the target; off gives the plain one-point far field.
    pub mid_field: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { tol: 1e-6, reach: 2.0, max_order: 32, local_correction: true, mid_field: true }
    }
}

/// Integration weights of one target against every cell.
#[derive(Debug, Clone)]
pub struct Row {
    pub value: Vec<f64>,
    pub grad: Option<Vec<Point>>,
}

impl Row {
    pub fn dot(&self, h: &[f64]) -> f64 {
        self.value.iter().zip(h).map(|(w, v)| w * v).sum()
    }

    pub fn dot_grad(&self, h: &[f64]) -> Option<Point> {
        self.grad.as_ref().map(|g| {
            let mut out = [0.0; 3];
            for (w, v) in g.iter().zip(h) {
                for c in 0..3 {
                    out[c] += w[c] * v;
                }
            }
            out
        })
    }
}

struct Local {
    value: f64,
    grad: Point,
}

/// Parameter-space box of a cell, with the angular range shifted so that it
/// is closest to the target's angle.
fn param_box(dim: usize, cell: &Cell) -> (Vec<[f64; 2]>, usize) {
    if dim == 2 {
        (vec![cell.r, cell.theta], 2)
    } else {
        (vec![cell.r, cell.theta, cell.phi], 3)
    }
}

fn to_point(dim: usize, p: &[f64]) -> (Point, f64) {
    if dim == 2 {
        (polar_point(2, p[0], p[1], 0.0), polar_jacobian(2, p[0], 0.0))
    } else {
        (polar_point(3, p[0], p[1], p[2]), polar_jacobian(3, p[0], p[2]))
    }
}

fn wrap_near(theta: f64, lo: f64, hi: f64) -> f64 {
    let c = 0.5 * (lo + hi);
    let mut t = theta;
    while t - c > PI {
        t -= 2.0 * PI;
    }
    while c - t > PI {
        t += 2.0 * PI;
    }
    t
}

/// `∫_cell K(x, y) dy` (and the gradient) by Duffy pyramids with apex at the
/// point of the parameter box nearest to `x`, using order `n` per direction.
/// The pyramid height is graded toward the apex when the apex is `x` itself.
fn duffy_cell<K: SingularKernel>(
    kernel: &K,
    dim: usize,
    x: &Point,
    xp: &[f64],
    cell: &Cell,
    n: usize,
    k: f64,
    want_grad: bool,
) -> Local {
    let (bx, d) = param_box(dim, cell);
    let mut apex = vec![0.0; d];
    let mut inside = true;
    for c in 0..d {
        let v = if c == 1 { wrap_near(xp[1], bx[1][0], bx[1][1]) } else { xp[c] };
        apex[c] = v.clamp(bx[c][0], bx[c][1]);
        inside &= apex[c] == v;
    }
    let rule = gauss_legendre(n);
    let pts: Vec<(f64, f64)> = rule.nodes.iter().zip(&rule.weights).map(|(t, w)| (0.5 * (t + 1.0), 0.5 * w)).collect();
    // Pyramid height variable: plain Gauss when the apex is only the nearest
    // point of the cell. When it is the target itself, segments are graded
    // geometrically toward it and the innermost one takes `u = c w^k`, which
    // makes the leading `|x-y|^{order}` term polynomial; the smooth remainder
    // of the kernel only sees the substitution on that tiny segment.
    let upts: Vec<(f64, f64)> = if inside {
        let mut out = Vec::new();
        let mut hi = 1.0;
        for _ in 0..DUFFY_LEVELS {
            let lo = hi * DUFFY_RATIO;
            out.extend(pts.iter().map(|&(t, w)| (lo + (hi - lo) * t, (hi - lo) * w)));
            hi = lo;
        }
        out.extend(pts.iter().map(|&(t, w)| (hi * t.powf(k), hi * k * t.powf(k - 1.0) * w)));
        out
    } else {
        pts.clone()
    };
    let mut value = 0.0;
    let mut grad = [0.0; 3];
    // sub-boxes: for each dimension, the part of the range below and above the apex
    let sides: Vec<Vec<f64>> = (0..d)
        .map(|c| {
            let mut v = Vec::new();
            if apex[c] > bx[c][0] {
                v.push(bx[c][0] - apex[c]);
            }
            if apex[c] < bx[c][1] {
                v.push(bx[c][1] - apex[c]);
            }
            v
        })
        .collect();
    if sides.iter().any(|v| v.is_empty()) {
        return Local { value: 0.0, grad };
    }
    let combos: Vec<Vec<f64>> = if d == 2 {
        let mut out = Vec::new();
        for &a in &sides[0] {
            for &b in &sides[1] {
                out.push(vec![a, b]);
            }
        }
        out
    } else {
        let mut out = Vec::new();
        for &a in &sides[0] {
            for &b in &sides[1] {
                for &c in &sides[2] {
                    out.push(vec![a, b, c]);
                }
            }
        }
        out
    };
    // physical length per unit of each parameter, at the apex or (for cells
    // at the origin) at the cell's middle radius
    let rr = apex[0].max(0.5 * (cell.r[0] + cell.r[1]));
    let scale = if d == 2 { vec![1.0, rr] } else { vec![1.0, rr * apex[2].sin().max(0.5 * (cell.phi[1] - cell.phi[0]).sin()), rr] };
    let mut p = vec![0.0; d];
    for ext in &combos {
        let vol: f64 = ext.iter().map(|e| e.abs()).product();
        for face in 0..d {
            // pyramid with apex at `apex`, base on the far face `face`
            let others: Vec<usize> = (0..d).filter(|&c| c != face).collect();
            // A base much longer than the pyramid's height puts the
            // integrand's complex singularities at distance ~1/R from t = 0;
            // grade t toward 0 on that scale.
            let tpts: Vec<Vec<(f64, f64)>> = others
                .iter()
                .map(|&c| {
                    let ratio = ((ext[c] * scale[c]).abs() / (ext[face] * scale[face]).abs()).min(1e3);
                    let mut breaks = vec![0.0];
                    let mut b = 1.0 / ratio;
                    while b < 1.0 {
                        breaks.push(b);
                        b *= 3.0;
                    }
                    breaks.push(1.0);
                    breaks
                        .windows(2)
                        .flat_map(|w| pts.iter().map(move |&(t, wt)| (w[0] + (w[1] - w[0]) * t, (w[1] - w[0]) * wt)))
                        .collect()
                })
                .collect();
            for &(u, du) in &upts {
                let jac_duffy = u.powi(d as i32 - 1) * vol * du;
                let mut visit = |tws: &[(f64, f64)]| {
                    let mut wt = jac_duffy;
                    p[face] = apex[face] + u * ext[face];
                    for (i, &c) in others.iter().enumerate() {
                        p[c] = apex[c] + u * tws[i].0 * ext[c];
                        wt *= tws[i].1;
                    }
                    let (y, jac) = to_point(dim, &p);
                    if y == *x {
                        return;
                    }
                    let w = wt * jac;
                    if want_grad {
                        let (v, g) = kernel.value_grad(x, &y);
                        value += w * v;
                        for c in 0..3 {
                            grad[c] += w * g[c];
                        }
                    } else {
                        value += w * kernel.value(x, &y);
                    }
                };
                if d == 2 {
                    for &t in &tpts[0] {
                        visit(&[t]);
                    }
                } else {
                    for &t1 in &tpts[0] {
                        for &t2 in &tpts[1] {
                            visit(&[t1, t2]);
                        }
                    }
                }
            }
        }
    }
    Local { value, grad }
}

const DUFFY_LEVELS: usize = 8;
const DUFFY_RATIO: f64 = 0.35;

/// Whether `x` lies in the cell or closer to it than half its largest
/// extent; only then is the Duffy split worth its cost.
fn touches(dim: usize, x: &Point, xp: &[f64], cell: &Cell) -> bool {
    let (bx, d) = param_box(dim, cell);
    let mut p = vec![0.0; d];
    for c in 0..d {
        let v = if c == 1 { wrap_near(xp[1], bx[1][0], bx[1][1]) } else { xp[c] };
        p[c] = v.clamp(bx[c][0], bx[c][1]);
    }
    let (y, _) = to_point(dim, &p);
    let mut ext = cell.r[1] - cell.r[0];
    ext = ext.max(cell.r[1] * (cell.theta[1] - cell.theta[0]));
    if dim == 3 {
        ext = ext.max(cell.r[1] * (cell.phi[1] - cell.phi[0]));
    }
    dist(x, &y) < 0.5 * ext
}

/// Gauss order per parameter direction for a cell at distance `d`, growing
/// with the ratio of the cell extent to `d`. The one-point rule is never
/// used here: its error is what limits the default far field.
fn far_orders(dim: usize, cell: &Cell, d: f64) -> Vec<usize> {
    let pick = |extent: f64| {
        let q = extent / d;
        if q < 0.1 {
            2
        } else if q < 0.25 {
            3
        } else {
            4
        }
    };
    let mut out = vec![pick(cell.r[1] - cell.r[0]), pick(cell.r[1] * (cell.theta[1] - cell.theta[0]))];
    if dim == 3 {
        out.push(pick(cell.r[1] * (cell.phi[1] - cell.phi[0])));
    }
    out
}

/// Tensor Gauss rule over the parameter box of a cell.
fn tensor_cell<K: SingularKernel>(kernel: &K, dim: usize, x: &Point, cell: &Cell, orders: &[usize], want_grad: bool) -> Local {
    let (bx, d) = param_box(dim, cell);
    let rules: Vec<Vec<(f64, f64)>> = (0..d)
        .map(|c| {
            let rule = gauss_legendre(orders[c]);
            let h = 0.5 * (bx[c][1] - bx[c][0]);
            let m = 0.5 * (bx[c][1] + bx[c][0]);
            rule.nodes.iter().zip(&rule.weights).map(|(t, w)| (m + h * t, h * w)).collect()
        })
        .collect();
    let mut value = 0.0;
    let mut grad = [0.0; 3];
    let mut idx = vec![0usize; d];
    loop {
        let mut p = vec![0.0; d];
        let mut wt = 1.0;
        for c in 0..d {
            p[c] = rules[c][idx[c]].0;
            wt *= rules[c][idx[c]].1;
        }
        let (y, jac) = to_point(dim, &p);
        let w = wt * jac;
        if want_grad {
            let (v, g) = kernel.value_grad(x, &y);
            value += w * v;
            for c in 0..3 {
                grad[c] += w * g[c];
            }
        } else {
            value += w * kernel.value(x, &y);
        }
        let mut c = 0;
        loop {
            idx[c] += 1;
            if idx[c] < rules[c].len() {
                break;
            }
            idx[c] = 0;
            c += 1;
            if c == d {
                return Local { value, grad };
            }
        }
    }
}

/// Weights of target `x` against all cells of `grid`.
pub fn row<K: SingularKernel>(kernel: &K, grid: &QuadratureGrid, x: &Point, want_grad: bool, opts: &QuadOptions) -> Row {
    let dim = grid.dim();
    let n = grid.len();
    let mut value = vec![0.0; n];
    let mut grad = if want_grad { Some(vec![[0.0; 3]; n]) } else { None };
    let (r, t, ph) = polar_coords(dim, x);
    let xp = if dim == 2 { vec![r, t] } else { vec![r, t, ph] };
    let nd = dim as f64;
    let order = kernel.order();
    let k = if want_grad { 1.0 / (nd + order - 1.0) } else { 1.0 / (nd + order) };
    let mut near = Vec::new();
    for j in 0..n {
        let y = grid.nodes()[j];
        let cell = grid.cell(j);
        if opts.local_correction && dist(x, &y) < opts.reach * cell.diameter(dim) {
            near.push((j, cell));
            continue;
        }
        let d = dist(x, &y);
        let orders = if opts.mid_field { far_orders(dim, &cell, d) } else { vec![1; dim] };
        if orders.iter().all(|&m| m == 1) {
            let w = grid.weights()[j];
            if let Some(g) = grad.as_mut() {
                let (v, dv) = kernel.value_grad(x, &y);
                value[j] = w * v;
                g[j] = [w * dv[0], w * dv[1], w * dv[2]];
            } else {
                value[j] = w * kernel.value(x, &y);
            }
        } else {
            let l = tensor_cell(kernel, dim, x, &cell, &orders, grad.is_some());
            value[j] = l.value;
            if let Some(g) = grad.as_mut() {
                g[j] = l.grad;
            }
        }
    }
    if near.is_empty() {
        return Row { value, grad };
    }
    // every near cell at orders 4 and 8; the scale for the stopping rule is
    // the largest local contribution
    let duffy = |c: &Cell, m: usize| {
        if touches(dim, x, &xp, c) {
            duffy_cell(kernel, dim, x, &xp, c, m, k, want_grad)
        } else {
            tensor_cell(kernel, dim, x, c, &vec![m; dim], want_grad)
        }
    };
    let first: Vec<Local> = near.iter().map(|(_, c)| duffy(c, 4)).collect();
    let second: Vec<Local> = near.iter().map(|(_, c)| duffy(c, 8.min(opts.max_order))).collect();
    let vscale = second.iter().map(|l| l.value.abs()).fold(0.0, f64::max);
    let gscale = second.iter().map(|l| norm(&l.grad)).fold(0.0, f64::max);
    let close = |a: &Local, b: &Local| {
        let dg = [a.grad[0] - b.grad[0], a.grad[1] - b.grad[1], a.grad[2] - b.grad[2]];
        (a.value - b.value).abs() <= opts.tol * vscale && norm(&dg) <= opts.tol * gscale
    };
    let mut prev = Vec::with_capacity(near.len());
    for ((_, c), (a, b)) in near.iter().zip(first.into_iter().zip(second)) {
        let (mut lo, mut hi, mut m) = (a, b, 8.min(opts.max_order));
        while !close(&lo, &hi) && m < opts.max_order {
            m = (2 * m).min(opts.max_order);
            lo = hi;
            hi = duffy(c, m);
        }
        prev.push(hi);
    }
    for ((j, _), l) in near.iter().zip(prev) {
        value[*j] = l.value;
        if let Some(g) = grad.as_mut() {
            g[*j] = l.grad;
        }
    }
    Row { value, grad }
}
