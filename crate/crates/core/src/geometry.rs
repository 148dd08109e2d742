//! Unit-ball domains, the boundary distance and boundary-graded polar grids.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

pub type Point = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("unsupported dimension {0}: only N = 2 and N = 3 are implemented")]
    Dimension(usize),
    #[error("resolution too small: {0}")]
    Resolution(String),
    #[error("grading must be >= 1, got {0}")]
    Grading(f64),
    #[error("grid function has {got} values for {expected} nodes")]
    Length { expected: usize, got: usize },
    #[error("csv: {0}")]
    Csv(String),
}

/// Unit ball centered at the origin in dimension 2 or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Domain {
    dim: usize,
}

impl Domain {
    pub fn new(dim: usize) -> Result<Self, GeometryError> {
        match dim {
            2 | 3 => Ok(Domain { dim }),
            d => Err(GeometryError::Dimension(d)),
        }
    }

    pub fn disk() -> Self {
        Domain { dim: 2 }
    }

    pub fn ball() -> Self {
        Domain { dim: 3 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lebesgue measure of the unit ball.
    pub fn volume(&self) -> f64 {
        match self.dim {
            2 => PI,
            _ => 4.0 * PI / 3.0,
        }
    }

    /// Surface measure of the unit sphere S^{N-1}.
    pub fn sphere_area(&self) -> f64 {
        match self.dim {
            2 => 2.0 * PI,
            _ => 4.0 * PI,
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        norm(x) < 1.0
    }

    pub fn boundary_distance(&self, x: &Point) -> f64 {
        boundary_distance(x)
    }

    /// Exact `∫_Ω δ^a dx` by the radial integral `|S| ∫_0^1 r^{N-1} (1-r)^a dr`
    /// (a Beta function). Requires `a > -1`.
    pub fn delta_power_integral(&self, a: f64) -> f64 {
        let n = self.dim as f64;
        let beta = statrs::function::gamma::ln_gamma(n) + statrs::function::gamma::ln_gamma(a + 1.0)
            - statrs::function::gamma::ln_gamma(n + a + 1.0);
        self.sphere_area() * beta.exp()
    }
}

pub fn norm(x: &Point) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

pub fn dist(x: &Point, y: &Point) -> f64 {
    let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
    norm(&d)
}

/// `δ(x) = 1 - |x|`, clamped at 0 outside the ball.
pub fn boundary_distance(x: &Point) -> f64 {
    (1.0 - norm(x)).max(0.0)
}

/// Cell of a polar grid in parameter coordinates `(r, θ, φ)`. In 2D `θ` is the
/// polar angle in the plane and `phi` is unused (`[0, 0]`). In 3D `theta` is
/// the azimuth and `phi` the colatitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub r: [f64; 2],
    pub theta: [f64; 2],
    pub phi: [f64; 2],
}

/// Map parameter coordinates to a point.
pub fn polar_point(dim: usize, r: f64, theta: f64, phi: f64) -> Point {
    if dim == 2 {
        [r * theta.cos(), r * theta.sin(), 0.0]
    } else {
        let sp = phi.sin();
        [r * sp * theta.cos(), r * sp * theta.sin(), r * phi.cos()]
    }
}

/// Volume element of the parameter map.
pub fn polar_jacobian(dim: usize, r: f64, phi: f64) -> f64 {
    if dim == 2 {
        r
    } else {
        r * r * phi.sin()
    }
}

/// Parameter coordinates of a point: `(r, θ ∈ [0, 2π), φ ∈ [0, π])`.
pub fn polar_coords(dim: usize, x: &Point) -> (f64, f64, f64) {
    let r = norm(x);
    let mut theta = x[1].atan2(x[0]);
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    let phi = if dim == 2 || r == 0.0 {
        0.0
    } else {
        (x[2] / r).clamp(-1.0, 1.0).acos()
    };
    (r, theta, phi)
}

impl Cell {
    pub fn volume(&self, dim: usize) -> f64 {
        let dt = self.theta[1] - self.theta[0];
        if dim == 2 {
            0.5 * (self.r[1] * self.r[1] - self.r[0] * self.r[0]) * dt
        } else {
            (self.r[1].powi(3) - self.r[0].powi(3)) / 3.0
                * (self.phi[0].cos() - self.phi[1].cos())
                * dt
        }
    }

    /// Largest chord of the cell, a bound on the distance between two of its
    /// points.
    pub fn diameter(&self, dim: usize) -> f64 {
        let dr = self.r[1] - self.r[0];
        let mut ang = self.r[1] * (self.theta[1] - self.theta[0]);
        if dim == 3 {
            ang = ang.hypot(self.r[1] * (self.phi[1] - self.phi[0]));
        }
        dr.hypot(ang)
    }
}

/// Tensor-product polar (2D) or spherical (3D) grid with radial map
/// `r = 1 - (1 - t)^β` and nodes at mapped cell midpoints. Weights are exact
/// cell volumes.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    domain: Domain,
    n_radial: usize,
    n_angular: usize,
    n_polar: usize,
    grading: f64,
    radii: Vec<f64>,
    nodes: Vec<Point>,
    weights: Vec<f64>,
    delta: Vec<f64>,
}

/// Build a 2D grid, or a 3D grid with `n_polar = n_angular / 2`.
pub fn build_grid(
    domain: Domain,
    n_radial: usize,
    n_angular: usize,
    grading: f64,
) -> Result<QuadratureGrid, GeometryError> {
    let n_polar = if domain.dim() == 3 { (n_angular / 2).max(4) } else { 1 };
    QuadratureGrid::new(domain, n_radial, n_angular, n_polar, grading)
}

impl QuadratureGrid {
    pub fn new(
        domain: Domain,
        n_radial: usize,
        n_angular: usize,
        n_polar: usize,
        grading: f64,
    ) -> Result<Self, GeometryError> {
        if n_radial < 4 || n_angular < 4 {
            return Err(GeometryError::Resolution(format!(
                "n_radial = {n_radial}, n_angular = {n_angular}; both must be >= 4"
            )));
        }
        if domain.dim() == 3 && n_polar < 4 {
            return Err(GeometryError::Resolution(format!("n_polar = {n_polar} must be >= 4")));
        }
        if !(grading >= 1.0) || !grading.is_finite() {
            return Err(GeometryError::Grading(grading));
        }
        let n_polar = if domain.dim() == 2 { 1 } else { n_polar };
        let map = |t: f64| 1.0 - (1.0 - t).powf(grading);
        let radii: Vec<f64> = (0..=n_radial).map(|i| map(i as f64 / n_radial as f64)).collect();
        let mut g = QuadratureGrid {
            domain,
            n_radial,
            n_angular,
            n_polar,
            grading,
            radii,
            nodes: Vec::new(),
            weights: Vec::new(),
            delta: Vec::new(),
        };
        let total = n_radial * n_angular * n_polar;
        g.nodes.reserve(total);
        for k in 0..total {
            let (i, j, l) = g.unflatten(k);
            let r = map((i as f64 + 0.5) / n_radial as f64);
            let theta = (j as f64 + 0.5) * 2.0 * PI / n_angular as f64;
            let phi = (l as f64 + 0.5) * PI / n_polar as f64;
            let x = polar_point(domain.dim(), r, theta, phi);
            let cell = g.cell_at(i, j, l);
            g.nodes.push(x);
            g.weights.push(cell.volume(domain.dim()));
            g.delta.push(1.0 - r);
        }
        Ok(g)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn resolution(&self) -> (usize, usize, usize) {
        (self.n_radial, self.n_angular, self.n_polar)
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Same layout at twice the radial and angular resolution.
    pub fn refined(&self) -> QuadratureGrid {
        let n_polar = if self.dim() == 3 { 2 * self.n_polar } else { 1 };
        QuadratureGrid::new(
            self.domain,
            2 * self.n_radial,
            2 * self.n_angular,
            n_polar,
            self.grading,
        )
        .expect("refinement of a valid grid")
    }

    /// `(radial, angular, polar)` indices of node `k`.
    pub fn unflatten(&self, k: usize) -> (usize, usize, usize) {
        let j = k % self.n_angular;
        let rest = k / self.n_angular;
        (rest / self.n_polar, j, rest % self.n_polar)
    }

    pub fn flatten(&self, i: usize, j: usize, l: usize) -> usize {
        (i * self.n_polar + l) * self.n_angular + j
    }

    pub fn ring(&self, k: usize) -> usize {
        self.unflatten(k).0
    }

    fn cell_at(&self, i: usize, j: usize, l: usize) -> Cell {
        let dt = 2.0 * PI / self.n_angular as f64;
        let (phi0, phi1) = if self.dim() == 2 {
            (0.0, 0.0)
        } else {
            let dp = PI / self.n_polar as f64;
            (l as f64 * dp, (l + 1) as f64 * dp)
        };
        Cell {
            r: [self.radii[i], self.radii[i + 1]],
            theta: [j as f64 * dt, (j + 1) as f64 * dt],
            phi: [phi0, phi1],
        }
    }

    pub fn cell(&self, k: usize) -> Cell {
        let (i, j, l) = self.unflatten(k);
        self.cell_at(i, j, l)
    }

    /// Radial width of ring `i`.
    pub fn ring_width(&self, i: usize) -> f64 {
        self.radii[i + 1] - self.radii[i]
    }

    /// Indices `(i, j, l)` of the cell containing `x` (points on the boundary
    /// or outside are assigned to the outermost ring).
    pub fn locate(&self, x: &Point) -> (usize, usize, usize) {
        let (r, theta, phi) = polar_coords(self.dim(), x);
        let i = match self.radii.partition_point(|&e| e <= r) {
            0 => 0,
            p => (p - 1).min(self.n_radial - 1),
        };
        let j = ((theta / (2.0 * PI) * self.n_angular as f64) as usize).min(self.n_angular - 1);
        let l = if self.dim() == 2 {
            0
        } else {
            ((phi / PI * self.n_polar as f64) as usize).min(self.n_polar - 1)
        };
        (i, j, l)
    }

    /// Nodes in rings `0..n_radial - trim`; the complement is the trimmed
    /// boundary layer.
    pub fn interior_mask(&self, trim: usize) -> Vec<bool> {
        let keep = self.n_radial.saturating_sub(trim);
        (0..self.len()).map(|k| self.ring(k) < keep).collect()
    }

    /// Number of outer rings whose node sits closer to the boundary than twice
    /// the ring width.
    pub fn gradient_trim(&self) -> usize {
        (0..self.n_radial)
            .rev()
            .take_while(|&i| {
                let k = self.flatten(i, 0, 0);
                self.delta[k] <= 2.0 * self.ring_width(i)
            })
            .count()
    }

    /// Measure of the rings removed by `interior_mask(trim)`.
    pub fn trimmed_measure(&self, trim: usize) -> f64 {
        let mask = self.interior_mask(trim);
        self.weights.iter().zip(&mask).filter(|(_, &m)| !m).map(|(w, _)| w).sum()
    }

    /// Radius of the nodes in ring `i`.
    pub fn node_radius(&self, i: usize) -> f64 {
        1.0 - (1.0 - (i as f64 + 0.5) / self.n_radial as f64).powf(self.grading)
    }

    /// Piecewise-linear interpolation of nodal values in `(r, θ, φ)`. Inside
    /// the first ring the value is interpolated along the diameter through the
    /// antipodal node; beyond the last ring it is ramped to `outer` at the
    /// boundary, or held constant when `outer` is `None`.
    pub fn interpolate(&self, values: &[f64], x: &Point, outer: Option<f64>) -> f64 {
        let (r, theta, phi) = polar_coords(self.dim(), x);
        let ring = |i: usize, theta: f64, phi: f64| -> f64 {
            let a = theta / (2.0 * PI) * self.n_angular as f64 - 0.5;
            let fa = a - a.floor();
            let j0 = (a.floor() as isize).rem_euclid(self.n_angular as isize) as usize;
            let j1 = (j0 + 1) % self.n_angular;
            let (l0, l1, fb) = if self.dim() == 2 {
                (0, 0, 0.0)
            } else {
                let b = (phi / PI * self.n_polar as f64 - 0.5).clamp(0.0, (self.n_polar - 1) as f64);
                let l0 = (b.floor() as usize).min(self.n_polar - 1);
                (l0, (l0 + 1).min(self.n_polar - 1), b - l0 as f64)
            };
            let at = |j: usize, l: usize| values[self.flatten(i, j, l)];
            let lo = (1.0 - fa) * at(j0, l0) + fa * at(j1, l0);
            let hi = (1.0 - fa) * at(j0, l1) + fa * at(j1, l1);
            (1.0 - fb) * lo + fb * hi
        };
        let r0 = self.node_radius(0);
        let last = self.n_radial - 1;
        let rl = self.node_radius(last);
        if r < r0 {
            let here = ring(0, theta, phi);
            let there = ring(0, (theta + PI) % (2.0 * PI), PI - phi);
            return ((r0 + r) * here + (r0 - r) * there) / (2.0 * r0);
        }
        if r >= rl {
            let v = ring(last, theta, phi);
            return match outer {
                Some(o) => v + (o - v) * ((r - rl) / (1.0 - rl)).min(1.0),
                None => v,
            };
        }
        let i = (0..last).rev().find(|&i| self.node_radius(i) <= r).unwrap_or(0);
        let (ra, rb) = (self.node_radius(i), self.node_radius(i + 1));
        let t = (r - ra) / (rb - ra);
        (1.0 - t) * ring(i, theta, phi) + t * ring(i + 1, theta, phi)
    }

    pub fn sum<F: Fn(usize) -> f64 + Sync + Send>(&self, f: F) -> f64 {
        crate::exec::sum_range(self.len(), |k| self.weights[k] * f(k))
    }
}

/// Values on the nodes of a shared grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Arc<QuadratureGrid>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<f64>) -> Result<Self, GeometryError> {
        if values.len() != grid.len() {
            return Err(GeometryError::Length { expected: grid.len(), got: values.len() });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn from_fn<F: Fn(&Point) -> f64 + Sync + Send>(grid: Arc<QuadratureGrid>, f: F) -> Self {
        let values = crate::exec::map_slice(grid.nodes(), f);
        GridFunction { grid, values }
    }

    pub fn constant(grid: Arc<QuadratureGrid>, c: f64) -> Self {
        let values = vec![c; grid.len()];
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, a: f64) -> GridFunction {
        self.map(|v| a * v)
    }

    /// `a * self + b * other`; both must live on the same grid.
    pub fn combine(&self, a: f64, other: &GridFunction, b: f64) -> GridFunction {
        assert!(Arc::ptr_eq(&self.grid, &other.grid) || self.grid.len() == other.grid.len());
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn to_csv(&self) -> String {
        let dim = self.grid.dim();
        let mut s = String::from(if dim == 2 { "x1,x2,delta,value\n" } else { "x1,x2,x3,delta,value\n" });
        for (k, x) in self.grid.nodes().iter().enumerate() {
            for c in x.iter().take(dim) {
                let _ = write!(s, "{c:.17e},");
            }
            let _ = writeln!(s, "{:.17e},{:.17e}", self.grid.delta()[k], self.values[k]);
        }
        s
    }

    /// Read values back from `to_csv` output; node coordinates must match the
    /// grid to 1e-9.
    pub fn from_csv(grid: Arc<QuadratureGrid>, text: &str) -> Result<Self, GeometryError> {
        let dim = grid.dim();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let header = lines.next().map(|(_, l)| l.trim().to_string()).unwrap_or_default();
        let want = if dim == 2 { "x1,x2,delta,value" } else { "x1,x2,x3,delta,value" };
        if header != want {
            return Err(GeometryError::Csv(format!("line 1: expected header `{want}`, got `{header}`")));
        }
        let mut values = Vec::with_capacity(grid.len());
        for (ln, line) in lines {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != dim + 2 {
                return Err(GeometryError::Csv(format!("line {}: expected {} columns", ln + 1, dim + 2)));
            }
            let mut nums = Vec::with_capacity(cols.len());
            for (c, col) in cols.iter().enumerate() {
                let v: f64 = col
                    .parse()
                    .map_err(|_| GeometryError::Csv(format!("line {}, column {}: bad number `{col}`", ln + 1, c + 1)))?;
                nums.push(v);
            }
            let k = values.len();
            if k >= grid.len() {
                return Err(GeometryError::Csv(format!("line {}: more rows than grid nodes", ln + 1)));
            }
            let node = grid.nodes()[k];
            if (0..dim).any(|c| (node[c] - nums[c]).abs() > 1e-9) {
                return Err(GeometryError::Csv(format!("line {}: node does not match the grid", ln + 1)));
            }
            values.push(nums[dim + 1]);
        }
        GridFunction::new(grid, values)
    }

    pub fn read_csv(grid: Arc<QuadratureGrid>, path: &Path) -> Result<Self, GeometryError> {
        let text = std::fs::read_to_string(path).map_err(|e| GeometryError::Csv(format!("{}: {e}", path.display())))?;
        Self::from_csv(grid, &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        assert_eq!(boundary_distance(&[0.0; 3]), 1.0);
        assert_eq!(boundary_distance(&[1.0, 0.0, 0.0]), 0.0);
        assert_eq!(boundary_distance(&[0.0, 2.0, 0.0]), 0.0);
    }

    #[test]
    fn disk_measure() {
        for &(nr, na) in &[(64, 64), (128, 128)] {
            let g = build_grid(Domain::disk(), nr, na, 2.0).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert!((total - PI).abs() / PI < 1e-12);
        }
        let b = build_grid(Domain::ball(), 16, 16, 2.0).unwrap();
        let total: f64 = b.weights().iter().sum();
        assert!((total - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_grading_min_delta() {
        let g = build_grid(Domain::disk(), 32, 16, 1.0).unwrap();
        let m = g.delta().iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((m - 1.0 / 64.0).abs() < 1e-14);
        assert!(g.nodes().iter().all(|x| norm(x) > 0.0 && norm(x) < 1.0));
    }

    #[test]
    fn rejects_small_resolution() {
        assert!(build_grid(Domain::disk(), 3, 16, 1.0).is_err());
        assert!(build_grid(Domain::disk(), 8, 16, 0.5).is_err());
        assert!(Domain::new(4).is_err());
    }

    #[test]
    fn locate_returns_own_cell() {
        let g = build_grid(Domain::ball(), 8, 12, 2.0).unwrap();
        for k in 0..g.len() {
            let (i, j, l) = g.locate(&g.nodes()[k]);
            assert_eq!(g.flatten(i, j, l), k);
        }
    }

    #[test]
    fn csv_round_trip() {
        let g = Arc::new(build_grid(Domain::disk(), 6, 8, 2.0).unwrap());
        let f = GridFunction::from_fn(g.clone(), |x| x[0] - 2.0 * x[1]);
        let back = GridFunction::from_csv(g, &f.to_csv()).unwrap();
        assert_eq!(back.values(), f.values());
    }
}
