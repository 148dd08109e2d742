//! Versioned test-datum families for the ratio probes.

use std::sync::Arc;

use crate::geometry::{boundary_distance, norm, GridFunction, Point, QuadratureGrid};

/// Bumped whenever members or their parametrization change.
pub const FAMILY_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    Constant(f64),
    /// Gaussian of width `depth/2` centered at distance `depth` from the
    /// boundary on the first axis.
    Gaussian { depth: f64 },
    /// `δ^{-(temper + τ/m)}`: as singular toward the boundary as the
    /// weighted `L^m` norm allows, scaled by `τ ∈ (0, 1)`.
    BoundaryLayer { tau: f64 },
    /// `|x|^{-τN/m}`, an interior point singularity of the same kind.
    Power { tau: f64 },
}

/// Parameters fixing the singular members: the weight exponent `a(1-s1)`
/// and the integrability `m` of the datum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub temper: f64,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Datum {
    pub id: String,
    pub shape: Shape,
}

impl Datum {
    fn new(shape: Shape) -> Self {
        let id = match shape {
            Shape::Constant(c) => format!("const-{c}"),
            Shape::Gaussian { depth } => format!("gauss-{depth:.4}"),
            Shape::BoundaryLayer { tau } => format!("layer-{tau:.4}"),
            Shape::Power { tau } => format!("power-{tau:.4}"),
        };
        Datum { id, shape }
    }

    pub fn eval(&self, x: &Point, dim: usize, params: &FamilyParams) -> f64 {
        match self.shape {
            Shape::Constant(c) => c,
            Shape::Gaussian { depth } => {
                let c = 1.0 - depth;
                let w = 0.5 * depth;
                let d2 = (x[0] - c).powi(2) + x[1] * x[1] + x[2] * x[2];
                (-d2 / (w * w)).exp()
            }
            Shape::BoundaryLayer { tau } => boundary_distance(x).powf(-(params.temper + tau / params.m)),
            Shape::Power { tau } => norm(x).powf(-tau * dim as f64 / params.m),
        }
    }

    pub fn realize(&self, grid: &Arc<QuadratureGrid>, params: &FamilyParams) -> GridFunction {
        let dim = grid.dim();
        GridFunction::from_fn(grid.clone(), |x| self.eval(x, dim, params))
    }
}

fn spread(lo: f64, hi: f64, n: usize, geometric: bool) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            if geometric {
                hi * (lo / hi).powf(t)
            } else {
                lo + (hi - lo) * t
            }
        })
        .collect()
}

/// The standard family: a constant, Gaussians at depths 0.5, 0.2, 0.08, and
/// boundary-layer and point singularities at `τ ∈ {0.2, 0.4, 0.6, 0.8}`
/// (12 members). `doubled` gives the 24-member refinement used to check that
/// the sup ratio has settled.
pub fn datum_family(doubled: bool) -> Vec<Datum> {
    let (consts, depths, taus) = if doubled {
        (vec![1.0, -2.0], spread(0.08, 0.5, 6, true), spread(0.2, 0.8, 8, false))
    } else {
        (vec![1.0], vec![0.5, 0.2, 0.08], vec![0.2, 0.4, 0.6, 0.8])
    };
    let mut out: Vec<Datum> = consts.into_iter().map(|c| Datum::new(Shape::Constant(c))).collect();
    out.extend(depths.into_iter().map(|depth| Datum::new(Shape::Gaussian { depth })));
    out.extend(taus.iter().map(|&tau| Datum::new(Shape::BoundaryLayer { tau })));
    out.extend(taus.iter().map(|&tau| Datum::new(Shape::Power { tau })));
    out
}

/// Radial bump `exp(1 - 1/(1 - ((δ-3w)/w)²))` supported in `δ ∈ (2w, 4w)`.
pub fn concentration_bump(grid: &Arc<QuadratureGrid>, width: f64) -> GridFunction {
    GridFunction::from_fn(grid.clone(), |x| {
        let t = (boundary_distance(x) - 3.0 * width) / width;
        if t.abs() >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - t * t)).exp()
        }
    })
}

/// Bump widths concentrating toward the boundary: 4 members, or 8 when
/// doubled.
pub fn concentration_family(doubled: bool) -> Vec<f64> {
    spread(0.07, 0.2, if doubled { 8 } else { 4 }, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes_and_ids() {
        let f = datum_family(false);
        assert_eq!(f.len(), 12);
        assert_eq!(datum_family(true).len(), 24);
        let mut ids: Vec<&str> = f.iter().map(|d| d.id.as_str()).collect();
        ids.dedup();
        assert_eq!(ids.len(), 12);
        assert_eq!(f[0].id, "const-1");
    }

    #[test]
    fn singular_members_stay_in_the_weighted_space() {
        // τ < 1 keeps (temper + τ/m)·m - temper·m = τ < 1 and τN < N
        let p = FamilyParams { temper: 0.25, m: 2.0 };
        let d = Datum::new(Shape::BoundaryLayer { tau: 0.5 });
        let x = [0.99, 0.0, 0.0];
        let v = d.eval(&x, 2, &p);
        assert!((v - 0.01f64.powf(-0.5)).abs() < 1e-9);
    }
}
