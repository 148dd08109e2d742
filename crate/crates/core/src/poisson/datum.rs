//! Datum and target specifications, and the truncation `T_n`.

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use super::PoissonError;
use crate::geometry::{norm, GridFunction, Point, QuadratureGrid};

#[derive(Debug, Clone, PartialEq)]
pub enum DatumSpec {
    Const(f64),
    /// `|x|^{-(N-ε)/m}`
    Singular { m: f64, eps: f64 },
    File(PathBuf),
}

impl FromStr for DatumSpec {
    type Err = PoissonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: &str| PoissonError::Spec(format!("datum `{s}`: {msg}"));
        let (tag, rest) = s.split_once(':').ok_or_else(|| bad("expected `const:c`, `singular:m,eps` or `file:<csv>`"))?;
        match tag.trim() {
            "const" => rest.trim().parse().map(DatumSpec::Const).map_err(|_| bad("constant is not a number")),
            "singular" => {
                let (m, e) = rest.split_once(',').ok_or_else(|| bad("expected `singular:m,eps`"))?;
                let m: f64 = m.trim().parse().map_err(|_| bad("m is not a number"))?;
                let eps: f64 = e.trim().parse().map_err(|_| bad("eps is not a number"))?;
                if !(m >= 1.0) {
                    return Err(bad("m must be >= 1"));
                }
                Ok(DatumSpec::Singular { m, eps })
            }
            "file" => Ok(DatumSpec::File(PathBuf::from(rest.trim()))),
            t => Err(bad(&format!("unknown tag `{t}`"))),
        }
    }
}

impl DatumSpec {
    pub fn realize(&self, grid: &Arc<QuadratureGrid>) -> Result<GridFunction, PoissonError> {
        match self {
            DatumSpec::Const(c) => Ok(GridFunction::constant(grid.clone(), *c)),
            DatumSpec::Singular { m, eps } => singular_datum(*m, *eps, grid),
            DatumSpec::File(p) => GridFunction::read_csv(grid.clone(), p).map_err(|e| PoissonError::Spec(e.to_string())),
        }
    }
}

/// Nodal values of `|x|^{-(N-ε)/m}`.
pub fn singular_datum(m: f64, eps: f64, grid: &Arc<QuadratureGrid>) -> Result<GridFunction, PoissonError> {
    let n = grid.dim() as f64;
    if !(eps > 0.0 && eps < n) {
        return Err(PoissonError::Spec(format!("eps = {eps} outside (0, N)")));
    }
    let power = (n - eps) / m;
    Ok(GridFunction::from_fn(grid.clone(), |x| norm(x).powf(-power)))
}

/// `T_n(ς) = max{-n, min{n, ς}}`.
pub fn truncate_value(v: f64, n: f64) -> f64 {
    v.clamp(-n, n)
}

pub fn truncate(h: &GridFunction, n: f64) -> GridFunction {
    h.map(|v| truncate_value(v, n))
}

/// `radial:K` (K points `(i/K, 0)`), `nodes`, or `point:x1,x2[,x3]`
/// separated by `;`.
pub fn parse_targets(spec: &str, grid: &QuadratureGrid) -> Result<Vec<Point>, PoissonError> {
    let bad = |msg: &str| PoissonError::Spec(format!("targets `{spec}`: {msg}"));
    let spec = spec.trim();
    if spec == "nodes" {
        return Ok(grid.nodes().to_vec());
    }
    if let Some(k) = spec.strip_prefix("radial:") {
        let k: usize = k.trim().parse().map_err(|_| bad("count is not an integer"))?;
        if k == 0 {
            return Err(bad("count must be positive"));
        }
        return Ok((0..k).map(|i| [i as f64 / k as f64, 0.0, 0.0]).collect());
    }
    if let Some(list) = spec.strip_prefix("point:") {
        let mut out = Vec::new();
        for item in list.split(';') {
            let mut p = [0.0; 3];
            let parts: Vec<&str> = item.split(',').collect();
            if parts.len() != grid.dim() {
                return Err(bad("point dimension does not match the domain"));
            }
            for (c, v) in parts.iter().enumerate() {
                p[c] = v.trim().parse().map_err(|_| bad("coordinate is not a number"))?;
            }
            out.push(p);
        }
        return Ok(out);
    }
    Err(bad("expected `radial:K`, `nodes` or `point:x1,x2`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!("const:1".parse::<DatumSpec>().unwrap(), DatumSpec::Const(1.0));
        assert_eq!("singular:2,0.1".parse::<DatumSpec>().unwrap(), DatumSpec::Singular { m: 2.0, eps: 0.1 });
        assert!("bump:1".parse::<DatumSpec>().is_err());
        assert!("singular:2".parse::<DatumSpec>().is_err());
    }

    #[test]
    fn truncation_bounds() {
        for &v in &[-5.0, -0.5, 0.0, 0.7, 12.0] {
            let t = truncate_value(v, 2.0);
            assert!(t.abs() <= 2f64.min(v.abs()));
            if v.abs() <= 2.0 {
                assert_eq!(t, v);
            }
        }
    }
}
