//! Empirical ratio probes of the weighted regularity estimates: the weighted
//! bound on `w/δ^{s1}` and the gradient bound on `|∇w|δ^{1-s1}` (two-order
//! and single-order forms), gated by exact case windows.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use super::family::{Datum, FamilyParams};
use super::{weighted_lp_values, NormsError, WeightedNormSpec};
use crate::exponents::rational::to_f64;
use crate::exponents::{fmt_rational, int, rat, ExtRational, Rational};
use crate::geometry::{norm, GridFunction, QuadratureGrid};
use crate::poisson::{p_exponent, riesz_operator, NodeOperator, QuadOptions, Solver};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimate {
    /// `‖w/δ^{s1}‖_γ ≤ C‖hδ^{a(1-s1)}‖_m`.
    Thm31,
    /// `‖|∇w|δ^{1-s1}‖_γ` bounds, `1/2 < s1 < s2 < 1`.
    Thm32,
    /// The single-order gradient bound, `s1 = s2 = s`.
    Thm22,
}

impl Estimate {
    pub fn id(&self) -> &'static str {
        match self {
            Estimate::Thm31 => "3.1",
            Estimate::Thm32 => "3.2",
            Estimate::Thm22 => "2.2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    I,
    II,
    III,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
        })
    }
}

/// Exact parameters of one probe. `gamma = None` picks an admissible
/// exponent inside the window.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeParams {
    pub s1: Rational,
    pub s2: Rational,
    pub a: Rational,
    pub m: Rational,
    pub gamma: Option<ExtRational>,
    pub dim: usize,
}

/// Case of the estimate and the admissible range of `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub estimate: Estimate,
    pub case: Case,
    /// `m̂ = mN/(N - mκ)_+`, `κ = 2s2 - s1 - a(1-s1)`.
    pub m_hat: ExtRational,
    /// Supremum of admissible `γ`.
    pub gamma_max: ExtRational,
    pub inclusive: bool,
}

impl Window {
    pub fn label(&self) -> String {
        format!("{}({})", self.estimate.id(), self.case)
    }

    pub fn admits(&self, gamma: &ExtRational) -> bool {
        if self.inclusive {
            gamma <= &self.gamma_max
        } else {
            gamma < &self.gamma_max
        }
    }

    /// Default exponent: midway between `m` and the bound in case (i),
    /// `2m` in case (ii), `∞` in case (iii).
    pub fn default_gamma(&self, m: &Rational) -> ExtRational {
        match (self.case, &self.gamma_max) {
            (Case::I, ExtRational::Finite(g)) => ExtRational::Finite((m + g) / int(2)),
            (Case::I, ExtRational::Infinity) | (Case::II, _) => ExtRational::Finite(m * int(2)),
            (Case::III, _) => ExtRational::Infinity,
        }
    }
}

/// `mN/(N - m k)_+`.
fn critical(m: &Rational, n: &Rational, k: &Rational) -> ExtRational {
    let den = n - m * k;
    if den.is_positive() {
        ExtRational::Finite(m * n / den)
    } else {
        ExtRational::Infinity
    }
}

/// `N/k`, `∞` for `k ≤ 0`.
fn threshold(n: &Rational, k: &Rational) -> ExtRational {
    if k.is_positive() {
        ExtRational::Finite(n / k)
    } else {
        ExtRational::Infinity
    }
}

fn refuse(msg: String) -> NormsError {
    NormsError::Refused(msg)
}

fn check_common(p: &ProbeParams, lo: &Rational) -> Result<Rational, NormsError> {
    let one = int(1);
    let in_range = |s: &Rational| s > lo && s < &one;
    if !in_range(&p.s1) || !in_range(&p.s2) {
        return Err(refuse(format!(
            "s1 = {}, s2 = {} must lie in ({}, 1)",
            fmt_rational(&p.s1),
            fmt_rational(&p.s2),
            fmt_rational(lo)
        )));
    }
    if p.s1 > p.s2 {
        return Err(refuse(format!("s1 = {} exceeds s2 = {}", fmt_rational(&p.s1), fmt_rational(&p.s2))));
    }
    if p.m < one {
        return Err(refuse(format!("m = {} below 1", fmt_rational(&p.m))));
    }
    let a_max = &p.s2 / (&one - &p.s1);
    if p.a.is_negative() || p.a >= a_max {
        return Err(refuse(format!("a = {} outside [0, {})", fmt_rational(&p.a), fmt_rational(&a_max))));
    }
    if p.dim != 2 && p.dim != 3 {
        return Err(NormsError::Invalid(format!("dimension {} not supported", p.dim)));
    }
    // κ = 2s2 - s1 - a(1 - s1)
    Ok(&p.s2 * int(2) - &p.s1 - &p.a * (&one - &p.s1))
}

fn check_gamma(w: &Window, p: &ProbeParams) -> Result<(), NormsError> {
    let Some(g) = &p.gamma else { return Ok(()) };
    if *g < ExtRational::Finite(int(1)) {
        return Err(refuse(format!("γ = {g} below 1")));
    }
    if !w.admits(g) {
        let rel = if w.inclusive { "<=" } else { "<" };
        return Err(refuse(format!("γ = {g} violates γ {rel} {} in case {}", w.gamma_max, w.label())));
    }
    Ok(())
}

/// Window of the bound on `w/δ^{s1}` (`0 < s1 < s2 < 1`).
pub fn thm31_window(p: &ProbeParams) -> Result<Window, NormsError> {
    let kappa = check_common(p, &int(0))?;
    if p.s1 == p.s2 {
        return Err(refuse("the two-order estimate needs s1 < s2".into()));
    }
    let n = int(p.dim as i64);
    let m_hat = critical(&p.m, &n, &kappa);
    let t = threshold(&n, &kappa);
    let m = ExtRational::Finite(p.m.clone());
    let (case, gamma_max, inclusive) = if m < t {
        (Case::I, m_hat.clone(), true)
    } else if m == t {
        (Case::II, ExtRational::Infinity, false)
    } else {
        (Case::III, ExtRational::Infinity, true)
    };
    let w = Window { estimate: Estimate::Thm31, case, m_hat, gamma_max, inclusive };
    check_gamma(&w, p)?;
    Ok(w)
}

/// Window of the gradient bound; `s1 = s2` selects the single-order form.
pub fn thm32_window(p: &ProbeParams) -> Result<Window, NormsError> {
    let kappa = check_common(p, &rat(1, 2))?;
    let n = int(p.dim as i64);
    let single = p.s1 == p.s2;
    let estimate = if single { Estimate::Thm22 } else { Estimate::Thm32 };
    let m_hat = critical(&p.m, &n, &kappa);
    let k1 = &p.s2 * int(2) - int(1);
    let m_tilde = m_hat.clone().min(critical(&p.m, &n, &k1));
    let (t1, t2) = (threshold(&n, &k1), threshold(&n, &kappa));
    let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    let m = ExtRational::Finite(p.m.clone());
    // the single-order statement uses the max in case (i), closing the gap
    let case_one = if single { m < hi } else { m < lo };
    let (case, gamma_max, inclusive) = if case_one {
        (Case::I, m_tilde, false)
    } else if m == hi {
        (Case::II, ExtRational::Infinity, false)
    } else if m > hi {
        (Case::III, ExtRational::Infinity, true)
    } else {
        return Err(refuse(format!(
            "m = {} lies in [{lo}, {hi}), between the case (i) and case (ii) thresholds; no case of {} applies",
            fmt_rational(&p.m),
            estimate.id()
        )));
    };
    let w = Window { estimate, case, m_hat, gamma_max, inclusive };
    check_gamma(&w, p)?;
    Ok(w)
}

/// Node operators shared by all probes on one grid and one order `s2`.
pub struct ProbeSetup {
    grid: Arc<QuadratureGrid>,
    s2: f64,
    green: NodeOperator,
    mask: Vec<bool>,
    trim: usize,
    opts: QuadOptions,
    riesz: Vec<(f64, NodeOperator)>,
}

impl ProbeSetup {
    /// `gradients` adds the gradient rows needed by the gradient probes on
    /// the nodes kept by the boundary-ring convention.
    pub fn new(grid: Arc<QuadratureGrid>, s2: f64, gradients: bool, opts: QuadOptions) -> Result<Self, NormsError> {
        let solver = Solver::new(s2, grid.clone())?.with_options(opts);
        let trim = grid.gradient_trim().max(1);
        let mask = grid.interior_mask(trim);
        let green = solver.node_operator(gradients.then_some(mask.as_slice()));
        Ok(ProbeSetup { grid, s2, green, mask, trim, opts, riesz: Vec::new() })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    /// Measure of the trimmed boundary rings.
    pub fn excluded_measure(&self) -> f64 {
        self.grid.trimmed_measure(self.trim)
    }

    fn riesz(&mut self, lambda: f64) -> Result<&NodeOperator, NormsError> {
        let pos = match self.riesz.iter().position(|(l, _)| *l == lambda) {
            Some(p) => p,
            None => {
                let op = riesz_operator(lambda, &self.grid, &self.opts)?;
                self.riesz.push((lambda, op));
                self.riesz.len() - 1
            }
        };
        Ok(&self.riesz[pos].1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub datum_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// `‖w/δ^{s1}‖ + ‖ℙ(hδ^{a(1-s1)})‖` (gradient estimates only).
    pub rhs_split: Option<f64>,
    pub ratio_split: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateProbeReport {
    /// e.g. `3.1(i)`.
    pub theorem: String,
    pub params: String,
    pub family: String,
    pub rows: Vec<ProbeRow>,
    pub sup_ratio: f64,
    pub sup_split: Option<f64>,
    pub excluded_measure: f64,
}

impl EstimateProbeReport {
    /// CSV with header `datum_id,lhs,rhs,ratio` (plus `rhs_split,ratio_split`
    /// for gradient estimates) and a final `sup` row.
    pub fn to_csv(&self) -> String {
        let split = self.sup_split.is_some();
        let mut out = String::from("datum_id,lhs,rhs,ratio");
        if split {
            out.push_str(",rhs_split,ratio_split");
        }
        out.push('\n');
        let f = |v: f64| format!("{v:.10e}");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}", r.datum_id, f(r.lhs), f(r.rhs), f(r.ratio)));
            if split {
                out.push_str(&format!(",{},{}", f(r.rhs_split.unwrap_or(f64::NAN)), f(r.ratio_split.unwrap_or(f64::NAN))));
            }
            out.push('\n');
        }
        out.push_str(&format!("sup,,,{}", f(self.sup_ratio)));
        if let Some(s) = self.sup_split {
            out.push_str(&format!(",,{}", f(s)));
        }
        out.push('\n');
        out
    }

    /// Relative change of the sup ratio against another run.
    pub fn drift(&self, other: &EstimateProbeReport) -> f64 {
        relative_drift(self.sup_ratio, other.sup_ratio)
    }

    /// `true` when the sup ratio moved less than 10% against `other`.
    pub fn stable_against(&self, other: &EstimateProbeReport) -> bool {
        self.drift(other) < 0.1
    }
}

pub fn relative_drift(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn describe(p: &ProbeParams, gamma: &ExtRational) -> String {
    format!(
        "s1={} s2={} a={} m={} gamma={gamma} N={}",
        fmt_rational(&p.s1),
        fmt_rational(&p.s2),
        fmt_rational(&p.a),
        fmt_rational(&p.m),
        p.dim
    )
}

fn family_label(family: &[Datum]) -> String {
    format!("{} ({} members)", super::FAMILY_VERSION, family.len())
}

fn sup(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, f64::max)
}

struct Prepared {
    gamma: ExtRational,
    params: FamilyParams,
    temper: f64,
    s1: f64,
}

fn prepare(setup: &ProbeSetup, p: &ProbeParams, window: &Window) -> Result<Prepared, NormsError> {
    if setup.grid.dim() != p.dim {
        return Err(NormsError::Invalid("probe dimension differs from the grid".into()));
    }
    if (setup.s2 - to_f64(&p.s2)).abs() > 1e-15 {
        return Err(NormsError::Invalid(format!("setup built for s2 = {}, probe asks {}", setup.s2, fmt_rational(&p.s2))));
    }
    let gamma = p.gamma.clone().unwrap_or_else(|| window.default_gamma(&p.m));
    let s1 = to_f64(&p.s1);
    let temper = to_f64(&p.a) * (1.0 - s1);
    Ok(Prepared { gamma, params: FamilyParams { temper, m: to_f64(&p.m) }, temper, s1 })
}

/// Ratios `‖w/δ^{s1}‖_γ / ‖hδ^{a(1-s1)}‖_m` over the family, `w` the order
/// `s2` solution.
pub fn probe_thm31(setup: &ProbeSetup, p: &ProbeParams, family: &[Datum]) -> Result<EstimateProbeReport, NormsError> {
    let window = thm31_window(p)?;
    let pre = prepare(setup, p, &window)?;
    let grid = &setup.grid;
    let lhs_spec = WeightedNormSpec::new(pre.gamma.to_f64(), -pre.s1)?;
    let rhs_spec = WeightedNormSpec::new(pre.params.m, pre.temper)?;
    let rows = crate::exec::map_slice(family, |d| {
        let h = d.realize(grid, &pre.params);
        let w = setup.green.apply(h.values());
        let lhs = weighted_lp_values(grid, &w, &lhs_spec, None);
        let rhs = weighted_lp_values(grid, h.values(), &rhs_spec, None);
        ProbeRow { datum_id: d.id.clone(), lhs, rhs, ratio: lhs / rhs, rhs_split: None, ratio_split: None }
    });
    check_rows(&rows)?;
    Ok(EstimateProbeReport {
        theorem: window.label(),
        params: describe(p, &pre.gamma),
        family: family_label(family),
        sup_ratio: sup(rows.iter().map(|r| r.ratio)),
        rows,
        sup_split: None,
        excluded_measure: 0.0,
    })
}

/// Ratios of `‖|∇w|δ^{1-s1}‖_γ` (trimmed rings excluded) against the direct
/// bound `‖hδ^{a(1-s1)}‖_m` and against the split form
/// `‖w/δ^{s1}‖_q + ‖ℙ(hδ^{a(1-s1)})‖_γ` (`q = m̂` in case (i), `γ` otherwise).
pub fn probe_thm32(setup: &mut ProbeSetup, p: &ProbeParams, family: &[Datum]) -> Result<EstimateProbeReport, NormsError> {
    let window = thm32_window(p)?;
    let pre = prepare(setup, p, &window)?;
    if setup.green.apply_grad(&vec![0.0; setup.green.len()]).is_none() {
        return Err(NormsError::Invalid("probe setup was built without gradients".into()));
    }
    let lambda = p_exponent(p.dim, pre.s1, setup.s2, to_f64(&p.a));
    setup.riesz(lambda)?;
    let setup = &*setup;
    let riesz = &setup.riesz.iter().find(|(l, _)| *l == lambda).expect("cached above").1;
    let grid = &setup.grid;
    let g = pre.gamma.to_f64();
    let lhs_spec = WeightedNormSpec::new(g, 1.0 - pre.s1)?;
    let rhs_spec = WeightedNormSpec::new(pre.params.m, pre.temper)?;
    let q = match window.case {
        Case::I => window.m_hat.to_f64(),
        _ => g,
    };
    let w_spec = WeightedNormSpec::new(q, -pre.s1)?;
    let p_spec = WeightedNormSpec::lebesgue(g)?;
    let delta = grid.delta();
    let rows = crate::exec::map_slice(family, |d| {
        let h = d.realize(grid, &pre.params);
        let w = setup.green.apply(h.values());
        let grad = setup.green.apply_grad(h.values()).expect("gradient rows present");
        let gnorm: Vec<f64> = grad.iter().map(norm).collect();
        let lhs = weighted_lp_values(grid, &gnorm, &lhs_spec, Some(&setup.mask));
        let rhs = weighted_lp_values(grid, h.values(), &rhs_spec, None);
        let tempered: Vec<f64> = h.values().iter().zip(delta).map(|(v, d)| v * d.powf(pre.temper)).collect();
        let pv = riesz.apply(&tempered);
        let split = weighted_lp_values(grid, &w, &w_spec, None) + weighted_lp_values(grid, &pv, &p_spec, None);
        ProbeRow {
            datum_id: d.id.clone(),
            lhs,
            rhs,
            ratio: lhs / rhs,
            rhs_split: Some(split),
            ratio_split: Some(lhs / split),
        }
    });
    check_rows(&rows)?;
    Ok(EstimateProbeReport {
        theorem: window.label(),
        params: describe(p, &pre.gamma),
        family: family_label(family),
        sup_ratio: sup(rows.iter().map(|r| r.ratio)),
        sup_split: Some(sup(rows.iter().filter_map(|r| r.ratio_split))),
        rows,
        excluded_measure: setup.excluded_measure(),
    })
}

fn check_rows(rows: &[ProbeRow]) -> Result<(), NormsError> {
    for r in rows {
        if !(r.ratio.is_finite() && r.ratio > 0.0) {
            return Err(NormsError::Invalid(format!("datum {}: ratio {} is not positive and finite", r.datum_id, r.ratio)));
        }
    }
    Ok(())
}

/// The grid function of a datum, for callers outside the probes.
pub fn realize(d: &Datum, grid: &Arc<QuadratureGrid>, p: &ProbeParams) -> GridFunction {
    let s1 = to_f64(&p.s1);
    d.realize(grid, &FamilyParams { temper: to_f64(&p.a) * (1.0 - s1), m: to_f64(&p.m) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: i64, m: i64, gamma: Option<&str>) -> ProbeParams {
        ProbeParams {
            s1: rat(3, 4),
            s2: rat(9, 10),
            a: int(a),
            m: int(m),
            gamma: gamma.map(|g| ExtRational::parse(g).unwrap()),
            dim: 2,
        }
    }

    #[test]
    fn two_order_windows() {
        // κ = 21/20 at a = 0: m̂(1) = 40/19, m = 2 beyond N/κ = 40/21
        let w = thm31_window(&params(0, 1, None)).unwrap();
        assert_eq!((w.case, w.m_hat.clone()), (Case::I, ExtRational::Finite(rat(40, 19))));
        assert_eq!(thm31_window(&params(0, 2, None)).unwrap().case, Case::III);
        // κ = 4/5 at a = 1: m̂(2) = 10
        let w = thm31_window(&params(1, 2, None)).unwrap();
        assert_eq!(w.m_hat, ExtRational::Finite(int(10)));
        assert!(thm31_window(&params(1, 2, Some("10"))).is_ok());
        assert!(matches!(thm31_window(&params(1, 2, Some("21/2"))), Err(NormsError::Refused(_))));
        // m = N/κ exactly: case (ii) refuses γ = ∞
        let p = ProbeParams { m: rat(5, 2), ..params(1, 1, Some("inf")) };
        assert!(matches!(thm31_window(&p), Err(NormsError::Refused(_))));
    }

    #[test]
    fn gradient_windows() {
        let w = thm32_window(&params(0, 1, None)).unwrap();
        assert_eq!((w.case, w.gamma_max.clone()), (Case::I, ExtRational::Finite(rat(5, 3))));
        // m = 2 sits between N/κ = 40/21 and N/(2s2-1) = 5/2
        assert!(matches!(thm32_window(&params(0, 2, None)), Err(NormsError::Refused(_))));
        let w = thm32_window(&params(2, 2, None)).unwrap();
        assert_eq!(w.gamma_max, ExtRational::Finite(rat(40, 9)));
        assert!(matches!(thm32_window(&params(2, 2, Some("40/9"))), Err(NormsError::Refused(_))));
        // s1 = s2 uses the single-order statement, where m = 2 is case (i)
        let p = ProbeParams { s1: rat(9, 10), ..params(0, 2, None) };
        assert_eq!(thm32_window(&p).unwrap().label(), "2.2(i)");
        assert!(matches!(thm32_window(&ProbeParams { s1: rat(2, 5), ..params(0, 1, None) }), Err(NormsError::Refused(_))));
    }

    #[test]
    fn default_gamma_is_admissible() {
        for a in 0..3 {
            for m in 1..4 {
                for w in [thm31_window(&params(a, m, None)), thm32_window(&params(a, m, None))].into_iter().flatten() {
                    let g = w.default_gamma(&int(m));
                    assert!(w.admits(&g), "{} {g}", w.label());
                    assert!(g >= ExtRational::Finite(int(m)));
                }
            }
        }
    }
}
