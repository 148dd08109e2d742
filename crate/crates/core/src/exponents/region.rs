//! Exact one-dimensional feasible regions: the set of values of one free
//! exponent for which a condition set holds, every other exponent fixed.
//!
//! Each clause is expanded symbolically in the free variable; the real roots
//! of every branch-selecting and comparison polynomial form a superset of the
//! points where any verdict can change. Evaluating exactly at each such point
//! and at one rational inside each gap between them recovers the region.

use std::fmt;

use num_traits::One;

use super::expr::{Env, SymVal, Var};
use super::poly::{Poly, Root};
use super::rational::{fmt_rational, simplest_between, ExtRational, Rational};
use super::sets::{
    base_clauses, existence_hypotheses, existence_sets, Clause, ConditionSet, Outcome, SetId,
};
use super::{ExponentError, ExponentProfile};

/// An interval endpoint.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    Exact(Rational),
    /// An irrational endpoint inside the exact bracket `(lo, hi)`.
    Irrational { lo: Rational, hi: Rational },
    Infinity,
}

impl Bound {
    fn from_root(r: &Root) -> Bound {
        match r {
            Root::Exact(x) => Bound::Exact(x.clone()),
            Root::Bracketed { lo, hi } => Bound::Irrational {
                lo: lo.clone(),
                hi: hi.clone(),
            },
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Bound::Exact(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(r) => f.write_str(&fmt_rational(r)),
            Bound::Irrational { lo, hi } => write!(
                f,
                "~{:.9}",
                super::rational::to_f64(&((lo + hi) / super::rational::int(2)))
            ),
            Bound::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    pub lo: Bound,
    pub lo_closed: bool,
    pub hi: Bound,
    pub hi_closed: bool,
    /// An exact point inside the interval.
    pub witness: Rational,
    /// The condition sets that pass at the witness.
    pub sets: Vec<SetId>,
}

impl Interval {
    /// Whether a rational lies in the interval. Irrational endpoints are
    /// decided by their brackets, which never contain a rational test point
    /// produced by the solver.
    pub fn contains(&self, x: &Rational) -> bool {
        let above = match &self.lo {
            Bound::Exact(l) => {
                if self.lo_closed {
                    x >= l
                } else {
                    x > l
                }
            }
            Bound::Irrational { hi, .. } => x >= hi,
            Bound::Infinity => false,
        };
        let below = match &self.hi {
            Bound::Exact(h) => {
                if self.hi_closed {
                    x <= h
                } else {
                    x < h
                }
            }
            Bound::Irrational { lo, .. } => x <= lo,
            Bound::Infinity => true,
        };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { "[" } else { "(" },
            self.lo,
            self.hi,
            if self.hi_closed { "]" } else { ")" }
        )
    }
}

/// The region of one free variable.
#[derive(Clone, Debug)]
pub struct Region {
    pub var: Var,
    pub intervals: Vec<Interval>,
    /// Exact points where some clause compares `inf` with `inf`.
    pub indeterminate: Vec<Rational>,
    /// Verdict at `+inf` for `m` and `sigma`.
    pub at_infinity: Option<Outcome>,
}

impl Region {
    pub fn contains(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            write!(f, "{} in {{}}", self.var.name())?;
        } else {
            let parts: Vec<String> = self.intervals.iter().map(|i| i.to_string()).collect();
            write!(f, "{} in {}", self.var.name(), parts.join(" u "))?;
        }
        if !self.indeterminate.is_empty() {
            let pts: Vec<String> = self.indeterminate.iter().map(fmt_rational).collect();
            write!(f, "; indeterminate at {}", pts.join(", "))?;
        }
        Ok(())
    }
}

/// A disjunction of condition sets, each conjoined with shared clauses.
pub struct Query<'a> {
    pub sets: &'a [ConditionSet],
    pub shared: &'a [Clause],
}

impl Query<'_> {
    fn outcome(&self, env: &Env) -> (Outcome, Vec<SetId>) {
        let shared = Outcome::all(self.shared.iter().map(|c| c.evaluate(env).outcome));
        let per_set: Vec<(SetId, Outcome)> = self
            .sets
            .iter()
            .map(|s| (s.id, Outcome::all([shared, s.evaluate(env).outcome])))
            .collect();
        let passing = per_set
            .iter()
            .filter(|(_, o)| *o == Outcome::Pass)
            .map(|(id, _)| *id)
            .collect();
        (Outcome::any(per_set.into_iter().map(|(_, o)| o)), passing)
    }

    fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.shared
            .iter()
            .chain(self.sets.iter().flat_map(|s| s.clauses.iter()))
    }

    /// Every polynomial whose roots may separate verdicts.
    fn critical_polys(&self, free: Var, env: &Env) -> Vec<Poly> {
        let mut polys = Vec::new();
        for c in self.clauses() {
            let mut l = c.lhs.expand(free, env);
            let r = c.rhs.expand(free, env);
            l.crit.extend(r.crit.iter().cloned());
            let mut crit = l.crit.clone();
            for a in &l.values {
                for b in &r.values {
                    if let (SymVal::Fn(f), SymVal::Fn(g)) = (a, b) {
                        let mut e = super::expr::Expansion::default();
                        e.crit_of_difference(f, g);
                        crit.extend(e.crit);
                    }
                }
            }
            polys.extend(crit);
        }
        polys
    }
}

/// Solve for the region of `free` on `[lower, inf)`.
pub fn solve(query: &Query<'_>, free: Var, env: &Env, lower: &Rational) -> Region {
    let mut points: Vec<Root> = Vec::new();
    for p in query.critical_polys(free, env) {
        for r in p.real_roots() {
            if r.center() > *lower {
                points.push(r);
            }
        }
    }
    points.push(Root::Exact(lower.clone()));
    points.sort_by(|a, b| a.center().cmp(&b.center()));
    points.dedup();
    // The same irrational root can arrive from several polynomials with
    // different brackets; overlapping brackets are merged.
    let mut merged: Vec<Root> = Vec::new();
    for r in points {
        match (merged.last_mut(), &r) {
            (Some(Root::Bracketed { hi, .. }), Root::Bracketed { lo: l2, hi: h2 }) if l2 <= hi => {
                if h2 > hi {
                    *hi = h2.clone();
                }
            }
            _ => merged.push(r),
        }
    }
    let points = merged;
    let at = |x: &Rational| query.outcome(&env.with(free, ExtRational::Finite(x.clone())));

    // Cells alternate point, gap, point, gap, ... with a final unbounded gap.
    struct Cell {
        outcome: Outcome,
        sets: Vec<SetId>,
        sample: Option<Rational>,
    }
    let mut cells: Vec<Cell> = Vec::new();
    let mut indeterminate = Vec::new();
    for (i, pt) in points.iter().enumerate() {
        match pt {
            Root::Exact(x) => {
                let (o, sets) = at(x);
                if o == Outcome::Indeterminate {
                    indeterminate.push(x.clone());
                }
                cells.push(Cell {
                    outcome: o,
                    sets,
                    sample: Some(x.clone()),
                });
            }
            Root::Bracketed { .. } => cells.push(Cell {
                outcome: Outcome::Fail,
                sets: Vec::new(),
                sample: None,
            }),
        }
        let left = pt.upper();
        let sample = match points.get(i + 1) {
            Some(next) => {
                let right = next.lower();
                let third = (right - left) / super::rational::int(3);
                simplest_between(&(left + &third), &(right - &third))
            }
            None => {
                simplest_between(&(left + Rational::one()), &(left + super::rational::int(2)))
            }
        };
        let (o, sets) = at(&sample);
        cells.push(Cell {
            outcome: o,
            sets,
            sample: Some(sample),
        });
    }
    // An irrational point between two passing gaps passes as well: its
    // clauses are continuous there and only touch equality.
    for k in (0..cells.len()).step_by(2) {
        if cells[k].sample.is_none()
            && k > 0
            && k + 1 < cells.len()
            && cells[k - 1].outcome == Outcome::Pass
            && cells[k + 1].outcome == Outcome::Pass
        {
            cells[k].outcome = Outcome::Pass;
        }
    }

    let bound_of = |k: usize| -> Bound {
        // Point cells sit at even positions.
        Bound::from_root(&points[k / 2])
    };
    let mut intervals = Vec::new();
    let mut k = 0;
    while k < cells.len() {
        if cells[k].outcome != Outcome::Pass {
            k += 1;
            continue;
        }
        let start = k;
        while k + 1 < cells.len() && cells[k + 1].outcome == Outcome::Pass {
            k += 1;
        }
        let end = k;
        let (lo, lo_closed) = if start % 2 == 0 {
            (bound_of(start), matches!(points[start / 2], Root::Exact(_)))
        } else {
            (bound_of(start - 1), false)
        };
        let (hi, hi_closed) = if end % 2 == 0 {
            (bound_of(end), matches!(points[end / 2], Root::Exact(_)))
        } else if end + 1 < cells.len() {
            (bound_of(end + 1), false)
        } else {
            (Bound::Infinity, false)
        };
        let witness_cell = (start..=end)
            .find(|&c| c % 2 == 1)
            .unwrap_or(start);
        let cell = &cells[witness_cell];
        intervals.push(Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
            witness: cell.sample.clone().expect("passing cells have samples"),
            sets: cell.sets.clone(),
        });
        k += 1;
    }
    let at_infinity = match free {
        Var::M | Var::Sigma => Some(query.outcome(&env.with(free, ExtRational::Infinity)).0),
        _ => None,
    };
    Region {
        var: free,
        intervals,
        indeterminate,
        at_infinity,
    }
}

/// Exact region of the free exponent `p` or `q` for which some existence set
/// passes together with the standing hypotheses.
pub fn feasible_region(profile: &ExponentProfile, free: Var) -> Result<Region, ExponentError> {
    if !matches!(free, Var::P | Var::Q) {
        return Err(ExponentError::FreeVariable(
            "the free exponent must be p or q".into(),
        ));
    }
    let sets = existence_sets(profile);
    let shared = existence_hypotheses(profile);
    Ok(solve(
        &Query {
            sets: &sets,
            shared: &shared,
        },
        free,
        &profile.env(),
        &Rational::one(),
    ))
}

/// Region of any exponent for a single set read with the base clauses only.
pub fn set_region(profile: &ExponentProfile, set: &ConditionSet, free: Var) -> Region {
    let shared = base_clauses();
    solve(
        &Query {
            sets: std::slice::from_ref(set),
            shared: &shared,
        },
        free,
        &profile.env(),
        &Rational::one(),
    )
}

/// Parse the `gate --sweep` argument.
pub fn parse_free(text: &str) -> Result<Var, ExponentError> {
    match text {
        "p" => Ok(Var::P),
        "q" => Ok(Var::Q),
        _ => Err(ExponentError::FreeVariable(format!(
            "cannot sweep `{text}`; expected p or q"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rational::{int, rat};

    fn profile(p: Rational, q: Rational, n: u32, m: ExtRational, s: ExtRational) -> ExponentProfile {
        ExponentProfile::reference(p, q, n, m, s)
    }

    fn fin(n: i64) -> ExtRational {
        ExtRational::Finite(int(n))
    }

    #[test]
    fn q_window_for_square_integrable_data() {
        let prof = profile(int(1), int(1), 2, fin(2), fin(2));
        let r = feasible_region(&prof, Var::Q).unwrap();
        assert_eq!(r.intervals.len(), 1, "{r}");
        let i = &r.intervals[0];
        assert_eq!(i.lo, Bound::Exact(int(1)));
        assert!(!i.lo_closed);
        assert_eq!(i.hi, Bound::Exact(rat(9, 5)));
        assert!(!i.hi_closed);
        assert!(i.sets.contains(&SetId::E42));
    }

    #[test]
    fn p_window_at_q_one() {
        let prof = profile(int(1), int(1), 2, fin(2), fin(2));
        let r = feasible_region(&prof, Var::P).unwrap();
        assert_eq!(r.intervals.len(), 1, "{r}");
        assert_eq!(r.intervals[0].lo, Bound::Exact(int(1)));
        assert_eq!(r.intervals[0].hi, Bound::Exact(rat(5, 4)));
    }

    #[test]
    fn bounded_data_window_has_an_indeterminate_point() {
        let prof = profile(
            int(1),
            int(1),
            2,
            ExtRational::Infinity,
            ExtRational::Infinity,
        );
        let r = feasible_region(&prof, Var::Q).unwrap();
        assert_eq!(r.indeterminate, vec![rat(9, 5)], "{r}");
        let ends: Vec<_> = r
            .intervals
            .iter()
            .map(|i| (i.lo.clone(), i.hi.clone()))
            .collect();
        assert_eq!(
            ends,
            vec![
                (Bound::Exact(int(1)), Bound::Exact(rat(9, 5))),
                (Bound::Exact(rat(9, 5)), Bound::Exact(int(3)))
            ]
        );
        assert!(!r.intervals[1].hi_closed);
    }

    #[test]
    fn only_p_and_q_can_be_swept() {
        let prof = profile(int(1), int(1), 2, fin(2), fin(2));
        assert!(feasible_region(&prof, Var::M).is_err());
        assert!(parse_free("m").is_err());
    }
}
