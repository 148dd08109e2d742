//! The worked examples attached to the existence theorem (at `s1 = 3/4`,
//! `s2 = 9/10`) and to the singular-data nonexistence theorem, as a catalog
//! of boxes, together with an exact containment check against the solver.
//!
//! A box fixes some exponents, lets one "bound" exponent range over an
//! interval, and claims that the condition holds for the "free" exponent on
//! an interval whose endpoints are rational functions of the bound one. The
//! check samples the bound exponent and, at each sample, compares the claimed
//! interval with the exact region of the free exponent.

use std::fmt;

use num_traits::{One, Zero};

use super::expr::{Env, Var};
use super::poly::{Poly, RatFn};
use super::rational::{fmt_rational, int, rat, ExtRational, Rational};
use super::region::{solve, Bound, Interval, Query, Region};
use super::sets::{
    base_clauses, existence_hypotheses, existence_sets, singular_data_set, Clause, ConditionSet,
    ExponentProfile, SetId,
};

/// Endpoint of a claimed interval as a function of the bound exponent.
#[derive(Clone, Debug)]
pub enum End {
    Inf,
    /// `num(b) / den(b)`, coefficients in increasing degree.
    Ratio(Vec<i64>, Vec<i64>),
}

impl End {
    fn constant(n: i64, d: i64) -> End {
        End::Ratio(vec![n], vec![d])
    }

    fn eval(&self, b: &Rational) -> ExtRational {
        match self {
            End::Inf => ExtRational::Infinity,
            End::Ratio(n, d) => {
                let p = |c: &[i64]| Poly::new(c.iter().map(|&k| int(k)).collect());
                let f = RatFn {
                    num: p(n),
                    den: p(d),
                };
                ExtRational::Finite(f.num.eval(b) / f.den.eval(b))
            }
        }
    }
}

/// Range of the bound exponent.
#[derive(Clone, Debug)]
pub struct BoundRange {
    pub lo: Rational,
    pub lo_closed: bool,
    /// `None` for `+inf`.
    pub hi: Option<Rational>,
    pub hi_closed: bool,
}

impl BoundRange {
    fn point(x: Rational) -> Self {
        BoundRange {
            lo: x.clone(),
            lo_closed: true,
            hi: Some(x),
            hi_closed: true,
        }
    }

    /// Endpoints when closed, near-endpoint offsets when open, fifteen
    /// interior points, and far points for unbounded ranges.
    pub fn samples(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        match &self.hi {
            Some(hi) if *hi == self.lo => return vec![self.lo.clone()],
            Some(hi) => {
                let w = hi - &self.lo;
                if self.lo_closed {
                    out.push(self.lo.clone());
                }
                out.push(&self.lo + &w * rat(1, 1_000_000));
                out.push(&self.lo + &w * rat(1, 1000));
                for k in 1..16 {
                    out.push(&self.lo + &w * rat(k, 16));
                }
                out.push(hi - &w * rat(1, 1000));
                out.push(hi - &w * rat(1, 1_000_000));
                if self.hi_closed {
                    out.push(hi.clone());
                }
            }
            None => {
                if self.lo_closed {
                    out.push(self.lo.clone());
                }
                out.push(&self.lo + rat(1, 1_000_000));
                out.push(&self.lo + rat(1, 1000));
                for k in 1..16 {
                    out.push(&self.lo + rat(k, 4));
                }
                for far in [10, 100, 1000, 100_000] {
                    out.push(&self.lo + int(far));
                }
            }
        }
        out
    }
}

impl fmt::Display for BoundRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.hi {
            Some(hi) if *hi == self.lo => write!(f, "{{{}}}", fmt_rational(hi)),
            Some(hi) => write!(
                f,
                "{}{}, {}{}",
                if self.lo_closed { "[" } else { "(" },
                fmt_rational(&self.lo),
                fmt_rational(hi),
                if self.hi_closed { "]" } else { ")" }
            ),
            None => write!(
                f,
                "{}{}, inf)",
                if self.lo_closed { "[" } else { "(" },
                fmt_rational(&self.lo)
            ),
        }
    }
}

/// Which clauses the box is read against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// One existence set with the theorem's standing hypotheses.
    WithHypotheses,
    /// One existence set with `p, q >= 1` and `pq > 1` only.
    SetOnly,
    /// The singular-data condition with `p, q >= 1`.
    SingularData,
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub id: String,
    /// The printed text of the box.
    pub text: String,
    pub p: Rational,
    pub q: Rational,
    pub n: u32,
    pub m: ExtRational,
    pub sigma: ExtRational,
    pub set: SetId,
    pub reading: Reading,
    pub bound: Option<(Var, BoundRange)>,
    pub free: Var,
    pub lo: End,
    pub lo_closed: bool,
    pub hi: End,
    pub hi_closed: bool,
}

/// A difference that the check tolerates, recorded for the report.
#[derive(Clone, Debug, PartialEq)]
pub enum Exception {
    /// The box is closed at an endpoint the printed inequality excludes.
    ClosureDiff { bound: Option<Rational>, at: Rational },
    /// The claimed interval is empty at this bound value.
    EmptyBox { bound: Option<Rational> },
    /// An `inf` against `inf` comparison inside the claimed interval.
    Indeterminate { bound: Option<Rational>, at: Rational },
}

#[derive(Clone, Debug)]
pub struct ClaimCheck {
    pub id: String,
    pub text: String,
    pub samples: usize,
    /// Bound values where the claimed interval leaves the exact region.
    pub violations: Vec<(Option<Rational>, String)>,
    pub exceptions: Vec<Exception>,
    /// The claimed lower (upper) endpoint equals the region endpoint at every
    /// non-empty sample.
    pub tight_lo: bool,
    pub tight_hi: bool,
    /// Every sample was empty.
    pub vacuous: bool,
}

impl ClaimCheck {
    pub fn contained(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn closure_diffs(&self) -> usize {
        self.exceptions
            .iter()
            .filter(|e| matches!(e, Exception::ClosureDiff { .. }))
            .count()
    }

    pub fn indeterminate(&self) -> usize {
        self.exceptions
            .iter()
            .filter(|e| matches!(e, Exception::Indeterminate { .. }))
            .count()
    }

    pub fn empty_samples(&self) -> usize {
        self.exceptions
            .iter()
            .filter(|e| matches!(e, Exception::EmptyBox { .. }))
            .count()
    }
}

impl fmt::Display for ClaimCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if !self.contained() {
            "VIOLATED"
        } else if self.vacuous {
            "vacuous"
        } else {
            "contained"
        };
        write!(
            f,
            "{:<14} {:<9} samples={:<3} tight=({},{}) closure_diffs={} empty={} indeterminate={}  {}",
            self.id,
            status,
            self.samples,
            self.tight_lo,
            self.tight_hi,
            self.closure_diffs(),
            self.empty_samples(),
            self.indeterminate(),
            self.text
        )?;
        for (b, why) in &self.violations {
            let at = b.as_ref().map(fmt_rational).unwrap_or_else(|| "-".into());
            write!(f, "\n    at {at}: {why}")?;
        }
        Ok(())
    }
}

fn cmp_bound_lo(b: &Bound, x: &Rational) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering::*;
    match b {
        Bound::Exact(r) => Some(r.cmp(x)),
        Bound::Irrational { lo, hi } => {
            if hi <= x {
                Some(Less)
            } else if lo >= x {
                Some(Greater)
            } else {
                None
            }
        }
        Bound::Infinity => Some(Greater),
    }
}

/// Does the interval contain `[lo, hi]` (closures as given)?
/// Returns `Some(closure_diff_points)` on containment of the open version.
fn contains_claim(
    i: &Interval,
    lo: &Rational,
    lo_closed: bool,
    hi: &ExtRational,
    hi_closed: bool,
) -> Option<Vec<Rational>> {
    use std::cmp::Ordering::*;
    let mut diffs = Vec::new();
    match cmp_bound_lo(&i.lo, lo)? {
        Greater => return None,
        Equal => {
            if lo_closed && !i.lo_closed {
                diffs.push(lo.clone());
            }
        }
        Less => {}
    }
    match (hi, &i.hi) {
        (ExtRational::Infinity, Bound::Infinity) => {}
        (ExtRational::Infinity, _) => return None,
        (ExtRational::Finite(_), Bound::Infinity) => {}
        (ExtRational::Finite(h), b) => match cmp_bound_lo(b, h)? {
            Less => return None,
            Equal => {
                if hi_closed && !i.hi_closed {
                    diffs.push(h.clone());
                }
            }
            Greater => {}
        },
    }
    Some(diffs)
}

/// Merge intervals that touch at an indeterminate point, recording it.
fn bridge_indeterminate(region: &Region) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for i in &region.intervals {
        if let Some(last) = out.last_mut() {
            if let (Bound::Exact(a), Bound::Exact(b)) = (&last.hi, &i.lo) {
                if a == b && region.indeterminate.contains(a) {
                    last.hi = i.hi.clone();
                    last.hi_closed = i.hi_closed;
                    continue;
                }
            }
        }
        out.push(i.clone());
    }
    out
}

fn bound_eq(b: &Bound, x: &ExtRational) -> bool {
    match (b, x) {
        (Bound::Exact(r), ExtRational::Finite(s)) => r == s,
        (Bound::Infinity, ExtRational::Infinity) => true,
        _ => false,
    }
}

impl Claim {
    fn profile(&self) -> ExponentProfile {
        ExponentProfile::reference(
            self.p.clone(),
            self.q.clone(),
            self.n,
            self.m.clone(),
            self.sigma.clone(),
        )
    }

    fn query_parts(&self, prof: &ExponentProfile) -> (Vec<ConditionSet>, Vec<Clause>) {
        match self.reading {
            Reading::WithHypotheses => (
                existence_sets(prof)
                    .into_iter()
                    .filter(|s| s.id == self.set)
                    .collect(),
                existence_hypotheses(prof),
            ),
            Reading::SetOnly => (
                existence_sets(prof)
                    .into_iter()
                    .filter(|s| s.id == self.set)
                    .collect(),
                base_clauses(),
            ),
            Reading::SingularData => (vec![singular_data_set(prof)], base_clauses()[..2].to_vec()),
        }
    }

    /// The exact region of the free exponent at one bound value.
    pub fn region_at(&self, bound: Option<&Rational>) -> Region {
        let prof = self.profile();
        let (sets, shared) = self.query_parts(&prof);
        let mut env: Env = prof.env();
        if let (Some((v, _)), Some(b)) = (&self.bound, bound) {
            env = env.with(*v, ExtRational::Finite(b.clone()));
        }
        solve(
            &Query {
                sets: &sets,
                shared: &shared,
            },
            self.free,
            &env,
            &Rational::one(),
        )
    }

    pub fn check(&self) -> ClaimCheck {
        let samples: Vec<Option<Rational>> = match &self.bound {
            Some((_, range)) => range.samples().into_iter().map(Some).collect(),
            None => vec![None],
        };
        let mut out = ClaimCheck {
            id: self.id.clone(),
            text: self.text.clone(),
            samples: samples.len(),
            violations: Vec::new(),
            exceptions: Vec::new(),
            tight_lo: true,
            tight_hi: true,
            vacuous: true,
        };
        let zero = Rational::zero();
        for b in samples {
            let at = b.as_ref().unwrap_or(&zero);
            let lo = match self.lo.eval(at) {
                ExtRational::Finite(r) => r,
                ExtRational::Infinity => unreachable!("lower endpoints are finite"),
            };
            let hi = self.hi.eval(at);
            let nonempty = match &hi {
                ExtRational::Infinity => true,
                ExtRational::Finite(h) => lo < *h || (lo == *h && self.lo_closed && self.hi_closed),
            };
            if !nonempty {
                out.exceptions.push(Exception::EmptyBox { bound: b.clone() });
                continue;
            }
            out.vacuous = false;
            let region = self.region_at(b.as_ref());
            let bridged = bridge_indeterminate(&region);
            let hit = bridged.iter().find_map(|i| {
                contains_claim(i, &lo, self.lo_closed, &hi, self.hi_closed).map(|d| (i, d))
            });
            match hit {
                Some((interval, diffs)) => {
                    for at in diffs {
                        out.exceptions.push(Exception::ClosureDiff {
                            bound: b.clone(),
                            at,
                        });
                    }
                    for x in &region.indeterminate {
                        let above = *x > lo || (*x == lo && self.lo_closed);
                        let below = match &hi {
                            ExtRational::Infinity => true,
                            ExtRational::Finite(h) => x < h || (x == h && self.hi_closed),
                        };
                        if above && below {
                            out.exceptions.push(Exception::Indeterminate {
                                bound: b.clone(),
                                at: x.clone(),
                            });
                        }
                    }
                    out.tight_lo &= bound_eq(&interval.lo, &ExtRational::Finite(lo.clone()));
                    out.tight_hi &= bound_eq(&interval.hi, &hi);
                }
                None => out.violations.push((
                    b.clone(),
                    format!(
                        "claimed {}{}, {}{} not inside {}",
                        if self.lo_closed { "[" } else { "(" },
                        fmt_rational(&lo),
                        hi,
                        if self.hi_closed { "]" } else { ")" },
                        region
                    ),
                )),
            }
        }
        if out.vacuous {
            out.tight_lo = false;
            out.tight_hi = false;
        }
        out
    }
}

struct Maker {
    prefix: &'static str,
    p: Rational,
    q: Rational,
    n: u32,
    m: ExtRational,
    sigma: ExtRational,
    set: SetId,
    reading: Reading,
    free: Var,
}

impl Maker {
    #[allow(clippy::too_many_arguments)]
    fn claim(
        &self,
        suffix: &str,
        text: &str,
        bound: Option<(Var, BoundRange)>,
        lo: End,
        lo_closed: bool,
        hi: End,
        hi_closed: bool,
    ) -> Claim {
        Claim {
            id: format!("{}{}", self.prefix, suffix),
            text: text.to_string(),
            p: self.p.clone(),
            q: self.q.clone(),
            n: self.n,
            m: self.m.clone(),
            sigma: self.sigma.clone(),
            set: self.set,
            reading: self.reading,
            bound,
            free: self.free,
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }
}

fn range(lo: Rational, lo_closed: bool, hi: Option<Rational>, hi_closed: bool) -> BoundRange {
    BoundRange {
        lo,
        lo_closed,
        hi,
        hi_closed,
    }
}

fn fin(n: i64, d: i64) -> ExtRational {
    ExtRational::Finite(rat(n, d))
}

fn r(v: &[i64]) -> Vec<i64> {
    v.to_vec()
}

/// Boxes of the worked examples after the existence theorem.
pub fn existence_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    let one = End::constant(1, 1);
    let base = |prefix, p, q, n, m, sigma, set, reading, free| Maker {
        prefix,
        p,
        q,
        n,
        m,
        sigma,
        set,
        reading,
        free,
    };

    // Admissible p for a given q at fixed data exponents.
    let mk = base("1(i)", int(1), int(1), 2, fin(2, 1), fin(2, 1), SetId::E42, Reading::WithHypotheses, Var::P);
    out.push(mk.claim(
        "",
        "m=sigma=N=2: q in [1,9/5), p in [1,20/(5q+11)), pq>1",
        Some((Var::Q, range(int(1), true, Some(rat(9, 5)), false))),
        one.clone(),
        true,
        End::Ratio(r(&[20]), r(&[11, 5])),
        false,
    ));
    let mk = base("1(ii)", int(1), int(1), 2, fin(3, 1), fin(2, 1), SetId::E42, Reading::WithHypotheses, Var::P);
    out.push(mk.claim(
        "",
        "m=3, sigma=N=2: q in [1,2), p in [1,60/(15q+13)), pq>1",
        Some((Var::Q, range(int(1), true, Some(int(2)), false))),
        one.clone(),
        true,
        End::Ratio(r(&[60]), r(&[13, 15])),
        false,
    ));
    // q lies beyond the standing hypothesis q < s1/(1-s1) = 3; read
    // against the set's own clauses.
    let mk = base("1(iii)", int(1), int(1), 3, fin(3, 1), fin(3, 1), SetId::E46, Reading::SetOnly, Var::P);
    out.push(mk.claim(
        "",
        "m=sigma=N=3: q in (3,18/5), p in [1,(q+20)/(5q))",
        Some((Var::Q, range(int(3), false, Some(rat(18, 5)), false))),
        one.clone(),
        true,
        End::Ratio(r(&[20, 1]), r(&[0, 5])),
        false,
    ));
    for n in [2u32, 3, 4] {
        let mk = base(
            "1(iv)",
            int(1),
            int(1),
            n,
            ExtRational::Infinity,
            ExtRational::Infinity,
            SetId::E47,
            Reading::WithHypotheses,
            Var::Q,
        );
        out.push(mk.claim(
            &format!(" N={n}"),
            "m=sigma=inf, N>=2: q in (1,3], p=1",
            None,
            one.clone(),
            false,
            End::constant(3, 1),
            true,
        ));
    }

    // Admissible m for a given sigma at fixed (p, q).
    let mk = base("2(i)", rat(3, 2), int(1), 2, fin(2, 1), fin(2, 1), SetId::E42, Reading::WithHypotheses, Var::M);
    out.push(mk.claim(
        "a",
        "p=3/2, q=1, N=2: sigma in (1,80/47], m in (30s/(3s+20), 80s/(80-27s))",
        Some((Var::Sigma, range(int(1), false, Some(rat(80, 47)), true))),
        End::Ratio(r(&[0, 30]), r(&[20, 3])),
        false,
        End::Ratio(r(&[0, 80]), r(&[80, -27])),
        false,
    ));
    out.push(mk.claim(
        "b",
        "p=3/2, q=1, N=2: sigma in (80/47,80/27), m in (30s/(3s+20), 4)",
        Some((Var::Sigma, range(rat(80, 47), false, Some(rat(80, 27)), false))),
        End::Ratio(r(&[0, 30]), r(&[20, 3])),
        false,
        End::constant(4, 1),
        false,
    ));
    let mk = base("2(ii)", int(2), rat(3, 2), 2, fin(2, 1), fin(2, 1), SetId::E42, Reading::WithHypotheses, Var::M);
    out.push(mk.claim(
        "a",
        "p=2, q=3/2, N=2: sigma in (20/9,5/2], m in (80s/(3s+40), 80s/(3(40-11s)))",
        Some((Var::Sigma, range(rat(20, 9), false, Some(rat(5, 2)), true))),
        End::Ratio(r(&[0, 80]), r(&[40, 3])),
        false,
        End::Ratio(r(&[0, 80]), r(&[120, -33])),
        false,
    ));
    out.push(mk.claim(
        "b",
        "p=2, q=3/2, N=2: sigma in (5/2,10/3), m in (80s/(3s+40), 16/3)",
        Some((Var::Sigma, range(rat(5, 2), false, Some(rat(10, 3)), false))),
        End::Ratio(r(&[0, 80]), r(&[40, 3])),
        false,
        End::constant(16, 3),
        false,
    ));
    let mk = base("2(iii)", int(1), rat(3, 2), 3, fin(2, 1), fin(2, 1), SetId::E42, Reading::WithHypotheses, Var::M);
    out.push(mk.claim(
        "a",
        "p=1, q=3/2, N=3: sigma in (12/9,20/7], m in (40s/(40-s), 10s/(15-4s))",
        Some((Var::Sigma, range(rat(12, 9), false, Some(rat(20, 7)), true))),
        End::Ratio(r(&[0, 40]), r(&[40, -1])),
        false,
        End::Ratio(r(&[0, 10]), r(&[15, -4])),
        false,
    ));
    out.push(mk.claim(
        "b",
        "p=1, q=3/2, N=3: sigma in (20/7,15/4), m in (40s/(40-s), 8)",
        Some((Var::Sigma, range(rat(20, 7), false, Some(rat(15, 4)), false))),
        End::Ratio(r(&[0, 40]), r(&[40, -1])),
        false,
        End::constant(8, 1),
        false,
    ));
    out
}

/// Boxes of the worked examples after the singular-data theorem (`N = 3`).
pub fn singular_data_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    let maker = |prefix, p: Rational, q: Rational| Maker {
        prefix,
        p,
        q,
        n: 3,
        m: fin(1, 1),
        sigma: fin(1, 1),
        set: SetId::N424,
        reading: Reading::SingularData,
        free: Var::M,
    };
    let s = |lo: Rational, lc: bool, hi: Option<Rational>, hc: bool| Some((Var::Sigma, range(lo, lc, hi, hc)));
    let six = || End::constant(6, 1);
    let one = || End::constant(1, 1);
    let inf = || End::Inf;
    // 6(s-1)/s, 15/(15-4s), 15/(2(15-4s)), 3(2s-1)/s
    let six_frac = || End::Ratio(r(&[-6, 6]), r(&[0, 1]));
    let q1_lo = || End::Ratio(r(&[15]), r(&[15, -4]));
    let q2_lo = || End::Ratio(r(&[15]), r(&[30, -8]));
    let p2_hi = || End::Ratio(r(&[-3, 6]), r(&[0, 1]));

    let mk = maker("i", int(1), int(1));
    out.push(mk.claim(".1", "p=q=1: sigma in [1,25/8], m in (6,inf)", s(int(1), true, Some(rat(25, 8)), true), six(), false, inf(), false));
    out.push(mk.claim(".2a", "p=q=1: sigma in (15/4,inf), m in [1,6(s-1)/s)", s(rat(15, 4), false, None, false), one(), true, six_frac(), false));
    out.push(mk.claim(".2b", "p=q=1: sigma in (15/4,inf), m in (6,inf)", s(rat(15, 4), false, None, false), six(), false, inf(), false));
    out.push(mk.claim(".3", "p=q=1: sigma in (25/8,15/4), m in (15/(15-4s),inf)", s(rat(25, 8), false, Some(rat(15, 4)), false), q1_lo(), false, inf(), false));
    out.push(mk.claim(".4", "p=q=1: sigma in (27/20,11/4], m in (15/(15-4s), 6(s-1)/s)", s(rat(27, 20), false, Some(rat(11, 4)), true), q1_lo(), false, six_frac(), false));

    let mk = maker("ii", int(1), int(2));
    out.push(mk.claim(".1a", "p=1,q=2: sigma in [1,55/16], m in (6,inf)", s(int(1), true, Some(rat(55, 16)), true), six(), false, inf(), false));
    out.push(mk.claim(".1b", "p=1,q=2: sigma in (15/4,inf), m in (6,inf)", s(rat(15, 4), false, None, false), six(), false, inf(), false));
    out.push(mk.claim(".2a", "p=1,q=2: sigma in (6/5,15/8), m in [1,6(s-1)/s)", s(rat(6, 5), false, Some(rat(15, 8)), false), one(), true, six_frac(), false));
    out.push(mk.claim(".2b", "p=1,q=2: sigma in (15/4,inf), m in [1,6(s-1)/s)", s(rat(15, 4), false, None, false), one(), true, six_frac(), false));
    out.push(mk.claim(".3", "p=1,q=2: sigma = 15/8, m in (1,14/5)", Some((Var::Sigma, BoundRange::point(rat(15, 8)))), one(), false, End::constant(14, 5), false));
    out.push(mk.claim(".4", "p=1,q=2: sigma in (55/16,15/4), m in (15/(2(15-4s)),inf)", s(rat(55, 16), false, Some(rat(15, 4)), false), q2_lo(), false, inf(), false));
    out.push(mk.claim(".5", "p=1,q=2: sigma in (15/8,33/10), m in (15/(2(15-4s)), 6(s-1)/s)", s(rat(15, 8), false, Some(rat(33, 10)), false), q2_lo(), false, six_frac(), false));

    let mk = maker("iii", int(2), int(1));
    out.push(mk.claim(".1", "p=2,q=1: sigma = 1, m in (15/11,3)", Some((Var::Sigma, BoundRange::point(int(1)))), End::constant(15, 11), false, End::constant(3, 1), false));
    out.push(mk.claim(".2a", "p=2,q=1: sigma in [1,25/8], m in (6,inf)", s(int(1), true, Some(rat(25, 8)), true), six(), false, inf(), false));
    out.push(mk.claim(".2b", "p=2,q=1: sigma in (15/4,inf), m in (6,inf)", s(rat(15, 4), false, None, false), six(), false, inf(), false));
    out.push(mk.claim(".3", "p=2,q=1: sigma in (25/8,15/4), m in [15/(15-4s),inf)", s(rat(25, 8), false, Some(rat(15, 4)), false), q1_lo(), true, inf(), false));
    out.push(mk.claim(".4", "p=2,q=1: sigma in (15/4,inf), m in [1,3(2s-1)/s)", s(rat(15, 4), false, None, false), one(), true, p2_hi(), false));
    out.push(mk.claim(".5", "p=2,q=1: sigma in (1,3), m in (15/(15-4s), 3(2s-1)/s)", s(int(1), false, Some(int(3)), false), q1_lo(), false, p2_hi(), false));

    let mk = maker("iv", int(2), int(2));
    out.push(mk.claim(".1", "p=q=2: sigma = 1, m in [1,3)", Some((Var::Sigma, BoundRange::point(int(1)))), one(), true, End::constant(3, 1), false));
    out.push(mk.claim(".2a", "p=q=2: sigma in [1,55/16], m in (6,inf)", s(int(1), true, Some(rat(55, 16)), true), six(), false, inf(), false));
    out.push(mk.claim(".2b", "p=q=2: sigma in (15/4,inf), m in (6,inf)", s(rat(15, 4), false, None, false), six(), false, inf(), false));
    out.push(mk.claim(".3a", "p=q=2: sigma in (1,15/8), m in [1,3(2s-1)/s)", s(int(1), false, Some(rat(15, 8)), false), one(), true, p2_hi(), false));
    out.push(mk.claim(".3b", "p=q=2: sigma in (15/4,inf), m in [1,3(2s-1)/s)", s(rat(15, 4), false, None, false), one(), true, p2_hi(), false));
    out.push(mk.claim(".4", "p=q=2: sigma = 15/8, m in (1,22/5)", Some((Var::Sigma, BoundRange::point(rat(15, 8)))), one(), false, End::constant(22, 5), false));
    out.push(mk.claim(".5", "p=q=2: sigma in (15/8,27/8], m in (3(2s-1)/s, 15/(2(15-4s)))", s(rat(15, 8), false, Some(rat(27, 8)), true), p2_hi(), false, q2_lo(), false));
    out.push(mk.claim(".6", "p=q=2: sigma in (55/16,15/4), m in (15/(2(15-4s)),inf)", s(rat(55, 16), false, Some(rat(15, 4)), false), q2_lo(), false, inf(), false));

    // "for all p, q >= 1": a spread of representative pairs.
    for (p, q) in [(int(1), int(1)), (int(1), int(2)), (int(2), int(1)), (int(2), int(2)), (rat(5, 2), rat(3, 2)), (int(7), int(4))] {
        let tag = format!(" p={},q={}", fmt_rational(&p), fmt_rational(&q));
        let mk = maker("v", p, q);
        out.push(mk.claim(&format!(".a{tag}"), "all p,q: sigma in [1,3], m in (6,inf)", s(int(1), true, Some(int(3)), true), six(), false, inf(), false));
        out.push(mk.claim(&format!(".b{tag}"), "all p,q: sigma in (15/4,inf), m in (6,inf)", s(rat(15, 4), false, None, false), six(), false, inf(), false));
    }
    for p in [int(1), int(2), int(5)] {
        let tag = format!(" p={}", fmt_rational(&p));
        let mk = maker("vi", p.clone(), int(1));
        out.push(mk.claim(&tag, "all p, q=1: sigma in (25/8,15/4), m in (15/(15-4s),inf)", s(rat(25, 8), false, Some(rat(15, 4)), false), q1_lo(), false, inf(), false));
        let mk = maker("vii", p, int(2));
        out.push(mk.claim(&tag, "all p, q=2: sigma in (55/16,15/4), m in (15/(2(15-4s)),inf)", s(rat(55, 16), false, Some(rat(15, 4)), false), q2_lo(), false, inf(), false));
    }
    out
}

pub fn all_claims() -> Vec<Claim> {
    let mut v = existence_claims();
    v.extend(singular_data_claims());
    v
}

