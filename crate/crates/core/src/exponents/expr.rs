//! Small expression language for the exponent formulas.
//!
//! Every clause of every condition set is an inequality between two
//! expressions over the profile variables. Expressions evaluate exactly at a
//! concrete profile (with `+inf` handled by limits) and can also be expanded
//! symbolically in one free variable to enumerate the points where a clause
//! may change truth value.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::{Poly, RatFn};
use super::rational::{fmt_rational, ExtRational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    P,
    Q,
    M,
    Sigma,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Q => "q",
            Var::M => "m",
            Var::Sigma => "sigma",
        }
    }

    pub fn parse(text: &str) -> Option<Var> {
        match text {
            "p" => Some(Var::P),
            "q" => Some(Var::Q),
            "m" => Some(Var::M),
            "sigma" | "σ" => Some(Var::Sigma),
            _ => None,
        }
    }
}

/// What a quotient means when its denominator is not positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonPositive {
    /// The `(.)_+` convention: the quotient is `+inf`.
    Infinite,
    /// The quotient is a threshold that no longer constrains anything; a
    /// clause comparing against it holds vacuously.
    Vacuous,
}

#[derive(Clone, Debug)]
pub enum Expr {
    Num(Rational),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    /// `(n0 + n1*a) / (d0 + d1*a)` where only `a` may be infinite; the
    /// coefficients are finite. Limits at `a = +inf` are taken exactly.
    Frac {
        a: Box<Expr>,
        n0: Box<Expr>,
        n1: Box<Expr>,
        d0: Box<Expr>,
        d1: Box<Expr>,
        nonpos: NonPositive,
    },
}

pub fn num(r: Rational) -> Expr {
    Expr::Num(r)
}

pub fn var(v: Var) -> Expr {
    Expr::Var(v)
}

pub fn add(a: Expr, b: Expr) -> Expr {
    Expr::Add(Box::new(a), Box::new(b))
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    Expr::Sub(Box::new(a), Box::new(b))
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}

pub fn min(a: Expr, b: Expr) -> Expr {
    Expr::Min(Box::new(a), Box::new(b))
}

pub fn max(a: Expr, b: Expr) -> Expr {
    Expr::Max(Box::new(a), Box::new(b))
}

pub fn frac(a: Expr, n0: Expr, n1: Expr, d0: Expr, d1: Expr, nonpos: NonPositive) -> Expr {
    Expr::Frac {
        a: Box::new(a),
        n0: Box::new(n0),
        n1: Box::new(n1),
        d0: Box::new(d0),
        d1: Box::new(d1),
        nonpos,
    }
}

/// `numer / denom` as a threshold: vacuous when `denom <= 0`.
pub fn threshold(numer: Expr, denom: Expr) -> Expr {
    let zero = || num(Rational::zero());
    frac(zero(), numer, zero(), denom, zero(), NonPositive::Vacuous)
}

/// Value of an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Val {
    Fin(Rational),
    Inf,
    /// A threshold with non-positive denominator.
    Vacuous,
    /// An undefined limit such as `inf - inf`.
    Undefined,
}

impl Val {
    fn from_ext(e: &ExtRational) -> Val {
        match e {
            ExtRational::Finite(r) => Val::Fin(r.clone()),
            ExtRational::Infinity => Val::Inf,
        }
    }

    pub fn as_ext(&self) -> Option<ExtRational> {
        match self {
            Val::Fin(r) => Some(ExtRational::Finite(r.clone())),
            Val::Inf => Some(ExtRational::Infinity),
            _ => None,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(r) => f.write_str(&fmt_rational(r)),
            Val::Inf => f.write_str("inf"),
            Val::Vacuous => f.write_str("vacuous"),
            Val::Undefined => f.write_str("undefined"),
        }
    }
}

/// Concrete values for the four profile variables.
#[derive(Clone, Debug)]
pub struct Env {
    pub p: ExtRational,
    pub q: ExtRational,
    pub m: ExtRational,
    pub sigma: ExtRational,
}

impl Env {
    pub fn get(&self, v: Var) -> &ExtRational {
        match v {
            Var::P => &self.p,
            Var::Q => &self.q,
            Var::M => &self.m,
            Var::Sigma => &self.sigma,
        }
    }

    pub fn with(&self, v: Var, value: ExtRational) -> Env {
        let mut e = self.clone();
        match v {
            Var::P => e.p = value,
            Var::Q => e.q = value,
            Var::M => e.m = value,
            Var::Sigma => e.sigma = value,
        }
        e
    }
}

impl Expr {
    pub fn eval(&self, env: &Env) -> Val {
        match self {
            Expr::Num(r) => Val::Fin(r.clone()),
            Expr::Var(v) => Val::from_ext(env.get(*v)),
            Expr::Add(a, b) => match (a.eval(env), b.eval(env)) {
                (Val::Fin(x), Val::Fin(y)) => Val::Fin(x + y),
                (Val::Inf, Val::Fin(_)) | (Val::Fin(_), Val::Inf) | (Val::Inf, Val::Inf) => Val::Inf,
                _ => Val::Undefined,
            },
            Expr::Sub(a, b) => match (a.eval(env), b.eval(env)) {
                (Val::Fin(x), Val::Fin(y)) => Val::Fin(x - y),
                (Val::Inf, Val::Fin(_)) => Val::Inf,
                _ => Val::Undefined,
            },
            Expr::Mul(a, b) => match (a.eval(env), b.eval(env)) {
                (Val::Fin(x), Val::Fin(y)) => Val::Fin(x * y),
                (Val::Fin(x), Val::Inf) | (Val::Inf, Val::Fin(x)) => {
                    if x.is_positive() {
                        Val::Inf
                    } else if x.is_zero() {
                        Val::Fin(x)
                    } else {
                        Val::Undefined
                    }
                }
                (Val::Inf, Val::Inf) => Val::Inf,
                _ => Val::Undefined,
            },
            Expr::Min(a, b) => match (a.eval(env), b.eval(env)) {
                (Val::Fin(x), Val::Fin(y)) => Val::Fin(if x <= y { x } else { y }),
                (Val::Fin(x), Val::Inf) | (Val::Inf, Val::Fin(x)) => Val::Fin(x),
                (Val::Inf, Val::Inf) => Val::Inf,
                _ => Val::Undefined,
            },
            Expr::Max(a, b) => match (a.eval(env), b.eval(env)) {
                (Val::Fin(x), Val::Fin(y)) => Val::Fin(if x >= y { x } else { y }),
                (Val::Fin(_), Val::Inf) | (Val::Inf, Val::Fin(_)) | (Val::Inf, Val::Inf) => Val::Inf,
                _ => Val::Undefined,
            },
            Expr::Frac {
                a,
                n0,
                n1,
                d0,
                d1,
                nonpos,
            } => {
                let coeffs = [n0, n1, d0, d1].map(|e| e.eval(env));
                let [Val::Fin(n0), Val::Fin(n1), Val::Fin(d0), Val::Fin(d1)] = coeffs else {
                    return Val::Undefined;
                };
                let fallback = || match nonpos {
                    NonPositive::Infinite => Val::Inf,
                    NonPositive::Vacuous => Val::Vacuous,
                };
                match a.eval(env) {
                    Val::Fin(a) => {
                        let den = &d0 + &d1 * &a;
                        if !den.is_positive() {
                            fallback()
                        } else {
                            Val::Fin((&n0 + &n1 * &a) / den)
                        }
                    }
                    Val::Inf => {
                        if d1.is_positive() {
                            Val::Fin(n1 / d1)
                        } else if d1.is_negative() || !d0.is_positive() {
                            fallback()
                        } else if n1.is_positive() {
                            Val::Inf
                        } else if n1.is_zero() {
                            Val::Fin(n0 / d0)
                        } else {
                            Val::Undefined
                        }
                    }
                    Val::Vacuous | Val::Undefined => Val::Undefined,
                }
            }
        }
    }

    /// Expand in the free variable `free`, every other variable fixed by
    /// `env`. Returns every value the expression can take on some branch
    /// together with the polynomials whose sign changes select the branch.
    pub fn expand(&self, free: Var, env: &Env) -> Expansion {
        match self {
            Expr::Num(r) => Expansion::value(SymVal::Fn(RatFn::constant(r.clone()))),
            Expr::Var(v) if *v == free => Expansion::value(SymVal::Fn(RatFn::x())),
            Expr::Var(v) => Expansion::value(match env.get(*v) {
                ExtRational::Finite(r) => SymVal::Fn(RatFn::constant(r.clone())),
                ExtRational::Infinity => SymVal::Inf,
            }),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Min(a, b)
            | Expr::Max(a, b) => {
                let (ea, eb) = (a.expand(free, env), b.expand(free, env));
                let mut out = Expansion::merge_crit(&ea, &eb);
                for x in &ea.values {
                    for y in &eb.values {
                        let v = match (self, x, y) {
                            (Expr::Add(..), SymVal::Fn(f), SymVal::Fn(g)) => SymVal::Fn(f.add(g)),
                            (Expr::Sub(..), SymVal::Fn(f), SymVal::Fn(g)) => SymVal::Fn(f.sub(g)),
                            (Expr::Mul(..), SymVal::Fn(f), SymVal::Fn(g)) => SymVal::Fn(f.mul(g)),
                            (Expr::Min(..) | Expr::Max(..), SymVal::Fn(f), SymVal::Fn(g)) => {
                                out.crit_of_difference(f, g);
                                out.values.push(SymVal::Fn(f.clone()));
                                SymVal::Fn(g.clone())
                            }
                            (Expr::Mul(..), SymVal::Fn(f), SymVal::Inf)
                            | (Expr::Mul(..), SymVal::Inf, SymVal::Fn(f)) => {
                                out.crit_of(f);
                                out.values.push(SymVal::Fn(RatFn::constant(Rational::zero())));
                                SymVal::Inf
                            }
                            (Expr::Min(..), SymVal::Fn(f), SymVal::Inf)
                            | (Expr::Min(..), SymVal::Inf, SymVal::Fn(f)) => SymVal::Fn(f.clone()),
                            (_, SymVal::Inf, _) | (_, _, SymVal::Inf) => SymVal::Inf,
                            _ => SymVal::Other,
                        };
                        out.values.push(v);
                    }
                }
                out
            }
            Expr::Frac {
                a,
                n0,
                n1,
                d0,
                d1,
                nonpos,
            } => {
                let parts = [a, n0, n1, d0, d1].map(|e| e.expand(free, env));
                let mut out = Expansion::default();
                for p in &parts {
                    out.crit.extend(p.crit.iter().cloned());
                }
                out.values.push(match nonpos {
                    NonPositive::Infinite => SymVal::Inf,
                    NonPositive::Vacuous => SymVal::Other,
                });
                let fns = |i: usize| -> Vec<RatFn> {
                    parts[i]
                        .values
                        .iter()
                        .filter_map(|v| match v {
                            SymVal::Fn(f) => Some(f.clone()),
                            _ => None,
                        })
                        .collect()
                };
                let (fn0, fn1, fd0, fd1) = (fns(1), fns(2), fns(3), fns(4));
                for av in &parts[0].values {
                    match av {
                        SymVal::Fn(af) => {
                            for d0 in &fd0 {
                                for d1 in &fd1 {
                                    let den = d0.add(&d1.mul(af));
                                    out.crit_of(&den);
                                    for n0 in &fn0 {
                                        for n1 in &fn1 {
                                            let numer = n0.add(&n1.mul(af));
                                            if let Some(q) = numer.div(&den) {
                                                out.values.push(SymVal::Fn(q));
                                            }
                                        }
                                    }
                                }
                            }
                        }
                        SymVal::Inf => {
                            out.values.push(SymVal::Inf);
                            for f in fd0.iter().chain(&fd1).chain(&fn1) {
                                out.crit_of(f);
                            }
                            for n1 in &fn1 {
                                for d1 in &fd1 {
                                    if let Some(q) = n1.div(d1) {
                                        out.values.push(SymVal::Fn(q));
                                    }
                                }
                            }
                            for n0 in &fn0 {
                                for d0 in &fd0 {
                                    if let Some(q) = n0.div(d0) {
                                        out.values.push(SymVal::Fn(q));
                                    }
                                }
                            }
                        }
                        SymVal::Other => {}
                    }
                }
                out
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum SymVal {
    Fn(RatFn),
    Inf,
    /// Vacuous or undefined: constant on every branch, contributes no roots.
    Other,
}

#[derive(Clone, Debug, Default)]
pub struct Expansion {
    pub values: Vec<SymVal>,
    pub crit: Vec<Poly>,
}

impl Expansion {
    fn value(v: SymVal) -> Expansion {
        Expansion {
            values: vec![v],
            crit: Vec::new(),
        }
    }

    fn merge_crit(a: &Expansion, b: &Expansion) -> Expansion {
        Expansion {
            values: Vec::new(),
            crit: a.crit.iter().chain(&b.crit).cloned().collect(),
        }
    }

    fn crit_of(&mut self, f: &RatFn) {
        if f.num.degree().unwrap_or(0) > 0 {
            self.crit.push(f.num.clone());
        }
        if f.den.degree().unwrap_or(0) > 0 {
            self.crit.push(f.den.clone());
        }
    }

    pub fn crit_of_difference(&mut self, f: &RatFn, g: &RatFn) {
        let d = f.sub(g);
        self.crit_of(&d);
    }
}

/// Helper used by the condition-set builders: `1 - x`.
pub fn one_minus(x: &Rational) -> Rational {
    Rational::one() - x
}
