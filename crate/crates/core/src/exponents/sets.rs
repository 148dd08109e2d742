//! Exponent profiles, derived exponents and the condition sets of the
//! existence and nonexistence theorems, evaluated clause by clause.

use std::fmt;

use num_traits::{One, Zero};

use super::expr::{
    frac, max, min, mul, num, one_minus, sub, threshold, var, Env, Expr, NonPositive, Val,
    Var,
};
use super::rational::{int, rat, ExtRational, Rational};
use super::ExponentError;

/// `(s1, s2, p, q, N, m, sigma)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentProfile {
    pub s1: Rational,
    pub s2: Rational,
    pub p: Rational,
    pub q: Rational,
    pub n: u32,
    pub m: ExtRational,
    pub sigma: ExtRational,
}

impl ExponentProfile {
    pub fn new(
        s1: Rational,
        s2: Rational,
        p: Rational,
        q: Rational,
        n: u32,
        m: ExtRational,
        sigma: ExtRational,
    ) -> Result<Self, ExponentError> {
        let half = rat(1, 2);
        let one = Rational::one();
        let bad = |what: &str| Err(ExponentError::Profile(what.to_string()));
        if !(s1 > half && s1 < one) {
            return bad("s1 must lie in (1/2, 1)");
        }
        if !(s2 > half && s2 <= one) {
            return bad("s2 must lie in (1/2, 1]");
        }
        if p < one || q < one {
            return bad("p and q must be at least 1");
        }
        if n < 2 {
            return bad("N must be at least 2");
        }
        let one_ext = ExtRational::Finite(one);
        if m < one_ext || sigma < one_ext {
            return bad("m and sigma must be at least 1");
        }
        Ok(ExponentProfile {
            s1,
            s2,
            p,
            q,
            n,
            m,
            sigma,
        })
    }

    /// The profile used throughout the worked examples: `s1 = 3/4`,
    /// `s2 = 9/10`.
    pub fn reference(p: Rational, q: Rational, n: u32, m: ExtRational, sigma: ExtRational) -> Self {
        ExponentProfile::new(rat(3, 4), rat(9, 10), p, q, n, m, sigma)
            .expect("reference profile is valid")
    }

    pub fn env(&self) -> Env {
        Env {
            p: ExtRational::Finite(self.p.clone()),
            q: ExtRational::Finite(self.q.clone()),
            m: self.m.clone(),
            sigma: self.sigma.clone(),
        }
    }

    /// Numerical modules need `s2 < 1`; `s2 = 1` is only meaningful for the gate.
    pub fn require_fractional(&self) -> Result<(), ExponentError> {
        if self.s2 >= Rational::one() {
            return Err(ExponentError::Profile(
                "s2 = 1 is accepted by the gate only".into(),
            ));
        }
        Ok(())
    }

    fn n_rat(&self) -> Rational {
        int(self.n as i64)
    }
}

impl fmt::Display for ExponentProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::rational::fmt_rational as r;
        write!(
            f,
            "s1={} s2={} p={} q={} N={} m={} sigma={}",
            r(&self.s1),
            r(&self.s2),
            r(&self.p),
            r(&self.q),
            self.n,
            self.m,
            self.sigma
        )
    }
}

/// Formula builders. `kappa` is an expression for `p` or `q`.
struct Formulas<'a> {
    prof: &'a ExponentProfile,
}

impl Formulas<'_> {
    fn n(&self) -> Expr {
        num(self.prof.n_rat())
    }

    /// `c_k = (k + 1)/(k + 2)`.
    fn c(&self, kappa: Expr) -> Expr {
        let one = || num(Rational::one());
        frac(kappa, one(), one(), num(int(2)), one(), NonPositive::Vacuous)
    }

    /// `k_hat_{i,s} = i*s - k(1 - s)`.
    fn hat_i(&self, i: i64, s: &Rational, kappa: Expr) -> Expr {
        sub(num(int(i) * s), mul(kappa, num(one_minus(s))))
    }

    /// `k_hat_{s1,s2} = 2 s2 - s1 - k(1 - s1)`.
    fn hat_s1s2(&self, kappa: Expr) -> Expr {
        let c = int(2) * &self.prof.s2 - &self.prof.s1;
        sub(num(c), mul(kappa, num(one_minus(&self.prof.s1))))
    }

    /// `a N / (N - a y)_+`.
    fn plus_ratio(&self, a: Expr, y: Expr) -> Expr {
        frac(
            a,
            num(Rational::zero()),
            self.n(),
            self.n(),
            sub(num(Rational::zero()), y),
            NonPositive::Infinite,
        )
    }

    /// `a N / (N + a y)` as a threshold (vacuous when the denominator is not positive).
    fn sign_ratio(&self, a: Expr, y: Expr) -> Expr {
        frac(
            a,
            num(Rational::zero()),
            self.n(),
            self.n(),
            y,
            NonPositive::Vacuous,
        )
    }

    /// `m_hat_{s1,k}`; the `k = 1` branch of the definition coincides with
    /// `k_hat_{1,s1}` at `k = 1`.
    fn m_hat(&self, kappa: Expr) -> Expr {
        self.plus_ratio(var(Var::M), self.hat_i(1, &self.prof.s1, kappa))
    }

    /// `m_bar_{s1,s2,k} = m_hat / (1 + m_hat (s2 - s1))`.
    fn m_bar(&self, kappa: Expr) -> Expr {
        let d = &self.prof.s2 - &self.prof.s1;
        frac(
            self.m_hat(kappa),
            num(Rational::zero()),
            num(Rational::one()),
            num(Rational::one()),
            num(d),
            NonPositive::Infinite,
        )
    }

    /// `sigma_hat_{s2} = sigma N / (N - sigma (2 s2 - 1))_+`.
    fn sigma_hat_s2(&self) -> Expr {
        let y = int(2) * &self.prof.s2 - Rational::one();
        self.plus_ratio(var(Var::Sigma), num(y))
    }

    /// `sigma_hat_{s1,s2,k} = sigma N / (N - sigma k_hat_{s1,s2})_+`.
    fn sigma_hat_s1s2(&self, kappa: Expr) -> Expr {
        self.plus_ratio(var(Var::Sigma), self.hat_s1s2(kappa))
    }

    /// `1/(s2 - s1)`, read as `+inf` when the orders coincide.
    fn inv_gap(&self) -> Expr {
        let zero = || num(Rational::zero());
        frac(
            zero(),
            num(Rational::one()),
            zero(),
            num(&self.prof.s2 - &self.prof.s1),
            zero(),
            NonPositive::Infinite,
        )
    }

    /// `numer / denom` as a threshold.
    fn over(&self, numer: Expr, denom: Expr) -> Expr {
        threshold(numer, denom)
    }
}

/// Every derived exponent of the notation list, exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedExponents {
    pub c_p: Rational,
    pub c_q: Rational,
    pub q_hat_1_s1: Rational,
    pub q_hat_2_s1: Rational,
    pub p_hat_2_s2: Rational,
    pub p_hat_s1s2: Rational,
    pub q_hat_s1s2: Rational,
    pub m_hat_s1_q: ExtRational,
    pub m_bar_s1s2_q: ExtRational,
    pub sigma_hat_s2: ExtRational,
    pub sigma_hat_s1s2_p: ExtRational,
}

pub fn derive(profile: &ExponentProfile) -> DerivedExponents {
    let f = Formulas { prof: profile };
    let env = profile.env();
    let fin = |e: Expr| match e.eval(&env) {
        Val::Fin(r) => r,
        other => unreachable!("finite formula evaluated to {other}"),
    };
    let ext = |e: Expr| {
        e.eval(&env)
            .as_ext()
            .expect("derived exponents are finite or +inf")
    };
    let (p, q) = (|| var(Var::P), || var(Var::Q));
    DerivedExponents {
        c_p: fin(f.c(p())),
        c_q: fin(f.c(q())),
        q_hat_1_s1: fin(f.hat_i(1, &profile.s1, q())),
        q_hat_2_s1: fin(f.hat_i(2, &profile.s1, q())),
        p_hat_2_s2: fin(f.hat_i(2, &profile.s2, p())),
        p_hat_s1s2: fin(f.hat_s1s2(p())),
        q_hat_s1s2: fin(f.hat_s1s2(q())),
        m_hat_s1_q: ext(f.m_hat(q())),
        m_bar_s1s2_q: ext(f.m_bar(q())),
        sigma_hat_s2: ext(f.sigma_hat_s2()),
        sigma_hat_s1s2_p: ext(f.sigma_hat_s1s2(p())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    fn strict(self) -> bool {
        matches!(self, Rel::Lt | Rel::Gt)
    }

    fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            Rel::Lt => ord == Less,
            Rel::Le => ord != Greater,
            Rel::Gt => ord == Greater,
            Rel::Ge => ord != Less,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Fail,
    /// `inf` compared strictly against `inf`, or an undefined limit: left for
    /// manual review rather than guessed.
    Indeterminate,
    Pass,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Indeterminate => "indeterminate",
        }
    }

    pub fn all(items: impl IntoIterator<Item = Outcome>) -> Outcome {
        items.into_iter().min().unwrap_or(Outcome::Pass)
    }

    pub fn any(items: impl IntoIterator<Item = Outcome>) -> Outcome {
        items.into_iter().max().unwrap_or(Outcome::Fail)
    }
}

/// Which evaluation branch decided a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Direct,
    /// A threshold had a non-positive denominator.
    VacuousThreshold,
    /// Both sides were `+inf`.
    InfiniteLimit,
    Undefined,
}

#[derive(Clone, Debug)]
pub struct Clause {
    pub id: String,
    pub text: String,
    pub lhs: Expr,
    pub rel: Rel,
    pub rhs: Expr,
}

#[derive(Clone, Debug)]
pub struct ClauseVerdict {
    pub id: String,
    pub text: String,
    pub lhs: Val,
    pub rel: Rel,
    pub rhs: Val,
    pub outcome: Outcome,
    pub branch: Branch,
}

impl Clause {
    fn new(id: String, text: &str, lhs: Expr, rel: Rel, rhs: Expr) -> Clause {
        Clause {
            id,
            text: text.to_string(),
            lhs,
            rel,
            rhs,
        }
    }

    pub fn evaluate(&self, env: &Env) -> ClauseVerdict {
        let (l, r) = (self.lhs.eval(env), self.rhs.eval(env));
        let (outcome, branch) = compare(&l, self.rel, &r);
        ClauseVerdict {
            id: self.id.clone(),
            text: self.text.clone(),
            lhs: l,
            rel: self.rel,
            rhs: r,
            outcome,
            branch,
        }
    }
}

fn compare(l: &Val, rel: Rel, r: &Val) -> (Outcome, Branch) {
    match (l, r) {
        (Val::Vacuous, _) | (_, Val::Vacuous) => (Outcome::Pass, Branch::VacuousThreshold),
        (Val::Undefined, _) | (_, Val::Undefined) => (Outcome::Indeterminate, Branch::Undefined),
        (Val::Inf, Val::Inf) => {
            if rel.strict() {
                (Outcome::Indeterminate, Branch::InfiniteLimit)
            } else {
                (Outcome::Pass, Branch::InfiniteLimit)
            }
        }
        _ => {
            let (a, b) = (l.as_ext().unwrap(), r.as_ext().unwrap());
            let ok = rel.holds(a.cmp(&b));
            (
                if ok { Outcome::Pass } else { Outcome::Fail },
                Branch::Direct,
            )
        }
    }
}

/// Identifier of a condition set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SetId {
    E42,
    E43,
    E44,
    E45,
    E46,
    E47,
    Pq1First,
    Pq1Second,
    Pq1Third,
    Pq1Fourth,
    Pq1Fifth,
    Thm45A,
    Thm45B,
    N424,
}

impl SetId {
    pub fn label(self) -> &'static str {
        match self {
            SetId::E42 => "4.2",
            SetId::E43 => "4.3",
            SetId::E44 => "4.4",
            SetId::E45 => "4.5",
            SetId::E46 => "4.6",
            SetId::E47 => "4.7",
            SetId::Pq1First => "pq1-first",
            SetId::Pq1Second => "pq1-second",
            SetId::Pq1Third => "pq1-third",
            SetId::Pq1Fourth => "pq1-fourth",
            SetId::Pq1Fifth => "pq1-fifth",
            SetId::Thm45A => "nonexist-thm45-a",
            SetId::Thm45B => "nonexist-thm45-b",
            SetId::N424 => "nonexist-4.24",
        }
    }

    pub fn parse(text: &str) -> Option<SetId> {
        SetId::ALL.into_iter().find(|s| s.label() == text)
    }

    pub const ALL: [SetId; 14] = [
        SetId::E42,
        SetId::E43,
        SetId::E44,
        SetId::E45,
        SetId::E46,
        SetId::E47,
        SetId::Pq1First,
        SetId::Pq1Second,
        SetId::Pq1Third,
        SetId::Pq1Fourth,
        SetId::Pq1Fifth,
        SetId::Thm45A,
        SetId::Thm45B,
        SetId::N424,
    ];
}

#[derive(Clone, Debug)]
pub struct ConditionSet {
    pub id: SetId,
    pub clauses: Vec<Clause>,
}

struct SetBuilder {
    id: SetId,
    clauses: Vec<Clause>,
}

impl SetBuilder {
    fn new(id: SetId) -> Self {
        SetBuilder {
            id,
            clauses: Vec::new(),
        }
    }

    fn push(&mut self, text: &str, lhs: Expr, rel: Rel, rhs: Expr) -> &mut Self {
        let id = format!("{}.{}", self.id.label(), self.clauses.len() + 1);
        self.clauses.push(Clause::new(id, text, lhs, rel, rhs));
        self
    }

    fn build(self) -> ConditionSet {
        ConditionSet {
            id: self.id,
            clauses: self.clauses,
        }
    }
}

fn c(r: Rational) -> Expr {
    num(r)
}

/// Standing hypotheses of the existence theorem for `p, q >= 1`, `pq > 1`.
pub fn existence_hypotheses(prof: &ExponentProfile) -> Vec<Clause> {
    let s1 = &prof.s1;
    let lim_q = s1 / one_minus(s1);
    let lim_p = &prof.s2 / one_minus(s1);
    let one = || c(Rational::one());
    vec![
        Clause::new("hyp.1".into(), "1 <= q", one(), Rel::Le, var(Var::Q)),
        Clause::new("hyp.2".into(), "q < s1/(1-s1)", var(Var::Q), Rel::Lt, c(lim_q)),
        Clause::new("hyp.3".into(), "1 <= p", one(), Rel::Le, var(Var::P)),
        Clause::new("hyp.4".into(), "p < s2/(1-s1)", var(Var::P), Rel::Lt, c(lim_p)),
        Clause::new("hyp.5".into(), "pq > 1", mul(var(Var::P), var(Var::Q)), Rel::Gt, one()),
    ]
}

/// Base clauses every set is read together with: `p, q >= 1` and `pq > 1`.
pub fn base_clauses() -> Vec<Clause> {
    let one = || c(Rational::one());
    vec![
        Clause::new("base.1".into(), "1 <= q", one(), Rel::Le, var(Var::Q)),
        Clause::new("base.2".into(), "1 <= p", one(), Rel::Le, var(Var::P)),
        Clause::new("base.3".into(), "pq > 1", mul(var(Var::P), var(Var::Q)), Rel::Gt, one()),
    ]
}

/// The six sets of the existence theorem for `pq > 1`.
pub fn existence_sets(prof: &ExponentProfile) -> Vec<ConditionSet> {
    let f = Formulas { prof };
    let (s1, s2) = (&prof.s1, &prof.s2);
    let (p, q, m, sg) = (
        || var(Var::P),
        || var(Var::Q),
        || var(Var::M),
        || var(Var::Sigma),
    );
    let one = || c(Rational::one());
    let half = || c(rat(1, 2));
    let cs1 = || c(s1.clone());
    let cs2 = || c(s2.clone());
    let n = || f.n();
    let upper_m = || f.over(n(), f.hat_i(1, s1, q()));
    let upper_sigma = || f.over(n(), f.hat_s1s2(p()));
    let lower_m = || f.over(one(), f.hat_i(2, s1, q()));
    let lower_sigma = || f.over(one(), f.hat_i(2, s2, p()));
    let coupling = |b: &mut SetBuilder| {
        b.push("p sigma < m_bar_{s1,s2,q}", mul(p(), sg()), Rel::Lt, f.m_bar(q()));
        b.push("q m < sigma_hat_{s1,s2,p}", mul(q(), m()), Rel::Lt, f.sigma_hat_s1s2(p()));
    };

    let mut e42 = SetBuilder::new(SetId::E42);
    e42.push("c_q < s1", f.c(q()), Rel::Lt, cs1())
        .push("s1 < 1", cs1(), Rel::Lt, one())
        .push("c_p < s2", f.c(p()), Rel::Lt, cs2())
        .push("s2 < 1", cs2(), Rel::Lt, one())
        .push("1 < m", one(), Rel::Lt, m())
        .push("m < N/q_hat_{1,s1}", m(), Rel::Lt, upper_m())
        .push("1 < sigma", one(), Rel::Lt, sg())
        .push("sigma < N/p_hat_{s1,s2}", sg(), Rel::Lt, upper_sigma());
    coupling(&mut e42);

    let mut e43 = SetBuilder::new(SetId::E43);
    e43.push("1/2 < s1", half(), Rel::Lt, cs1())
        .push("s1 < c_q", cs1(), Rel::Lt, f.c(q()))
        .push("1/2 < s2", half(), Rel::Lt, cs2())
        .push("s2 < c_p", cs2(), Rel::Lt, f.c(p()))
        .push("1/q_hat_{2,s1} < m", lower_m(), Rel::Lt, m())
        .push("m < N/q_hat_{1,s1}", m(), Rel::Lt, upper_m())
        .push("1/p_hat_{2,s2} < sigma", lower_sigma(), Rel::Lt, sg())
        .push("sigma < N/p_hat_{s1,s2}", sg(), Rel::Lt, upper_sigma());
    coupling(&mut e43);

    let mut e44 = SetBuilder::new(SetId::E44);
    e44.push("c_q < s1", f.c(q()), Rel::Lt, cs1())
        .push("s1 < 1", cs1(), Rel::Lt, one())
        .push("1/2 < s2", half(), Rel::Lt, cs2())
        .push("s2 < c_p", cs2(), Rel::Lt, f.c(p()))
        .push("q < p", q(), Rel::Lt, p())
        .push("1 < m", one(), Rel::Lt, m())
        .push("m < N/q_hat_{1,s1}", m(), Rel::Lt, upper_m())
        .push("1/p_hat_{2,s2} < sigma", lower_sigma(), Rel::Lt, sg())
        .push("sigma < N/p_hat_{s1,s2}", sg(), Rel::Lt, upper_sigma());
    coupling(&mut e44);

    let mut e45 = SetBuilder::new(SetId::E45);
    e45.push("1/2 < s1", half(), Rel::Lt, cs1())
        .push("s1 < c_q", cs1(), Rel::Lt, f.c(q()))
        .push("c_p < s2", f.c(p()), Rel::Lt, cs2())
        .push("s2 < 1", cs2(), Rel::Lt, one())
        .push("1/q_hat_{2,s1} < m", lower_m(), Rel::Lt, m())
        .push("m < N/q_hat_{1,s1}", m(), Rel::Lt, upper_m())
        .push("1 < sigma", one(), Rel::Lt, sg())
        .push("sigma < N/p_hat_{s1,s2}", sg(), Rel::Lt, upper_sigma());
    coupling(&mut e45);

    let mut e46 = SetBuilder::new(SetId::E46);
    e46.push("m >= N/q_hat_{1,s1}", m(), Rel::Ge, upper_m())
        .push(
            "sigma > q m N/(N + q m p_hat_{s1,s2})",
            sg(),
            Rel::Gt,
            f.sign_ratio(mul(q(), m()), f.hat_s1s2(p())),
        )
        .push("p sigma < 1/(s2 - s1)", mul(p(), sg()), Rel::Lt, f.inv_gap());

    let x = sub(f.hat_i(1, s1, q()), c(prof.n_rat() * (s2 - s1)));
    let mut e47 = SetBuilder::new(SetId::E47);
    e47.push("sigma >= N/p_hat_{s1,s2}", sg(), Rel::Ge, upper_sigma())
        .push(
            "m > p sigma N/(N + p sigma (q_hat_{1,s1} - N(s2 - s1)))",
            m(),
            Rel::Gt,
            f.sign_ratio(mul(p(), sg()), x),
        );

    vec![
        e42.build(),
        e43.build(),
        e44.build(),
        e45.build(),
        e46.build(),
        e47.build(),
    ]
}

/// The five sets of the `p = q = 1` theorem.
pub fn pq1_sets(prof: &ExponentProfile) -> Vec<ConditionSet> {
    let f = Formulas { prof };
    let (s1, s2) = (&prof.s1, &prof.s2);
    let (m, sg) = (|| var(Var::M), || var(Var::Sigma));
    let one = || c(Rational::one());
    let half = || c(rat(1, 2));
    let two_thirds = || c(rat(2, 3));
    let cs1 = || c(s1.clone());
    let cs2 = || c(s2.clone());
    let n = || f.n();
    let two_s1_m1 = int(2) * s1 - Rational::one();
    let two_s2_m1 = int(2) * s2 - Rational::one();
    let m_upper = || {
        min(
            f.over(n(), c(two_s1_m1.clone())),
            f.sigma_hat_s2(),
        )
    };
    let sigma_upper = || min(f.over(n(), c(two_s2_m1.clone())), f.m_bar(one()));
    let m_lower = || f.over(one(), c(int(3) * s1 - Rational::one()));
    let sigma_lower = || f.over(one(), c(int(3) * s2 - Rational::one()));

    let mut first = SetBuilder::new(SetId::Pq1First);
    first
        .push("2/3 < s1", two_thirds(), Rel::Lt, cs1())
        .push("s1 < 1", cs1(), Rel::Lt, one())
        .push("2/3 < s2", two_thirds(), Rel::Lt, cs2())
        .push("s2 < 1", cs2(), Rel::Lt, one())
        .push("1 < m", one(), Rel::Lt, m())
        .push("m < min{N/(2s1-1), sigma_hat_{s2}}", m(), Rel::Lt, m_upper())
        .push("1 < sigma", one(), Rel::Lt, sg())
        .push("sigma < min{N/(2s2-1), m_bar_{s1,s2,1}}", sg(), Rel::Lt, sigma_upper());

    let mut second = SetBuilder::new(SetId::Pq1Second);
    second
        .push("1/2 < s1", half(), Rel::Lt, cs1())
        .push("s1 < 2/3", cs1(), Rel::Lt, two_thirds())
        .push("1/2 < s2", half(), Rel::Lt, cs2())
        .push("s2 < 2/3", cs2(), Rel::Lt, two_thirds())
        .push("1/(3s1-1) < m", m_lower(), Rel::Lt, m())
        .push("m < min{N/(2s1-1), sigma_hat_{s2}}", m(), Rel::Lt, m_upper())
        .push("1/(3s2-1) < sigma", sigma_lower(), Rel::Lt, sg())
        .push("sigma < min{N/(2s2-1), m_bar_{s1,s2,1}}", sg(), Rel::Lt, sigma_upper());

    let mut third = SetBuilder::new(SetId::Pq1Third);
    third
        .push("1/2 < s1", half(), Rel::Lt, cs1())
        .push("s1 < 2/3", cs1(), Rel::Lt, two_thirds())
        .push("2/3 < s2", two_thirds(), Rel::Lt, cs2())
        .push("s2 < 1", cs2(), Rel::Lt, one())
        .push("1/(3s1-1) < m", m_lower(), Rel::Lt, m())
        .push("m < min{N/(2s1-1), sigma_hat_{s2}}", m(), Rel::Lt, m_upper())
        .push("1 < sigma", one(), Rel::Lt, sg())
        .push("sigma < min{N/(2s2-1), m_bar_{s1,s2,1}}", sg(), Rel::Lt, sigma_upper());

    let mut fourth = SetBuilder::new(SetId::Pq1Fourth);
    fourth
        .push("m >= N/(2s1-1)", m(), Rel::Ge, f.over(n(), c(two_s1_m1.clone())))
        .push(
            "m N/(N + m(2s2-1)) < sigma",
            f.sign_ratio(m(), c(two_s2_m1.clone())),
            Rel::Lt,
            sg(),
        )
        .push("sigma < 1/(s2 - s1)", sg(), Rel::Lt, f.inv_gap());

    let y = two_s1_m1.clone() - prof.n_rat() * (s2 - s1);
    let mut fifth = SetBuilder::new(SetId::Pq1Fifth);
    fifth
        .push("sigma >= N/(2s2-1)", sg(), Rel::Ge, f.over(n(), c(two_s2_m1)))
        .push(
            "m > sigma N/(N + sigma((2s1-1) - N(s2-s1)))",
            m(),
            Rel::Gt,
            f.sign_ratio(sg(), c(y)),
        );

    vec![
        first.build(),
        second.build(),
        third.build(),
        fourth.build(),
        fifth.build(),
    ]
}

/// The two exponent thresholds of the nonexistence theorem for large `p` or `q`.
pub fn threshold_sets(prof: &ExponentProfile) -> Vec<ConditionSet> {
    let (s1, s2) = (&prof.s1, &prof.s2);
    let big = || max(var(Var::P), var(Var::Q));
    let mut a = SetBuilder::new(SetId::Thm45A);
    a.push(
        "max{p,q} >= (1+s2)/(1-s1)",
        big(),
        Rel::Ge,
        c((Rational::one() + s2) / one_minus(s1)),
    );
    let mut b = SetBuilder::new(SetId::Thm45B);
    b.push(
        "max{p,q} >= 1/(1-s1)",
        big(),
        Rel::Ge,
        c(Rational::one() / one_minus(s1)),
    );
    vec![a.build(), b.build()]
}

/// Condition (4.24) of the singular-data nonexistence theorem, both clauses
/// under the sign-aware reading.
pub fn singular_data_set(prof: &ExponentProfile) -> ConditionSet {
    let f = Formulas { prof };
    let (s1, s2) = (&prof.s1, &prof.s2);
    let rhs = |a: Expr, y: Rational| {
        frac(
            a,
            f.n(),
            num(Rational::zero()),
            f.n(),
            num(-y),
            NonPositive::Vacuous,
        )
    };
    let mut b = SetBuilder::new(SetId::N424);
    b.push(
        "p sigma > N/(N - m(2s1-1))",
        mul(var(Var::P), var(Var::Sigma)),
        Rel::Gt,
        rhs(var(Var::M), int(2) * s1 - Rational::one()),
    )
    .push(
        "q m > N/(N - sigma(2s2-1))",
        mul(var(Var::Q), var(Var::M)),
        Rel::Gt,
        rhs(var(Var::Sigma), int(2) * s2 - Rational::one()),
    );
    b.build()
}

pub fn sets_for(prof: &ExponentProfile, id: SetId) -> ConditionSet {
    let all = match id {
        SetId::E42 | SetId::E43 | SetId::E44 | SetId::E45 | SetId::E46 | SetId::E47 => {
            existence_sets(prof)
        }
        SetId::Pq1First
        | SetId::Pq1Second
        | SetId::Pq1Third
        | SetId::Pq1Fourth
        | SetId::Pq1Fifth => pq1_sets(prof),
        SetId::Thm45A | SetId::Thm45B => threshold_sets(prof),
        SetId::N424 => vec![singular_data_set(prof)],
    };
    all.into_iter().find(|s| s.id == id).expect("set exists")
}

#[derive(Clone, Debug)]
pub struct SetVerdict {
    pub id: SetId,
    pub clauses: Vec<ClauseVerdict>,
    pub outcome: Outcome,
}

impl ConditionSet {
    pub fn evaluate(&self, env: &Env) -> SetVerdict {
        let clauses: Vec<ClauseVerdict> = self.clauses.iter().map(|c| c.evaluate(env)).collect();
        let outcome = Outcome::all(clauses.iter().map(|c| c.outcome));
        SetVerdict {
            id: self.id,
            clauses,
            outcome,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub profile: ExponentProfile,
    pub derived: DerivedExponents,
    /// Standing hypotheses of the theorem, reported separately from the sets.
    pub hypotheses: Vec<ClauseVerdict>,
    pub verdicts: Vec<SetVerdict>,
    /// Hypotheses hold and at least one set passes.
    pub feasible: bool,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn verdict(&self, id: SetId) -> Option<&SetVerdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn passes(&self, id: SetId) -> bool {
        self.verdict(id).is_some_and(|v| v.outcome == Outcome::Pass)
    }

    /// CSV rows `set_id,clause_id,lhs,rhs,relation,pass`, hypotheses first.
    pub fn csv(&self) -> String {
        let mut out = String::from("set_id,clause_id,lhs,rhs,relation,pass\n");
        for h in &self.hypotheses {
            out.push_str(&format!(
                "hypotheses,{},{},{},{},{}\n",
                h.id,
                h.lhs,
                h.rhs,
                h.rel.symbol(),
                h.outcome.label()
            ));
        }
        for v in &self.verdicts {
            for cl in &v.clauses {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    v.id.label(),
                    cl.id,
                    cl.lhs,
                    cl.rhs,
                    cl.rel.symbol(),
                    cl.outcome.label()
                ));
            }
        }
        out
    }

    /// Aligned human-readable text.
    pub fn text(&self) -> String {
        let mut out = format!("profile: {}\n", self.profile);
        let d = &self.derived;
        use super::rational::fmt_rational as r;
        out.push_str(&format!(
            "derived: c_p={} c_q={} q_hat_1={} q_hat_2={} p_hat_2={} p_hat_s1s2={} q_hat_s1s2={} m_hat={} m_bar={} sigma_hat_s2={} sigma_hat_s1s2={}\n",
            r(&d.c_p), r(&d.c_q), r(&d.q_hat_1_s1), r(&d.q_hat_2_s1), r(&d.p_hat_2_s2),
            r(&d.p_hat_s1s2), r(&d.q_hat_s1s2), d.m_hat_s1_q, d.m_bar_s1s2_q, d.sigma_hat_s2,
            d.sigma_hat_s1s2_p
        ));
        let line = |out: &mut String, set: &str, c: &ClauseVerdict| {
            let branch = match c.branch {
                Branch::Direct => "",
                Branch::VacuousThreshold => "  [non-positive denominator: vacuous]",
                Branch::InfiniteLimit => "  [inf vs inf]",
                Branch::Undefined => "  [undefined limit]",
            };
            out.push_str(&format!(
                "  {:<18} {:<12} {:<44} {:>14} {:<2} {:<14} {}{}\n",
                set,
                c.id,
                c.text,
                c.lhs.to_string(),
                c.rel.symbol(),
                c.rhs.to_string(),
                c.outcome.label(),
                branch
            ));
        };
        for h in &self.hypotheses {
            line(&mut out, "hypotheses", h);
        }
        for v in &self.verdicts {
            for c in &v.clauses {
                line(&mut out, v.id.label(), c);
            }
            out.push_str(&format!("  {:<18} => {}\n", v.id.label(), v.outcome.label()));
        }
        out.push_str(&format!("feasible: {}\n", self.feasible));
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

fn report(
    profile: &ExponentProfile,
    hypotheses: Vec<Clause>,
    sets: Vec<ConditionSet>,
    mut notes: Vec<String>,
) -> ConditionReport {
    let env = profile.env();
    let hyp: Vec<ClauseVerdict> = hypotheses.iter().map(|c| c.evaluate(&env)).collect();
    let verdicts: Vec<SetVerdict> = sets.iter().map(|s| s.evaluate(&env)).collect();
    let hyp_ok = hyp.iter().all(|h| h.outcome == Outcome::Pass);
    let feasible = hyp_ok && verdicts.iter().any(|v| v.outcome == Outcome::Pass);
    if verdicts
        .iter()
        .flat_map(|v| &v.clauses)
        .chain(&hyp)
        .any(|c| c.outcome == Outcome::Indeterminate)
    {
        notes.push("some clause compares inf with inf or an undefined limit; manual review".into());
    }
    if profile.s2 < profile.s1 {
        notes.push("s2 < s1: analogous-case, not printed in paper".into());
    }
    ConditionReport {
        profile: profile.clone(),
        derived: derive(profile),
        hypotheses: hyp,
        verdicts,
        feasible,
        notes,
    }
}

/// Evaluate the six existence sets together with the standing hypotheses.
pub fn check_existence(profile: &ExponentProfile) -> ConditionReport {
    let mut notes = Vec::new();
    let s1 = &profile.s1;
    let open_lo = s1 / one_minus(s1);
    let open_hi = Rational::one() / one_minus(s1);
    if profile.q >= open_lo && profile.q < open_hi {
        notes.push(format!(
            "q in [s1/(1-s1), 1/(1-s1)) = [{}, {}): paper-open",
            super::rational::fmt_rational(&open_lo),
            super::rational::fmt_rational(&open_hi)
        ));
    }
    if profile.p < profile.q {
        notes.push("p < q: complementary case of set 4.4 is analogous-case, not printed in paper".into());
    }
    report(
        profile,
        existence_hypotheses(profile),
        existence_sets(profile),
        notes,
    )
}

/// Evaluate the five sets of the `p = q = 1` theorem.
pub fn check_existence_pq1(profile: &ExponentProfile) -> Result<ConditionReport, ExponentError> {
    if !profile.p.is_one() || !profile.q.is_one() {
        return Err(ExponentError::Profile(
            "the p = q = 1 sets need p = 1 and q = 1".into(),
        ));
    }
    Ok(report(profile, Vec::new(), pq1_sets(profile), Vec::new()))
}

pub fn check_nonexistence_thresholds(profile: &ExponentProfile) -> ConditionReport {
    report(profile, Vec::new(), threshold_sets(profile), Vec::new())
}

pub fn check_nonexistence_data(profile: &ExponentProfile) -> ConditionReport {
    let mut notes = Vec::new();
    if profile.m.is_infinite() && profile.sigma.is_infinite() {
        notes.push(
            "m = sigma = inf: both thresholds taken at their limits; flagged for manual review"
                .into(),
        );
    }
    report(
        profile,
        base_clauses()[..2].to_vec(),
        vec![singular_data_set(profile)],
        notes,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(p: Rational, q: Rational, n: u32, m: ExtRational, s: ExtRational) -> ExponentProfile {
        ExponentProfile::reference(p, q, n, m, s)
    }

    fn f(n: i64, d: i64) -> ExtRational {
        ExtRational::Finite(rat(n, d))
    }

    #[test]
    fn derived_exponents_at_the_reference_point() {
        let d = derive(&prof(int(1), int(1), 2, f(2, 1), f(2, 1)));
        assert_eq!(d.m_hat_s1_q, f(4, 1));
        assert_eq!(d.m_bar_s1s2_q, f(5, 2));
        assert_eq!(d.c_q, rat(2, 3));
        assert_eq!(d.q_hat_1_s1, rat(1, 2));
        assert_eq!(d.q_hat_2_s1, rat(5, 4));
        // m = inf: N - m q_hat eventually turns negative, so the positive part
        // vanishes and m_hat is +inf; m_bar then tends to 1/(s2 - s1).
        let d = derive(&prof(int(1), int(1), 2, ExtRational::Infinity, f(2, 1)));
        assert_eq!(d.m_hat_s1_q, ExtRational::Infinity);
        assert_eq!(d.m_bar_s1s2_q, f(20, 3));
    }

    #[test]
    fn positive_part_gives_infinity() {
        // N - m q_hat = 2 - 4 * 1/2 = 0.
        let d = derive(&prof(int(1), int(1), 2, f(4, 1), f(2, 1)));
        assert_eq!(d.m_hat_s1_q, ExtRational::Infinity);
        assert_eq!(d.m_bar_s1s2_q, f(20, 3));
    }

    #[test]
    fn existence_examples() {
        let r = check_existence(&prof(int(1), rat(3, 2), 2, f(2, 1), f(2, 1)));
        assert!(r.passes(SetId::E42));
        assert!(r.feasible);
        let r = check_existence(&prof(rat(8, 5), rat(3, 2), 2, f(3, 1), f(2, 1)));
        assert!(r.passes(SetId::E42));
        let r = check_existence(&prof(rat(12, 7), rat(3, 2), 2, f(3, 1), f(2, 1)));
        assert!(!r.passes(SetId::E42));
        let r = check_existence(&prof(int(1), rat(16, 5), 3, f(3, 1), f(3, 1)));
        assert!(r.passes(SetId::E46));
        assert!(!r.feasible, "q = 16/5 violates q < s1/(1-s1)");
        assert!(r.notes.iter().any(|n| n.contains("paper-open")));
    }

    #[test]
    fn pq1_examples() {
        let bad = ExponentProfile::new(rat(3, 5), rat(9, 10), int(1), int(1), 3, f(2, 1), f(2, 1))
            .unwrap();
        let r = check_existence_pq1(&bad).unwrap();
        let first = r.verdict(SetId::Pq1First).unwrap();
        assert_eq!(first.clauses[0].outcome, Outcome::Fail);
        let inf = prof(int(1), int(1), 3, ExtRational::Infinity, f(2, 1));
        let r = check_existence_pq1(&inf).unwrap();
        assert_eq!(r.verdict(SetId::Pq1Fourth).unwrap().clauses[0].outcome, Outcome::Pass);
        assert!(check_existence_pq1(&prof(int(2), int(1), 3, f(2, 1), f(2, 1))).is_err());
    }

    #[test]
    fn threshold_examples() {
        let r = check_nonexistence_thresholds(&prof(int(4), int(1), 2, f(2, 1), f(2, 1)));
        assert!(r.passes(SetId::Thm45B));
        assert!(!r.passes(SetId::Thm45A));
        let r = check_nonexistence_thresholds(&prof(rat(38, 5), int(1), 2, f(2, 1), f(2, 1)));
        assert!(r.passes(SetId::Thm45A));
        let r = check_nonexistence_thresholds(&prof(int(2), int(2), 2, f(2, 1), f(2, 1)));
        assert!(!r.passes(SetId::Thm45A) && !r.passes(SetId::Thm45B));
    }

    #[test]
    fn singular_data_examples() {
        let r = check_nonexistence_data(&prof(int(1), int(1), 3, f(7, 1), f(2, 1)));
        let v = r.verdict(SetId::N424).unwrap();
        assert_eq!(v.outcome, Outcome::Pass);
        assert_eq!(v.clauses[0].branch, Branch::VacuousThreshold);
        let r = check_nonexistence_data(&prof(int(1), int(1), 3, f(3, 1), f(2, 1)));
        assert_eq!(r.verdict(SetId::N424).unwrap().outcome, Outcome::Fail);
        let r = check_nonexistence_data(&prof(
            int(1),
            int(1),
            3,
            ExtRational::Infinity,
            ExtRational::Infinity,
        ));
        assert!(r.notes.iter().any(|n| n.contains("manual review")));
    }

    #[test]
    fn bounded_data_compares_infinities_as_indeterminate() {
        let r = check_existence(&prof(
            int(1),
            rat(9, 5),
            2,
            ExtRational::Infinity,
            ExtRational::Infinity,
        ));
        let v = r.verdict(SetId::E47).unwrap();
        assert_eq!(v.outcome, Outcome::Indeterminate);
        assert_eq!(v.clauses[1].branch, Branch::InfiniteLimit);
    }

    #[test]
    fn csv_has_one_row_per_clause() {
        let r = check_existence(&prof(int(1), rat(3, 2), 2, f(2, 1), f(2, 1)));
        let rows = r.csv().lines().count();
        let clauses: usize = r.verdicts.iter().map(|v| v.clauses.len()).sum();
        assert_eq!(rows, 1 + r.hypotheses.len() + clauses);
        assert!(r.csv().starts_with("set_id,clause_id,lhs,rhs,relation,pass\n"));
    }

    #[test]
    fn profile_validation() {
        assert!(ExponentProfile::new(rat(1, 2), rat(9, 10), int(1), int(1), 2, f(2, 1), f(2, 1)).is_err());
        assert!(ExponentProfile::new(rat(3, 4), int(1), int(1), int(1), 2, f(2, 1), f(2, 1)).is_ok());
        let gate_only = ExponentProfile::new(rat(3, 4), int(1), int(1), int(1), 2, f(2, 1), f(2, 1)).unwrap();
        assert!(gate_only.require_fractional().is_err());
        assert!(ExponentProfile::new(rat(3, 4), rat(9, 10), int(1), int(1), 1, f(2, 1), f(2, 1)).is_err());
    }
}
