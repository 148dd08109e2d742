//! Independent re-evaluation of every condition set from a literal clause
//! list (tests/data/condition_sets.txt), compared verdict by verdict with the
//! library on sampled profiles with finite data exponents.

use std::collections::BTreeMap;

use fracsys::exponents::sets::{
    check_existence, check_existence_pq1, check_nonexistence_data, check_nonexistence_thresholds,
};
use fracsys::exponents::{derive, rat, ExponentProfile, ExtRational, Outcome, Rational};
use num_traits::{One, Signed};
use proptest::prelude::*;

#[derive(Clone, Debug, PartialEq)]
enum V {
    F(Rational),
    Inf,
    Vacuous,
}

struct Names(BTreeMap<&'static str, V>);

/// `a N / (N - a y)` with the positive-part convention.
fn plus_ratio(a: &Rational, n: &Rational, y: &Rational) -> V {
    let den = n - a * y;
    if den.is_positive() {
        V::F(a * n / den)
    } else {
        V::Inf
    }
}

impl Names {
    fn new(s1: &Rational, s2: &Rational, n: u32, p: &Rational, q: &Rational, m: &Rational, sg: &Rational) -> Self {
        let one = Rational::one();
        let two = rat(2, 1);
        let nn = rat(n as i64, 1);
        let qh1 = s1 - q * (&one - s1);
        let qh2 = &two * s1 - q * (&one - s1);
        let ph2 = &two * s2 - p * (&one - s2);
        let phs = &two * s2 - s1 - p * (&one - s1);
        let m_hat = plus_ratio(m, &nn, &qh1);
        let gap = s2 - s1;
        let bar = |mh: &V| match mh {
            V::F(x) => V::F(x / (&one + x * &gap)),
            _ if gap.is_positive() => V::F(one.clone() / &gap),
            _ => V::Inf,
        };
        let m_bar = bar(&m_hat);
        let m_hat_1 = plus_ratio(m, &nn, &(s1 - (&one - s1)));
        let mut t = BTreeMap::new();
        t.insert("s1", V::F(s1.clone()));
        t.insert("s2", V::F(s2.clone()));
        t.insert("N", V::F(nn.clone()));
        t.insert("p", V::F(p.clone()));
        t.insert("q", V::F(q.clone()));
        t.insert("m", V::F(m.clone()));
        t.insert("sigma", V::F(sg.clone()));
        t.insert("c_p", V::F((p + &one) / (p + &two)));
        t.insert("c_q", V::F((q + &one) / (q + &two)));
        t.insert("qh1", V::F(qh1));
        t.insert("qh2", V::F(qh2));
        t.insert("ph2", V::F(ph2));
        t.insert("phs", V::F(phs.clone()));
        t.insert("m_hat", m_hat);
        t.insert("m_bar", m_bar);
        t.insert("m_bar_1", bar(&m_hat_1));
        t.insert("sig_hat_s2", plus_ratio(sg, &nn, &(&two * s2 - &one)));
        t.insert("sig_hat_p", plus_ratio(sg, &nn, &phs));
        Names(t)
    }
}

/// Recursive-descent evaluator for `+ - * /`, parentheses, `min`, `max`.
struct Parser<'a> {
    toks: Vec<String>,
    pos: usize,
    names: &'a Names,
}

fn tokenize(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(cs[st..i].iter().collect());
        } else {
            out.push(c.to_string());
            i += 1;
        }
    }
    out
}

fn arith(a: V, b: V, op: char) -> V {
    match (a, b) {
        (V::Vacuous, _) | (_, V::Vacuous) => V::Vacuous,
        (V::F(x), V::F(y)) => match op {
            '+' => V::F(x + y),
            '-' => V::F(x - y),
            '*' => V::F(x * y),
            _ => {
                if y.is_positive() {
                    V::F(x / y)
                } else {
                    V::Vacuous
                }
            }
        },
        (V::Inf, V::F(y)) | (V::F(y), V::Inf) if op == '*' && y.is_positive() => V::Inf,
        (V::Inf, V::F(_)) if op == '+' || op == '-' => V::Inf,
        (a, b) => panic!("oracle does not handle {a:?} {op} {b:?}"),
    }
}

impl Parser<'_> {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.pos).map(|s| s.as_str())
    }

    fn next(&mut self) -> String {
        self.pos += 1;
        self.toks[self.pos - 1].clone()
    }

    fn expr(&mut self) -> V {
        let mut v = self.term();
        while let Some(op @ ("+" | "-")) = self.peek() {
            let op = op.chars().next().unwrap();
            self.pos += 1;
            let r = self.term();
            v = arith(v, r, op);
        }
        v
    }

    fn term(&mut self) -> V {
        let mut v = self.atom();
        while let Some(op @ ("*" | "/")) = self.peek() {
            let op = op.chars().next().unwrap();
            self.pos += 1;
            let r = self.atom();
            v = arith(v, r, op);
        }
        v
    }

    fn atom(&mut self) -> V {
        let t = self.next();
        if t == "(" {
            let v = self.expr();
            assert_eq!(self.next(), ")");
            return v;
        }
        if t == "min" || t == "max" {
            assert_eq!(self.next(), "(");
            let a = self.expr();
            assert_eq!(self.next(), ",");
            let b = self.expr();
            assert_eq!(self.next(), ")");
            let pick_first = match (&a, &b) {
                (V::F(x), V::F(y)) => (x <= y) == (t == "min"),
                (V::F(_), V::Inf) => t == "min",
                (V::Inf, V::F(_)) => t == "max",
                _ => true,
            };
            return if pick_first { a } else { b };
        }
        if let Ok(k) = t.parse::<i64>() {
            return V::F(rat(k, 1));
        }
        self.names.0.get(t.as_str()).cloned().unwrap_or_else(|| panic!("unknown name {t}"))
    }
}

fn eval(text: &str, names: &Names) -> V {
    let mut p = Parser {
        toks: tokenize(text),
        pos: 0,
        names,
    };
    let v = p.expr();
    assert_eq!(p.pos, p.toks.len(), "trailing tokens in {text}");
    v
}

fn verdict(l: &V, rel: &str, r: &V) -> Outcome {
    let (a, b) = match (l, r) {
        (V::Vacuous, _) | (_, V::Vacuous) => return Outcome::Pass,
        (V::Inf, V::Inf) => {
            return if rel.contains('=') {
                Outcome::Pass
            } else {
                Outcome::Indeterminate
            }
        }
        (V::F(a), V::F(b)) => (ExtRational::Finite(a.clone()), ExtRational::Finite(b.clone())),
        (V::F(a), V::Inf) => (ExtRational::Finite(a.clone()), ExtRational::Infinity),
        (V::Inf, V::F(b)) => (ExtRational::Infinity, ExtRational::Finite(b.clone())),
    };
    let ok = match rel {
        "<" => a < b,
        "<=" => a <= b,
        ">" => a > b,
        ">=" => a >= b,
        _ => panic!("relation {rel}"),
    };
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn golden() -> Vec<(String, String, String, String)> {
    include_str!("data/condition_sets.txt")
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<String> = l.split('|').map(|s| s.trim().to_string()).collect();
            (f[0].clone(), f[1].clone(), f[2].clone(), f[3].clone())
        })
        .collect()
}

fn oracle(prof: &ExponentProfile) -> BTreeMap<String, Vec<Outcome>> {
    let (m, sg) = (prof.m.finite().unwrap(), prof.sigma.finite().unwrap());
    let names = Names::new(&prof.s1, &prof.s2, prof.n, &prof.p, &prof.q, m, sg);
    let mut out: BTreeMap<String, Vec<Outcome>> = BTreeMap::new();
    for (set, l, rel, r) in golden() {
        let v = verdict(&eval(&l, &names), &rel, &eval(&r, &names));
        out.entry(set).or_default().push(v);
    }
    out
}

fn library(prof: &ExponentProfile) -> BTreeMap<String, Vec<Outcome>> {
    let mut reports = vec![
        check_existence(prof),
        check_nonexistence_thresholds(prof),
        check_nonexistence_data(prof),
    ];
    if prof.p.is_one() && prof.q.is_one() {
        reports.push(check_existence_pq1(prof).unwrap());
    }
    let mut out = BTreeMap::new();
    for r in reports {
        for v in r.verdicts {
            out.insert(
                v.id.label().to_string(),
                v.clauses.iter().map(|c| c.outcome).collect(),
            );
        }
    }
    out
}

fn pick(values: &'static [(i64, i64)]) -> impl Strategy<Value = Rational> {
    prop::sample::select(values).prop_map(|(n, d)| rat(n, d))
}

const S1: &[(i64, i64)] = &[(11, 20), (3, 5), (2, 3), (7, 10), (3, 4), (4, 5), (9, 10)];
const S2: &[(i64, i64)] = &[(11, 20), (3, 5), (2, 3), (3, 4), (4, 5), (9, 10), (1, 1)];
const PQ: &[(i64, i64)] = &[(1, 1), (6, 5), (3, 2), (2, 1), (5, 2), (3, 1), (4, 1), (8, 1)];
const DATA: &[(i64, i64)] = &[(1, 1), (6, 5), (3, 2), (2, 1), (3, 1), (4, 1), (6, 1), (8, 1), (20, 1)];

proptest! {
    #![proptest_config(ProptestConfig { cases: 3000, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn library_matches_literal_clause_lists(
        s1 in pick(S1), s2 in pick(S2), p in pick(PQ), q in pick(PQ),
        n in 2u32..5, m in pick(DATA), sg in pick(DATA),
    ) {
        // s2 < s1 is the unprinted analogous case; its conventions are the
        // library's own and have nothing to compare against.
        prop_assume!(s2 >= s1);
        let prof = ExponentProfile::new(s1, s2, p, q, n, ExtRational::Finite(m), ExtRational::Finite(sg)).unwrap();
        let lib = library(&prof);
        let orc = oracle(&prof);
        for (set, verdicts) in &lib {
            prop_assert_eq!(Some(verdicts), orc.get(set), "set {} at {}", set, prof);
        }
    }

    #[test]
    fn pq1_sets_match_at_p_q_one(
        s1 in pick(S1), s2 in pick(S2), n in 2u32..5, m in pick(DATA), sg in pick(DATA),
    ) {
        prop_assume!(s2 >= s1);
        let one = Rational::one();
        let prof = ExponentProfile::new(s1, s2, one.clone(), one, n, ExtRational::Finite(m), ExtRational::Finite(sg)).unwrap();
        let lib = library(&prof);
        let orc = oracle(&prof);
        for set in ["pq1-first", "pq1-second", "pq1-third", "pq1-fourth", "pq1-fifth"] {
            prop_assert_eq!(lib.get(set), orc.get(set), "set {} at {}", set, prof);
        }
    }

    /// With s1 = s2 the two-order quantities collapse to the single-order ones.
    #[test]
    fn equal_orders_collapse(
        s in pick(&[(11, 20), (3, 5), (2, 3), (3, 4), (4, 5), (9, 10)]),
        p in pick(PQ), q in pick(PQ), n in 2u32..5, m in pick(DATA), sg in pick(DATA),
    ) {
        let prof = ExponentProfile::new(s.clone(), s.clone(), p.clone(), q.clone(), n, ExtRational::Finite(m.clone()), ExtRational::Finite(sg.clone())).unwrap();
        let d = derive(&prof);
        let one = Rational::one();
        prop_assert_eq!(&d.p_hat_s1s2, &(&s - &p * (&one - &s)));
        prop_assert_eq!(&d.q_hat_s1s2, &(&s - &q * (&one - &s)));
        // m_bar reduces to m_hat when the orders coincide.
        prop_assert_eq!(&d.m_bar_s1s2_q, &d.m_hat_s1_q);
        let nn = rat(n as i64, 1);
        let single = plus_ratio(&sg, &nn, &(&s - &p * (&one - &s)));
        let expect = match single { V::F(x) => ExtRational::Finite(x), _ => ExtRational::Infinity };
        prop_assert_eq!(&d.sigma_hat_s1s2_p, &expect);
    }

    /// m_bar is strictly decreasing in q while m_hat stays finite.
    #[test]
    fn m_bar_decreases_in_q(
        s1 in pick(S1), s2 in pick(S2), n in 2u32..5, m in pick(DATA),
        q0 in 0i64..40, dq in 1i64..20,
    ) {
        prop_assume!(s2 >= s1);
        let one = Rational::one();
        let q_a = &one + rat(q0, 10);
        let q_b = &q_a + rat(dq, 10);
        let at = |q: &Rational| {
            let prof = ExponentProfile::new(s1.clone(), s2.clone(), one.clone(), q.clone(), n, ExtRational::Finite(m.clone()), ExtRational::Finite(m.clone())).unwrap();
            derive(&prof)
        };
        let (da, db) = (at(&q_a), at(&q_b));
        if let (ExtRational::Finite(_), ExtRational::Finite(_)) = (&da.m_hat_s1_q, &db.m_hat_s1_q) {
            prop_assert!(db.m_bar_s1s2_q < da.m_bar_s1s2_q);
        }
    }
}

/// Region endpoints move down with q: the upper end of the admissible p
/// window at fixed q is 20/(5q+11) on (1, 9/5), decreasing.
#[test]
fn p_window_upper_end_decreases_with_q() {
    use fracsys::exponents::region::feasible_region;
    use fracsys::exponents::{Bound, Var};
    let mut last: Option<Rational> = None;
    for k in 0..8 {
        let q = rat(1, 1) + rat(k, 10);
        let prof = ExponentProfile::reference(
            rat(1, 1),
            q.clone(),
            2,
            ExtRational::Finite(rat(2, 1)),
            ExtRational::Finite(rat(2, 1)),
        );
        let r = feasible_region(&prof, Var::P).unwrap();
        let hi = match &r.intervals.last().unwrap().hi {
            Bound::Exact(h) => h.clone(),
            other => panic!("unexpected bound {other}"),
        };
        assert_eq!(hi, rat(20, 1) / (rat(5, 1) * &q + rat(11, 1)));
        if let Some(prev) = &last {
            assert!(hi < *prev);
        }
        last = Some(hi);
    }
}
