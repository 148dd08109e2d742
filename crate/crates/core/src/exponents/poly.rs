//! Univariate polynomials and rational functions over the rationals, with
//! exact real-root location. Only low degrees occur in the condition sets,
//! so the algorithms favour clarity over asymptotics.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{exact_sqrt, rat, simplest_between, to_f64, Rational};

/// Coefficients in increasing degree, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn scale(&self, k: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * k).collect())
    }

    /// All distinct real roots in increasing order, exact where rational and
    /// isolated in an exact bracket otherwise.
    pub fn real_roots(&self) -> Vec<Root> {
        let mut roots = Vec::new();
        let Some(deg) = self.degree() else {
            return roots;
        };
        if deg == 0 {
            return roots;
        }
        let p = self.square_free();
        match p.degree() {
            Some(1) => roots.push(Root::Exact(-&p.0[0] / &p.0[1])),
            Some(2) => roots.extend(quadratic_roots(&p)),
            _ => roots.extend(sturm_roots(&p)),
        }
        roots
    }

    fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64, 1))
                .collect(),
        )
    }

    /// Quotient and remainder of polynomial division.
    fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Rational::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in d.0.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    fn monic(&self) -> Poly {
        match self.0.last() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    fn square_free(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }
}

/// A real root: exact when rational, otherwise an exact rational bracket
/// `(lo, hi)` containing exactly one root, which is irrational.
#[derive(Clone, Debug, PartialEq)]
pub enum Root {
    Exact(Rational),
    Bracketed { lo: Rational, hi: Rational },
}

impl Root {
    /// Exact value, or the bracket midpoint.
    pub fn center(&self) -> Rational {
        match self {
            Root::Exact(r) => r.clone(),
            Root::Bracketed { lo, hi } => (lo + hi) / rat(2, 1),
        }
    }

    pub fn lower(&self) -> &Rational {
        match self {
            Root::Exact(r) => r,
            Root::Bracketed { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &Rational {
        match self {
            Root::Exact(r) => r,
            Root::Bracketed { hi, .. } => hi,
        }
    }

    pub fn approx(&self) -> f64 {
        to_f64(&self.center())
    }
}

/// Roots of a square-free quadratic.
fn quadratic_roots(p: &Poly) -> Vec<Root> {
    let (c, b, a) = (&p.0[0], &p.0[1], &p.0[2]);
    let disc = b * b - rat(4, 1) * a * c;
    if disc.is_negative() {
        return vec![];
    }
    let two_a = rat(2, 1) * a;
    if let Some(sq) = exact_sqrt(&disc) {
        let mut r = vec![(-b - &sq) / &two_a, (-b + &sq) / &two_a];
        r.sort();
        r.dedup();
        return r.into_iter().map(Root::Exact).collect();
    }
    sturm_roots(p)
}

/// Bracket width below which an isolated root is tested for rationality.
fn resolution() -> Rational {
    rat(1, 1 << 40)
}

/// Exact isolation of the real roots of a square-free polynomial by Sturm
/// sequences and bisection.
fn sturm_roots(p: &Poly) -> Vec<Root> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(-&r);
    }
    let changes = |x: &Rational| -> usize {
        let signs: Vec<i8> = chain
            .iter()
            .map(|q| {
                let v = q.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|s| *s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let lead = p.0.last().unwrap();
    let bound = Rational::one()
        + p.0[..p.0.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(Rational::zero(), |m, c| if c > m { c } else { m });
    let mut out = Vec::new();
    // Each stack entry is a half-open interval (lo, hi] with its root count.
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let count = changes(&lo) - changes(&hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            if p.eval(&hi).is_zero() {
                out.push(Root::Exact(hi));
                continue;
            }
            let mut lo = lo;
            if p.eval(&lo).is_zero() {
                // lo is a neighbouring root; nudge it up without skipping ours.
                let mut step = (&hi - &lo) / rat(2, 1);
                while changes(&(&lo + &step)) - changes(&hi) != 1 {
                    step /= rat(2, 1);
                }
                lo += step;
            }
            out.push(refine(p, lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / rat(2, 1);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.center().cmp(&b.center()));
    out.dedup();
    out
}

/// Shrink a bracket `(lo, hi]` holding a single simple root strictly inside.
fn refine(p: &Poly, mut lo: Rational, mut hi: Rational) -> Root {
    let sign_lo = p.eval(&lo).signum();
    let eps = resolution();
    loop {
        let candidate = simplest_between(&lo, &hi);
        if p.eval(&candidate).is_zero() {
            return Root::Exact(candidate);
        }
        if &hi - &lo < eps {
            return Root::Bracketed { lo, hi };
        }
        let mid = (&lo + &hi) / rat(2, 1);
        let v = p.eval(&mid);
        if v.is_zero() {
            return Root::Exact(mid);
        }
        if v.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let get = |v: &[Rational], i: usize| v.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly::new((0..n).map(|i| get(&self.0, i) + get(&rhs.0, i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// `num / den` with `den` never the zero polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn constant(c: Rational) -> Self {
        RatFn {
            num: Poly::constant(c),
            den: Poly::constant(Rational::one()),
        }
    }

    pub fn x() -> Self {
        RatFn {
            num: Poly::x(),
            den: Poly::constant(Rational::one()),
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(Rational::zero()),
            (Some(0), Some(0)) => Some(&self.num.0[0] / &self.den.0[0]),
            _ => None,
        }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        RatFn {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
        .normalized()
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
        .normalized()
    }

    /// `None` when dividing by the zero function.
    pub fn div(&self, o: &RatFn) -> Option<RatFn> {
        if o.num.is_zero() {
            return None;
        }
        Some(
            RatFn {
                num: &self.num * &o.den,
                den: &self.den * &o.num,
            }
            .normalized(),
        )
    }

    /// Cancel constant content so coefficients stay small; common polynomial
    /// factors are left alone (extra breakpoints are harmless).
    fn normalized(self) -> RatFn {
        if let Some(c) = self.den.0.last().cloned() {
            let inv = c.recip();
            RatFn {
                num: self.num.scale(&inv),
                den: self.den.scale(&inv),
            }
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::rational::int;

    fn poly(c: &[(i64, i64)]) -> Poly {
        Poly::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn linear_and_rational_quadratic_roots_are_exact() {
        // 5q + 11 = 20  ->  q = 9/5
        let p = poly(&[(-9, 1), (5, 1)]);
        assert_eq!(p.real_roots(), vec![Root::Exact(rat(9, 5))]);
        // (x - 1/2)(x - 3) = x^2 - 7/2 x + 3/2
        let p = poly(&[(3, 2), (-7, 2), (1, 1)]);
        assert_eq!(
            p.real_roots(),
            vec![Root::Exact(rat(1, 2)), Root::Exact(int(3))]
        );
    }

    #[test]
    fn irrational_roots_are_bracketed() {
        // 8s^2 - 33s + 30 has roots (33 -+ sqrt(129))/16.
        let p = poly(&[(30, 1), (-33, 1), (8, 1)]);
        let roots = p.real_roots();
        assert_eq!(roots.len(), 2);
        let expect = [(33.0 - 129f64.sqrt()) / 16.0, (33.0 + 129f64.sqrt()) / 16.0];
        for (r, e) in roots.iter().zip(expect) {
            match r {
                Root::Bracketed { lo, hi } => {
                    assert!(to_f64(lo) <= e && e <= to_f64(hi));
                    assert!(hi - lo < rat(1, 1 << 30));
                    assert!(p.eval(lo).signum() != p.eval(hi).signum());
                }
                Root::Exact(_) => panic!("root should be irrational"),
            }
        }
    }

    #[test]
    fn cubic_with_rational_roots_is_deflated_exactly() {
        // (x - 1)(x - 2/3)(x + 5) = x^3 + 10/3 x^2 - 23/3 x + 10/3
        let p = poly(&[(10, 3), (-23, 3), (10, 3), (1, 1)]);
        assert_eq!(
            p.real_roots(),
            vec![
                Root::Exact(int(-5)),
                Root::Exact(rat(2, 3)),
                Root::Exact(int(1))
            ]
        );
    }

    #[test]
    fn ratfn_arithmetic_matches_pointwise_evaluation() {
        let x = RatFn::x();
        let one = RatFn::constant(int(1));
        let f = x.add(&one).div(&x.sub(&RatFn::constant(int(2)))).unwrap();
        let g = f.mul(&x).sub(&one);
        let at = rat(7, 3);
        let direct = (rat(7, 3) + int(1)) / (rat(7, 3) - int(2)) * rat(7, 3) - int(1);
        assert_eq!(g.num.eval(&at) / g.den.eval(&at), direct);
    }
}
