//! Discrete norm axioms, Hölder consistency and the interpolation exponent on
//! random grid functions.

use std::sync::{Arc, OnceLock};

use fracsys::exponents::{rat, Rational};
use fracsys::geometry::{build_grid, Domain, GridFunction, QuadratureGrid};
use fracsys::norms::{interpolation_check, interpolation_theta, weighted_lp, WeightedNormSpec};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn grid() -> Arc<QuadratureGrid> {
    static G: OnceLock<Arc<QuadratureGrid>> = OnceLock::new();
    G.get_or_init(|| Arc::new(build_grid(Domain::disk(), 8, 16, 2.0).unwrap())).clone()
}

fn field() -> impl Strategy<Value = GridFunction> {
    let n = grid().len();
    prop::collection::vec(-10.0f64..10.0, n).prop_map(|v| GridFunction::new(grid(), v).unwrap())
}

fn spec() -> impl Strategy<Value = WeightedNormSpec> {
    (prop_oneof![1.0f64..8.0, Just(f64::INFINITY)], -0.9f64..2.0).prop_map(|(g, a)| WeightedNormSpec::new(g, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_inequality(u in field(), v in field(), s in spec()) {
        let sum = weighted_lp(&u.combine(1.0, &v, 1.0), &s, None);
        let bound = weighted_lp(&u, &s, None) + weighted_lp(&v, &s, None);
        prop_assert!(sum <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn absolute_homogeneity(u in field(), s in spec(), c in -5.0f64..5.0) {
        let lhs = weighted_lp(&u.scale(c), &s, None);
        let rhs = c.abs() * weighted_lp(&u, &s, None);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn holder_consistency(u in field(), g1 in 1.0f64..4.0, dg in 0.0f64..4.0, a in -0.9f64..2.0) {
        // |Ω| is the grid measure (the weights sum to it)
        let g2 = g1 + dg;
        let measure: f64 = grid().weights().iter().sum();
        let n1 = weighted_lp(&u, &WeightedNormSpec::new(g1, a).unwrap(), None);
        let n2 = weighted_lp(&u, &WeightedNormSpec::new(g2, a).unwrap(), None);
        prop_assert!(n1 <= measure.powf(1.0 / g1 - 1.0 / g2) * n2 * (1.0 + 1e-12));
    }

    #[test]
    fn theta_is_exact_and_in_unit_interval(an in 1i64..40, ad in 1i64..10, rn in 1i64..40) {
        let a = rat(an, ad) + Rational::one();
        let r = &a + rat(rn, 7);
        let theta = interpolation_theta(&a, &r).unwrap();
        prop_assert!(theta >= Rational::zero() && theta <= Rational::one());
        prop_assert_eq!(&theta * &a * (&r - Rational::one()), &r - &a);
    }

    #[test]
    fn interpolation_holds_on_random_sequences(h in field(), seq in prop::collection::vec(field(), 1..4), an in 0i64..20, rn in 1i64..30) {
        let a = Rational::one() + rat(an, 10);
        let r = &a + rat(rn, 10);
        let rep = interpolation_check(&seq, &h, &a, &r).unwrap();
        prop_assert!(rep.all_hold());
    }
}

#[test]
fn interpolation_with_vanishing_perturbation() {
    let g = grid();
    let h = GridFunction::from_fn(g.clone(), |x| 1.0 - x[0] * x[0]);
    let bump = GridFunction::from_fn(g.clone(), |x| (-(x[0] * x[0] + x[1] * x[1]) * 8.0).exp());
    let seq: Vec<GridFunction> = (1..=6).map(|n| h.combine(1.0, &bump, 1.0 / n as f64)).collect();
    let rep = interpolation_check(&seq, &h, &rat(3, 2), &rat(4, 1)).unwrap();
    assert!(rep.all_hold());
    assert!(rep.rows.windows(2).all(|w| w[1].lhs < w[0].lhs && w[1].rhs < w[0].rhs));
}

#[test]
fn oscillating_sequence_converges_in_intermediate_norm() {
    // h_n = sin(n·2πx1)/n^{1/4}: bounded in L^4, shrinking in L^1
    let g = Arc::new(build_grid(Domain::disk(), 32, 64, 2.0).unwrap());
    let zero = GridFunction::constant(g.clone(), 0.0);
    let seq: Vec<GridFunction> = [1.0f64, 4.0, 16.0]
        .iter()
        .map(|&n| GridFunction::from_fn(g.clone(), |x| (n * std::f64::consts::TAU * x[0]).sin() / n.powf(0.25)))
        .collect();
    let rep = interpolation_check(&seq, &zero, &rat(2, 1), &rat(4, 1)).unwrap();
    assert!(rep.all_hold());
    assert!(rep.rows[2].lhs < rep.rows[0].lhs);
}
