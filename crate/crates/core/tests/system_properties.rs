//! Coupled-system solver: budget algebra, config round trips, Picard runs on a
//! coarse grid and the weak-form check on a closed-form solution.

use std::sync::{Arc, OnceLock};

use fracsys::exponents::{rat, ExponentProfile, ExtRational};
use fracsys::geometry::{build_grid, Domain, GridFunction};
use fracsys::kernel::torsion;
use fracsys::poisson::{DatumSpec, QuadOptions};
use fracsys::system::{pi_membership, smallness_budget, Outcome, SystemConfig, SystemRun, SystemSolver, TestFunction, VerifyOptions, WeakForm};
use proptest::prelude::*;

fn profile() -> ExponentProfile {
    let two = ExtRational::from(rat(2, 1));
    ExponentProfile::new(rat(3, 4), rat(9, 10), rat(21, 20), rat(3, 2), 2, two.clone(), two).unwrap()
}

fn config(lambda: f64, mu: f64) -> SystemConfig {
    let mut c = SystemConfig::new(profile(), lambda, mu);
    c.n_radial = 8;
    c.n_angular = 16;
    c.damping = 0.25;
    c.max_iters = 1000;
    c
}

fn solver() -> Arc<SystemSolver> {
    static S: OnceLock<Arc<SystemSolver>> = OnceLock::new();
    S.get_or_init(|| {
        let grid = Arc::new(build_grid(Domain::disk(), 8, 16, 2.0).unwrap());
        Arc::new(SystemSolver::new(grid, 0.75, 0.9, QuadOptions::default()).unwrap())
    })
    .clone()
}

fn run(c: SystemConfig) -> SystemRun {
    SystemRun::with_solver(c, solver()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn budget_maximizes_upsilon(pq in 1.01f64..6.0, c in 0.01f64..10.0, k in 0.05f64..20.0) {
        let b = smallness_budget(pq, c).unwrap();
        prop_assert!((b.upsilon(b.ell) - b.lambda_star).abs() <= 1e-10 * b.lambda_star);
        prop_assert!(b.upsilon(k * b.ell) <= b.lambda_star * (1.0 + 1e-12));
        prop_assert!((b.a * c - b.lambda_star).abs() <= 1e-12 * b.lambda_star);
    }

    #[test]
    fn pi_is_monotone_in_both_scales(l in 0.0f64..20.0, m in 0.0f64..20.0, dl in 0.0f64..5.0, dm in 0.0f64..5.0) {
        let grid = Arc::new(build_grid(Domain::disk(), 4, 8, 2.0).unwrap());
        let f = GridFunction::constant(grid.clone(), 1.0);
        let b = smallness_budget(1.575, 0.2).unwrap();
        let p = profile();
        if pi_membership(&b, &p, l + dl, m + dm, &f, &f) {
            prop_assert!(pi_membership(&b, &p, l, m, &f, &f));
        }
    }

    #[test]
    fn config_text_round_trips(l in 0.0f64..100.0, m in 0.0f64..100.0, c in 1u32..200, eps in 0.05f64..1.9, r in 4.0f64..5.0) {
        let mut cfg = config(l, m);
        cfg.f = DatumSpec::Singular { m: 2.0, eps };
        cfg.g = DatumSpec::Const(c as f64 / 7.0);
        cfg.r = Some(r);
        let again = SystemConfig::parse(&cfg.to_text()).unwrap();
        prop_assert_eq!(cfg, again);
    }
}

#[test]
fn zero_data_converges_to_zero() {
    let res = run(config(0.0, 0.0)).solve();
    assert!(res.outcome.is_converged(), "{}", res.outcome);
    assert!(res.u.iter().chain(&res.v).all(|&x| x == 0.0));
}

#[test]
fn small_data_runs_are_nonnegative_and_deterministic() {
    let r = run(config(0.1, 0.1));
    let (a, b) = (r.solve(), r.solve());
    assert!(a.outcome.is_converged(), "{}", a.outcome);
    assert!(a.h_invariant());
    assert_eq!(a.trace_csv(), b.trace_csv());
    assert_eq!(a.solution_csv(solver().grid()), b.solution_csv(solver().grid()));
    assert!(a.u.iter().chain(&a.v).all(|&x| x >= 0.0));
}

#[test]
fn huge_data_blows_up() {
    let r = run(config(1e9, 0.5));
    let res = r.solve();
    assert!(matches!(res.outcome, Outcome::Diverged { .. }), "{}", res.outcome);
}

#[test]
fn operators_for_another_grid_are_rejected() {
    let mut c = config(0.1, 0.1);
    c.n_radial = 12;
    assert!(SystemRun::with_solver(c, solver()).is_err());
}

#[test]
fn weak_form_of_the_torsion_function() {
    // (-Δ)^s w = 1 with w the closed-form torsion profile: a linear check of
    // the residual machinery with no solver error in it
    let s = 0.75;
    let grid = build_grid(Domain::disk(), 24, 48, 2.0).unwrap();
    let w: Vec<f64> = grid.nodes().iter().map(|x| torsion(2, s, x)).collect();
    let one = vec![1.0; grid.len()];
    let tests = [TestFunction { center: [0.0; 3], radius: 0.5 }, TestFunction { center: [0.3, 0.2, 0.0], radius: 0.4 }];
    let opts = VerifyOptions { fine: (64, 128), ..VerifyOptions::default() };
    let form = WeakForm::new(2, s, &tests, &opts).unwrap();
    for (lhs, rhs) in form.pairs(&grid, &w, &one) {
        assert!((lhs - rhs).abs() < 1e-2 * rhs, "{lhs} vs {rhs}");
    }
}
