use hardylab::grid::{
    integrate_weighted_power, integrate_weighted_power_estimate, p_norm, step_function_from_csv,
    step_function_to_csv, Exponent, PiecewisePoly, StepFunction,
};
use hardylab::inequalities::{
    corollary_int_check, sharp_constant, weighted_supmin_check, Evaluator, Kind,
};
use hardylab::operators::{
    cumulative, double_cumulative, rellich_middle_profile, supmin_pointwise_identity_check,
    supmin_transform, SupMinProfile,
};
use hardylab::rearrange::{
    check_partial_domination, decreasing_rearrangement, distribution_function,
};
use hardylab::sharpness::{cutoff_value, CutoffSpec};
use proptest::prelude::*;

fn step_fn() -> impl Strategy<Value = StepFunction> {
    (1usize..16)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.01f64..4.0, n),
                prop::collection::vec(-5.0f64..5.0, n),
            )
        })
        .prop_map(|(w, v)| StepFunction::from_widths(&w, v).unwrap())
}

fn nonzero_step_fn() -> impl Strategy<Value = StepFunction> {
    step_fn().prop_filter("not identically zero", |f| {
        f.values().iter().any(|v| v.abs() > 1e-3)
    })
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop::sample::select(vec![1.1, 1.5, 2.0, 3.0]).prop_map(|p| Exponent::new(p).unwrap())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p_norm_zero_iff_all_zero(f in step_fn(), p in exponent()) {
        let n = p_norm(&f, p);
        prop_assert!(n >= 0.0);
        prop_assert_eq!(n == 0.0, f.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unweighted_integral_is_p_norm(f in step_fn(), p in exponent()) {
        let poly = PiecewisePoly::from_step(&f);
        let i = integrate_weighted_power(&poly, 0.0, p, 16).unwrap();
        prop_assert!(close(i, p_norm(&f, p), 1e-12));
    }

    #[test]
    fn doubling_order_stays_inside_estimate(f in nonzero_step_fn(), p in exponent()) {
        for (poly, alpha) in [(cumulative(&f), -p.value()), (double_cumulative(&f), -2.0 * p.value())] {
            let lo = integrate_weighted_power_estimate(&poly, alpha, p, 16).unwrap();
            let hi = integrate_weighted_power(&poly, alpha, p, 32).unwrap();
            prop_assert!((hi - lo.value).abs() <= lo.refinement_estimate, "{} {} {}", hi, lo.value, lo.refinement_estimate);
        }
    }

    #[test]
    fn csv_round_trip(f in step_fn()) {
        let back = step_function_from_csv(step_function_to_csv(&f).as_bytes()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn rearrangement_invariants(f in step_fn(), p in exponent()) {
        let star = decreasing_rearrangement(&f);
        let fs = star.function();
        prop_assert!(close(p_norm(fs, p), p_norm(&f, p), 1e-12));
        let again = decreasing_rearrangement(fs);
        prop_assert_eq!(again.function(), fs);
        for &v in f.values() {
            for level in [v.abs() * (1.0 - f64::EPSILON), v.abs(), v.abs() * (1.0 + f64::EPSILON)] {
                prop_assert!(close(distribution_function(&f, level), distribution_function(fs, level), 1e-12));
            }
        }
        for &s in f.grid().merged(fs.grid()).edges() {
            let (l, r) = check_partial_domination(&f, s);
            prop_assert!(l <= r * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn supmin_on_rearrangement_is_the_average(f in step_fn(), t in 0.001f64..1.3) {
        let star = decreasing_rearrangement(&f).into_function();
        let r = t * star.support_end();
        let m = supmin_transform(&star, r).unwrap();
        let avg = cumulative(&star).eval(r);
        prop_assert!(close(r * m, avg, 1e-12));
        let trace = SupMinProfile::new(&star).candidate_trace(r);
        let best = trace.iter().map(|c| c.value).fold(0.0, f64::max);
        prop_assert!(close(trace[0].value, best, 1e-12));
        prop_assert_eq!(trace[0].s, r);
    }

    #[test]
    fn integrated_lemma_on_rearrangement(f in step_fn(), t in 0.001f64..1.5) {
        let star = decreasing_rearrangement(&f).into_function();
        let r = t * star.support_end();
        let lhs = rellich_middle_profile(&star).eval(r);
        let rhs = double_cumulative(&star).eval(r);
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn supmin_dominates_average(f in step_fn(), t in 0.001f64..1.5) {
        let r = t * f.support_end();
        let m = supmin_transform(&f, r).unwrap();
        prop_assert!(m >= (cumulative(&f).eval(r) / r).abs() * (1.0 - 1e-15));
    }

    #[test]
    fn supmin_scaling_covariance(f in step_fn(), t in 0.001f64..1.5, lambda in 0.1f64..10.0) {
        // f_λ(t) = λ f(λ t) has F_λ(s) = F(λ s), so M f_λ(r) = λ M f(λ r);
        // the plain dilation f(λ t) satisfies M f(λ·)(r) = M f(λ r)
        let edges: Vec<f64> = f.edges().iter().map(|e| e / lambda).collect();
        let vals: Vec<f64> = f.values().iter().map(|v| lambda * v).collect();
        let fl = StepFunction::from_edges(edges.clone(), vals).unwrap();
        let plain = StepFunction::from_edges(edges, f.values().to_vec()).unwrap();
        let r = t * fl.support_end();
        let b = supmin_transform(&f, lambda * r).unwrap();
        prop_assert!(close(supmin_transform(&fl, r).unwrap(), lambda * b, 1e-12));
        prop_assert!(close(supmin_transform(&plain, r).unwrap(), b, 1e-12));
    }

    #[test]
    fn pointwise_identity(f in step_fn(), t in 0.001f64..1.5, p in exponent()) {
        let (a, b) = supmin_pointwise_identity_check(&f, t * f.support_end(), p).unwrap();
        prop_assert!(close(a, b, 1e-12));
    }

    #[test]
    fn ratios_respect_sharp_constants(f in nonzero_step_fn(), p in exponent()) {
        let ev = Evaluator::default();
        for kind in Kind::ALL {
            if kind.requires_p2() && p.value() != 2.0 {
                continue;
            }
            let rep = ev.ratio(kind, &f, p).unwrap();
            prop_assert!(rep.satisfies(1e-6), "{:?}: {:?}", kind, rep.violations(1e-6));
            prop_assert_eq!(rep.sharp, sharp_constant(kind, p).unwrap());
        }
    }

    #[test]
    fn classical_never_beats_improved(f in nonzero_step_fn(), p in exponent()) {
        let rep = Evaluator::default().new_hardy_ratio(&f, p).unwrap();
        prop_assert!(rep.classical_numerator.unwrap() <= rep.numerator * (1.0 + 1e-12));
    }

    #[test]
    fn decreasing_inputs_have_no_improvement(f in nonzero_step_fn(), p in exponent()) {
        let star = decreasing_rearrangement(&f).into_function();
        let rep = Evaluator::default().new_hardy_ratio(&star, p).unwrap();
        prop_assert!(close(rep.classical_numerator.unwrap(), rep.numerator, 1e-10));
    }

    #[test]
    fn homogeneity(f in nonzero_step_fn(), p in exponent(), c in prop::sample::select(vec![-3.5, -1.0, 0.02, 7.0])) {
        let ev = Evaluator::default();
        let g = f.scaled(c);
        for kind in [Kind::Hardy, Kind::NewHardy, Kind::RellichP, Kind::RellichChain] {
            let a = ev.ratio(kind, &f, p).unwrap();
            let b = ev.ratio(kind, &g, p).unwrap();
            prop_assert!(close(a.ratio, b.ratio, 1e-12), "{:?}", kind);
        }
    }

    #[test]
    fn dilation_invariance(f in nonzero_step_fn(), p in exponent(), lambda in 0.01f64..100.0) {
        let ev = Evaluator::default();
        let g = f.dilated(lambda, p).unwrap();
        for kind in [Kind::Hardy, Kind::NewHardy, Kind::RellichP, Kind::RellichChain] {
            let a = ev.ratio(kind, &f, p).unwrap();
            let b = ev.ratio(kind, &g, p).unwrap();
            prop_assert!(close(a.ratio, b.ratio, 1e-9), "{:?}", kind);
            if let (Some(x), Some(y)) = (a.middle, b.middle) {
                prop_assert!(close(x / a.denominator, y / b.denominator, 1e-9));
            }
        }
    }

    #[test]
    fn supmin_comparison_with_rearrangement(f in step_fn(), p in exponent()) {
        let (l, r) = weighted_supmin_check(&f, p).unwrap();
        prop_assert!(l <= r * (1.0 + 1e-6) + 1e-300);
    }

    #[test]
    fn corollary_int_matches_supmin_numerator(f in nonzero_step_fn(), p in exponent()) {
        let (l, r) = corollary_int_check(&f, p).unwrap();
        let num = Evaluator::default().new_hardy_ratio(&f, p).unwrap().numerator;
        prop_assert!(close(l, num, 1e-8), "{} vs {}", l, num);
        prop_assert!(l <= r * (1.0 + 1e-6));
    }

    #[test]
    fn cutoff_bounds(r in 0.0f64..5.0, s in 0.0f64..5.0) {
        for spec in [CutoffSpec::QuinticSmoothstep, CutoffSpec::Linear] {
            let (a, b) = (cutoff_value(spec, r).unwrap(), cutoff_value(spec, s).unwrap());
            prop_assert!((0.0..=1.0).contains(&a));
            if r <= s {
                prop_assert!(a >= b);
            }
        }
    }
}
