use cstar_ideal::{
    default_weight, distance_norm, induce_metric, make_diag_metric, make_discrete_metric,
    make_reciprocal_function_metric, make_scaled_diag_norm, make_scaled_function_metric,
    verify_axioms, AlgebraElement, CstarMetric, ToleranceProfile,
};
use proptest::prelude::*;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

/// Metrics expected to satisfy all three axioms.
fn true_metrics() -> Vec<CstarMetric> {
    vec![
        make_diag_metric(0.5).unwrap(),
        make_diag_metric(2.0).unwrap(),
        make_scaled_function_metric(default_weight()).unwrap(),
        make_scaled_function_metric(AlgebraElement::real_function(&[0.5, 3.0, 1.25, 0.0]).unwrap())
            .unwrap(),
        make_discrete_metric(),
        induce_metric(&make_scaled_diag_norm(1.0, 2.0).unwrap()).unwrap(),
    ]
}

fn all_metrics() -> Vec<CstarMetric> {
    let mut v = true_metrics();
    v.push(make_reciprocal_function_metric(default_weight(), tol()).unwrap());
    v
}

/// Independent closed forms of `‖d(x, y)‖`.
fn oracle(name: &str, x: f64, y: f64) -> f64 {
    let g = (x - y).abs();
    if x == y {
        return 0.0;
    }
    match name {
        "diag(alpha=0.5)" => g,
        "diag(alpha=2)" => 2.0 * g,
        "scaled(‖f‖=2)" => 2.0 * g,
        "scaled(‖f‖=3)" => 3.0 * g,
        "discrete" => 1.0,
        "induced:scaled-diag(1,2)" => 2.0 * g,
        "reciprocal(‖f‖=2)" => 2.0 / g,
        other => panic!("no oracle for {other}"),
    }
}

fn point() -> impl Strategy<Value = f64> {
    -50.0..50.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_forms_match_operator_norm(x in point(), y in point()) {
        for m in all_metrics() {
            let v = distance_norm(&m, x, y).unwrap();
            let o = oracle(m.name(), x, y);
            prop_assert!((v - o).abs() <= 1e-10 * (1.0 + o), "{}: {v} vs {o}", m.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn distance_norm_is_symmetric(x in point(), y in point()) {
        for m in all_metrics() {
            prop_assert_eq!(distance_norm(&m, x, y).unwrap(), distance_norm(&m, y, x).unwrap());
        }
    }

    #[test]
    fn norm_triangle_inequality(x in point(), y in point(), z in point()) {
        for m in true_metrics() {
            let lhs = distance_norm(&m, x, y).unwrap();
            let rhs = distance_norm(&m, x, z).unwrap() + distance_norm(&m, z, y).unwrap();
            prop_assert!(lhs <= rhs + 1e-10 * (1.0 + rhs), "{}", m.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn built_in_metrics_pass_axioms(samples in prop::collection::vec(point(), 3..7)) {
        for m in true_metrics() {
            let r = verify_axioms(&m, &samples, &tol()).unwrap();
            prop_assert!(r.all_pass(), "{r:?}");
            prop_assert!(r.worst_violation <= r.tolerance);
        }
    }
}

#[test]
fn reciprocal_metric_is_positive_and_symmetric_on_samples() {
    let m = make_reciprocal_function_metric(default_weight(), tol()).unwrap();
    let r = verify_axioms(&m, &[0.1, 0.2, 0.25, 1.0 / 3.0, 0.5, 1.0], &tol()).unwrap();
    assert!(r.axiom_i_pass && r.axiom_ii_pass);
    // reported pass flags agree with the worst violation seen
    assert_eq!(r.all_pass(), r.worst_violation <= r.tolerance);
}
