use cstar_ideal::{AlgebraDescriptor, AlgebraElement, Scalars, ToleranceProfile};
use num_complex::Complex64;
use proptest::prelude::*;

fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

fn entry() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn real_matrix(dim: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(entry(), dim * dim).prop_map(move |v| {
        let d = AlgebraDescriptor::Matrix {
            dim,
            scalars: Scalars::Real,
        };
        AlgebraElement::new(d, v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()).unwrap()
    })
}

fn complex_matrix(dim: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((entry(), entry()), dim * dim).prop_map(move |v| {
        let d = AlgebraDescriptor::Matrix {
            dim,
            scalars: Scalars::Complex,
        };
        AlgebraElement::new(
            d,
            v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
        )
        .unwrap()
    })
}

fn function64() -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec((entry(), entry()), 64).prop_map(|v| {
        AlgebraElement::function(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
            .unwrap()
    })
}

fn any_element() -> impl Strategy<Value = AlgebraElement> {
    prop_oneof![
        real_matrix(2),
        complex_matrix(2),
        real_matrix(4),
        complex_matrix(4),
        function64()
    ]
}

/// Three elements of one algebra.
fn triple() -> impl Strategy<Value = (AlgebraElement, AlgebraElement, AlgebraElement)> {
    prop_oneof![
        (real_matrix(2), real_matrix(2), real_matrix(2)),
        (complex_matrix(2), complex_matrix(2), complex_matrix(2)),
        (real_matrix(4), real_matrix(4), real_matrix(4)),
        (complex_matrix(4), complex_matrix(4), complex_matrix(4)),
        (function64(), function64(), function64()),
    ]
}

fn star_square(a: &AlgebraElement) -> AlgebraElement {
    a.involution().mul(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn c_star_identity(a in any_element()) {
        let n = a.op_norm().unwrap();
        let lhs = star_square(&a).op_norm().unwrap();
        prop_assert!((lhs - n * n).abs() <= 1e-10 * (1.0 + n * n), "{lhs} vs {}", n * n);
    }

    #[test]
    fn involution_preserves_norm(a in any_element()) {
        let n = a.op_norm().unwrap();
        let m = a.involution().op_norm().unwrap();
        prop_assert!((n - m).abs() <= 1e-10 * (1.0 + n));
    }

    #[test]
    fn involution_is_an_antihomomorphism((a, b, _) in triple()) {
        prop_assert_eq!(a.involution().involution(), a.clone());
        let lhs = a.mul(&b).unwrap().involution();
        let rhs = b.involution().mul(&a.involution()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * (1.0 + lhs.max_abs_entry()));
    }

    #[test]
    fn star_squares_are_positive(a in any_element()) {
        prop_assert!(star_square(&a).is_positive(&tol()).unwrap());
    }

    #[test]
    fn order_survives_conjugation((h, x, c) in triple()) {
        // a self-adjoint, b = a + x*x, so a ⪯ b
        let a = h.hermitian_part();
        let b = a.add(&star_square(&x)).unwrap();
        prop_assert!(a.precedes(&b, &tol()).unwrap());
        let cs = c.involution();
        let lhs = cs.mul(&a).unwrap().mul(&c).unwrap();
        let rhs = cs.mul(&b).unwrap().mul(&c).unwrap();
        prop_assert!(lhs.precedes(&rhs, &tol()).unwrap());
    }

    #[test]
    fn norm_is_monotone_on_positives((x, y, _) in triple()) {
        let a = star_square(&x);
        let b = a.add(&star_square(&y)).unwrap();
        prop_assert!(a.zero_like().precedes(&a, &tol()).unwrap());
        prop_assert!(a.precedes(&b, &tol()).unwrap());
        let (na, nb) = (a.op_norm().unwrap(), b.op_norm().unwrap());
        prop_assert!(na <= nb + 1e-10 * (1.0 + nb), "{na} > {nb}");
    }
}

trait ZeroLike {
    fn zero_like(&self) -> AlgebraElement;
}

impl ZeroLike for AlgebraElement {
    fn zero_like(&self) -> AlgebraElement {
        self.descriptor().zero()
    }
}

/// Roots of `λ² − (a + d)λ + (ad − b²)` for a symmetric `[[a, b], [b, d]]`.
fn symmetric_roots(a: f64, b: f64, d: f64) -> (f64, f64) {
    let mid = (a + d) / 2.0;
    let r = (((a - d) / 2.0).powi(2) + b * b).sqrt();
    (mid - r, mid + r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn symmetric_2x2_spectrum_matches_quadratic(a in entry(), b in entry(), d in entry()) {
        let m = AlgebraElement::real_matrix(&[vec![a, b], vec![b, d]]).unwrap();
        let s = m.spectrum(&tol()).unwrap();
        let (lo, hi) = symmetric_roots(a, b, d);
        prop_assert!(s.all_real());
        prop_assert!((s.min_real() - lo).abs() <= 1e-10);
        prop_assert!((s.max_real() - hi).abs() <= 1e-10);
    }

    #[test]
    fn hermitian_2x2_spectrum_matches_quadratic(a in entry(), d in entry(), br in entry(), bi in entry()) {
        let b = Complex64::new(br, bi);
        let m = AlgebraElement::complex_matrix(&[
            vec![Complex64::new(a, 0.0), b],
            vec![b.conj(), Complex64::new(d, 0.0)],
        ]).unwrap();
        let s = m.spectrum(&tol()).unwrap();
        let (lo, hi) = symmetric_roots(a, b.norm(), d);
        prop_assert!((s.min_real() - lo).abs() <= 1e-10);
        prop_assert!((s.max_real() - hi).abs() <= 1e-10);
    }
}

#[test]
fn operator_norm_examples() {
    let nil = AlgebraElement::real_matrix(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
    assert_eq!(nil.op_norm().unwrap(), 1.0);
    assert_eq!(
        AlgebraElement::real_diag(&[1.0, 2.0])
            .unwrap()
            .op_norm()
            .unwrap(),
        2.0
    );
    assert_eq!(
        AlgebraElement::constant_function(9, 2.0)
            .unwrap()
            .op_norm()
            .unwrap(),
        2.0
    );
    assert!(star_square(&nil).is_positive(&tol()).unwrap());
    let indefinite = AlgebraElement::real_matrix(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(!indefinite.is_positive(&tol()).unwrap());
}
