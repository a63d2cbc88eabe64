use cstar_ideal::{
    a_epsilon_set, block_min_at_least, candidate_centers, cauchy_criteria_cross_check,
    counterexample_audit, default_probes, default_weight, i_cauchy_def_verdict,
    i_cauchy_ek_verdict, i_cauchy_pair_verdict, i_convergence_verdict, i_star_cauchy_verdict,
    implication_audit, istar_witness_from_ap, make_diag_metric, make_discrete_metric,
    make_reciprocal_function_metric, make_scaled_function_metric, membership, BlockSet, Center,
    CstarMetric, Decision, Error, GridCell, IdealDescriptor, SequenceScenario, SetDescription,
    TailCertificate, ToleranceProfile, VerdictBundle, Window,
};
use proptest::prelude::*;

const N: usize = 10_000;

fn scaled() -> CstarMetric {
    make_scaled_function_metric(default_weight()).unwrap()
}

fn reciprocal() -> CstarMetric {
    make_reciprocal_function_metric(default_weight(), ToleranceProfile::default()).unwrap()
}

fn members(w: &Window) -> Vec<u64> {
    w.iter().collect()
}

/// Brute-force block index.
fn block_of(mut n: u64) -> u64 {
    let mut j = 1;
    while n.is_multiple_of(2) {
        n /= 2;
        j += 1;
    }
    j
}

/// Re-derives a decided verdict from the witness tail alone.
fn assert_sound(bundle: &VerdictBundle, ideal: &IdealDescriptor) {
    let w = bundle.witness.as_ref().expect("witness");
    let bare = SetDescription::new(Window::empty(w.window_size()), w.tail.clone());
    assert_eq!(membership(ideal, &bare).decision, bundle.decision());
}

#[test]
fn a_epsilon_examples() {
    let h = SequenceScenario::harmonic();
    let diag = make_diag_metric(0.5).unwrap();
    let a = a_epsilon_set(&h, &diag, Center::Index(11), 0.1, 1000).unwrap();
    let brute: Vec<u64> = (1..=1000u64)
        .filter(|&n| (1.0 / n as f64 - 1.0 / 11.0).abs() >= 0.1)
        .collect();
    assert_eq!(members(&a.window), brute);
    assert_eq!(brute, vec![1, 2, 3, 4, 5]);
    assert_eq!(a.tail, TailCertificate::Finite);

    let c = SequenceScenario::constant(1.5);
    for m in [diag.clone(), scaled(), make_discrete_metric()] {
        let a = a_epsilon_set(&c, &m, Center::Point(1.5), 0.3, N).unwrap();
        assert!(a.window.is_empty() && a.tail == TailCertificate::Finite);
    }

    let b = SequenceScenario::block_harmonic();
    let a = a_epsilon_set(&b, &scaled(), Center::Point(0.0), 0.5, N).unwrap();
    let brute: Vec<u64> = (1..=N as u64)
        .filter(|&n| 2.0 / block_of(n) as f64 >= 0.5)
        .collect();
    assert_eq!(members(&a.window), brute);
    assert!(brute.iter().all(|&n| block_of(n) <= 4));
    assert_eq!(
        a.tail,
        TailCertificate::BlockBounded(BlockSet::from([1, 2, 3, 4]))
    );
}

#[test]
fn i_convergence_examples() {
    let fin = IdealDescriptor::fin();
    let diag = make_diag_metric(0.5).unwrap();
    let b =
        i_convergence_verdict(&SequenceScenario::harmonic(), &diag, 0.0, &fin, 0.01, N).unwrap();
    assert_eq!(b.decision(), Decision::In);
    assert_eq!(
        members(&b.witness.as_ref().unwrap().window),
        (1..=100).collect::<Vec<_>>()
    );
    assert_sound(&b, &fin);

    for ideal in [
        fin,
        IdealDescriptor::density_zero(),
        IdealDescriptor::block(),
    ] {
        for eps in [1.0, 0.1, 1e-6] {
            let b = i_convergence_verdict(
                &SequenceScenario::constant(-2.0),
                &scaled(),
                -2.0,
                &ideal,
                eps,
                N,
            )
            .unwrap();
            assert_eq!(b.decision(), Decision::In);
        }
    }

    let block = IdealDescriptor::block();
    let b = i_convergence_verdict(
        &SequenceScenario::block_harmonic(),
        &scaled(),
        0.0,
        &block,
        0.2,
        N,
    )
    .unwrap();
    assert_eq!(b.decision(), Decision::In);
    assert_eq!(
        b.witness.as_ref().unwrap().tail,
        TailCertificate::BlockBounded((1..=10).collect())
    );
    assert_sound(&b, &block);
}

#[test]
fn definition_verdict_examples() {
    let fin = IdealDescriptor::fin();
    let h = SequenceScenario::harmonic();
    let b = i_cauchy_def_verdict(&h, &make_diag_metric(0.5).unwrap(), &fin, 0.1, N).unwrap();
    assert_eq!(b.decision(), Decision::In);
    assert_eq!(b.witness_index, Some(11));
    assert_eq!(
        members(&b.witness.as_ref().unwrap().window),
        vec![1, 2, 3, 4, 5]
    );
    assert_sound(&b, &fin);

    let b = i_cauchy_def_verdict(&h, &reciprocal(), &fin, 0.1, N).unwrap();
    assert_eq!(b.decision(), Decision::NotIn);

    let block = IdealDescriptor::block();
    let b = i_cauchy_def_verdict(
        &SequenceScenario::block_harmonic(),
        &scaled(),
        &block,
        0.2,
        N,
    )
    .unwrap();
    assert_eq!(b.decision(), Decision::In);
    assert_sound(&b, &block);
}

#[test]
fn reciprocal_centers_are_all_cofinite() {
    let h = SequenceScenario::harmonic();
    let m = reciprocal();
    for eps in [0.1, 0.5, 1.0] {
        let centers = candidate_centers(&h, &m, eps, N);
        assert!(!centers.is_empty());
        for c in centers {
            let Center::Index(n0) = c else {
                panic!("harmonic centers are indices")
            };
            let a = a_epsilon_set(&h, &m, c, eps, N).unwrap();
            assert_eq!(a.tail, TailCertificate::Cofinite, "n₀={n0}, ε={eps}");
            // every other index is ε-far: 2 / |1/n − 1/n₀| ≥ 2
            assert_eq!(
                members(&a.window),
                (1..=N as u64).filter(|&n| n != n0).collect::<Vec<_>>()
            );
        }
    }
}

#[test]
fn pair_verdict_examples() {
    let block = IdealDescriptor::block();
    let b = i_cauchy_pair_verdict(
        &SequenceScenario::block_harmonic(),
        &scaled(),
        &block,
        0.2,
        N,
    )
    .unwrap();
    assert_eq!(b.decision(), Decision::In);
    let d = b.witness.as_ref().unwrap();
    assert_eq!(d.tail, TailCertificate::BlockBounded((1..=21).collect()));
    assert_eq!(
        members(&d.window),
        (1..=N as u64)
            .filter(|&n| block_of(n) <= 21)
            .collect::<Vec<_>>()
    );

    let fin = IdealDescriptor::fin();
    let b =
        i_cauchy_pair_verdict(&SequenceScenario::constant(0.25), &scaled(), &fin, 0.1, N).unwrap();
    assert_eq!(b.decision(), Decision::In);
    let d = b.witness.as_ref().unwrap();
    assert!(d.window.is_empty() && d.tail == TailCertificate::Finite);

    let diag = make_diag_metric(0.5).unwrap();
    let b = i_cauchy_pair_verdict(&SequenceScenario::harmonic(), &diag, &fin, 0.1, N).unwrap();
    assert_eq!(b.decision(), Decision::In);
    let d = b.witness.as_ref().unwrap();
    assert_eq!(d.tail, TailCertificate::Finite);
    // brute force: every pair off D stays within ε
    let off: Vec<f64> = (1..=N as u64)
        .filter(|&n| !d.window.contains(n))
        .map(|n| 1.0 / n as f64)
        .collect();
    let spread =
        off.iter().cloned().fold(f64::MIN, f64::max) - off.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 0.1);
}

#[test]
fn ek_verdict_examples() {
    let fin = IdealDescriptor::fin();
    let h = SequenceScenario::harmonic();
    let b = i_cauchy_ek_verdict(&h, &make_diag_metric(0.5).unwrap(), &fin, 0.1, N).unwrap();
    assert_eq!(b.decision(), Decision::In);
    let b = i_cauchy_ek_verdict(&h, &reciprocal(), &fin, 0.1, N).unwrap();
    assert_eq!(b.decision(), Decision::NotIn);
    assert_eq!(b.witness.as_ref().unwrap().tail, TailCertificate::Cofinite);
    let b = i_cauchy_ek_verdict(&SequenceScenario::constant(3.0), &scaled(), &fin, 0.1, N).unwrap();
    assert_eq!(b.decision(), Decision::In);
    let k = b.witness.as_ref().unwrap();
    assert!(k.window.is_empty() && k.tail == TailCertificate::Finite);
}

#[test]
fn cross_check_examples() {
    let fin = IdealDescriptor::fin();
    let h = SequenceScenario::harmonic();
    let r = cauchy_criteria_cross_check(&h, &make_diag_metric(0.5).unwrap(), &fin, &[0.1, 0.01], N)
        .unwrap();
    assert_eq!(r.conflicts, 0);
    assert!(r
        .rows
        .iter()
        .all(|x| (x.def, x.pair, x.ek) == (Decision::In, Decision::In, Decision::In)));

    let r = cauchy_criteria_cross_check(&h, &reciprocal(), &fin, &[0.1, 0.5, 1.0], N).unwrap();
    assert_eq!(r.conflicts, 0);
    assert!(r
        .rows
        .iter()
        .all(|x| (x.def, x.pair, x.ek) == (Decision::NotIn, Decision::NotIn, Decision::NotIn)));

    let block = IdealDescriptor::block();
    let r = cauchy_criteria_cross_check(
        &SequenceScenario::block_harmonic(),
        &scaled(),
        &block,
        &[1.0, 0.2, 0.01],
        N,
    )
    .unwrap();
    assert_eq!(r.conflicts, 0);
    assert!(r
        .rows
        .iter()
        .all(|x| (x.def, x.pair, x.ek) == (Decision::In, Decision::In, Decision::In)));
}

#[test]
fn i_star_examples() {
    let fin = IdealDescriptor::fin();
    let all = SetDescription::naturals(N);
    let b = i_star_cauchy_verdict(
        &SequenceScenario::harmonic(),
        &make_diag_metric(0.5).unwrap(),
        &fin,
        &all,
        0.1,
        N,
    )
    .unwrap();
    assert_eq!(b.decision(), Decision::In);

    let block = IdealDescriptor::block();
    let m = SetDescription::block_union(N, &BlockSet::from([1, 2])).complement();
    let b = i_star_cauchy_verdict(
        &SequenceScenario::block_harmonic(),
        &scaled(),
        &block,
        &m,
        2.0 / 36.0,
        N,
    )
    .unwrap();
    assert_eq!(b.decision(), Decision::NotIn);
    assert!((b.gap.unwrap() - 2.0 / 12.0).abs() <= 1e-12 * (2.0 / 12.0));

    for ideal in [fin, IdealDescriptor::density_zero(), block] {
        let b = i_star_cauchy_verdict(
            &SequenceScenario::constant(7.0),
            &scaled(),
            &ideal,
            &all,
            1e-3,
            N,
        )
        .unwrap();
        assert_eq!(b.decision(), Decision::In);
    }
}

#[test]
fn ap_witness_examples() {
    let fin = IdealDescriptor::fin();
    let probes = default_probes(10);
    let r = istar_witness_from_ap(
        &SequenceScenario::harmonic(),
        &make_diag_metric(0.5).unwrap(),
        &fin,
        &probes,
        N,
    )
    .unwrap();
    assert_eq!(r.witness, SetDescription::naturals(N));
    assert!(r.all_in());

    let r = istar_witness_from_ap(
        &SequenceScenario::constant(1.0),
        &scaled(),
        &fin,
        &probes,
        N,
    )
    .unwrap();
    assert_eq!(r.witness, SetDescription::naturals(N));
    assert!(r.all_in());

    let e = istar_witness_from_ap(
        &SequenceScenario::block_harmonic(),
        &scaled(),
        &IdealDescriptor::block(),
        &probes,
        N,
    );
    assert!(matches!(e, Err(Error::Unsupported(_))));
}

#[test]
fn counterexample_examples() {
    let r = counterexample_audit(3, 1 << 13, &default_weight()).unwrap();
    assert!(r.pass);
    let l1 = &r.rows[0];
    assert!(
        (l1.expected_gap - 1.0 / 3.0).abs() < 1e-15 && (l1.epsilon0 - 2.0 / 18.0).abs() < 1e-15
    );
    let l3 = &r.rows[2];
    assert!((l3.expected_gap - 0.1).abs() < 1e-15 && (l3.epsilon0 - 2.0 / 60.0).abs() < 1e-15);

    // l = 1, cut 1000: witnesses below 8192 in Δ₂ and Δ₃
    let m = block_min_at_least(2, 1000);
    let n = block_min_at_least(3, 1000);
    assert!(m >= 1000 && n >= 1000 && m <= 8192 && n <= 8192);
    assert_eq!((block_of(m), block_of(n)), (2, 3));

    assert!(matches!(
        counterexample_audit(10, 4095, &default_weight()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn implication_examples() {
    let cells = vec![
        GridCell {
            scenario: SequenceScenario::harmonic(),
            metric: make_diag_metric(0.5).unwrap(),
            ideal: IdealDescriptor::fin(),
        },
        GridCell {
            scenario: SequenceScenario::block_harmonic(),
            metric: scaled(),
            ideal: IdealDescriptor::block(),
        },
        GridCell {
            scenario: SequenceScenario::constant(2.0),
            metric: make_discrete_metric(),
            ideal: IdealDescriptor::fin(),
        },
    ];
    let r = implication_audit(&cells, &[0.1], N).unwrap();
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    assert!(r.checks > 0);
    let h = &r.rows[0];
    assert_eq!(
        (h.i_conv, h.i_cauchy_def),
        (Some(Decision::In), Decision::In)
    );
    let b = &r.rows[1];
    assert_eq!(b.i_cauchy_pair, Decision::In);
    assert_ne!(b.i_star_cauchy, Decision::In);
    let c = &r.rows[2];
    assert_eq!(
        (
            c.i_conv,
            c.i_cauchy_def,
            c.i_cauchy_pair,
            c.i_cauchy_ek,
            c.i_star_cauchy,
            c.i_star_conv
        ),
        (
            Some(Decision::In),
            Decision::In,
            Decision::In,
            Decision::In,
            Decision::In,
            Some(Decision::In)
        )
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn a_epsilon_window_shrinks_as_epsilon_grows(
        lo in 0.001..1.0f64,
        factor in 1.0..10.0f64,
        center in 1u64..200,
        which in 0usize..4,
    ) {
        let s = [
            SequenceScenario::harmonic(),
            SequenceScenario::block_harmonic(),
            SequenceScenario::alternating(),
            SequenceScenario::constant(0.5),
        ][which].clone();
        for m in [make_diag_metric(2.0).unwrap(), scaled(), make_discrete_metric(), reciprocal()] {
            let small = a_epsilon_set(&s, &m, Center::Index(center), lo, 512).unwrap();
            let big = a_epsilon_set(&s, &m, Center::Index(center), lo * factor, 512).unwrap();
            prop_assert!(big.window.is_subset(&small.window));
        }
    }
}

#[test]
fn far_block_centers_are_given_by_class() {
    // 2/j < 0.01 first holds at j = 201, far past any window index
    let s = SequenceScenario::block_harmonic();
    let centers = candidate_centers(&s, &scaled(), 0.01, N);
    assert_eq!(centers[0], Center::Class(201));
    let block = IdealDescriptor::block();
    let b = i_cauchy_def_verdict(&s, &scaled(), &block, 0.01, N).unwrap();
    assert_eq!(b.decision(), Decision::In);
    assert_eq!(b.witness_index, None);
    assert!(b.trace.iter().any(|t| t.contains("class 201")));
}
