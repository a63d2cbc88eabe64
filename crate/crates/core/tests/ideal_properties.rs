use cstar_ideal::{
    block_elements, block_index, filter_membership, membership, BlockSet, Decision,
    IdealDescriptor, SetDescription, TailCertificate, Window,
};
use proptest::prelude::*;

const N: usize = 96;

fn ideals() -> [IdealDescriptor; 3] {
    [
        IdealDescriptor::fin(),
        IdealDescriptor::density_zero(),
        IdealDescriptor::block(),
    ]
}

fn block_set() -> impl Strategy<Value = BlockSet> {
    prop::collection::btree_set(1u32..12, 1..4)
}

fn tail() -> impl Strategy<Value = TailCertificate> {
    prop_oneof![
        Just(TailCertificate::Finite),
        Just(TailCertificate::Cofinite),
        block_set().prop_map(TailCertificate::BlockBounded),
        block_set().prop_map(TailCertificate::CoBlockBounded),
        Just(TailCertificate::BlockUnbounded),
        Just(TailCertificate::UnknownTail),
    ]
}

fn description() -> impl Strategy<Value = SetDescription> {
    (prop::collection::vec(any::<bool>(), N), tail()).prop_map(|(bits, tail)| {
        let window = Window::from_predicate(N, |n| bits[n as usize - 1]);
        SetDescription::new(window, tail)
    })
}

/// Block index by repeated halving.
fn halving_block(mut n: u64) -> u32 {
    let mut j = 1;
    while n.is_multiple_of(2) {
        n /= 2;
        j += 1;
    }
    j
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn block_index_matches_halving(n in 1u64..1_000_000) {
        prop_assert_eq!(block_index(n).unwrap(), halving_block(n));
    }

    #[test]
    fn block_elements_are_exactly_the_block(j in 1u32..8) {
        let b = block_elements(j, N).unwrap();
        for n in 1..=N as u64 {
            prop_assert_eq!(b.window.contains(n), halving_block(n) == j);
        }
    }

    #[test]
    fn filter_is_dual_to_membership(s in description()) {
        for ideal in ideals() {
            let f = filter_membership(&ideal, &s).decision;
            let c = s.complement();
            if c.tail == TailCertificate::UnknownTail {
                prop_assert_eq!(f, Decision::Unknown);
            } else {
                prop_assert_eq!(f, membership(&ideal, &c).decision);
            }
        }
    }

    #[test]
    fn set_and_complement_are_never_both_in(s in description()) {
        for ideal in ideals() {
            let a = membership(&ideal, &s).decision;
            let b = membership(&ideal, &s.complement()).decision;
            prop_assert!(!(a == Decision::In && b == Decision::In), "{ideal}: {s}");
        }
    }

    #[test]
    fn unions_of_members_are_members(a in description(), b in description()) {
        for ideal in ideals() {
            if membership(&ideal, &a).is_in() && membership(&ideal, &b).is_in() {
                let u = a.union(&b).unwrap();
                prop_assert_eq!(membership(&ideal, &u).decision, Decision::In);
            }
        }
    }

    #[test]
    fn subsets_of_members_are_not_rejected(a in description(), b in description()) {
        // a ∩ b ⊆ a
        let sub = a.intersection(&b).unwrap();
        for ideal in ideals() {
            if membership(&ideal, &a).is_in() {
                prop_assert_ne!(membership(&ideal, &sub).decision, Decision::NotIn);
            }
        }
    }

    #[test]
    fn fin_members_are_members_everywhere(s in description()) {
        if membership(&IdealDescriptor::fin(), &s).is_in() {
            for ideal in ideals() {
                prop_assert_eq!(membership(&ideal, &s).decision, Decision::In);
            }
        }
    }

    #[test]
    fn exact_complement_is_an_involution(s in description()) {
        if s.tail.is_exact() {
            prop_assert_eq!(s.complement().complement(), s);
        }
    }

    #[test]
    fn window_operations_match_pointwise(a in description(), b in description()) {
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        let d = a.symmetric_difference(&b).unwrap();
        for n in 1..=N as u64 {
            let (x, y) = (a.window.contains(n), b.window.contains(n));
            prop_assert_eq!(u.window.contains(n), x || y);
            prop_assert_eq!(i.window.contains(n), x && y);
            prop_assert_eq!(d.window.contains(n), x != y);
        }
    }
}

#[test]
fn admissible_and_nontrivial() {
    for ideal in ideals() {
        for n in [1, 7, N as u64] {
            let single = SetDescription::finite(N, [n]).unwrap();
            assert_eq!(membership(&ideal, &single).decision, Decision::In);
        }
        assert_eq!(
            membership(&ideal, &SetDescription::naturals(N)).decision,
            Decision::NotIn
        );
    }
}

#[test]
fn membership_examples() {
    let fin = IdealDescriptor::fin();
    let block = IdealDescriptor::block();
    let small = SetDescription::finite(N, [1, 2, 3]).unwrap();
    assert_eq!(membership(&fin, &small).decision, Decision::In);
    let d12 = SetDescription::block_union(N, &BlockSet::from([1, 2]));
    assert_eq!(membership(&block, &d12).decision, Decision::In);
    assert_eq!(membership(&fin, &d12).decision, Decision::NotIn);
    let co11 = SetDescription::cofinite(N, [11]).unwrap();
    assert_eq!(membership(&fin, &co11).decision, Decision::NotIn);
    assert_eq!(
        filter_membership(&block, &d12.complement()).decision,
        Decision::In
    );
}
