mod common;

use common::clmul_mod;
use ffd_core::field::{field_arith, Embedding, Fe, FieldOp, MAX_LEVEL};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = (u8, u32, u32, u32)> {
    (1..=MAX_LEVEL).prop_flat_map(|m| {
        let top = (1u32 << m) - 1;
        (Just(m), 0..=top, 0..=top, 0..=top)
    })
}

proptest! {
    #[test]
    fn ring_axioms((m, a, b, e) in element()) {
        let (a, b, e) = (Fe::new(a, m), Fe::new(b, m), Fe::new(e, m));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a * b) * e, a * (b * e));
        prop_assert_eq!(a * (b + e), a * b + a * e);
        prop_assert_eq!(a + a, Fe::zero(m));
        prop_assert_eq!((a * b).bits(), clmul_mod(a.bits(), b.bits(), m));
    }

    #[test]
    fn frobenius_is_additive_and_invertible((m, a, b, _e) in element()) {
        let (a, b) = (Fe::new(a, m), Fe::new(b, m));
        prop_assert_eq!((a + b).frob(), a.frob() + b.frob());
        prop_assert_eq!((a * b).frob(), a.frob() * b.frob());
        prop_assert_eq!(a.frob().sqrt(), a);
        prop_assert_eq!(a.sqrt().frob(), a);
        prop_assert_eq!(a.pow(1u64 << m), a);
    }

    #[test]
    fn inverses((m, a, _b, _e) in element()) {
        let a = Fe::new(a, m);
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!((a.inv().unwrap() * a).is_one());
            prop_assert!((field_arith(a, a, FieldOp::Inv).unwrap() * a).is_one());
        }
    }

    #[test]
    fn embeddings_are_homomorphisms(m in 1u8..=4, k in 2u8..=4, a in any::<u32>(), b in any::<u32>()) {
        let e = Embedding::new(m, m * k).unwrap();
        let mask = (1u32 << m) - 1;
        let (a, b) = (Fe::new(a & mask, m), Fe::new(b & mask, m));
        prop_assert_eq!(e.apply(a * b), e.apply(a) * e.apply(b));
        prop_assert_eq!(e.apply(a + b), e.apply(a) + e.apply(b));
        prop_assert_eq!(e.apply(a.frob()), e.apply(a).frob());
    }
}

#[test]
fn exhaustive_small_levels() {
    for m in 1..=4u8 {
        let els: Vec<Fe> = Fe::all(m).collect();
        assert_eq!(els.len(), 1 << m);
        for &a in &els {
            assert_eq!(a.frob().sqrt(), a);
            if !a.is_zero() {
                assert!((a.inv().unwrap() * a).is_one());
            }
            for &b in &els {
                assert_eq!((a + b).frob(), a.frob() + b.frob());
                assert_eq!((a * b).bits(), clmul_mod(a.bits(), b.bits(), m));
            }
        }
    }
}

#[test]
fn incompatible_tower_is_rejected() {
    assert!(Embedding::new(2, 3).is_err());
    assert!(Fe::new(1, 3).embed(4).is_err());
}
