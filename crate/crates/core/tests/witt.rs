use modcoh::witt::algebra::prime_field_is_cyclic;
use modcoh::witt::{verify_ghost, witt_algebra, witt_laws, WittRing};
use modcoh::{parse_algebra, BaseRing};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn ghost_identities_hold() {
    for p in [2, 3, 5, 7] {
        for n in 1..=3 {
            assert!(verify_ghost(&witt_laws(p, n).unwrap()).passed(), "p = {p}, n = {n}");
        }
    }
}

#[test]
fn witt_vectors_of_small_algebras() {
    for p in [2, 3] {
        for n in 1..=3 {
            assert!(prime_field_is_cyclic(p, n).unwrap());
        }
    }
    // W_2(F_2[x]/(x^2)) has 16 elements and is not cyclic
    let t = witt_algebra(&parse_algebra("F2[x]/(x^2)").unwrap(), 2, 1 << 12).unwrap();
    assert_eq!(t.order, 16);
    assert!(!t.cyclic);
    assert!(t.check_axioms());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// Over Z the ghost map is an injective ring map, so it is an oracle.
    #[test]
    fn ghost_map_is_a_ring_map_over_z(a in prop::collection::vec(-20i64..20, 3), b in prop::collection::vec(-20i64..20, 3), p in prop::sample::select(vec![2u64, 3, 5])) {
        let z = BaseRing::Integers;
        let w = WittRing::new(z.clone(), witt_laws(p, 3).unwrap());
        let x = w.vector(a.iter().map(|&v| z.from_int(BigInt::from(v))).collect()).unwrap();
        let y = w.vector(b.iter().map(|&v| z.from_int(BigInt::from(v))).collect()).unwrap();
        let (s, m) = (w.add(&x, &y), w.mul(&x, &y));
        for i in 0..3 {
            prop_assert_eq!(w.ghost(&s, i), z.add(&w.ghost(&x, i), &w.ghost(&y, i)));
            prop_assert_eq!(w.ghost(&m, i), z.mul(&w.ghost(&x, i), &w.ghost(&y, i)));
        }
        prop_assert_eq!(w.add(&x, &w.neg(&x)), w.zero());
    }
}
