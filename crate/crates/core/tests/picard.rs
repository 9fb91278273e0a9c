use modcoh::picard::{conductor_chain, parse_subring, picard, reproduce_table};
use num_bigint::BigInt;

#[test]
fn table_rows_at_small_primes() {
    let rows = reproduce_table(&[2, 3, 5, 7]).unwrap();
    assert_eq!(rows.len(), 2 + 4 * 4);
    for r in &rows {
        assert!(r.matches, "{r:?}");
    }
}

#[test]
fn cusp_over_a_finite_field_has_p_classes() {
    // Pic(k[t^2,t^3]) is (k,+)
    for p in [2u64, 3, 5, 7] {
        let r = picard(&format!("F{p}[t^2,t^3]")).unwrap();
        assert_eq!(r.group.order(), Some(BigInt::from(p)), "p = {p}");
    }
}

#[test]
fn chains_end_at_the_normalization() {
    for spec in ["F2[t^2,t^3]", "F2[t^3,t^4,t^5]", "F2[t^3,t^5,t^7]", "Z[t^2,t^3]", "F3[t^4,t^5,t^6,t^7]", "Z[3t,t^2,t^3]"] {
        let steps = conductor_chain(&parse_subring(spec).unwrap()).unwrap();
        assert!(!steps.is_empty(), "{spec}");
        assert!(steps.iter().all(|s| s.certificate.holds()), "{spec}");
        assert!(steps.last().unwrap().ring.is_normal(), "{spec}");
    }
}
