use modcoh::functor::expr::check_tree;
use modcoh::functor::random::{battery, random_suite};
use modcoh::functor::{dominate_linear, eval, normalize};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn saved_trees_normalize_and_evaluate_the_same(seed in any::<u64>()) {
        for (base, e) in random_suite(seed, 2, 3).unwrap() {
            let doc = modcoh::io::expr_to_json(&base, &e);
            let text = serde_json::to_string(&doc).unwrap();
            let (b2, e2) = modcoh::io::expr_from_json(&modcoh::io::parse_json(&text).unwrap()).unwrap();
            prop_assert_eq!(&b2, &base);
            prop_assert_eq!(&e2, &e);
            let n = normalize(&e2).unwrap();
            let lin = dominate_linear(&n.presentation);
            for alg in battery(&base) {
                prop_assert!(check_tree(&e2, &n, &alg).unwrap().iter().all(|c| c.ok));
                prop_assert!(lin.is_surjective_at(&n.presentation, &alg).unwrap());
                let direct = eval(&normalize(&e).unwrap().presentation, &alg).unwrap();
                prop_assert_eq!(direct.invariants(), eval(&n.presentation, &alg).unwrap().invariants());
            }
        }
    }
}
