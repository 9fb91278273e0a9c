use num_bigint::BigInt;
use proptest::prelude::*;

use super::expr::{check_tree, direct_eval, normalize, SquareSpec};
use super::growth::{check_finite_products, flatness_equalizer_witness, mu_growth_profile, truncation, Flatness};
use super::hom::{end_algebra, hom_functor, square_is_element, HomElement};
use super::ops::{ann_functor, cohomology_direct, cohomology_functor, eval_tensor, tensor_with_module, tor1_direct, tor1_functor};
use super::polysys::{eval_poly_functor, linear_presentation, PolySystem};
use super::random::{battery, battery_homs, check_naturality, random_suite};
use super::*;
use crate::linalg::Subquotient;
use crate::module::{int_mat, zero_mat, FPModule, ModuleMap};
use crate::ring::{parse_algebra, parse_ring, BaseRing, Mono, TestAlgebra};

fn z() -> BaseRing {
    BaseRing::Integers
}

fn alg(s: &str) -> TestAlgebra {
    parse_algebra(s).unwrap()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Ker(×a: Z → Z).
fn times(a: i64) -> FunctorPresentation {
    let m = FPModule::free(&z(), 1);
    FunctorPresentation::new(ModuleMap::new(&m, &m, int_mat(&z(), &[&[a]], 1)).unwrap())
}

fn strict_z() -> FunctorPresentation {
    FunctorPresentation::strict(&FPModule::free(&z(), 1))
}

/// {b ∈ Z/n : a·b = 0}
fn killed_by(a: i64, n: i64) -> Vec<Vec<BigInt>> {
    (0..n).filter(|b| (a * b).rem_euclid(n) == 0).map(|b| vec![big(b)]).collect()
}

/// The evaluation is exactly the given set of pairwise distinct classes.
fn assert_set(e: &EvaluatedModule, expected: &[Vec<BigInt>]) {
    assert_eq!(e.order(), Some(big(expected.len() as i64)), "{}", e.describe());
    for (i, v) in expected.iter().enumerate() {
        assert!(e.contains(v), "{v:?} missing");
        for w in &expected[..i] {
            assert!(!e.same_class(v, w));
        }
    }
}

fn order(sq: &Subquotient) -> BigInt {
    sq.structure().order().unwrap()
}

#[test]
fn equalizer_of_three_and_five() {
    let s = strict_z();
    let sigma = SquareSpec::of(&MorphismSquare::scalar(&s, &z().from_i64(3)));
    let tau = SquareSpec::of(&MorphismSquare::scalar(&s, &z().from_i64(5)));
    let e = expr::FunctorExpr::Equalizer {
        source: Box::new(expr::FunctorExpr::Strict(FPModule::free(&z(), 1))),
        target: Box::new(expr::FunctorExpr::Strict(FPModule::free(&z(), 1))),
        sigma,
        tau,
    };
    let n = normalize(&e).unwrap();
    let b = alg("Z/8");
    assert_set(&eval(&n.presentation, &b).unwrap(), &killed_by(2, 8));
    assert!(check_tree(&e, &n, &b).unwrap().iter().all(|c| c.ok));
}

#[test]
fn kernel_pair_and_strict_evaluations() {
    assert_set(&eval(&times(2), &alg("Z/4")).unwrap(), &killed_by(2, 4));
    // M̲ ⊗ B for M = Z/3 at Z/6
    let m = FPModule::cyclic(&z(), z().from_i64(3));
    let e = eval(&FunctorPresentation::strict(&m), &alg("Z/6")).unwrap();
    assert_eq!(e.invariants(), vec![big(3)]);
}

#[test]
fn annihilator_functors() {
    let f = ann_functor(&z(), &[z().from_i64(2)]).unwrap();
    assert_set(&eval(&f, &alg("Z/6")).unwrap(), &killed_by(2, 6));
    let one = ann_functor(&z(), &[z().from_i64(1)]).unwrap();
    for b in battery(&z()) {
        assert!(eval(&one, &b).unwrap().is_zero());
    }
    let r = parse_ring("F2[x]").unwrap();
    let fx = ann_functor(&r, &[r.var("x").unwrap()]).unwrap();
    let b = alg("F2[x]/(x^2)");
    // basis 1, x of B
    assert_set(&eval(&fx, &b).unwrap(), &[vec![big(0), big(0)], vec![big(0), big(1)]]);
}

#[test]
fn kernel_of_morphism_examples() {
    let s = strict_z();
    let k = kernel_of_morphism(&MorphismSquare::scalar(&s, &z().from_i64(3))).unwrap();
    assert_set(&eval(&k, &alg("Z/9")).unwrap(), &killed_by(3, 9));
    let id = kernel_of_morphism(&MorphismSquare::identity(&times(2))).unwrap();
    let zero = kernel_of_morphism(&MorphismSquare::zero(&times(2), &s)).unwrap();
    for b in battery(&z()) {
        assert!(eval(&id, &b).unwrap().is_zero());
        let bc = BaseChange::new(&z(), &b).unwrap();
        assert_eq!(carrier(&zero, &bc).unwrap().num, carrier(&times(2), &bc).unwrap().num);
    }
}

#[test]
fn cokernel_and_image_of_doubling() {
    let s = strict_z();
    let sq = MorphismSquare::scalar(&s, &z().from_i64(2));
    let c = cokernel_of_morphism(&sq).unwrap();
    let b = alg("Z/6");
    // (Z/6)/2(Z/6)
    let quotient: Vec<i64> = (0..6).filter(|x| x % 2 == 0).collect();
    let e = eval(&c.presentation, &b).unwrap();
    assert_eq!(e.order(), Some(big(6 / quotient.len() as i64)));
    assert_eq!(e.invariants(), vec![big(2)]);
    let im = image_of_morphism(&sq).unwrap();
    let evens: Vec<Vec<BigInt>> = quotient.iter().map(|&x| vec![big(x)]).collect();
    assert_set(&eval(&im, &b).unwrap(), &evens);
}

#[test]
fn cokernel_identity_and_zero() {
    let f = times(2);
    let id = cokernel_of_morphism(&MorphismSquare::identity(&f)).unwrap();
    let zero = cokernel_of_morphism(&MorphismSquare::zero(&strict_z(), &f)).unwrap();
    let im_id = image_of_morphism(&MorphismSquare::identity(&f)).unwrap();
    let im_zero = image_of_morphism(&MorphismSquare::zero(&strict_z(), &f)).unwrap();
    for b in battery(&z()) {
        let bc = BaseChange::new(&z(), &b).unwrap();
        let target = carrier(&f, &bc).unwrap();
        assert!(eval(&id.presentation, &b).unwrap().is_zero());
        assert_eq!(order(&carrier(&zero.presentation, &bc).unwrap()), order(&target));
        assert_eq!(carrier(&im_id, &bc).unwrap().num, target.num);
        assert!(eval(&im_zero, &b).unwrap().is_zero());
    }
}

/// Coker, image and kernel of a square against the set-level constructions
/// at B.
fn check_square_ops(sq: &MorphismSquare, b: &TestAlgebra) {
    let bc = BaseChange::new(sq.source.base(), b).unwrap();
    let src = carrier(&sq.source, &bc).unwrap();
    let tgt = carrier(&sq.target, &bc).unwrap();
    let img = square_image(sq, &bc).unwrap();
    let phi = bc.matrix(&sq.phi.matrix).unwrap();
    // kernel: preimage of the relations of M′ ⊗ B
    let k = carrier(&kernel_of_morphism(sq).unwrap(), &bc).unwrap();
    assert_eq!(k.num, src.num.preimage(&phi, &tgt.den));
    // image: the set image, up to the relations
    let i = carrier(&image_of_morphism(sq).unwrap(), &bc).unwrap();
    assert_eq!(i.num, img);
    // cokernel: transport from the quotient is a bijection
    let c = cokernel_of_morphism(sq).unwrap();
    let q = Subquotient::new(tgt.num.clone(), img);
    let t = bc.matrix(&c.j.matrix).unwrap();
    assert!(expr::transport_is_bijective(&t, &q, &carrier(&c.presentation, &bc).unwrap()), "coker at {b}");
}

#[test]
fn square_operations_on_battery() {
    let f = times(2);
    let s = strict_z();
    let squares = vec![
        MorphismSquare::scalar(&s, &z().from_i64(2)),
        MorphismSquare::scalar(&f, &z().from_i64(3)),
        MorphismSquare::new(&f, &s, int_mat(&z(), &[&[1]], 1), zero_mat(&z(), 0, 1)).unwrap(),
        MorphismSquare::new(&s, &f, int_mat(&z(), &[&[0]], 1), zero_mat(&z(), 1, 0)).unwrap(),
    ];
    for sq in &squares {
        for b in battery(&z()) {
            check_square_ops(sq, &b);
        }
    }
}

#[test]
fn dominate_example() {
    let z4 = FPModule::cyclic(&z(), z().from_i64(4));
    let f = FunctorPresentation::new(ModuleMap::new(&FPModule::free(&z(), 1), &z4, int_mat(&z(), &[&[2]], 1)).unwrap());
    let lin = dominate_linear(&f);
    assert_eq!((lin.n, lin.k), (2, 1));
    assert_eq!(lin.h, int_mat(&z(), &[&[2, -4]], 2));
    assert_eq!(lin.epi, int_mat(&z(), &[&[1, 0]], 2));
    for b in battery(&z()) {
        assert!(lin.is_surjective_at(&f, &b).unwrap(), "{b}");
    }
    // N free: R is F itself
    let free = dominate_linear(&times(2));
    assert_eq!(free.presentation(), times(2));
    // f = 0: R = A̲^m
    let m = FPModule::cyclic(&z(), z().from_i64(6));
    let strict = FunctorPresentation::strict(&m);
    let r = dominate_linear(&strict);
    assert_eq!((r.n, r.k), (1, 0));
    for b in battery(&z()) {
        assert!(r.is_surjective_at(&strict, &b).unwrap());
    }
}

#[test]
fn hom_of_two_torsion_into_z() {
    let f = times(2);
    let h = hom_functor(&f, &strict_z()).unwrap();
    assert_eq!(h.eval(&alg("Z")).unwrap().invariants(), vec![big(2)]);
    let b = alg("Z/4");
    let bc = BaseChange::new(&z(), &b).unwrap();
    let e = h.eval(&b).unwrap();
    let els = e.elements(16).unwrap();
    let nonzero: Vec<_> = els.iter().filter(|v| !e.same_class(v, &vec![big(0); v.len()])).collect();
    assert_eq!(nonzero.len(), 1);
    let x = HomElement::from_vector(h.rows(), h.cols(), bc.rank(), nonzero[0]);
    assert!(h.check_action(&x, &bc).unwrap());
    // the inclusion {0, 2} ⊆ Z/4
    let img = h.act(&x, &[big(2)], &bc).unwrap();
    assert_eq!(img[0].clone() % 4, big(2));
    // the identity square of Z̲ is an element of Hom(Z̲, Z̲)
    let hz = hom_functor(&strict_z(), &strict_z()).unwrap();
    assert!(square_is_element(&hz, &MorphismSquare::identity(&strict_z()), &b).unwrap());
}

#[test]
fn hom_trivial_cases() {
    let zero = FunctorPresentation::zero(&z());
    let h = hom_functor(&times(2), &zero).unwrap();
    let free2 = FunctorPresentation::strict(&FPModule::free(&z(), 2));
    let n = FPModule::cyclic(&z(), z().from_i64(3));
    let hn = hom_functor(&free2, &FunctorPresentation::strict(&n)).unwrap();
    for b in battery(&z()) {
        assert!(h.eval(&b).unwrap().is_zero());
        // Hom(A̲², N̲)(B) = (N ⊗ B)²
        let nb = eval(&FunctorPresentation::strict(&n.direct_sum(&n)), &b).unwrap();
        assert_eq!(hn.eval(&b).unwrap().invariants(), nb.invariants());
    }
}

#[test]
fn end_algebras() {
    let e = end_algebra(&strict_z(), &alg("Z/4"), 1000).unwrap();
    assert_eq!(e.elements.len(), 4);
    // units of Z/4 by enumeration
    let units = (0..4).filter(|a| (0..4).any(|b| a * b % 4 == 1)).count();
    assert_eq!(e.units, units);
    let k = end_algebra(&times(2), &alg("F2"), 1000).unwrap();
    assert_eq!((k.elements.len(), k.units), (2, 1));
    let zero = end_algebra(&FunctorPresentation::zero(&z()), &alg("Z/6"), 1000).unwrap();
    assert_eq!((zero.elements.len(), zero.units), (1, 1));
}

#[test]
fn tensor_with_modules() {
    let z3 = FPModule::cyclic(&z(), z().from_i64(3));
    let t = tensor_with_module(&times(2), &z3).unwrap();
    assert!(eval(&t.presentation, &alg("Z/6")).unwrap().is_zero());
    let a = tensor_with_module(&times(2), &FPModule::free(&z(), 1)).unwrap();
    let z2 = FPModule::cyclic(&z(), z().from_i64(2));
    let z6 = FPModule::cyclic(&z(), z().from_i64(6));
    let mn = tensor_with_module(&FunctorPresentation::strict(&z6), &z2).unwrap();
    for b in battery(&z()) {
        assert_eq!(eval(&a.presentation, &b).unwrap().invariants(), eval(&times(2), &b).unwrap().invariants());
        // (Z/6 ⊗ Z/2)̲ = (Z/2)̲
        let direct = eval(&FunctorPresentation::strict(&z6.tensor(&z2)), &b).unwrap();
        assert_eq!(eval(&mn.presentation, &b).unwrap().invariants(), direct.invariants());
    }
}

#[test]
fn tor_examples() {
    let z2 = FPModule::cyclic(&z(), z().from_i64(2));
    let z3 = FPModule::cyclic(&z(), z().from_i64(3));
    let b = alg("Z");
    assert_eq!(eval(&tor1_functor(&z2, &z2).unwrap().presentation, &b).unwrap().invariants(), vec![big(2)]);
    assert!(eval(&tor1_functor(&z2, &z3).unwrap().presentation, &b).unwrap().is_zero());
    let free = tor1_functor(&FPModule::free(&z(), 1), &z3).unwrap();
    for pair in [(&z2, &z2), (&z2, &z3)] {
        let t = tor1_functor(pair.0, pair.1).unwrap();
        for b in battery(&z()) {
            let bc = BaseChange::new(&z(), &b).unwrap();
            let direct = tor1_direct(pair.0, pair.1, &bc).unwrap();
            let tr = bc.matrix(&t.transport).unwrap();
            assert!(expr::transport_is_bijective(&tr, &direct, &carrier(&t.presentation, &bc).unwrap()));
        }
    }
    for b in battery(&z()) {
        assert!(eval(&free.presentation, &b).unwrap().is_zero());
    }
}

fn doubling_complex() -> Vec<ModuleMap> {
    let m = FPModule::free(&z(), 1);
    vec![ModuleMap::new(&m, &m, int_mat(&z(), &[&[2]], 1)).unwrap()]
}

#[test]
fn cohomology_examples() {
    let k = doubling_complex();
    let h1 = cohomology_functor(&k, 1).unwrap();
    assert_eq!(eval(&h1.presentation, &alg("Z/6")).unwrap().invariants(), vec![big(2)]);
    let h0 = cohomology_functor(&k, 0).unwrap();
    assert_set(&eval(&h0.presentation, &alg("Z/4")).unwrap(), &killed_by(2, 4));
    for n in 0..=1 {
        let h = cohomology_functor(&k, n).unwrap();
        for b in battery(&z()) {
            let bc = BaseChange::new(&z(), &b).unwrap();
            let direct = cohomology_direct(&k, n, &bc).unwrap();
            let tr = bc.matrix(&h.transport).unwrap();
            assert!(expr::transport_is_bijective(&tr, &direct, &carrier(&h.presentation, &bc).unwrap()));
        }
    }
    // Z →(1)→ Z is exact
    let m = FPModule::free(&z(), 1);
    let exact = vec![ModuleMap::identity(&m)];
    for n in 0..=1 {
        let h = cohomology_functor(&exact, n).unwrap();
        for b in battery(&z()) {
            assert!(eval(&h.presentation, &b).unwrap().is_zero());
        }
    }
}

#[test]
fn polynomial_system() {
    let z2 = FPModule::cyclic(&z(), z().from_i64(2));
    let s = PolySystem { nvars: 1, module: z2, constraints: vec![vec![(Mono(vec![2]), vec![z().one()])]] };
    let b = alg("Z/8");
    let sols = eval_poly_functor(&s, &b, 1000).unwrap();
    let oracle: Vec<i64> = (0..8).filter(|x| x * x % 2 == 0).collect();
    let got: Vec<BigInt> = sols.iter().map(|p| p[0][0].clone()).collect();
    assert_eq!(got, oracle.iter().map(|&x| big(x)).collect::<Vec<_>>());
    let empty = PolySystem { nvars: 2, module: FPModule::free(&z(), 1), constraints: vec![] };
    assert_eq!(eval_poly_functor(&empty, &alg("Z/4"), 1000).unwrap().len(), 16);
}

#[test]
fn linear_system_matches_presentation() {
    // 2x + 3y = 0 in Z/6 ⊗ B
    let m = FPModule::cyclic(&z(), z().from_i64(6));
    let s = PolySystem {
        nvars: 2,
        module: m,
        constraints: vec![vec![(Mono(vec![1, 0]), vec![z().from_i64(2)]), (Mono(vec![0, 1]), vec![z().from_i64(3)])]],
    };
    let p = linear_presentation(&s).unwrap();
    for name in ["Z/4", "Z/6", "F2", "Z/4 x Z/3"] {
        let b = alg(name);
        let sols = eval_poly_functor(&s, &b, 100_000).unwrap();
        assert_eq!(eval(&p, &b).unwrap().order(), Some(big(sols.len() as i64)), "{name}");
    }
}

#[test]
fn tensor_of_evaluations_small_n() {
    let r = parse_ring("F2[s,t,u]").unwrap();
    let f = ann_functor(&r, &[r.var("s").unwrap()]).unwrap();
    for (n, mu) in [(1, 1), (2, 9)] {
        let b = truncation(&r, n).unwrap();
        let t = eval_tensor(&f, &f, &b).unwrap();
        assert_eq!(t.mu, Some(mu));
        assert_eq!(t.mu_product, Some(mu));
        if let Some(full) = t.mu_full {
            assert_eq!(full, mu);
        }
    }
    let zero = FunctorPresentation::zero(&r);
    let t = eval_tensor(&f, &zero, &truncation(&r, 2).unwrap()).unwrap();
    assert_eq!(t.mu, Some(0));
}

#[test]
fn growth_profiles() {
    let r = parse_ring("F2[s,t,u]").unwrap();
    let f = ann_functor(&r, &[r.var("s").unwrap()]).unwrap();
    let p = mu_growth_profile(&f, 5).unwrap();
    let oracle: Vec<BigInt> = (1..=5).map(|n| big(n * (n + 1) / 2)).collect();
    assert_eq!(p.mu, oracle);
    let strict = FunctorPresentation::strict(&FPModule::free(&r, 1));
    let q = mu_growth_profile(&strict, 4).unwrap();
    assert!(q.mu.iter().all(|m| m == &big(1)));
    assert!(!q.flagged);
}

#[test]
fn finite_products() {
    let b1 = alg("Z/4");
    let b2 = alg("Z/3");
    let r = check_finite_products(&times(2), &b1, &b2).unwrap();
    assert!(r.bijective);
    assert_eq!(r.product, vec![big(2)]);
    assert_eq!((r.left.clone(), r.right.clone()), (vec![big(2)], vec![]));
    let m = FPModule::cyclic(&z(), z().from_i64(6));
    let s = check_finite_products(&FunctorPresentation::strict(&m), &b1, &b2).unwrap();
    assert!(s.bijective);
    for (x, y) in super::random::product_pairs() {
        for f in [times(2), times(3), times(0), FunctorPresentation::strict(&m)] {
            assert!(check_finite_products(&f, &x, &y).unwrap().bijective, "{x} x {y}");
        }
    }
}

#[test]
fn flatness_witnesses() {
    let two = [z().from_i64(2)];
    let z2 = FPModule::cyclic(&z(), z().from_i64(2));
    match flatness_equalizer_witness(&z2, &two).unwrap() {
        Flatness::Witness(w) => assert!(w.valid()),
        Flatness::FlatOnIdeal => panic!("Z/2 is not flat"),
    }
    assert_eq!(flatness_equalizer_witness(&FPModule::free(&z(), 1), &two).unwrap(), Flatness::FlatOnIdeal);
    let z6 = FPModule::cyclic(&z(), z().from_i64(6));
    match flatness_equalizer_witness(&z6, &[z().from_i64(3)]).unwrap() {
        Flatness::Witness(w) => assert!(w.valid()),
        Flatness::FlatOnIdeal => panic!("Z/6 is not flat"),
    }
}

#[test]
fn random_trees_normalize_soundly() {
    let suite = random_suite(7, 12, 3).unwrap();
    for (base, e) in &suite {
        let n = normalize(e).unwrap();
        for b in battery(base) {
            let checks = check_tree(e, &n, &b).unwrap();
            assert!(checks.iter().all(|c| c.ok), "{} at {b}", e.kind());
        }
        for u in battery_homs(base).unwrap() {
            assert!(check_naturality(e, &n, &u).unwrap(), "{} along {} → {}", e.kind(), u.source, u.target);
        }
    }
}

#[test]
fn direct_eval_of_leaf_is_carrier() {
    let e = expr::FunctorExpr::KernelPair(times(6).f.clone());
    let n = normalize(&e).unwrap();
    for b in battery(&z()) {
        let bc = BaseChange::new(&z(), &b).unwrap();
        let d = direct_eval(&e, &n, &bc).unwrap();
        assert_eq!(d.num, carrier(&times(6), &bc).unwrap().num);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kernel_pair_matches_enumeration(a in -12i64..=12, n in 2i64..=16) {
        let b = alg(&format!("Z/{n}"));
        assert_set(&eval(&times(a), &b).unwrap(), &killed_by(a, n));
    }

    /// |ker σ_B| · |im σ_B| = |F(B)| and |coker σ_B| · |im σ_B| = |G(B)|.
    #[test]
    fn first_isomorphism_theorem(entries in proptest::collection::vec(-4i64..=4, 4), n in 2i64..=12) {
        let m = FPModule::free(&z(), 2);
        let f = FunctorPresentation::strict(&m);
        let phi = int_mat(&z(), &[&entries[0..2], &entries[2..4]], 2);
        let sq = MorphismSquare::new(&f, &f, phi, zero_mat(&z(), 0, 0)).unwrap();
        let b = alg(&format!("Z/{n}"));
        let k = eval(&kernel_of_morphism(&sq).unwrap(), &b).unwrap().order().unwrap();
        let i = eval(&image_of_morphism(&sq).unwrap(), &b).unwrap().order().unwrap();
        let c = eval(&cokernel_of_morphism(&sq).unwrap().presentation, &b).unwrap().order().unwrap();
        let whole = BigInt::from(n * n);
        prop_assert_eq!(&k * &i, whole.clone());
        prop_assert_eq!(&c * &i, whole);
    }
}
