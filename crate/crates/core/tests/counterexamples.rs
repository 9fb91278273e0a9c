use modcoh::counterexamples::{ann_lemma_check, cohen_h1, growth_report, tensor_mc_mu, GrowthSource};
use num_bigint::BigInt;

fn c3(n: u32) -> usize {
    (n * n.saturating_sub(1) * n.saturating_sub(2) / 6) as usize
}

#[test]
fn cohen_mu_and_dimension() {
    for p in [2, 5] {
        for k in 4..=8 {
            let r = cohen_h1(k, p).unwrap();
            let dim: usize = (5..=k).map(|j| c3(j - 2)).sum();
            assert_eq!(r.mu_direct, c3(k - 2), "k = {k}, p = {p}");
            assert_eq!(r.dim, dim);
            assert_eq!(r.mu_formula, BigInt::from(dim));
            assert!(r.generators_annihilate);
        }
    }
}

#[test]
fn annihilator_lemma_small_k() {
    for k in 1..=3 {
        assert!(ann_lemma_check(k, 5, 2 * k + 2).unwrap().passed(), "k = {k}");
    }
}

#[test]
fn tensor_squares_triangular_numbers() {
    for n in 1..=5 {
        let r = tensor_mc_mu(n, 5).unwrap();
        let t = (n * (n + 1) / 2) as usize;
        assert_eq!(r.mu, t * t);
        assert!(r.consistent());
    }
}

#[test]
fn tensor_profile_is_flagged_at_degree_three() {
    let g = growth_report(&GrowthSource::Tensor { p: 2 }, 6, 3).unwrap();
    assert!(g.flagged);
    let mu: Vec<BigInt> = [1, 9, 36, 100, 225, 441].iter().map(|&x| BigInt::from(x)).collect();
    assert_eq!(g.mu, mu);
}
