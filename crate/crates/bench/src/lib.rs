//! Fixtures shared by the engine benchmarks.

use modcoh::functor::random::random_suite;
use modcoh::functor::FunctorExpr;
use modcoh::{parse_algebra, BaseRing, TestAlgebra};

/// The first `count` trees of the seeded suite.
pub fn trees(seed: u64, count: usize) -> Vec<(BaseRing, FunctorExpr)> {
    random_suite(seed, count, 3).expect("suite builds")
}

pub fn algebra(spec: &str) -> TestAlgebra {
    parse_algebra(spec).expect("algebra parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(trees(1, 4).len(), 4);
        assert_eq!(algebra("Z/4 x Z/3").rank(), 2);
    }
}
