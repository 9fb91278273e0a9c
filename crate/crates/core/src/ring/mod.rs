//! Base rings, elements and finite test algebras.

pub mod algebra;
pub mod base;
pub mod poly;

pub use algebra::{parse_algebra, AlgElem, AlgebraSpec, Component, LocalData, TestAlgebra};
pub use base::{parse_ring, BaseRing, RingElement};
pub use poly::{Mono, Poly};

use crate::error::Result;

/// Structure map from a base ring into a test algebra.
#[derive(Clone, Debug)]
pub struct RingHom {
    pub source: BaseRing,
    pub target: TestAlgebra,
    /// Images of the source variables, in order.
    pub images: Vec<AlgElem>,
}

impl RingHom {
    /// Verifies that the source relations (its characteristic) die in the
    /// target; polynomial variables are free so any images are allowed.
    pub fn new(source: &BaseRing, target: &TestAlgebra) -> Result<RingHom> {
        target.check_base(source)?;
        let images = source
            .vars()
            .iter()
            .map(|v| target.var_image(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(RingHom { source: source.clone(), target: target.clone(), images })
    }

    pub fn apply(&self, a: &RingElement) -> Result<AlgElem> {
        self.target.image(&self.source, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_respects_relations() {
        let z12 = parse_ring("Z/12").unwrap();
        let b = parse_algebra("Z/4 x Z/3").unwrap();
        let h = RingHom::new(&z12, &b).unwrap();
        let img = h.apply(&z12.from_i64(7)).unwrap();
        assert_eq!(img, vec![3.into(), 1.into()]);
        assert!(RingHom::new(&z12, &parse_algebra("Z/8").unwrap()).is_err());
    }
}
