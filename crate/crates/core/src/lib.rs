//! Exact computations with module-coherent functors, truncated Witt rings
//! and Picard groups of monomial curves.

pub mod arith;
pub mod counterexamples;
pub mod error;
pub mod functor;
pub mod io;
pub mod linalg;
pub mod module;
pub mod picard;
pub mod ring;
pub mod suite;
pub mod witt;

pub use error::{Error, Result};
pub use ring::{parse_algebra, parse_ring, AlgElem, BaseRing, RingElement, TestAlgebra};
