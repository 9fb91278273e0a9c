//! Matrices, Smith normal form and subgroup lattices.

pub mod euclid;
pub mod lattice;
pub mod mat;
pub mod smith;

pub use euclid::{Euclid, FpX, ZZ};
pub use lattice::{Coords, Lattice, Structure, Subquotient};
pub use mat::Mat;
pub use smith::{kernel, smith, solve, SmithData};
