//! Truncated p-typical Witt vectors.

pub mod algebra;
pub mod coeff;
pub mod eta;
pub mod law;
pub mod vector;

pub use algebra::{witt_algebra, WittTable};
pub use coeff::{Coeff, FracPoly, FracPolyRing};
pub use eta::{verify_eta, EtaReport};
pub use law::{verify_ghost, witt_laws, GhostReport, IntPoly, WittLaw};
pub use vector::{WittRing, WittVector};
