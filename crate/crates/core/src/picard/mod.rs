//! Picard groups of monomial curves via the conductor square.

pub mod chain;
pub mod group;
pub mod square;
pub mod subring;

pub use chain::{conductor_chain, Certificate, ChainStep};
pub use group::{AbGroup, Tag};
pub use square::{
    conductor_square, picard, picard_from_square, reproduce_table, square_with_ideal, unit_group, MilnorSquare,
    PicResult, TableRow, Truncated,
};
pub use subring::{parse_subring, MonomialSubring};
