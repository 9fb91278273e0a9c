//! The two negative results: Cohen's H functor on P³ and the tensor square
//! of Ann(s), with their generator counts and growth profiles.

pub mod ann;
pub mod blocks;
pub mod cohen;
pub mod fp;
pub mod growth;
pub mod tensor;

pub use ann::{ann_lemma_check, AnnReport};
pub use cohen::{cohen_h1, CohenGenerator, CohenReport};
pub use growth::{growth_report, GrowthReport, GrowthSource};
pub use tensor::{tensor_mc_mu, TensorReport};
