//! Extended naturals, ω-vectors and downward-closed subsets of `ℕ^X`.

pub mod downset;
pub mod extnat;
pub mod vj;

pub use downset::{complement_upset, downset_of, ideal_in_downset, DownSet};
pub use extnat::{ev, ExtNat, ExtVec, Fin, Omega};
pub use vj::{valk_jantzen, valk_jantzen_with_stats, VjStats};
