//! Free groups: reduced words, homomorphisms, Stallings foldings,
//! basis-aligned free factors and partial automorphisms.

mod fold;
mod maps;
mod word;

pub use fold::{fold_subgroup, SubgroupGraph};
pub use maps::{
    extend_partial, factor_membership, verify_automorphism, Automorphism, BasisAlignedFactor,
    FreeMap, PartialAutomorphism,
};
pub use word::Basis;
pub(crate) use word::{render_runs, split_exponent};
pub use word::Word;
