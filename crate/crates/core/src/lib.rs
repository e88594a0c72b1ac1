//! Exact computations with algebraically clean graphs of free groups.
//!
//! * [`freegrp`]: reduced words, Stallings foldings, automorphisms and partial
//!   automorphisms of finite-rank free groups.
//! * [`pfiltration`]: the lower exponent-p central filtration of a free group,
//!   computed exactly inside a truncated Magnus algebra over `F_p`.
//! * [`gog`]: graphs of free groups, collapse to a multiple HNN extension,
//!   Britton reduction and the normal poly-free chain.
//! * [`separator`]: builds a finite p-group quotient of a finite-index
//!   subgroup in which a given element survives, and checks such certificates.

pub mod error;
pub mod fixtures;
pub mod freegrp;
pub mod gog;
pub mod lemmalab;

pub mod perm;
pub mod pfiltration;
pub mod separator;

pub use error::{Error, Result};
pub use freegrp::{
    Automorphism, Basis, BasisAlignedFactor, FreeMap, PartialAutomorphism, SubgroupGraph, Word,
};
pub use gog::{CleanPresentation, GoGWord, GraphOfGroups, Presentation};
pub use pfiltration::{Caps, LambdaOracle, MagnusContext, QuotientGroup, TruncatedSeries};
pub use separator::{Certificate, Outcome, SeparateConfig};
