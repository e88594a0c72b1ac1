//! The shipped example graphs of groups with word corpora over their
//! collapsed presentations (`x1..` vertex generators, `t1..` loops).

use crate::error::Result;
use crate::gog::{collapse, CleanPresentation, GoGWord, GraphOfGroups};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub json: &'static str,
    /// Words that are nontrivial in `π₁`.
    pub nontrivial: &'static [&'static str],
    /// Words that are trivial in `π₁`.
    pub trivial: &'static [&'static str],
}

impl Fixture {
    pub fn gog(&self) -> GraphOfGroups {
        GraphOfGroups::from_json(self.json).expect("shipped fixture parses")
    }

    pub fn presentation(&self) -> Result<CleanPresentation> {
        collapse(&self.gog())
    }

    pub fn words(&self, c: &CleanPresentation, trivial: bool) -> Result<Vec<GoGWord>> {
        let src = if trivial { self.trivial } else { self.nontrivial };
        src.iter().map(|t| c.parse_word(t)).collect()
    }
}

/// `F(x,y) ⋊ Z`, `t` swapping `x` and `y`.
pub const SWAP: Fixture = Fixture {
    name: "swap",
    json: include_str!("../fixtures/swap.json"),
    nontrivial: &[
        "x1",
        "x2",
        "x1 x2",
        "x1 x2 x1^-1 x2^-1",
        "x1^2",
        "t1",
        "t1^2",
        "t1 x1",
        "t1 x1 t1^-1 x1^-1",
        "t1^2 x1 x2^-1",
    ],
    trivial: &["", "x1 x1^-1", "t1 x1 t1^-1 x2^-1", "t1 x2 t1^-1 x1^-1", "t1^2 x1 t1^-2 x1^-1"],
};

/// `F(x,y) ⋊ Z`, `t: x ↦ y, y ↦ xy`.
pub const FIBONACCI: Fixture = Fixture {
    name: "fibonacci",
    json: include_str!("../fixtures/fibonacci.json"),
    nontrivial: &[
        "x1",
        "x2",
        "x1 x2^-1",
        "x1 x2 x1^-1 x2^-1",
        "t1",
        "t1^3",
        "t1^8",
        "t1^3 x1",
        "t1 x1 t1^-1 x1^-1",
        "x2^3 x1^-2",
    ],
    trivial: &["", "t1 x1 t1^-1 x2^-1", "t1 x2 t1^-1 x2^-1 x1^-1", "t1^2 x1 t1^-2 x2^-1 x1^-1"],
};

/// `⟨x, y, t | t x t⁻¹ = y⟩`, free on `{x, t}`.
pub const PARTIAL_HNN: Fixture = Fixture {
    name: "partial-hnn",
    json: include_str!("../fixtures/partial-hnn.json"),
    nontrivial: &[
        "x1",
        "x2",
        "t1",
        "t1 x2 t1^-1",
        "x1 x2^-1",
        "t1 x1 t1^-1 x1^-1",
        "t1^2",
        "x1^2 t1",
        "t1^-1 x1 t1",
        "x1 t1 x2 t1^-1 x1^-1",
    ],
    trivial: &["", "t1 x1 t1^-1 x2^-1", "t1 x1^3 t1^-1 x2^-3", "t1^-1 x2 t1 x1^-1"],
};

/// `F(x1, y1) *_{x1 = x2} F(x2, y2)`; collapses to rank 3 with no loops.
pub const AMALGAM: Fixture = Fixture {
    name: "amalgam",
    json: include_str!("../fixtures/amalgam.json"),
    nontrivial: &[
        "x1",
        "x2",
        "x3",
        "x1 x3",
        "x2 x3 x2^-1 x3^-1",
        "x1^2",
        "x1 x2 x3",
        "x3^2 x1^-1",
        "x1 x3 x1^-1 x3^-1",
        "x2^3",
    ],
    trivial: &["", "x1 x1^-1", "x3 x2 x2^-1 x3^-1"],
};

pub fn all() -> [Fixture; 4] {
    [SWAP, FIBONACCI, PARTIAL_HNN, AMALGAM]
}

pub fn by_name(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}
