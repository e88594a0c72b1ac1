//! Shared inputs for the benchmarks.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vrpf_core::fixtures;
use vrpf_core::gog::{CleanPresentation, GoGWord};
use vrpf_core::lemmalab::random_word;
use vrpf_core::Word;

/// Collapsed fixture with its nontrivial corpus.
pub struct Case {
    pub name: &'static str,
    pub presentation: CleanPresentation,
    pub words: Vec<GoGWord>,
}

pub fn cases() -> Vec<Case> {
    fixtures::all()
        .into_iter()
        .map(|f| {
            let presentation = f.presentation().expect("fixture collapses");
            let words = f.words(&presentation, false).expect("corpus parses");
            Case { name: f.name, presentation, words }
        })
        .collect()
}

/// Seeded reduced words of roughly `len` letters.
pub fn words(rank: usize, len: usize, count: usize, seed: u64) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_word(rank, len, &mut rng)).collect()
}

/// `(t1 x1 t1^-1 x2^-1)^k` followed by its inverse: long, trivial, and
/// full of pinches for Britton reduction on a one-loop fixture.
pub fn pinch_word(k: usize) -> String {
    let block = "t1 x1 t1^-1 x2^-1 ";
    let inv = "x2 t1 x1^-1 t1^-1 ";
    format!("{}{}", block.repeat(k), inv.repeat(k)).trim_end().to_string()
}
