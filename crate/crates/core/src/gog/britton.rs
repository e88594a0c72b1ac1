//! Britton reduction for multiple HNN extensions, generic over how vertex
//! group elements are represented.

use super::word::{GoGWord, Syllable};
use super::CleanPresentation;
use crate::freegrp::{factor_membership, Word};

/// Vertex group and stable-letter data of a multiple HNN extension
/// `⟨V, t_1..t_k | t_i u t_i⁻¹ = φ_i(u), u ∈ N_i⟩`. Loop indices are 0-based.
pub trait HnnData {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_identity(&self, a: &Self::Elem) -> bool;
    fn in_domain(&self, i: usize, a: &Self::Elem) -> bool;
    fn in_codomain(&self, i: usize, a: &Self::Elem) -> bool;
    fn forward(&self, i: usize, a: &Self::Elem) -> Self::Elem;
    fn backward(&self, i: usize, a: &Self::Elem) -> Self::Elem;
}

fn push_vertex<H: HnnData>(h: &H, out: &mut Vec<Syllable<H::Elem>>, e: H::Elem) {
    if let Some(Syllable::Vertex(last)) = out.last_mut() {
        *last = h.mul(last, &e);
        if h.is_identity(last) {
            out.pop();
        }
    } else if !h.is_identity(&e) {
        out.push(Syllable::Vertex(e));
    }
}

/// Removes pinches leftmost-innermost: each pinch is resolved as soon as its
/// closing stable letter is read. The output contains no pinch, and is empty
/// iff the input is trivial.
pub fn britton_generic<H: HnnData>(
    h: &H,
    syllables: impl IntoIterator<Item = Syllable<H::Elem>>,
) -> Vec<Syllable<H::Elem>> {
    let mut out: Vec<Syllable<H::Elem>> = Vec::new();
    for s in syllables {
        match s {
            Syllable::Vertex(e) => push_vertex(h, &mut out, e),
            Syllable::Loop(l) => {
                let n = out.len();
                let (open, u, depth) = match out.as_slice() {
                    [.., Syllable::Loop(l0), Syllable::Vertex(u)] => (Some(*l0), u.clone(), 2),
                    [.., Syllable::Loop(l0)] => (Some(*l0), h.identity(), 1),
                    _ => (None, h.identity(), 0),
                };
                let image = match open {
                    Some(l0) if l0 == -l => {
                        let i = l0.unsigned_abs() as usize - 1;
                        if l0 > 0 && h.in_domain(i, &u) {
                            Some(h.forward(i, &u))
                        } else if l0 < 0 && h.in_codomain(i, &u) {
                            Some(h.backward(i, &u))
                        } else {
                            None
                        }
                    }
                    _ => None,
                };
                match image {
                    Some(img) => {
                        out.truncate(n - depth);
                        push_vertex(h, &mut out, img);
                    }
                    None => out.push(Syllable::Loop(l)),
                }
            }
        }
    }
    out
}

/// True when some `t_i^{ε} u t_i^{-ε}` is a pinch.
pub fn has_pinch_generic<H: HnnData>(h: &H, syllables: &[Syllable<H::Elem>]) -> bool {
    let is_pinch = |l0: i32, l: i32, u: &H::Elem| {
        l0 == -l && {
            let i = l0.unsigned_abs() as usize - 1;
            if l0 > 0 {
                h.in_domain(i, u)
            } else {
                h.in_codomain(i, u)
            }
        }
    };
    syllables.windows(2).any(|w| match w {
        [Syllable::Loop(a), Syllable::Loop(b)] => is_pinch(*a, *b, &h.identity()),
        _ => false,
    }) || syllables.windows(3).any(|w| match w {
        [Syllable::Loop(a), Syllable::Vertex(u), Syllable::Loop(b)] => is_pinch(*a, *b, u),
        _ => false,
    })
}

impl HnnData for CleanPresentation {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }

    fn mul(&self, a: &Word, b: &Word) -> Word {
        a.concat(b)
    }

    fn is_identity(&self, a: &Word) -> bool {
        a.is_identity()
    }

    fn in_domain(&self, i: usize, a: &Word) -> bool {
        factor_membership(a, &self.loops[i].domain).unwrap_or(false)
    }

    fn in_codomain(&self, i: usize, a: &Word) -> bool {
        factor_membership(a, &self.loops[i].codomain).unwrap_or(false)
    }

    fn forward(&self, i: usize, a: &Word) -> Word {
        self.loops[i].forward(a)
    }

    fn backward(&self, i: usize, a: &Word) -> Word {
        self.loops[i].backward(a)
    }
}

/// Britton normal form of `w`; empty iff `w = 1` in `π₁`.
pub fn britton_reduce(w: &GoGWord, c: &CleanPresentation) -> GoGWord {
    GoGWord::from_syllables(britton_generic(c, w.syllables().iter().cloned()))
}

pub fn has_pinch(w: &GoGWord, c: &CleanPresentation) -> bool {
    has_pinch_generic(c, w.syllables())
}

pub fn is_trivial(w: &GoGWord, c: &CleanPresentation) -> bool {
    britton_reduce(w, c).is_empty()
}
