use std::fmt;

use crate::error::{Error, Result};
use crate::freegrp::{render_runs, split_exponent, Word};

/// A syllable of a word in a multiple HNN extension: a vertex-group element
/// or a single stable letter `t_i^{±1}` (signed, 1-indexed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable<E> {
    Vertex(E),
    Loop(i32),
}

/// An element of `π₁` of a one-vertex graph of free groups, kept as an
/// alternating sequence: no empty vertex syllable, no two adjacent vertex
/// syllables. Stable letters are never cancelled here; that is Britton's job.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GoGWord {
    syllables: Vec<Syllable<Word>>,
}

impl GoGWord {
    pub fn identity() -> Self {
        GoGWord::default()
    }

    pub fn vertex(w: Word) -> Self {
        let mut out = GoGWord::identity();
        out.push_vertex(w);
        out
    }

    pub fn loop_letter(l: i32) -> Self {
        assert!(l != 0);
        GoGWord { syllables: vec![Syllable::Loop(l)] }
    }

    pub fn from_syllables(syls: impl IntoIterator<Item = Syllable<Word>>) -> Self {
        let mut out = GoGWord::identity();
        for s in syls {
            match s {
                Syllable::Vertex(w) => out.push_vertex(w),
                Syllable::Loop(l) => out.push_loop(l),
            }
        }
        out
    }

    pub fn push_vertex(&mut self, w: Word) {
        if let Some(Syllable::Vertex(last)) = self.syllables.last_mut() {
            *last = last.concat(&w);
            if last.is_identity() {
                self.syllables.pop();
            }
        } else if !w.is_identity() {
            self.syllables.push(Syllable::Vertex(w));
        }
    }

    pub fn push_loop(&mut self, l: i32) {
        assert!(l != 0);
        self.syllables.push(Syllable::Loop(l));
    }

    pub fn syllables(&self) -> &[Syllable<Word>] {
        &self.syllables
    }

    pub fn into_syllables(self) -> Vec<Syllable<Word>> {
        self.syllables
    }

    /// Empty as a syllable sequence (not a group-theoretic triviality test).
    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn loop_count(&self) -> usize {
        self.syllables.iter().filter(|s| matches!(s, Syllable::Loop(_))).count()
    }

    /// Highest vertex generator index used.
    pub fn max_vertex_index(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| match s {
                Syllable::Vertex(w) => w.max_index(),
                Syllable::Loop(_) => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn max_loop_index(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| match s {
                Syllable::Loop(l) => l.unsigned_abs() as usize,
                Syllable::Vertex(_) => 0,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn concat(&self, other: &GoGWord) -> GoGWord {
        GoGWord::from_syllables(self.syllables.iter().chain(&other.syllables).cloned())
    }

    pub fn inverse(&self) -> GoGWord {
        GoGWord::from_syllables(self.syllables.iter().rev().map(|s| match s {
            Syllable::Vertex(w) => Syllable::Vertex(w.inverse()),
            Syllable::Loop(l) => Syllable::Loop(-l),
        }))
    }

    /// Encodes as a word in the free group on `x_1..x_rank, t_1..`, with
    /// `t_i` as letter `rank + i`.
    pub fn to_flat(&self, rank: usize) -> Word {
        let mut raw = Vec::new();
        for s in &self.syllables {
            match s {
                Syllable::Vertex(w) => raw.extend_from_slice(w.letters()),
                Syllable::Loop(l) => raw.push(l.signum() * (rank as i32 + l.abs())),
            }
        }
        Word::from_letters(&raw)
    }

    /// Inverse of [`to_flat`](Self::to_flat); free cancellation of stable
    /// letters in `flat` is harmless.
    pub fn from_flat(flat: &Word, rank: usize) -> GoGWord {
        let mut out = GoGWord::identity();
        for &l in flat.letters() {
            if l.unsigned_abs() as usize > rank {
                out.push_loop(l.signum() * (l.abs() - rank as i32));
            } else {
                out.push_vertex(Word::letter(l));
            }
        }
        out
    }

    /// Parses whitespace-separated tokens `x3`, `x1^-2`, `t2^-1`.
    pub fn parse(text: &str, rank: usize, loops: usize) -> Result<GoGWord> {
        let mut out = GoGWord::identity();
        for tok in text.split_whitespace() {
            let (name, exp) = split_exponent(tok)?;
            let (kind, digits) = name.split_at(name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len()));
            let idx: usize =
                digits.parse().map_err(|_| Error::Parse(format!("bad token `{tok}`")))?;
            let bound = match kind {
                "x" => rank,
                "t" => loops,
                _ => return Err(Error::Parse(format!("unknown generator `{tok}`"))),
            };
            if idx == 0 || idx > bound {
                return Err(Error::IndexOutOfRange { index: idx as i32, rank: bound });
            }
            let l = if exp < 0 { -(idx as i32) } else { idx as i32 };
            for _ in 0..exp.unsigned_abs() {
                if kind == "x" {
                    out.push_vertex(Word::letter(l));
                } else {
                    out.push_loop(l);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GoGWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut loops: Vec<i32> = Vec::new();
        let flush = |loops: &mut Vec<i32>, parts: &mut Vec<String>| {
            if !loops.is_empty() {
                parts.push(render_runs(loops, |i| format!("t{i}")));
                loops.clear();
            }
        };
        for s in &self.syllables {
            match s {
                Syllable::Vertex(w) => {
                    flush(&mut loops, &mut parts);
                    parts.push(w.to_string());
                }
                Syllable::Loop(l) => loops.push(*l),
            }
        }
        flush(&mut loops, &mut parts);
        write!(f, "{}", parts.join(" "))
    }
}
