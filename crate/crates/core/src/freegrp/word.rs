use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered list of generator labels for a finite-rank free group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basis {
    names: Vec<String>,
}

impl Basis {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Invalid("a basis needs at least one generator".into()));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::Invalid("basis labels must be distinct".into()));
        }
        Ok(Basis { names })
    }

    /// `x1, …, x{rank}` style labels.
    pub fn standard(prefix: &str, rank: usize) -> Self {
        Basis { names: (1..=rank).map(|i| format!("{prefix}{i}")).collect() }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Renders a word using this basis' labels, e.g. `x1 x2^-1`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        render_runs(w.letters(), |i| self.names[i - 1].clone())
    }
}

pub(crate) fn render_runs(letters: &[i32], name: impl Fn(usize) -> String) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let l = letters[i];
        let mut j = i;
        while j < letters.len() && letters[j] == l {
            j += 1;
        }
        let exp = (j - i) as i64 * l.signum() as i64;
        let n = name(l.unsigned_abs() as usize);
        out.push(if exp == 1 { n } else { format!("{n}^{exp}") });
        i = j;
    }
    out.join(" ")
}

/// A freely reduced word. Letter `+i` is the `i`-th generator (1-indexed),
/// `-i` its inverse. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct Word(Vec<i32>);

impl TryFrom<Vec<i32>> for Word {
    type Error = Error;

    fn try_from(raw: Vec<i32>) -> Result<Self> {
        if let Some(&z) = raw.iter().find(|&&l| l == 0) {
            return Err(Error::IndexOutOfRange { index: z, rank: 0 });
        }
        Ok(Word::from_letters(&raw))
    }
}

impl From<Word> for Vec<i32> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The single-letter word `x_i^{±1}`.
    pub fn letter(l: i32) -> Self {
        assert!(l != 0, "letters are nonzero");
        Word(vec![l])
    }

    /// Freely reduces `raw`, rejecting letters outside `1..=rank`.
    pub fn reduce(raw: &[i32], rank: usize) -> Result<Self> {
        for &l in raw {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::IndexOutOfRange { index: l, rank });
            }
        }
        Ok(Word::from_letters(raw))
    }

    /// Freely reduces `raw` without a rank check. Letters must be nonzero.
    pub fn from_letters(raw: &[i32]) -> Self {
        let mut out: Vec<i32> = Vec::with_capacity(raw.len());
        for &l in raw {
            debug_assert!(l != 0);
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index occurring in the word (0 for the identity).
    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// `a b a⁻¹`.
    pub fn conjugate_by(&self, a: &Word) -> Word {
        a.concat(self).concat(&a.inverse())
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.0 {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Relabels every letter through `f` (sign preserved), then reduces.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Word {
        let raw: Vec<i32> =
            self.0.iter().map(|&l| l.signum() * f(l.unsigned_abs() as usize) as i32).collect();
        Word::from_letters(&raw)
    }

    /// Parses `x1 x2^-1 x1^3`; any alphabetic prefix is accepted before the index.
    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = split_exponent(tok)?;
            let digits = name.trim_start_matches(|c: char| c.is_alphabetic() || c == '_');
            let idx: i32 = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad generator token `{tok}`")))?;
            let l = if exp < 0 { -idx } else { idx };
            for _ in 0..exp.unsigned_abs() {
                raw.push(l);
            }
        }
        Word::reduce(&raw, rank)
    }
}

pub(crate) fn split_exponent(tok: &str) -> Result<(&str, i64)> {
    match tok.split_once('^') {
        None => Ok((tok, 1)),
        Some((name, e)) => {
            let exp: i64 =
                e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
            Ok((name, exp))
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        write!(f, "{}", render_runs(&self.0, |i| format!("x{i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce(&[1, -1], 2).unwrap(), Word::identity());
        assert_eq!(Word::reduce(&[], 2).unwrap(), Word::identity());
        assert_eq!(Word::reduce(&[1, 2, -2, 1], 2).unwrap().letters(), &[1, 1]);
        assert!(matches!(Word::reduce(&[3], 2), Err(Error::IndexOutOfRange { .. })));
        assert!(Word::reduce(&[0], 2).is_err());
    }

    #[test]
    fn concat_invert_examples() {
        assert!(Word::letter(1).concat(&Word::letter(-1)).is_identity());
        assert_eq!(Word::from_letters(&[1, 2]).inverse().letters(), &[-2, -1]);
        assert_eq!(
            Word::from_letters(&[1, 2]).concat(&Word::from_letters(&[-2, 1])).letters(),
            &[1, 1]
        );
    }

    #[test]
    fn parse_and_render() {
        let w = Word::parse("x1 x2^-1 x1^2", 2).unwrap();
        assert_eq!(w.letters(), &[1, -2, 1, 1]);
        assert_eq!(w.to_string(), "x1 x2^-1 x1^2");
        assert!(Word::parse("x3", 2).is_err());
        let json: Word = serde_json::from_str("[1, 2, -2]").unwrap();
        assert_eq!(json.letters(), &[1]);
        assert!(serde_json::from_str::<Word>("[0]").is_err());
    }

    fn raw_word() -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2, 3, -3]), 0..24)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in raw_word()) {
            let w = Word::from_letters(&raw);
            prop_assert_eq!(Word::from_letters(w.letters()), w.clone());
            prop_assert!(w.letters().windows(2).all(|p| p[0] != -p[1]));
        }

        #[test]
        fn group_laws(a in raw_word(), b in raw_word(), c in raw_word()) {
            let (a, b, c) = (Word::from_letters(&a), Word::from_letters(&b), Word::from_letters(&c));
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(a.inverse().inverse(), a.clone());
            prop_assert!(a.concat(&a.inverse()).is_identity());
        }
    }
}
