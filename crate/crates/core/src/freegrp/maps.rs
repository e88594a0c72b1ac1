use serde::{Deserialize, Serialize};

use super::fold::fold_subgroup;
use super::word::Word;
use crate::error::{Error, Result};

/// A homomorphism between free groups given by the images of the source generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeMap {
    source_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_rank: Option<usize>,
    images: Vec<Word>,
}

impl FreeMap {
    pub fn new(source_rank: usize, target_rank: usize, images: Vec<Word>) -> Result<Self> {
        if images.len() != source_rank {
            return Err(Error::BasisMismatch { expected: source_rank, found: images.len() });
        }
        if let Some(bad) = images.iter().find(|w| w.max_index() > target_rank) {
            return Err(Error::IndexOutOfRange { index: bad.max_index() as i32, rank: target_rank });
        }
        Ok(FreeMap { source_rank, target_rank: Some(target_rank), images })
    }

    /// Endomorphism of `F_rank` from raw letter lists (convenience for fixtures and tests).
    pub fn endo(rank: usize, images: &[&[i32]]) -> Result<Self> {
        let images = images.iter().map(|l| Word::reduce(l, rank)).collect::<Result<Vec<_>>>()?;
        FreeMap::new(rank, rank, images)
    }

    pub fn identity(rank: usize) -> Self {
        FreeMap {
            source_rank: rank,
            target_rank: Some(rank),
            images: (1..=rank as i32).map(Word::letter).collect(),
        }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    /// Target rank; maps read from JSON without one default to the largest index used.
    pub fn target_rank(&self) -> usize {
        self.target_rank
            .unwrap_or_else(|| self.images.iter().map(Word::max_index).max().unwrap_or(0))
    }

    pub fn with_target_rank(mut self, rank: usize) -> Result<Self> {
        if self.images.iter().any(|w| w.max_index() > rank) {
            return Err(Error::BasisMismatch { expected: rank, found: self.target_rank() });
        }
        self.target_rank = Some(rank);
        Ok(self)
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    /// Substitutes the images into `w` and reduces.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.max_index() > self.source_rank {
            return Err(Error::BasisMismatch { expected: self.source_rank, found: w.max_index() });
        }
        let mut out = Word::identity();
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            out = if l > 0 { out.concat(img) } else { out.concat(&img.inverse()) };
        }
        Ok(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FreeMap) -> Result<FreeMap> {
        if other.target_rank() > self.source_rank {
            return Err(Error::BasisMismatch { expected: self.source_rank, found: other.target_rank() });
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<Vec<_>>>()?;
        Ok(FreeMap { source_rank: other.source_rank, target_rank: self.target_rank, images })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| w.letters() == [i as i32 + 1])
    }
}

/// An automorphism together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Automorphism {
    pub forward: FreeMap,
    pub inverse: FreeMap,
}

/// Checks that `m` is onto and computes its inverse by reading each generator
/// through the folded image subgroup.
pub fn verify_automorphism(m: &FreeMap) -> Result<Automorphism> {
    let rank = m.source_rank;
    if m.target_rank() != rank {
        return Err(Error::BasisMismatch { expected: rank, found: m.target_rank() });
    }
    let graph = fold_subgroup(&m.images);
    let mut inv = Vec::with_capacity(rank);
    for i in 1..=rank {
        match graph.express(&Word::letter(i as i32)) {
            Some(w) => inv.push(w),
            None => return Err(Error::NotSurjective { generator: i }),
        }
    }
    let inverse = FreeMap::new(rank, rank, inv)?;
    // n generators of F_n form a basis, so both composites are the identity
    debug_assert!(m.compose(&inverse)?.is_identity() && inverse.compose(m)?.is_identity());
    Ok(Automorphism { forward: m.clone(), inverse })
}

impl Automorphism {
    pub fn identity(rank: usize) -> Self {
        Automorphism { forward: FreeMap::identity(rank), inverse: FreeMap::identity(rank) }
    }

    pub fn from_images(rank: usize, images: &[&[i32]]) -> Result<Self> {
        verify_automorphism(&FreeMap::endo(rank, images)?)
    }

    pub fn rank(&self) -> usize {
        self.forward.source_rank
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.forward.apply(w)
    }

    pub fn invert(&self) -> Automorphism {
        Automorphism { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        Ok(Automorphism {
            forward: self.forward.compose(&other.forward)?,
            inverse: other.inverse.compose(&self.inverse)?,
        })
    }

    pub fn pow(&self, k: i64) -> Result<Automorphism> {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Automorphism::identity(self.rank());
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base)?;
        }
        Ok(out)
    }

    /// Inner automorphism `w ↦ g w g⁻¹`.
    pub fn inner(rank: usize, g: &Word) -> Self {
        let conj = |h: &Word| -> FreeMap {
            FreeMap {
                source_rank: rank,
                target_rank: Some(rank),
                images: (1..=rank as i32).map(|i| Word::letter(i).conjugate_by(h)).collect(),
            }
        };
        Automorphism { forward: conj(g), inverse: conj(&g.inverse()) }
    }
}

/// A free factor spanned by a sub-tuple of the ambient basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisAlignedFactor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ambient_rank: Option<usize>,
    selected: Vec<usize>,
}

impl BasisAlignedFactor {
    pub fn new(ambient_rank: usize, selected: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; ambient_rank + 1];
        for &s in &selected {
            if s == 0 || s > ambient_rank {
                return Err(Error::IndexOutOfRange { index: s as i32, rank: ambient_rank });
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::Invalid(format!("factor index {s} repeated")));
            }
        }
        Ok(BasisAlignedFactor { ambient_rank: Some(ambient_rank), selected })
    }

    pub fn whole(rank: usize) -> Self {
        BasisAlignedFactor { ambient_rank: Some(rank), selected: (1..=rank).collect() }
    }

    /// Attaches the ambient rank to a factor read from JSON and validates it.
    pub fn in_ambient(&self, ambient_rank: usize) -> Result<Self> {
        BasisAlignedFactor::new(ambient_rank, self.selected.clone())
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank.unwrap_or_else(|| self.selected.iter().copied().max().unwrap_or(0))
    }

    pub fn rank(&self) -> usize {
        self.selected.len()
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.selected.contains(&i)
    }

    /// Ambient generators not selected, in index order.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.ambient_rank()).filter(|i| !self.selected.contains(i)).collect()
    }

    /// The factor's basis as ambient words.
    pub fn basis_words(&self) -> Vec<Word> {
        self.selected.iter().map(|&i| Word::letter(i as i32)).collect()
    }

    /// Rewrites a word over the factor's own basis (`1..=rank`) into ambient letters.
    pub fn embed(&self, w: &Word) -> Word {
        w.relabel(|i| self.selected[i - 1])
    }
}

/// Membership of a reduced word in a basis-aligned factor: reduced words are
/// normal forms, so this is a letter check.
pub fn factor_membership(w: &Word, f: &BasisAlignedFactor) -> Result<bool> {
    if w.max_index() > f.ambient_rank() {
        return Err(Error::BasisMismatch { expected: f.ambient_rank(), found: w.max_index() });
    }
    Ok(w.letters().iter().all(|l| f.contains_index(l.unsigned_abs() as usize)))
}

/// An isomorphism between two basis-aligned factors with a chosen ambient extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialAutomorphism {
    pub domain: BasisAlignedFactor,
    pub codomain: BasisAlignedFactor,
    /// Images of the domain's basis (in `selected` order) as ambient words.
    pub map: FreeMap,
    pub extension: Automorphism,
}

/// Extends `map: domain → codomain` to an ambient automorphism by sending the
/// i-th complementary generator of the domain to the i-th complementary
/// generator of the codomain.
pub fn extend_partial(
    domain: &BasisAlignedFactor,
    codomain: &BasisAlignedFactor,
    map: &FreeMap,
) -> Result<PartialAutomorphism> {
    let ambient = domain.ambient_rank();
    if codomain.ambient_rank() != ambient {
        return Err(Error::BasisMismatch { expected: ambient, found: codomain.ambient_rank() });
    }
    if domain.rank() != codomain.rank() {
        return Err(Error::RankMismatch { domain: domain.rank(), codomain: codomain.rank() });
    }
    if map.source_rank() != domain.rank() {
        return Err(Error::BasisMismatch { expected: domain.rank(), found: map.source_rank() });
    }
    for img in map.images() {
        if !factor_membership(img, codomain)? {
            return Err(Error::NotABasisOfFactor(format!("image {img} leaves the codomain factor")));
        }
    }
    let graph = fold_subgroup(map.images());
    for g in codomain.basis_words() {
        if !graph.membership(&g) {
            return Err(Error::NotABasisOfFactor(format!("{g} is not generated by the images")));
        }
    }
    let mut images = vec![Word::identity(); ambient];
    for (k, &i) in domain.selected().iter().enumerate() {
        images[i - 1] = map.images()[k].clone();
    }
    for (i, j) in domain.complement().into_iter().zip(codomain.complement()) {
        images[i - 1] = Word::letter(j as i32);
    }
    let extension = verify_automorphism(&FreeMap::new(ambient, ambient, images)?)?;
    Ok(PartialAutomorphism {
        domain: domain.clone(),
        codomain: codomain.clone(),
        map: map.clone().with_target_rank(ambient)?,
        extension,
    })
}

impl PartialAutomorphism {
    /// `φ(u)` for `u` in the domain.
    pub fn forward(&self, u: &Word) -> Word {
        self.extension.forward.apply(u).expect("word over the ambient basis")
    }

    /// `φ⁻¹(v)` for `v` in the codomain.
    pub fn backward(&self, v: &Word) -> Word {
        self.extension.inverse.apply(v).expect("word over the ambient basis")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(l: &[i32]) -> Word {
        Word::from_letters(l)
    }

    #[test]
    fn apply_map_examples() {
        let m = FreeMap::endo(2, &[&[1, 2], &[2]]).unwrap();
        assert_eq!(m.apply(&w(&[1, -2])).unwrap(), w(&[1]));
        let id = FreeMap::identity(2);
        assert_eq!(id.apply(&w(&[1, 2, -1])).unwrap(), w(&[1, 2, -1]));
        let swap = FreeMap::endo(2, &[&[2], &[1]]).unwrap();
        assert_eq!(swap.apply(&w(&[1, 2])).unwrap(), w(&[2, 1]));
        assert!(matches!(swap.apply(&w(&[3])), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn verify_automorphism_examples() {
        let swap = Automorphism::from_images(2, &[&[2], &[1]]).unwrap();
        assert_eq!(swap.inverse, swap.forward);
        let t = Automorphism::from_images(2, &[&[1, 2], &[2]]).unwrap();
        assert_eq!(t.inverse, FreeMap::endo(2, &[&[1, -2], &[2]]).unwrap());
        let sq = verify_automorphism(&FreeMap::endo(2, &[&[1, 1], &[2]]).unwrap());
        assert_eq!(sq, Err(Error::NotSurjective { generator: 1 }));
    }

    #[test]
    fn extend_partial_examples() {
        let x = BasisAlignedFactor::new(2, vec![1]).unwrap();
        let y = BasisAlignedFactor::new(2, vec![2]).unwrap();
        let m = FreeMap::new(1, 2, vec![w(&[2])]).unwrap();
        let pa = extend_partial(&x, &y, &m).unwrap();
        assert_eq!(pa.extension.forward, FreeMap::endo(2, &[&[2], &[1]]).unwrap());

        let whole = BasisAlignedFactor::whole(2);
        let t = FreeMap::endo(2, &[&[1, 2], &[2]]).unwrap();
        assert_eq!(extend_partial(&whole, &whole, &t).unwrap().extension.forward, t);

        let idx = FreeMap::new(1, 2, vec![w(&[1])]).unwrap();
        assert!(extend_partial(&x, &x, &idx).unwrap().extension.forward.is_identity());

        let sq = FreeMap::new(1, 2, vec![w(&[2, 2])]).unwrap();
        assert!(matches!(extend_partial(&x, &y, &sq), Err(Error::NotABasisOfFactor(_))));
        assert!(matches!(
            extend_partial(&x, &whole, &idx),
            Err(Error::RankMismatch { domain: 1, codomain: 2 })
        ));
        let out = FreeMap::new(1, 2, vec![w(&[1])]).unwrap();
        assert!(matches!(extend_partial(&x, &y, &out), Err(Error::NotABasisOfFactor(_))));
    }

    #[test]
    fn factor_membership_examples() {
        let x = BasisAlignedFactor::new(2, vec![1]).unwrap();
        assert!(factor_membership(&w(&[1, 1]), &x).unwrap());
        assert!(!factor_membership(&w(&[1, 2, -1]), &x).unwrap());
        assert!(factor_membership(&Word::identity(), &x).unwrap());
        assert!(factor_membership(&w(&[3]), &x).is_err());
    }

    fn nielsen_product() -> impl Strategy<Value = Vec<(usize, usize, bool, bool)>> {
        prop::collection::vec((0..3usize, 0..3usize, any::<bool>(), any::<bool>()), 1..6)
    }

    fn build(moves: &[(usize, usize, bool, bool)]) -> FreeMap {
        let mut images: Vec<Word> = (1..=3).map(Word::letter).collect();
        for &(i, j, left, inv) in moves {
            if i == j {
                images[i] = images[i].inverse();
                continue;
            }
            let other = if inv { images[j].inverse() } else { images[j].clone() };
            images[i] = if left { other.concat(&images[i]) } else { images[i].concat(&other) };
        }
        FreeMap::new(3, 3, images).unwrap()
    }

    proptest! {
        #[test]
        fn automorphism_inverse_roundtrip(moves in nielsen_product(), raw in prop::collection::vec(prop::sample::select(vec![1,-1,2,-2,3,-3]), 0..16)) {
            let a = verify_automorphism(&build(&moves)).unwrap();
            let x = Word::from_letters(&raw);
            prop_assert_eq!(a.forward.apply(&a.inverse.apply(&x).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(a.inverse.apply(&a.forward.apply(&x).unwrap()).unwrap(), x);
        }

        #[test]
        fn apply_is_a_homomorphism(moves in nielsen_product(), a in prop::collection::vec(prop::sample::select(vec![1,-1,2,-2,3,-3]), 0..12), b in prop::collection::vec(prop::sample::select(vec![1,-1,2,-2,3,-3]), 0..12)) {
            let m = build(&moves);
            let (a, b) = (Word::from_letters(&a), Word::from_letters(&b));
            prop_assert_eq!(m.apply(&a.concat(&b)).unwrap(), m.apply(&a).unwrap().concat(&m.apply(&b).unwrap()));
        }

        #[test]
        fn extension_restricts_to_map(moves in nielsen_product()) {
            // an automorphism of <x1,x2>, shifted to land in the factor <x2,x3> of F_3
            let moves: Vec<_> = moves.into_iter().map(|(i, j, l, v)| (i % 2, j % 2, l, v)).collect();
            let inner = build(&moves);
            let shifted: Vec<Word> = inner.images()[..2].iter().map(|w| w.relabel(|i| i + 1)).collect();
            let dom = BasisAlignedFactor::new(3, vec![1, 2]).unwrap();
            let codom = BasisAlignedFactor::new(3, vec![2, 3]).unwrap();
            let m = FreeMap::new(2, 3, shifted.clone()).unwrap();
            let pa = extend_partial(&dom, &codom, &m).unwrap();
            for (k, &i) in dom.selected().iter().enumerate() {
                prop_assert_eq!(pa.forward(&Word::letter(i as i32)), shifted[k].clone());
            }
        }
    }
}
