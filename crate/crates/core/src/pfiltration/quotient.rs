//! `F/γ^p_n(F)` as an explicit finite group, and induced actions of
//! automorphisms on it and on the layers `L^p_j`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::freegrp::{Automorphism, Word};
use crate::perm::Perm;

use super::oracle::LambdaOracle;
use super::pcgs::PcSubgroup;
use super::series::{MagnusContext, TruncatedSeries};
use super::theta::FpMatrix;
use super::Caps;

/// Base of `layer(from)` refined by the layers below it: the base of
/// `layer(to)` first, then successively closed with `layer(to-1)`, …,
/// `layer(from)`. Returns the base and the stage (layer index) of each element.
fn nested_base(oracle: &LambdaOracle, from: usize, to: usize) -> (PcSubgroup, Vec<usize>) {
    let ctx = oracle.context();
    let mut base = oracle.layer(to).clone();
    let mut stage = vec![to; base.len()];
    for j in (from..to).rev() {
        let added = base.close(ctx, oracle.layer(j).generators(), &[]);
        stage.extend(added.map(|_| j));
    }
    (base, stage)
}

/// The finite p-group `F/γ^p_n(F)`, elements numbered in BFS order from the
/// identity (element 0) along right multiplication by generators.
///
/// Two elements are equal iff their sifted exponents agree outside the
/// base of `γ^p_n`; that exponent vector is the canonical key, and the
/// canonical representative is the corresponding product of base powers.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    ctx: MagnusContext,
    level: usize,
    base: PcSubgroup,
    top: Vec<usize>,
    keys: Vec<Vec<u8>>,
    parent: Vec<(u32, u8)>,
    right: Vec<Vec<u32>>,
    right_inv: Vec<Vec<u32>>,
}

impl QuotientGroup {
    pub fn new(oracle: &LambdaOracle, n: usize, caps: &Caps) -> Result<Self> {
        if n == 0 || n > oracle.depth() {
            return Err(Error::Invalid(format!("level {n} outside 1..={}", oracle.depth())));
        }
        let ctx = oracle.context().clone();
        let (base, stage) = nested_base(oracle, 1, n);
        let top: Vec<usize> = (0..base.len()).filter(|&i| stage[i] < n).collect();
        let p = ctx.p() as usize;
        let order = (p as f64).powi(top.len() as i32);
        if order > caps.element_cap as f64 {
            return Err(Error::CapExceeded { cap: "element", limit: caps.element_cap });
        }
        let order = p.pow(top.len() as u32);
        let rank = ctx.rank();
        let key_of = |s: &TruncatedSeries| -> Vec<u8> {
            let exps = base.sift(&ctx, s).expect("image group element");
            top.iter().map(|&i| exps[i]).collect()
        };
        let mut index: HashMap<Vec<u8>, u32> = HashMap::with_capacity(order);
        let mut keys = Vec::with_capacity(order);
        let mut reps = Vec::with_capacity(order);
        let mut parent = Vec::with_capacity(order);
        let mut right = vec![vec![0u32; order]; rank];
        let one = ctx.one();
        index.insert(key_of(&one), 0);
        keys.push(key_of(&one));
        reps.push(one);
        parent.push((0, 0));
        let mut queue = VecDeque::from([0u32]);
        while let Some(e) = queue.pop_front() {
            for (l, row) in right.iter_mut().enumerate() {
                let s = ctx.mul_letter(&reps[e as usize], l as i32 + 1);
                let k = key_of(&s);
                let f = match index.get(&k) {
                    Some(&f) => f,
                    None => {
                        let f = keys.len() as u32;
                        index.insert(k.clone(), f);
                        keys.push(k);
                        reps.push(s);
                        parent.push((e, l as u8));
                        queue.push_back(f);
                        f
                    }
                };
                row[e as usize] = f;
            }
            // representatives are only needed while on the frontier
            reps[e as usize] = TruncatedSeries::default();
        }
        debug_assert_eq!(keys.len(), order);
        let right_inv = right
            .iter()
            .map(|r| {
                let mut inv = vec![0u32; order];
                for (i, &x) in r.iter().enumerate() {
                    inv[x as usize] = i as u32;
                }
                inv
            })
            .collect();
        Ok(QuotientGroup { ctx, level: n, base, top, keys, parent, right, right_inv })
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn rank(&self) -> usize {
        self.ctx.rank()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn order(&self) -> usize {
        self.keys.len()
    }

    /// `log_p` of the order.
    pub fn order_exponent(&self) -> usize {
        self.top.len()
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn key(&self, e: u32) -> &[u8] {
        &self.keys[e as usize]
    }

    /// Canonical representative in the truncated algebra.
    pub fn representative(&self, e: u32) -> TruncatedSeries {
        let mut exps = vec![0u8; self.base.len()];
        for (&i, &c) in self.top.iter().zip(&self.keys[e as usize]) {
            exps[i] = c;
        }
        self.base.element_from_exponents(&self.ctx, &exps)
    }

    pub fn mul_letter(&self, e: u32, l: i32) -> u32 {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            self.right[i][e as usize]
        } else {
            self.right_inv[i][e as usize]
        }
    }

    pub fn walk(&self, e: u32, w: &Word) -> u32 {
        w.letters().iter().fold(e, |acc, &l| self.mul_letter(acc, l))
    }

    pub fn element_of(&self, w: &Word) -> Result<u32> {
        if w.max_index() > self.rank() {
            return Err(Error::BasisMismatch { expected: self.rank(), found: w.max_index() });
        }
        Ok(self.walk(0, w))
    }

    /// A word representing `e` (the BFS tree path, hence of minimal length
    /// among positive words).
    pub fn word(&self, e: u32) -> Word {
        let mut letters = Vec::new();
        let mut x = e;
        while x != 0 {
            let (par, l) = self.parent[x as usize];
            letters.push(l as i32 + 1);
            x = par;
        }
        letters.reverse();
        Word::from_letters(&letters)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.walk(a, &self.word(b))
    }

    pub fn inverse(&self, a: u32) -> u32 {
        self.walk(0, &self.word(a).inverse())
    }

    /// Right multiplication by `x_{i+1}` as a permutation of the elements.
    pub fn letter_perm(&self, i: usize) -> Perm {
        Perm::from_images(self.right[i].clone()).expect("right multiplication is bijective")
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[u32]) -> Vec<u32> {
        let words: Vec<Word> = gens.iter().map(|&g| self.word(g)).collect();
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut i = 0;
        while i < out.len() {
            for w in &words {
                let y = self.walk(out[i], w);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Elements whose BFS parent is another element (all but the identity),
    /// with the parent and the generator index used.
    pub fn tree_edges(&self) -> impl Iterator<Item = (u32, u32, usize)> + '_ {
        self.parent.iter().enumerate().skip(1).map(|(e, &(par, l))| (par, e as u32, l as usize))
    }
}

/// The permutation of `F/γ^p_n(F)` induced by an automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedAut {
    perm: Perm,
}

impl InducedAut {
    pub fn from_perm(perm: Perm) -> Self {
        InducedAut { perm }
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn apply(&self, e: u32) -> u32 {
        self.perm.apply(e)
    }

    /// `self ∘ other` as maps of the group: apply `other` first.
    pub fn compose(&self, other: &InducedAut) -> InducedAut {
        InducedAut { perm: other.perm.then(&self.perm) }
    }

    pub fn inverse(&self) -> InducedAut {
        InducedAut { perm: self.perm.inverse() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity()
    }
}

/// `σ_n(a)`: built along the BFS tree, then checked to respect right
/// multiplication by every generator (hence to be a well-defined
/// automorphism of the quotient).
pub fn sigma_n(a: &Automorphism, q: &QuotientGroup) -> Result<InducedAut> {
    if a.rank() != q.rank() {
        return Err(Error::BasisMismatch { expected: q.rank(), found: a.rank() });
    }
    let images: Vec<&Word> = (0..q.rank()).map(|i| &a.forward.images()[i]).collect();
    let mut perm = vec![0u32; q.order()];
    for (par, e, l) in q.tree_edges() {
        perm[e as usize] = q.walk(perm[par as usize], images[l]);
    }
    for (l, img) in images.iter().enumerate() {
        for e in 0..q.order() {
            if perm[q.right[l][e] as usize] != q.walk(perm[e], img) {
                return Err(Error::Invalid("induced map is not a homomorphism".into()));
            }
        }
    }
    let perm = Perm::from_images(perm)
        .ok_or_else(|| Error::Invalid("induced map is not bijective".into()))?;
    Ok(InducedAut { perm })
}

pub fn perm_order(s: &InducedAut) -> u128 {
    s.perm.order()
}

/// `L^p_j = γ^p_j/γ^p_{j+1}` with a fixed basis, for computing `θ_j`.
#[derive(Clone, Debug)]
pub struct LayerQuotient {
    ctx: MagnusContext,
    level: usize,
    base: PcSubgroup,
    stage: Vec<usize>,
    coords: Vec<usize>,
}

impl LayerQuotient {
    /// Needs the oracle to reach depth `j + 1`.
    pub fn new(oracle: &LambdaOracle, j: usize) -> Result<Self> {
        if j == 0 || j + 1 > oracle.depth() {
            return Err(Error::Invalid(format!(
                "layer {j} needs filtration depth {}, oracle has {}",
                j + 1,
                oracle.depth()
            )));
        }
        let (base, stage) = nested_base(oracle, j, j + 1);
        let coords = (0..base.len()).filter(|&i| stage[i] == j).collect();
        Ok(LayerQuotient { ctx: oracle.context().clone(), level: j, base, stage, coords })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The matrix of the induced linear map on `L^p_j`; column `c` is the
    /// image of the `c`-th basis vector.
    pub fn action(&self, a: &Automorphism) -> Result<FpMatrix> {
        let ctx = &self.ctx;
        let images = (0..ctx.rank())
            .map(|i| ctx.embed(&a.forward.images()[i]))
            .collect::<Result<Vec<_>>>()?;
        let subst = ctx.substitution(&images);
        let mut cols = Vec::with_capacity(self.dim());
        for &c in &self.coords {
            let img = subst.apply(ctx, &self.base.elements()[c].series);
            let exps = self
                .base
                .sift(ctx, &img)
                .map_err(|_| Error::Invalid("automorphism does not preserve the layer".into()))?;
            debug_assert!(self.stage.iter().zip(&exps).all(|(&s, &e)| s >= self.level || e == 0));
            cols.push(self.coords.iter().map(|&i| exps[i] as u32).collect());
        }
        Ok(FpMatrix::from_columns(ctx.p(), &cols))
    }
}

/// `θ_j(a)` on `L^p_j`.
pub fn theta_j(oracle: &LambdaOracle, a: &Automorphism, j: usize) -> Result<FpMatrix> {
    LayerQuotient::new(oracle, j)?.action(a)
}
