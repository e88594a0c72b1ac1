//! The depth-`n` picture: the finite quotient graph of groups, the joint
//! action group `H` of the loops on `L_1` and `F/γ^p_n(F)`, its action on
//! `X = H × F/γ^p_n(F)`, the ψ-system and the free stabiliser of `X`'s
//! basepoint.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::freegrp::Word;
use crate::gog::{britton_generic, CleanPresentation, GoGWord, HnnData, Syllable};
use crate::perm::Perm;
use crate::pfiltration::{build_lambda_oracle, sigma_n, theta1, Caps, FpMatrix, InducedAut, QuotientGroup};

/// `π₁` of the one-vertex graph of finite groups obtained by replacing `F`
/// with `P = F/γ^p_n(F)` and each loop's factors with their images.
#[derive(Clone, Debug)]
pub struct FiniteQuotientGoG {
    pub p: u32,
    pub n: usize,
    pub q: QuotientGroup,
    /// `σ_n` of each loop's chosen extension, and inverses.
    pub sigma: Vec<InducedAut>,
    pub sigma_inv: Vec<InducedAut>,
    /// Images of `N_i` and `M_i`, sorted.
    pub domain: Vec<Vec<u32>>,
    pub codomain: Vec<Vec<u32>>,
    /// `x̄_j` for `j = 1..=rank` (index `j-1`).
    pub gens: Vec<u32>,
}

pub fn quotient_gog(c: &CleanPresentation, p: u32, n: usize, caps: &Caps) -> Result<FiniteQuotientGoG> {
    let oracle = build_lambda_oracle(p, c.rank, n, caps)?;
    let q = QuotientGroup::new(&oracle, n, caps)?;
    let gens: Vec<u32> = (1..=c.rank as i32).map(|j| q.walk(0, &Word::letter(j))).collect();
    let mut sigma = Vec::new();
    let mut domain = Vec::new();
    let mut codomain = Vec::new();
    for phi in &c.loops {
        sigma.push(sigma_n(&phi.extension, &q)?);
        let sub = |f: &crate::freegrp::BasisAlignedFactor| {
            let g: Vec<u32> = f.selected().iter().map(|&j| gens[j - 1]).collect();
            q.subgroup(&g)
        };
        domain.push(sub(&phi.domain));
        codomain.push(sub(&phi.codomain));
    }
    let sigma_inv = sigma.iter().map(|s| s.inverse()).collect();
    Ok(FiniteQuotientGoG { p, n, q, sigma, sigma_inv, domain, codomain, gens })
}

impl FiniteQuotientGoG {
    pub fn vertex_element(&self, w: &Word) -> u32 {
        self.q.walk(0, w)
    }

    pub fn syllables(&self, w: &GoGWord) -> Vec<Syllable<u32>> {
        w.syllables()
            .iter()
            .map(|s| match s {
                Syllable::Vertex(u) => Syllable::Vertex(self.vertex_element(u)),
                Syllable::Loop(l) => Syllable::Loop(*l),
            })
            .collect()
    }

    /// Britton's lemma in the finite quotient: is the image of `w` trivial?
    pub fn is_trivial(&self, w: &GoGWord) -> bool {
        britton_generic(self, self.syllables(w)).is_empty()
    }
}

impl HnnData for FiniteQuotientGoG {
    type Elem = u32;

    fn identity(&self) -> u32 {
        0
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.q.mul(*a, *b)
    }

    fn is_identity(&self, a: &u32) -> bool {
        *a == 0
    }

    fn in_domain(&self, i: usize, a: &u32) -> bool {
        self.domain[i].binary_search(a).is_ok()
    }

    fn in_codomain(&self, i: usize, a: &u32) -> bool {
        self.codomain[i].binary_search(a).is_ok()
    }

    fn forward(&self, i: usize, a: &u32) -> u32 {
        self.sigma[i].apply(*a)
    }

    fn backward(&self, i: usize, a: &u32) -> u32 {
        self.sigma_inv[i].apply(*a)
    }
}

/// The group generated by the pairs `(θ₁(φ_i), σ_n(φ_i))`, with right
/// multiplication by the generators: `next[h][i] = h ∘ φ_i`.
#[derive(Clone, Debug)]
pub struct JointGroup {
    pub mats: Vec<FpMatrix>,
    pub perms: Vec<Perm>,
    pub next: Vec<Vec<u32>>,
    pub prev: Vec<Vec<u32>>,
}

impl JointGroup {
    pub fn new(c: &CleanPresentation, fq: &FiniteQuotientGoG, cap: usize) -> Result<Self> {
        let th: Vec<FpMatrix> = c.loops.iter().map(|l| theta1(&l.extension, fq.p)).collect();
        let id = (FpMatrix::identity(fq.p, c.rank), Perm::identity(fq.q.order()));
        let mut index = HashMap::from([(id.clone(), 0u32)]);
        let mut elems = vec![id];
        let mut next = Vec::new();
        let mut h = 0;
        while h < elems.len() {
            let mut row = Vec::new();
            for (i, t) in th.iter().enumerate() {
                let e = (elems[h].0.mul(t), fq.sigma[i].perm().then(&elems[h].1));
                let k = match index.get(&e) {
                    Some(&k) => k,
                    None => {
                        if (elems.len() + 1).saturating_mul(fq.q.order()) > cap {
                            return Err(Error::CapExceeded { cap: "element", limit: cap });
                        }
                        let k = elems.len() as u32;
                        index.insert(e.clone(), k);
                        elems.push(e);
                        k
                    }
                };
                row.push(k);
            }
            next.push(row);
            h += 1;
        }
        let mut prev = vec![vec![0u32; th.len()]; elems.len()];
        for (h, row) in next.iter().enumerate() {
            for (i, &k) in row.iter().enumerate() {
                prev[k as usize][i] = h as u32;
            }
        }
        let (mats, perms) = elems.into_iter().unzip();
        Ok(JointGroup { mats, perms, next, prev })
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    /// Elements acting trivially on `L_1`: the image of the kernel `Q`.
    pub fn theta_kernel(&self) -> Vec<u32> {
        (0..self.order() as u32).filter(|&h| self.mats[h as usize].is_identity()).collect()
    }
}

/// `ψ_v` for the states of a cover of the loop graph, composed from `σ_n` of
/// the extensions along a BFS tree and checked on every edge.
#[derive(Clone, Debug)]
pub struct PsiSystem {
    pub psi: Vec<InducedAut>,
    /// Tree edges `(state, loop)` in discovery order.
    pub tree: Vec<(u32, usize)>,
    pub checked_edges: usize,
}

pub fn build_psi(fq: &FiniteQuotientGoG, next: &[Vec<u32>]) -> Result<PsiSystem> {
    let n = next.len();
    let mut psi: Vec<Option<InducedAut>> = vec![None; n];
    psi[0] = Some(InducedAut::from_perm(Perm::identity(fq.q.order())));
    let mut tree = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        for (i, &t) in next[s].iter().enumerate() {
            if psi[t as usize].is_none() {
                let v = psi[s].as_ref().unwrap().compose(&fq.sigma[i]);
                psi[t as usize] = Some(v);
                tree.push((s as u32, i));
                queue.push_back(t as usize);
            }
        }
    }
    let psi: Vec<InducedAut> =
        psi.into_iter().map(|v| v.ok_or(Error::Disconnected)).collect::<Result<_>>()?;
    let mut checked = 0;
    for (s, row) in next.iter().enumerate() {
        for (i, &t) in row.iter().enumerate() {
            if psi[s].compose(&fq.sigma[i]) != psi[t as usize] {
                return Err(Error::PathDependence { edge: (s, i) });
            }
            // ψ_e: the two restrictions to the edge group agree
            for &u in &fq.domain[i] {
                if psi[t as usize].apply(u) != psi[s].apply(fq.sigma[i].apply(u)) {
                    return Err(Error::PathDependence { edge: (s, i) });
                }
            }
            checked += 1;
        }
    }
    Ok(PsiSystem { psi, tree, checked_edges: checked })
}

/// The action of `π₁` on `X = H × P`:
/// `x_j : (h, g) ↦ (h, g·h(x̄_j))`, `t_i : (h, g) ↦ (h∘φ_i, g)`.
/// The stabiliser `R` of `(1, 1)` acts freely on the Bass–Serre tree of the
/// finite quotient, and is the fundamental group of [`FreeKernel`].
#[derive(Clone, Debug)]
pub struct DepthModel {
    pub fq: FiniteQuotientGoG,
    pub joint: JointGroup,
    /// `rmul[h][j]`: right multiplication by `h(x̄_{j+1})` on `P`, and inverse.
    rmul: Vec<Vec<Vec<u32>>>,
    rmul_inv: Vec<Vec<Vec<u32>>>,
}

impl DepthModel {
    pub fn new(c: &CleanPresentation, p: u32, n: usize, caps: &Caps) -> Result<Self> {
        let fq = quotient_gog(c, p, n, caps)?;
        let joint = JointGroup::new(c, &fq, caps.element_cap)?;
        let order = fq.q.order();
        let mut rmul = Vec::with_capacity(joint.order());
        let mut rmul_inv = Vec::with_capacity(joint.order());
        for perm in &joint.perms {
            let mut row = Vec::new();
            let mut row_inv = Vec::new();
            for &x in &fq.gens {
                let w = fq.q.word(perm.apply(x));
                let table: Vec<u32> = (0..order as u32).map(|g| fq.q.walk(g, &w)).collect();
                let mut inv = vec![0u32; order];
                for (g, &y) in table.iter().enumerate() {
                    inv[y as usize] = g as u32;
                }
                row.push(table);
                row_inv.push(inv);
            }
            rmul.push(row);
            rmul_inv.push(row_inv);
        }
        Ok(DepthModel { fq, joint, rmul, rmul_inv })
    }

    pub fn depth(&self) -> usize {
        self.fq.n
    }

    pub fn vertex_letter(&self, (h, g): (u32, u32), l: i32) -> (u32, u32) {
        let j = l.unsigned_abs() as usize - 1;
        let t = if l > 0 { &self.rmul[h as usize][j] } else { &self.rmul_inv[h as usize][j] };
        (h, t[g as usize])
    }

    pub fn loop_letter(&self, (h, g): (u32, u32), l: i32) -> (u32, u32) {
        let i = l.unsigned_abs() as usize - 1;
        let h = if l > 0 { self.joint.next[h as usize][i] } else { self.joint.prev[h as usize][i] };
        (h, g)
    }

    /// `(1, 1)·w`.
    pub fn locate(&self, w: &GoGWord) -> (u32, u32) {
        let mut x = (0, 0);
        for syl in w.syllables() {
            match syl {
                Syllable::Vertex(u) => {
                    for &l in u.letters() {
                        x = self.vertex_letter(x, l);
                    }
                }
                Syllable::Loop(l) => x = self.loop_letter(x, *l),
            }
        }
        x
    }

    /// Left cosets of `h(M̄_i)` in `P`: `coset[g]` and the coset count.
    fn cosets(&self, c: &CleanPresentation, h: usize, i: usize) -> (Vec<u32>, usize) {
        let order = self.fq.q.order();
        let gens: Vec<&Vec<u32>> =
            c.loops[i].codomain.selected().iter().map(|&j| &self.rmul[h][j - 1]).collect();
        let mut coset = vec![u32::MAX; order];
        let mut count = 0u32;
        for g in 0..order {
            if coset[g] != u32::MAX {
                continue;
            }
            coset[g] = count;
            let mut stack = vec![g as u32];
            while let Some(x) = stack.pop() {
                for t in &gens {
                    let y = t[x as usize];
                    if coset[y as usize] == u32::MAX {
                        coset[y as usize] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (coset, count as usize)
    }
}

/// The quotient graph `R\T`: vertices are the elements of `H`, and the
/// edges of loop `i` at `h` are the left cosets `g·h(M̄_i)`, running from
/// `h` to `h∘φ_i`. Its fundamental group is the free group `R`.
#[derive(Clone, Debug)]
pub struct FreeKernel {
    pub vertices: usize,
    pub edges: usize,
    pub rank: usize,
    /// `coset[h][i][g]`.
    coset: Vec<Vec<Vec<u32>>>,
    offset: Vec<Vec<usize>>,
    /// Basis letter (1-based) of each edge; 0 on tree edges.
    letter: Vec<i32>,
}

pub fn free_kernel_basis(c: &CleanPresentation, m: &DepthModel) -> FreeKernel {
    let k = c.loops.len();
    let hn = m.joint.order();
    let mut coset = Vec::with_capacity(hn);
    let mut offset = Vec::with_capacity(hn);
    let mut edges = 0;
    for h in 0..hn {
        let mut row = Vec::with_capacity(k);
        let mut orow = Vec::with_capacity(k);
        for i in 0..k {
            let (cs, count) = m.cosets(c, h, i);
            row.push(cs);
            orow.push(edges);
            edges += count;
        }
        coset.push(row);
        offset.push(orow);
    }
    let mut tree = vec![false; edges];
    let mut seen = vec![false; hn];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(h) = queue.pop_front() {
        for i in 0..k {
            let t = m.joint.next[h][i] as usize;
            if !seen[t] {
                seen[t] = true;
                tree[offset[h][i]] = true;
                queue.push_back(t);
            }
        }
    }
    let mut letter = vec![0i32; edges];
    let mut rank = 0;
    for e in 0..edges {
        if !tree[e] {
            rank += 1;
            letter[e] = rank as i32;
        }
    }
    FreeKernel { vertices: hn, edges, rank, coset, offset, letter }
}

impl FreeKernel {
    /// Basis letter crossed by `t_i^{±1}` from the point `(h, g)`, signed;
    /// 0 for tree edges.
    pub fn crossing(&self, m: &DepthModel, (h, g): (u32, u32), l: i32) -> i32 {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            let e = self.offset[h as usize][i] + self.coset[h as usize][i][g as usize] as usize;
            self.letter[e]
        } else {
            let h0 = m.joint.prev[h as usize][i] as usize;
            let e = self.offset[h0][i] + self.coset[h0][i][g as usize] as usize;
            -self.letter[e]
        }
    }

    /// Expresses `w` in the free basis of `R` when `w` fixes the basepoint.
    pub fn rewrite(&self, m: &DepthModel, w: &GoGWord) -> Option<Word> {
        let mut x = (0, 0);
        let mut raw = Vec::new();
        for syl in w.syllables() {
            match syl {
                Syllable::Vertex(u) => {
                    for &l in u.letters() {
                        x = m.vertex_letter(x, l);
                    }
                }
                Syllable::Loop(l) => {
                    let b = self.crossing(m, x, *l);
                    if b != 0 {
                        raw.push(b);
                    }
                    x = m.loop_letter(x, *l);
                }
            }
        }
        (x == (0, 0)).then(|| Word::from_letters(&raw))
    }
}
