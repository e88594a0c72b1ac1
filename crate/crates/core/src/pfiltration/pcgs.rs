//! Subgroups of the truncated Magnus unit group stored as sifted bases.
//!
//! The unit group `1 + (positive degree)` is filtered by lowest degree; the
//! layers are elementary abelian and central. A base is a list of elements
//! whose lowest-degree parts are linearly independent in each degree. Once
//! the base is closed under p-th powers and pairwise commutators, every
//! subgroup element is a unique product `Π b^e` (0 ≤ e < p) in sifting order
//! and the subgroup has order `p^len`.

use std::collections::{BTreeMap, VecDeque};

use super::series::{MagnusContext, TruncatedSeries};

#[derive(Clone, Debug)]
pub struct BaseElement {
    pub series: TruncatedSeries,
    pub degree: usize,
    /// `series^{-c}` for `c = 1..p-1`.
    neg_powers: Vec<TruncatedSeries>,
}

#[derive(Clone, Debug, Default)]
struct LeadSpace {
    members: Vec<usize>,
    // echelon rows: (pivot, vector, combination of member leads giving the vector)
    rows: Vec<(usize, Vec<u8>, Vec<u8>)>,
}

fn inv_mod(a: u8, p: u8) -> u8 {
    (1..p).find(|&x| (a as u32 * x as u32) % p as u32 == 1).expect("nonzero mod p")
}

impl LeadSpace {
    /// Coordinates of `lead` in the member leads, or the reduced residual.
    fn coordinates(&self, lead: &[u8], p: u8) -> std::result::Result<Vec<u8>, Vec<u8>> {
        let (v, coords) = self.reduce(lead, p);
        if v.iter().all(|&x| x == 0) {
            Ok(coords)
        } else {
            Err(v)
        }
    }

    fn push(&mut self, member: usize, lead: &[u8], p: u8) {
        let (mut residual, coords) = self.reduce(lead, p);
        let mut combo: Vec<u8> = coords.iter().map(|&c| (p - c) % p).collect();
        combo.push(1);
        for row in &mut self.rows {
            row.2.push(0);
        }
        let pivot = residual.iter().position(|&x| x != 0).expect("nonzero residual");
        let s = inv_mod(residual[pivot], p);
        for x in residual.iter_mut() {
            *x = ((*x as u32 * s as u32) % p as u32) as u8;
        }
        for x in combo.iter_mut() {
            *x = ((*x as u32 * s as u32) % p as u32) as u8;
        }
        self.members.push(member);
        self.rows.push((pivot, residual, combo));
    }

    fn reduce(&self, lead: &[u8], p: u8) -> (Vec<u8>, Vec<u8>) {
        let mut v = lead.to_vec();
        let mut coords = vec![0u8; self.members.len()];
        for (pivot, row, combo) in &self.rows {
            let c = v[*pivot];
            if c == 0 {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = ((*x as u32 + (p - c) as u32 * *r as u32) % p as u32) as u8;
            }
            for (x, r) in coords.iter_mut().zip(combo) {
                *x = ((*x as u32 + c as u32 * *r as u32) % p as u32) as u8;
            }
        }
        (v, coords)
    }
}

/// A subgroup of the truncated unit group given by a closed sifted base.
#[derive(Clone, Debug)]
pub struct PcSubgroup {
    elems: Vec<BaseElement>,
    leads: BTreeMap<usize, LeadSpace>,
}

/// Result of sifting: exponents per base element, or the non-member remainder.
pub type SiftResult = std::result::Result<Vec<u8>, TruncatedSeries>;

impl PcSubgroup {
    pub fn trivial() -> Self {
        PcSubgroup { elems: Vec::new(), leads: BTreeMap::new() }
    }

    /// Closure of the subgroup generated by `gens`.
    pub fn generated(ctx: &MagnusContext, gens: &[TruncatedSeries]) -> Self {
        let mut s = PcSubgroup::trivial();
        s.close(ctx, gens.to_vec(), &[]);
        s
    }

    /// Normal closure of `gens` under conjugation by `ambient` generators.
    pub fn normal_closure(
        ctx: &MagnusContext,
        gens: &[TruncatedSeries],
        ambient: &[TruncatedSeries],
    ) -> Self {
        let mut s = PcSubgroup::trivial();
        s.close(ctx, gens.to_vec(), ambient);
        s
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// `log_p` of the order.
    pub fn order_exponent(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[BaseElement] {
        &self.elems
    }

    pub fn generators(&self) -> Vec<TruncatedSeries> {
        self.elems.iter().map(|b| b.series.clone()).collect()
    }

    pub fn sift(&self, ctx: &MagnusContext, g: &TruncatedSeries) -> SiftResult {
        let p = ctx.p() as u8;
        let mut g = g.clone();
        let mut exps = vec![0u8; self.elems.len()];
        while let Some(k) = ctx.lead_degree(&g) {
            let Some(space) = self.leads.get(&k) else { return Err(g) };
            let coords = match space.coordinates(ctx.block_coeffs(&g, k), p) {
                Ok(c) => c,
                Err(_) => return Err(g),
            };
            for (&m, &c) in space.members.iter().zip(&coords) {
                if c != 0 {
                    g = ctx.mul(&g, &self.elems[m].neg_powers[c as usize - 1]);
                    exps[m] = c;
                }
            }
        }
        Ok(exps)
    }

    pub fn contains(&self, ctx: &MagnusContext, g: &TruncatedSeries) -> bool {
        self.sift(ctx, g).is_ok()
    }

    /// Product of base powers in sifting order; inverse of [`sift`](Self::sift).
    pub fn element_from_exponents(&self, ctx: &MagnusContext, exps: &[u8]) -> TruncatedSeries {
        // sift peels factors off the right, degree by degree
        let mut order: Vec<usize> = Vec::new();
        for space in self.leads.values() {
            order.extend(&space.members);
        }
        let mut g = ctx.one();
        for &m in order.iter().rev() {
            if exps[m] != 0 {
                g = ctx.mul(&g, &ctx.pow(&self.elems[m].series, exps[m] as u64));
            }
        }
        g
    }

    fn push(&mut self, ctx: &MagnusContext, r: TruncatedSeries) -> usize {
        let p = ctx.p() as u8;
        let degree = ctx.lead_degree(&r).expect("non-identity");
        let inv = ctx.inverse(&r);
        let mut neg_powers = vec![inv.clone()];
        for _ in 2..p {
            let next = ctx.mul(neg_powers.last().unwrap(), &inv);
            neg_powers.push(next);
        }
        let idx = self.elems.len();
        let lead = ctx.block_coeffs(&r, degree).to_vec();
        self.leads.entry(degree).or_default().push(idx, &lead, p);
        self.elems.push(BaseElement { series: r, degree, neg_powers });
        idx
    }

    /// Adds `queue` and closes under p-th powers, commutators and conjugation
    /// by `ambient`. Returns the indices of the elements added.
    pub fn close(
        &mut self,
        ctx: &MagnusContext,
        queue: Vec<TruncatedSeries>,
        ambient: &[TruncatedSeries],
    ) -> std::ops::Range<usize> {
        let start = self.elems.len();
        let d = ctx.degree();
        let p = ctx.p() as usize;
        let mut queue: VecDeque<TruncatedSeries> = queue.into();
        while let Some(g) = queue.pop_front() {
            let r = match self.sift(ctx, &g) {
                Ok(_) => continue,
                Err(r) => r,
            };
            let idx = self.push(ctx, r);
            let deg = self.elems[idx].degree;
            let r = self.elems[idx].series.clone();
            if p * deg <= d {
                queue.push_back(ctx.pow(&r, p as u64));
            }
            for j in 0..idx {
                if self.elems[j].degree + deg <= d {
                    queue.push_back(ctx.commutator(&r, &self.elems[j].series));
                }
            }
            if deg < d {
                for a in ambient {
                    queue.push_back(ctx.commutator(&r, a));
                }
            }
        }
        start..self.elems.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::Word;
    use crate::pfiltration::enumerate::EnumeratedSubgroup;
    use crate::pfiltration::Caps;

    #[test]
    fn orders_match_brute_force_enumeration() {
        for (p, rank, d) in [(2, 1, 3), (3, 1, 2), (2, 2, 2), (2, 2, 3), (3, 2, 2)] {
            let ctx = MagnusContext::new(p, rank, d, &Caps::default()).unwrap();
            let gens: Vec<_> = (1..=rank as i32).map(|i| ctx.embed(&Word::letter(i)).unwrap()).collect();
            let pc = PcSubgroup::generated(&ctx, &gens);
            let full = EnumeratedSubgroup::generated(&ctx, &gens, 1 << 20).unwrap();
            assert_eq!((p as usize).pow(pc.len() as u32), full.order(), "p={p} r={rank} d={d}");
            for g in full.elements() {
                let e = pc.sift(&ctx, g).expect("member");
                assert_eq!(&pc.element_from_exponents(&ctx, &e), g);
            }
            // a proper subgroup: generated by x1^p and, if present, [x1, x2]
            let mut sub_gens = vec![ctx.pow(&gens[0], p as u64)];
            if rank > 1 {
                sub_gens.push(ctx.commutator(&gens[0], &gens[1]));
            }
            let pc = PcSubgroup::generated(&ctx, &sub_gens);
            let en = EnumeratedSubgroup::generated(&ctx, &sub_gens, 1 << 20).unwrap();
            assert_eq!((p as usize).pow(pc.len() as u32), en.order());
            for g in full.elements() {
                assert_eq!(pc.contains(&ctx, g), en.contains(g));
            }
        }
    }
}
