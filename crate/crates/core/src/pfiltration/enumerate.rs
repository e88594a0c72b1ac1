//! Explicit element sets. Only used at small scale and as an oracle for the
//! base-driven computations.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

use super::series::{MagnusContext, TruncatedSeries};

#[derive(Clone, Debug)]
pub struct EnumeratedSubgroup {
    elements: BTreeSet<TruncatedSeries>,
    generators: Vec<TruncatedSeries>,
}

impl EnumeratedSubgroup {
    /// BFS closure of `gens` (finite group, so inverses come for free).
    pub fn generated(ctx: &MagnusContext, gens: &[TruncatedSeries], cap: usize) -> Result<Self> {
        let mut elements = BTreeSet::new();
        let one = ctx.one();
        elements.insert(one.clone());
        let mut queue = VecDeque::from([one]);
        while let Some(g) = queue.pop_front() {
            for s in gens {
                let h = ctx.mul(&g, s);
                if !elements.contains(&h) {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded { cap: "element", limit: cap });
                    }
                    elements.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(EnumeratedSubgroup { elements, generators: gens.to_vec() })
    }

    /// Normal closure of `gens` in the group generated by `ambient`.
    pub fn normal_closure(
        ctx: &MagnusContext,
        gens: &[TruncatedSeries],
        ambient: &[TruncatedSeries],
        cap: usize,
    ) -> Result<Self> {
        let mut gens = gens.to_vec();
        loop {
            let s = Self::generated(ctx, &gens, cap)?;
            let mut grown = false;
            for a in ambient {
                let ai = ctx.inverse(a);
                for g in s.generators.clone() {
                    let c = ctx.mul(&ctx.mul(a, &g), &ai);
                    if !s.contains(&c) {
                        gens.push(c);
                        grown = true;
                    }
                }
            }
            if !grown {
                return Ok(s);
            }
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &TruncatedSeries) -> bool {
        self.elements.contains(g)
    }

    pub fn elements(&self) -> impl Iterator<Item = &TruncatedSeries> {
        self.elements.iter()
    }

    pub fn generators(&self) -> &[TruncatedSeries] {
        &self.generators
    }
}

/// The full image group `Ḡ` of `F` in the truncated algebra.
pub fn enumerate_image_group(ctx: &MagnusContext, cap: usize) -> Result<EnumeratedSubgroup> {
    let gens: Vec<_> = (0..ctx.rank()).map(|i| ctx.add(&ctx.one(), &ctx.variable(i + 1))).collect();
    EnumeratedSubgroup::generated(ctx, &gens, cap)
}

/// One step `prev ↦ prev^p [G, prev]`, by normal closure of generator-level
/// p-th powers and commutators.
pub fn verbal_lambda_step(
    ctx: &MagnusContext,
    g: &EnumeratedSubgroup,
    prev: &EnumeratedSubgroup,
    cap: usize,
) -> Result<EnumeratedSubgroup> {
    let p = ctx.p() as u64;
    let mut gens = Vec::new();
    for y in prev.generators() {
        gens.push(ctx.pow(y, p));
        for x in g.generators() {
            gens.push(ctx.commutator(x, y));
        }
    }
    gens.retain(|s| !ctx.is_one(s));
    EnumeratedSubgroup::normal_closure(ctx, &gens, g.generators(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfiltration::Caps;

    fn ctx(p: u32, rank: usize, d: usize) -> MagnusContext {
        MagnusContext::new(p, rank, d, &Caps::default()).unwrap()
    }

    #[test]
    fn image_group_orders() {
        assert_eq!(enumerate_image_group(&ctx(2, 1, 1), 1 << 20).unwrap().order(), 2);
        assert_eq!(enumerate_image_group(&ctx(2, 1, 3), 1 << 20).unwrap().order(), 4);
        assert_eq!(enumerate_image_group(&ctx(3, 1, 2), 1 << 20).unwrap().order(), 3);
    }

    #[test]
    fn element_cap_is_reported() {
        let err = enumerate_image_group(&ctx(2, 2, 3), 10).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: "element", limit: 10 });
    }

    #[test]
    fn verbal_step_from_whole_group() {
        let c = ctx(2, 2, 2);
        let g = enumerate_image_group(&c, 1 << 20).unwrap();
        let l2 = verbal_lambda_step(&c, &g, &g, 1 << 20).unwrap();
        assert_eq!(g.order() / l2.order(), 4);
        let x = c.add(&c.one(), &c.variable(1));
        let y = c.add(&c.one(), &c.variable(2));
        assert!(l2.contains(&c.pow(&x, 2)));
        assert!(l2.contains(&c.pow(&y, 2)));
        assert!(l2.contains(&c.commutator(&x, &y)));
        let trivial = EnumeratedSubgroup::generated(&c, &[], 1 << 20).unwrap();
        assert_eq!(verbal_lambda_step(&c, &g, &trivial, 1 << 20).unwrap().order(), 1);
    }
}
