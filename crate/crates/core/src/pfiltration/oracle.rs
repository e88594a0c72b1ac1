use crate::error::{Error, Result};
use crate::freegrp::{BasisAlignedFactor, Word};

use super::pcgs::PcSubgroup;
use super::series::{MagnusContext, TruncatedSeries};
use super::{truncation_degree, Caps};

/// Exact membership in `γ^p_j(F)` for `j ≤ depth`.
///
/// `layers[j-1]` is the image of `γ^p_j(F)` in the truncated unit group;
/// layer 1 is the whole image group.
#[derive(Clone, Debug)]
pub struct LambdaOracle {
    ctx: MagnusContext,
    depth: usize,
    gens: Vec<TruncatedSeries>,
    layers: Vec<PcSubgroup>,
}

pub fn build_lambda_oracle(p: u32, rank: usize, n: usize, caps: &Caps) -> Result<LambdaOracle> {
    caps.check_depth(p, n)?;
    LambdaOracle::with_degree(p, rank, n, truncation_degree(p, n), caps)
}

impl LambdaOracle {
    /// Builds the layers at an explicit truncation degree (used to check that
    /// the default degree is already exact).
    pub fn with_degree(p: u32, rank: usize, n: usize, degree: usize, caps: &Caps) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("filtration depth must be at least 1".into()));
        }
        let ctx = MagnusContext::new(p, rank, degree, caps)?;
        let gens: Vec<_> = (0..rank).map(|i| ctx.add(&ctx.one(), &ctx.variable(i + 1))).collect();
        let mut layers = vec![PcSubgroup::generated(&ctx, &gens)];
        for _ in 1..n {
            let prev = layers.last().unwrap();
            let mut seeds = Vec::new();
            for y in prev.elements() {
                seeds.push(ctx.pow(&y.series, p as u64));
                for x in &gens {
                    seeds.push(ctx.commutator(x, &y.series));
                }
            }
            seeds.retain(|s| !ctx.is_one(s));
            layers.push(PcSubgroup::normal_closure(&ctx, &seeds, &gens));
        }
        Ok(LambdaOracle { ctx, depth: n, gens, layers })
    }

    pub fn context(&self) -> &MagnusContext {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p()
    }

    pub fn rank(&self) -> usize {
        self.ctx.rank()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generator_images(&self) -> &[TruncatedSeries] {
        &self.gens
    }

    /// The image of `γ^p_j(F)`, `1 ≤ j ≤ depth`.
    pub fn layer(&self, j: usize) -> &PcSubgroup {
        assert!((1..=self.depth).contains(&j), "layer {j} outside 1..={}", self.depth);
        &self.layers[j - 1]
    }

    pub fn embed(&self, w: &Word) -> Result<TruncatedSeries> {
        if w.max_index() > self.rank() {
            return Err(Error::BasisMismatch { expected: self.rank(), found: w.max_index() });
        }
        self.ctx.embed(w)
    }

    /// Decides `w ∈ γ^p_j(F)`.
    pub fn member(&self, w: &Word, j: usize) -> Result<bool> {
        self.check_level(j)?;
        let g = self.embed(w)?;
        Ok(self.layer(j).contains(&self.ctx, &g))
    }

    /// The image of `N·γ^p_n(F)` for the factor `N = f`.
    pub fn factor_subgroup(&self, f: &BasisAlignedFactor, n: usize) -> Result<PcSubgroup> {
        self.check_level(n)?;
        let mut s = self.layer(n).clone();
        let gens = f
            .basis_words()
            .iter()
            .map(|b| self.embed(b))
            .collect::<Result<Vec<_>>>()?;
        s.close(&self.ctx, gens, &[]);
        Ok(s)
    }

    /// Decides `w ∈ N·γ^p_n(F)`.
    pub fn lambda_factor_member(&self, w: &Word, f: &BasisAlignedFactor, n: usize) -> Result<bool> {
        let s = self.factor_subgroup(f, n)?;
        Ok(s.contains(&self.ctx, &self.embed(w)?))
    }

    /// `dim L^p_j` for `j = 1..depth-1`.
    pub fn layer_dims(&self) -> Vec<usize> {
        self.layers.windows(2).map(|w| w[0].len() - w[1].len()).collect()
    }

    fn check_level(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.depth {
            return Err(Error::Invalid(format!("level {j} outside 1..={}", self.depth)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfiltration::enumerate::{enumerate_image_group, verbal_lambda_step};

    fn w(text: &str) -> Word {
        Word::parse(text, 2).unwrap()
    }

    #[test]
    fn membership_examples() {
        let o = build_lambda_oracle(2, 2, 3, &Caps::default()).unwrap();
        assert!(o.member(&w("x1 x2 x1^-1 x2^-1"), 2).unwrap());
        assert!(!o.member(&w("x1"), 2).unwrap());
        assert!(o.member(&w("x1^4"), 3).unwrap());
        assert!(!o.member(&w("x1^2"), 3).unwrap());
        assert!(o.member(&w("x1^2"), 2).unwrap());
    }

    #[test]
    fn factor_membership_examples() {
        let o = build_lambda_oracle(2, 2, 2, &Caps::default()).unwrap();
        let f = BasisAlignedFactor::new(2, vec![1]).unwrap();
        assert!(!o.lambda_factor_member(&w("x2"), &f, 2).unwrap());
        assert!(o.lambda_factor_member(&w("x1 x2^2"), &f, 2).unwrap());
        let o = build_lambda_oracle(3, 2, 3, &Caps::default()).unwrap();
        for n in 1..=3 {
            assert!(o.lambda_factor_member(&w("x1^5"), &f, n).unwrap());
        }
    }

    #[test]
    fn layer_dimensions() {
        let o = build_lambda_oracle(2, 2, 4, &Caps::default()).unwrap();
        let dims = o.layer_dims();
        assert_eq!(dims[0], 2);
        assert_eq!(dims[1], 3);
        let o = build_lambda_oracle(2, 1, 4, &Caps::default()).unwrap();
        assert_eq!(o.layer_dims(), [1, 1, 1]);
        let o = build_lambda_oracle(3, 3, 3, &Caps::default()).unwrap();
        assert_eq!(o.layer_dims()[0], 3);
    }

    #[test]
    fn layers_agree_with_enumeration() {
        for (p, rank, n) in [(2, 2, 3), (3, 1, 3), (2, 1, 4)] {
            let o = build_lambda_oracle(p, rank, n, &Caps::default()).unwrap();
            let ctx = o.context();
            let g = enumerate_image_group(ctx, 1 << 20).unwrap();
            let mut layer = g.clone();
            for j in 1..=n {
                assert_eq!((p as usize).pow(o.layer(j).len() as u32), layer.order(), "p={p} j={j}");
                for e in g.elements() {
                    assert_eq!(o.layer(j).contains(ctx, e), layer.contains(e));
                }
                layer = verbal_lambda_step(ctx, &g, &layer, 1 << 20).unwrap();
            }
        }
    }

    #[test]
    fn depth_cap_is_enforced() {
        let caps = Caps { depth_cap: Some(2), ..Caps::default() };
        assert_eq!(
            build_lambda_oracle(2, 2, 3, &caps).unwrap_err(),
            Error::CapExceeded { cap: "depth", limit: 2 }
        );
    }
}
