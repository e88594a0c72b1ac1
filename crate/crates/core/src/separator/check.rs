//! Hypothesis checks for the filtration of a graph of groups: compatibility
//! of the edge maps, separation of the edge groups, normality of the layers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::freegrp::{factor_membership, BasisAlignedFactor, Word};
use crate::gog::CleanPresentation;
use crate::pfiltration::{build_lambda_oracle, Caps, QuotientGroup};

/// A loop's edge data, not assumed to be a partial automorphism.
#[derive(Clone, Debug)]
pub struct LoopData {
    pub domain: BasisAlignedFactor,
    pub codomain: BasisAlignedFactor,
    /// Images of the domain basis, as ambient words.
    pub images: Vec<Word>,
}

impl LoopData {
    pub fn of(c: &CleanPresentation) -> Vec<LoopData> {
        c.loops
            .iter()
            .map(|l| LoopData { domain: l.domain.clone(), codomain: l.codomain.clone(), images: l.map.images().to_vec() })
            .collect()
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FiltrationReport {
    pub depths: Vec<usize>,
    pub compatibility_checks: usize,
    pub separation_samples: usize,
    pub normality_checks: usize,
    pub failures: Vec<String>,
}

impl FiltrationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// At each depth `n`: (a) each edge map induces a bijection `N̄ → M̄` of the
/// images in `F/γ^p_n(F)`; (b) sampled words outside each edge factor leave
/// its image at some listed depth; (c) each layer is normalised by the
/// generators.
pub fn check_filtration(
    rank: usize,
    loops: &[LoopData],
    p: u32,
    depths: &[usize],
    samples: usize,
    seed: u64,
    caps: &Caps,
) -> Result<FiltrationReport> {
    let mut report = FiltrationReport { depths: depths.to_vec(), ..Default::default() };
    let Some(&deepest) = depths.iter().max() else { return Ok(report) };
    let oracle = build_lambda_oracle(p, rank, deepest, caps)?;
    for &n in depths {
        let q = QuotientGroup::new(&oracle, n, caps)?;
        let elem = |w: &Word| q.walk(0, w);
        for (i, l) in loops.iter().enumerate() {
            let dom: Vec<u32> = l.domain.basis_words().iter().map(elem).collect();
            let cod: Vec<u32> = l.codomain.basis_words().iter().map(elem).collect();
            let img: Vec<u32> = l.images.iter().map(elem).collect();
            let (nd, nc, ni) = (q.subgroup(&dom), q.subgroup(&cod), q.subgroup(&img));
            report.compatibility_checks += 1;
            if nd.len() != nc.len() || ni != nc {
                report.failures.push(format!(
                    "loop {}: depth {n}: edge map does not induce N̄ ≅ M̄ (|N̄| = {}, |M̄| = {}, |image| = {})",
                    i + 1,
                    nd.len(),
                    nc.len(),
                    ni.len()
                ));
            }
        }
        for j in 1..=n.min(oracle.depth()) {
            let layer = oracle.layer(j);
            for b in layer.generators() {
                for x in oracle.generator_images() {
                    let ctx = oracle.context();
                    let conj = ctx.mul(&ctx.mul(&ctx.inverse(x), &b), x);
                    report.normality_checks += 1;
                    if !layer.contains(ctx, &conj) {
                        report.failures.push(format!("layer {j} is not normal"));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, l) in loops.iter().enumerate() {
        for f in [&l.domain, &l.codomain] {
            let mut found = 0;
            let mut tries = 0;
            while found < samples && tries < samples * 50 {
                tries += 1;
                let len = rng.gen_range(1..=6);
                let raw: Vec<i32> = (0..len)
                    .map(|_| rng.gen_range(1..=rank as i32) * if rng.gen_bool(0.5) { 1 } else { -1 })
                    .collect();
                let w = Word::from_letters(&raw);
                if w.is_identity() || factor_membership(&w, f)? {
                    continue;
                }
                found += 1;
                report.separation_samples += 1;
                let mut separated = false;
                for &n in depths {
                    if !oracle.lambda_factor_member(&w, f, n)? {
                        separated = true;
                        break;
                    }
                }
                if !separated {
                    report.failures.push(format!("loop {}: {w} not separated from its edge factor", i + 1));
                }
            }
        }
    }
    Ok(report)
}
