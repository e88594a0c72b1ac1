//! Property suites for the filtration lemmas: commutator and power laws of
//! the layers, propagation of `θ₁ = id` to higher layers, p-power orders of
//! the induced automorphisms, and the p-group criterion for generated
//! subgroups.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegrp::{Automorphism, Word};
use crate::perm::{p_power_exponent, Perm, StabilizerChain};
use crate::pfiltration::{
    build_lambda_oracle, matrix_group_order, sigma_n, theta1, theta_j, Caps, LambdaOracle, QuotientGroup,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Suite {
    FiltrationLaws,
    SigmaOrder,
    ThetaPropagation,
    GeneratedSubgroups,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "filtration-laws" => Ok(Suite::FiltrationLaws),
            "sigma-order" => Ok(Suite::SigmaOrder),
            "theta-propagation" => Ok(Suite::ThetaPropagation),
            "generated-subgroups" => Ok(Suite::GeneratedSubgroups),
            _ => Err(Error::Invalid(format!(
                "unknown suite `{s}` (filtration-laws, sigma-order, theta-propagation, generated-subgroups)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::FiltrationLaws => "filtration-laws",
            Suite::SigmaOrder => "sigma-order",
            Suite::ThetaPropagation => "theta-propagation",
            Suite::GeneratedSubgroups => "generated-subgroups",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LabConfig {
    pub p: u32,
    pub rank: usize,
    /// Filtration depth: the bound on `m + n` for the laws, the deepest
    /// layer for the other suites.
    pub depth: usize,
    pub seed: u64,
    /// Samples per class (pairs per `(m, n)`, automorphisms, subgroups).
    pub samples: usize,
    pub caps: Caps,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LabReport {
    pub suite: String,
    pub p: u32,
    pub checks: usize,
    /// `(label, checks)` per class.
    pub classes: Vec<(String, usize)>,
    pub failures: Vec<String>,
}

impl LabReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, class: &str, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        match self.classes.iter_mut().find(|(c, _)| c == class) {
            Some((_, n)) => *n += 1,
            None => self.classes.push((class.to_string(), 1)),
        }
        if !ok {
            self.failures.push(what());
        }
    }
}

impl fmt::Display for LabReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (p = {}): {} checks, {} failures", self.suite, self.p, self.checks, self.failures.len())?;
        for (c, n) in &self.classes {
            writeln!(f, "  {c}: {n}")?;
        }
        for x in self.failures.iter().take(20) {
            writeln!(f, "  FAIL {x}")?;
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, cfg: &LabConfig) -> Result<LabReport> {
    let mut report = LabReport { suite: suite.to_string(), p: cfg.p, ..Default::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match suite {
        Suite::FiltrationLaws => filtration_laws(cfg, &mut rng, &mut report)?,
        Suite::SigmaOrder => sigma_order(cfg, &mut rng, &mut report)?,
        Suite::ThetaPropagation => theta_propagation(cfg, &mut rng, &mut report)?,
        Suite::GeneratedSubgroups => generated_subgroups(cfg, &mut rng, &mut report)?,
    }
    Ok(report)
}

fn random_layer_element(o: &LambdaOracle, j: usize, rng: &mut ChaCha8Rng) -> crate::TruncatedSeries {
    let layer = o.layer(j);
    let exps: Vec<u8> = (0..layer.len()).map(|_| rng.gen_range(0..o.p()) as u8).collect();
    layer.element_from_exponents(o.context(), &exps)
}

/// `[γ_m, γ_n] ⊆ γ_{m+n}` and `γ_m^p ⊆ γ_{m+1}` for `m + n ≤ depth`.
fn filtration_laws(cfg: &LabConfig, rng: &mut ChaCha8Rng, r: &mut LabReport) -> Result<()> {
    let o = build_lambda_oracle(cfg.p, cfg.rank, cfg.depth, &cfg.caps)?;
    let ctx = o.context();
    for m in 1..cfg.depth {
        for n in 1..=cfg.depth - m {
            let class = format!("m={m} n={n}");
            for _ in 0..cfg.samples {
                let h = random_layer_element(&o, m, rng);
                let k = random_layer_element(&o, n, rng);
                let c = ctx.commutator(&h, &k);
                r.record(&class, o.layer(m + n).contains(ctx, &c), || {
                    format!("[h, k] ∉ layer {} for h ∈ layer {m}, k ∈ layer {n}", m + n)
                });
                let hp = ctx.pow(&h, cfg.p as u64);
                r.record(&class, o.layer(m + 1).contains(ctx, &hp), || format!("h^p ∉ layer {} for h ∈ layer {m}", m + 1));
            }
        }
    }
    Ok(())
}

/// A random automorphism of `F_rank` acting trivially on `L_1`: a product
/// of `x_i ↦ x_i x_j^p` and `x_i ↦ x_j x_i x_j⁻¹` and their inverses.
pub fn random_ia_automorphism(rank: usize, p: u32, rng: &mut ChaCha8Rng) -> Automorphism {
    let mut a = Automorphism::identity(rank);
    if rank < 2 {
        return a;
    }
    let len = rng.gen_range(1..=6);
    for _ in 0..len {
        let i = rng.gen_range(1..=rank);
        let mut j = rng.gen_range(1..rank);
        if j >= i {
            j += 1;
        }
        let (i, j) = (i as i32, j as i32);
        let mut images: Vec<Vec<i32>> = (1..=rank as i32).map(|k| vec![k]).collect();
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        images[i as usize - 1] = if rng.gen_bool(0.5) {
            let mut v = vec![i];
            v.extend(std::iter::repeat_n(sign * j, p as usize));
            v
        } else {
            vec![sign * j, i, -sign * j]
        };
        let refs: Vec<&[i32]> = images.iter().map(|v| v.as_slice()).collect();
        let step = Automorphism::from_images(rank, &refs).expect("elementary automorphism");
        a = a.compose(&step).expect("same rank");
    }
    a
}

/// Lower unitriangular transvection `x_i ↦ x_i x_j` (`i > j`): θ₁ of order p.
fn random_unipotent(rank: usize, rng: &mut ChaCha8Rng) -> Automorphism {
    let i = rng.gen_range(2..=rank);
    let j = rng.gen_range(1..i);
    let mut images: Vec<Vec<i32>> = (1..=rank as i32).map(|k| vec![k]).collect();
    images[i - 1] = vec![i as i32, j as i32];
    let refs: Vec<&[i32]> = images.iter().map(|v| v.as_slice()).collect();
    Automorphism::from_images(rank, &refs).expect("transvection")
}

fn quotient(cfg: &LabConfig, n: usize) -> Result<QuotientGroup> {
    let o = build_lambda_oracle(cfg.p, cfg.rank, n, &cfg.caps)?;
    QuotientGroup::new(&o, n, &cfg.caps)
}

/// `θ₁ = id` ⇒ `σ_n` has p-power order.
fn sigma_order(cfg: &LabConfig, rng: &mut ChaCha8Rng, r: &mut LabReport) -> Result<()> {
    let q = quotient(cfg, cfg.depth)?;
    for _ in 0..cfg.samples {
        let a = random_ia_automorphism(cfg.rank, cfg.p, rng);
        r.record("theta1 = id", theta1(&a, cfg.p).is_identity(), || "sample has θ₁ ≠ id".into());
        let order = sigma_n(&a, &q)?.perm().order();
        r.record("sigma order", p_power_exponent(order, cfg.p).is_some(), || {
            format!("σ_{} of {:?} has order {order}", cfg.depth, a.forward.images())
        });
    }
    Ok(())
}

/// `θ₁ = id` ⇒ `θ_j = id` on `L_j` for `2 ≤ j ≤ depth`.
fn theta_propagation(cfg: &LabConfig, rng: &mut ChaCha8Rng, r: &mut LabReport) -> Result<()> {
    let o = build_lambda_oracle(cfg.p, cfg.rank, cfg.depth + 1, &cfg.caps)?;
    for _ in 0..cfg.samples {
        let a = random_ia_automorphism(cfg.rank, cfg.p, rng);
        for j in 2..=cfg.depth {
            let t = theta_j(&o, &a, j)?;
            r.record(&format!("L_{j}"), t.is_identity(), || {
                format!("θ_{j} ≠ id for {:?}", a.forward.images())
            });
        }
    }
    Ok(())
}

fn perm_group_order(gens: &[Perm], degree: usize) -> u128 {
    let nontrivial: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    StabilizerChain::new(&nontrivial, degree).order()
}

/// Generated subgroups: a p-group θ₁-image gives p-group σ_n-images for
/// `n ≤ depth`; a θ₁-image of non-p order gives a non-p σ-image on
/// `F/γ^p_2 = L_1`.
fn generated_subgroups(cfg: &LabConfig, rng: &mut ChaCha8Rng, r: &mut LabReport) -> Result<()> {
    if cfg.rank < 2 {
        return Err(Error::Invalid("generated-subgroups needs rank at least 2".into()));
    }
    let quotients: Vec<QuotientGroup> = (2..=cfg.depth).map(|n| quotient(cfg, n)).collect::<Result<_>>()?;
    let rank = cfg.rank;
    for _ in 0..cfg.samples {
        let mut gens: Vec<Automorphism> = (0..rng.gen_range(1..=3)).map(|_| random_ia_automorphism(rank, cfg.p, rng)).collect();
        for _ in 0..rng.gen_range(1..=2) {
            let u = random_unipotent(rank, rng);
            let ia = random_ia_automorphism(rank, cfg.p, rng);
            gens.push(u.compose(&ia)?);
        }
        let mats: Vec<_> = gens.iter().map(|a| theta1(a, cfg.p)).collect();
        let t1 = matrix_group_order(&mats, cfg.p, rank, cfg.caps.element_cap)?;
        r.record("p-group θ₁ image", p_power_exponent(t1 as u128, cfg.p).is_some(), || {
            format!("unipotent sample has θ₁ image of order {t1}")
        });
        for q in &quotients {
            let perms = gens.iter().map(|a| sigma_n(a, q).map(|s| s.perm().clone())).collect::<Result<Vec<_>>>()?;
            let order = perm_group_order(&perms, q.order());
            r.record("p-group ⇒ σ_n p-group", p_power_exponent(order, cfg.p).is_some(), || {
                format!("σ_{} image of order {order} from a p-group θ₁ image", q.level())
            });
        }
    }
    // non-p θ₁ images: add a generator whose θ₁ has order prime to p
    let q2 = quotient(cfg, 2)?;
    for _ in 0..cfg.samples {
        let mut gens: Vec<Automorphism> = (0..rng.gen_range(0..=2)).map(|_| random_ia_automorphism(rank, cfg.p, rng)).collect();
        gens.push(non_p_automorphism(rank, cfg.p).compose(&random_ia_automorphism(rank, cfg.p, rng))?);
        let mats: Vec<_> = gens.iter().map(|a| theta1(a, cfg.p)).collect();
        let t1 = matrix_group_order(&mats, cfg.p, rank, cfg.caps.element_cap)?;
        r.record("non-p θ₁ image", p_power_exponent(t1 as u128, cfg.p).is_none(), || {
            format!("sample θ₁ image has p-power order {t1}")
        });
        let perms = gens.iter().map(|a| sigma_n(a, &q2).map(|s| s.perm().clone())).collect::<Result<Vec<_>>>()?;
        let order = perm_group_order(&perms, q2.order());
        r.record("non-p ⇒ σ not p-group", p_power_exponent(order, cfg.p).is_none(), || {
            format!("σ image of order {order} from a non-p θ₁ image")
        });
    }
    Ok(())
}

/// An automorphism whose θ₁ has order prime to `p`: the cyclic shift of
/// the basis when `p ∤ rank`, otherwise the order-3 map `x ↦ y, y ↦ x⁻¹y⁻¹`
/// on the first two letters (p = 2) or the swap (p odd).
fn non_p_automorphism(rank: usize, p: u32) -> Automorphism {
    let mut images: Vec<Vec<i32>> = (1..=rank as i32).map(|k| vec![k]).collect();
    if rank >= 2 && !(rank as u32).is_multiple_of(p) {
        for (k, img) in images.iter_mut().enumerate() {
            *img = vec![((k + 1) % rank) as i32 + 1];
        }
    } else if p == 2 {
        images[0] = vec![2];
        images[1] = vec![-1, -2];
    } else {
        images[0] = vec![2];
        images[1] = vec![1];
    }
    let refs: Vec<&[i32]> = images.iter().map(|v| v.as_slice()).collect();
    Automorphism::from_images(rank, &refs).expect("permutation-type automorphism")
}

/// Words used by tests and benches: a random reduced word of length `len`.
pub fn random_word(rank: usize, len: usize, rng: &mut ChaCha8Rng) -> Word {
    let raw: Vec<i32> = (0..len)
        .map(|_| rng.gen_range(1..=rank as i32) * if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect();
    Word::from_letters(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u32, depth: usize, samples: usize) -> LabConfig {
        LabConfig { p, rank: 2, depth, seed: 7, samples, caps: Caps::default() }
    }

    #[test]
    fn suites_pass_small() {
        for p in [2, 3] {
            for suite in [Suite::FiltrationLaws, Suite::SigmaOrder, Suite::ThetaPropagation, Suite::GeneratedSubgroups] {
                let rep = run_suite(suite, &cfg(p, 3, 10)).unwrap();
                assert!(rep.passed(), "{rep}");
                assert!(rep.checks > 0);
            }
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in ["filtration-laws", "sigma-order", "theta-propagation", "generated-subgroups"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn non_p_generator_has_coprime_order() {
        for (rank, p) in [(2, 2), (2, 3), (3, 3), (3, 2)] {
            let m = theta1(&non_p_automorphism(rank, p), p);
            let order = matrix_group_order(&[m], p, rank, 1 << 20).unwrap();
            assert!(order > 1 && !(order as u32).is_multiple_of(p), "rank {rank} p {p}: {order}");
        }
    }
}
