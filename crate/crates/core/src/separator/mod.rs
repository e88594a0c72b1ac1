//! Separation certificates.
//!
//! Pipeline for `w ∈ π₁`:
//! 1. the θ₁ cover gives the finite-index subgroup `G` (words whose loop
//!    letters act trivially on `L_1`); elements outside `G` get a
//!    [`NonPWitness`];
//! 2. `w` is rewritten into a presentation of `G` ([`CoverPresentation`]);
//! 3. for `n = 1, 2, …` the depth-`n` quotient acts on `X = H × F/γ^p_n(F)`;
//!    `w` survives at depth `n` if it moves the basepoint, or fixes it and
//!    has nontrivial image in the free stabiliser `R`;
//! 4. in the latter case `R` is mapped onto `F_k/γ^p_j(F_k)` (`k` = basis
//!    letters used by the image of `w`, `j` least with survival);
//! 5. the certificate is the action of `G` on the orbit of the basepoint,
//!    whose image is a finite p-group: the quotient of `G` by the normal
//!    core of the point stabiliser.

mod check;
mod cover;
mod model;
mod pcore;

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use check::{check_filtration, FiltrationReport, LoopData};
pub use cover::{
    cover_presentation, kernel_cover, lift_gog, rewrite_into_cover, CoverGenerator, CoverPresentation,
    SchreierCover,
};
pub use model::{
    build_psi, free_kernel_basis, quotient_gog, DepthModel, FiniteQuotientGoG, FreeKernel, JointGroup, PsiSystem,
};
pub use pcore::p_core;

use crate::error::{Error, Result};
use crate::freegrp::Word;
use crate::gog::{is_trivial, CleanPresentation, GoGWord, Syllable};
use crate::perm::{p_power_exponent, Perm, StabilizerChain};
use crate::pfiltration::{build_lambda_oracle, Caps, FpMatrix, QuotientGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparateConfig {
    pub p: u32,
    pub caps: Caps,
    /// Depths evaluated concurrently; the result never depends on it.
    pub jobs: usize,
}

impl SeparateConfig {
    pub fn new(p: u32) -> Self {
        SeparateConfig { p, caps: Caps::default(), jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateMeta {
    pub depth: usize,
    pub cover_index: usize,
    /// Level `j` of the free-stabiliser quotient, when one was needed.
    pub kernel_level: Option<usize>,
}

/// A permutation representation of `G` in which the image of `w` is not
/// the identity. Generators are those of the [`CoverPresentation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: u32,
    pub degree: usize,
    pub order_exp: u32,
    pub generator_images: Vec<Perm>,
    pub element_image: Perm,
    pub meta: CertificateMeta,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `w` lies outside `G`: its loop letters act nontrivially on `L_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonPWitness {
    pub p: u32,
    /// Order of the θ₁ image group.
    pub group_order: usize,
    pub element_image: FpMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Certificate(Certificate),
    NonPWitness(NonPWitness),
}

/// How `w` survives at a given depth.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Survival {
    /// `w` moves the basepoint of `H` (only the `L_1`…`L_{n-1}` action).
    Joint,
    /// `w` moves the basepoint of `X`, to this element of `P` in the base fibre.
    Point(u32),
    /// `w` fixes the basepoint and has this image in the free stabiliser.
    Kernel(Word),
}

/// Everything the separator derives from the presentation alone.
pub struct Setup {
    pub cover: SchreierCover,
    pub presentation: CoverPresentation,
}

pub fn setup(c: &CleanPresentation, p: u32, caps: &Caps) -> Result<Setup> {
    let ext: Vec<_> = c.loops.iter().map(|l| l.extension.clone()).collect();
    let cover = kernel_cover(&ext, c.rank, p, caps.element_cap)?;
    let presentation = cover_presentation(c, &cover);
    Ok(Setup { cover, presentation })
}

pub fn separate(c: &CleanPresentation, w: &GoGWord, cfg: &SeparateConfig) -> Result<Outcome> {
    c.check_word(w)?;
    if !crate::pfiltration::SUPPORTED_PRIMES.contains(&cfg.p) {
        return Err(Error::UnsupportedPrime(cfg.p));
    }
    if is_trivial(w, c) {
        return Err(Error::IdentityElement);
    }
    let s = setup(c, cfg.p, &cfg.caps)?;
    let end = s.cover.end_state(w);
    if end != 0 {
        return Ok(Outcome::NonPWitness(NonPWitness {
            p: cfg.p,
            group_order: s.cover.state_count(),
            element_image: s.cover.states[end as usize].clone(),
        }));
    }
    let cover_word = rewrite_into_cover(w, &s.cover)?;
    let cap = cfg.caps.depth_cap_for(cfg.p);
    let jobs = cfg.jobs.max(1);
    if jobs == 1 {
        let live = AtomicBool::new(true);
        for n in 1..=cap {
            if let Some(cert) = attempt(c, w, &s, &cover_word, cfg, n, &live)? {
                return Ok(Outcome::Certificate(cert));
            }
        }
        return Err(Error::DepthExceeded { cap });
    }
    // Sliding window of `jobs` depths. Results are consumed in depth order,
    // so the outcome is the sequential one; workers still running when the
    // outcome is known are detached and stop at their next stage boundary.
    let shared = Arc::new((c.clone(), w.clone(), s, cover_word, cfg.clone()));
    let live = Arc::new(AtomicBool::new(true));
    let spawn = |n: usize| {
        let shared = Arc::clone(&shared);
        let live = Arc::clone(&live);
        std::thread::spawn(move || {
            let (c, w, s, cw, cfg) = &*shared;
            attempt(c, w, s, cw, cfg, n, &live)
        })
    };
    let mut pending = std::collections::VecDeque::new();
    let mut next = 1;
    while next <= cap && pending.len() < jobs {
        pending.push_back(spawn(next));
        next += 1;
    }
    while let Some(h) = pending.pop_front() {
        let r = h.join().expect("depth worker panicked");
        match r {
            Ok(None) => {
                if next <= cap {
                    pending.push_back(spawn(next));
                    next += 1;
                }
            }
            done => {
                live.store(false, Ordering::Relaxed);
                return done.map(|c| Outcome::Certificate(c.expect("certificate")));
            }
        }
    }
    Err(Error::DepthExceeded { cap })
}

fn attempt(
    c: &CleanPresentation,
    w: &GoGWord,
    s: &Setup,
    cover_word: &Word,
    cfg: &SeparateConfig,
    n: usize,
    live: &AtomicBool,
) -> Result<Option<Certificate>> {
    let m = DepthModel::new(c, cfg.p, n, &cfg.caps)?;
    if !live.load(Ordering::Relaxed) {
        return Ok(None);
    }
    let x = m.locate(w);
    let (survival, kernel) = if x.0 != 0 {
        (Survival::Joint, None)
    } else if x.1 != 0 {
        (Survival::Point(x.1), None)
    } else {
        let fk = free_kernel_basis(c, &m);
        let r = fk.rewrite(&m, w).expect("w fixes the basepoint");
        if r.is_identity() {
            return Ok(None);
        }
        (Survival::Kernel(r), Some(fk))
    };
    let action = Action::new(&m, survival, kernel, cfg)?;
    if !live.load(Ordering::Relaxed) {
        return Ok(None);
    }
    let cert = action.certificate(s, cover_word, cfg, n)?;
    let report = verify_certificate(&cert, &s.presentation, cover_word);
    if !report.ok {
        return Err(Error::Invalid(format!("internal: emitted certificate fails verification: {}", report.diagnostic)));
    }
    Ok(Some(cert))
}

/// The action of `π₁` used for the certificate.
struct Action<'a> {
    m: &'a DepthModel,
    use_point: bool,
    /// Canonical representative of the right coset `K·g` of the chosen
    /// subgroup `K ≤ P` (identity map when `K` is trivial).
    canon: Option<Vec<u32>>,
    kernel: Option<(FreeKernel, HashMap<i32, i32>, QuotientGroup)>,
    level: Option<usize>,
}

impl<'a> Action<'a> {
    fn new(m: &'a DepthModel, s: Survival, fk: Option<FreeKernel>, cfg: &SeparateConfig) -> Result<Self> {
        match s {
            Survival::Joint => Ok(Action { m, use_point: false, canon: None, kernel: None, level: None }),
            Survival::Point(g) => Ok(Action { m, use_point: true, canon: Some(avoiding_cosets(m, g)), kernel: None, level: None }),
            Survival::Kernel(r) => {
                // retract R onto the free factor spanned by the letters of r
                let mut used: Vec<i32> = r.letters().iter().map(|l| l.abs()).collect();
                used.sort_unstable();
                used.dedup();
                let map: HashMap<i32, i32> = used.iter().enumerate().map(|(k, &l)| (l, k as i32 + 1)).collect();
                let r = r.relabel(|l| map[&(l as i32)] as usize);
                let cap = cfg.caps.depth_cap_for(cfg.p);
                let mut j = 2;
                let (q, level) = loop {
                    if j > cap {
                        return Err(Error::DepthExceeded { cap });
                    }
                    let oracle = build_lambda_oracle(cfg.p, used.len(), j, &cfg.caps)?;
                    if !oracle.member(&r, j)? {
                        break (QuotientGroup::new(&oracle, j, &cfg.caps)?, j);
                    }
                    j += 1;
                };
                Ok(Action { m, use_point: true, canon: None, kernel: Some((fk.expect("kernel graph"), map, q)), level: Some(level) })
            }
        }
    }

    fn step(&self, (h, g, k): (u32, u32, u32), syl: &Syllable<Word>) -> (u32, u32, u32) {
        match syl {
            Syllable::Vertex(u) => {
                if !self.use_point {
                    return (h, g, k);
                }
                let mut x = (h, g);
                for &l in u.letters() {
                    x = self.m.vertex_letter(x, l);
                }
                match &self.canon {
                    Some(c) => (x.0, c[x.1 as usize], k),
                    None => (x.0, x.1, k),
                }
            }
            Syllable::Loop(l) => {
                let mut k = k;
                if let Some((fk, map, q)) = &self.kernel {
                    let b = fk.crossing(self.m, (h, g), *l);
                    if let Some(&t) = map.get(&b.abs()) {
                        k = q.mul_letter(k, b.signum() * t);
                    }
                }
                let (h, g) = self.m.loop_letter((h, g), *l);
                (h, g, k)
            }
        }
    }

    fn walk(&self, mut x: (u32, u32, u32), w: &GoGWord) -> (u32, u32, u32) {
        for syl in w.syllables() {
            x = self.step(x, syl);
        }
        x
    }

    /// Orbit of the basepoint under `G`, with the generator permutations.
    fn certificate(&self, s: &Setup, cover_word: &Word, cfg: &SeparateConfig, n: usize) -> Result<Certificate> {
        let gens = &s.presentation.images;
        let mut index: HashMap<(u32, u32, u32), u32> = HashMap::from([((0, 0, 0), 0)]);
        let mut points = vec![(0u32, 0u32, 0u32)];
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
        let mut i = 0;
        while i < points.len() {
            for (gi, gw) in gens.iter().enumerate() {
                let y = self.walk(points[i], gw);
                let k = match index.get(&y) {
                    Some(&k) => k,
                    None => {
                        if points.len() >= cfg.caps.order_cap {
                            return Err(Error::CapExceeded { cap: "order", limit: cfg.caps.order_cap });
                        }
                        let k = points.len() as u32;
                        index.insert(y, k);
                        points.push(y);
                        k
                    }
                };
                images[gi].push(k);
            }
            i += 1;
        }
        let generator_images: Vec<Perm> = images
            .into_iter()
            .map(|im| Perm::from_images(im).expect("generators act by permutations"))
            .collect();
        let degree = points.len();
        let order = StabilizerChain::new(&generator_images, degree).order();
        let order_exp = p_power_exponent(order, cfg.p)
            .ok_or_else(|| Error::Invalid(format!("internal: image group order {order} is not a power of {}", cfg.p)))?;
        let element_image = evaluate(&generator_images, degree, cover_word);
        Ok(Certificate {
            p: cfg.p,
            degree,
            order_exp,
            generator_images,
            element_image,
            meta: CertificateMeta { depth: n, cover_index: s.cover.state_count(), kernel_level: self.level },
        })
    }
}

/// Right cosets of a subgroup `K ≤ P` with `g ∉ K`, grown greedily from
/// short elements. `π₁` still acts on `H × K\P`, as a quotient of its action
/// on `X`, and the basepoint is still moved by the element.
fn avoiding_cosets(m: &DepthModel, g: u32) -> Vec<u32> {
    const CANDIDATES: u32 = 256;
    let q = &m.fq.q;
    let mut gens: Vec<u32> = Vec::new();
    let mut k = vec![0u32];
    for e in 1..(q.order() as u32).min(CANDIDATES) {
        if k.binary_search(&e).is_ok() {
            continue;
        }
        gens.push(e);
        let trial = q.subgroup(&gens);
        if trial.binary_search(&g).is_ok() {
            gens.pop();
        } else {
            k = trial;
        }
    }
    let mut canon = vec![u32::MAX; q.order()];
    for x in 0..q.order() as u32 {
        if canon[x as usize] != u32::MAX {
            continue;
        }
        let w = q.word(x);
        // K·x, labelled by its least element (x, since K ∋ 1 and x is unlabelled)
        for &y in &k {
            canon[q.walk(y, &w) as usize] = x;
        }
    }
    canon
}

/// Image of a word over generators `1..=len` (generator images act on the
/// right, so `a1 a2 …` is `a1.then(a2)…`).
pub fn evaluate(images: &[Perm], degree: usize, w: &Word) -> Perm {
    let inverses: Vec<Perm> = images.iter().map(|g| g.inverse()).collect();
    let mut pts: Vec<u32> = (0..degree as u32).collect();
    for &l in w.letters() {
        let g = if l > 0 { &images[l as usize - 1] } else { &inverses[(-l) as usize - 1] };
        for x in pts.iter_mut() {
            *x = g.apply(*x);
        }
    }
    Perm::from_images(pts).expect("product of permutations")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub diagnostic: String,
    pub group_order: Option<u128>,
}

fn reject(msg: impl Into<String>) -> VerifyReport {
    VerifyReport { ok: false, diagnostic: msg.into(), group_order: None }
}

/// Checks a certificate against a presentation of `G` and the rewritten
/// element, independently of how it was produced.
pub fn verify_certificate(cert: &Certificate, pres: &CoverPresentation, w: &Word) -> VerifyReport {
    if cert.p != pres.p {
        return reject(format!("certificate prime {} differs from the cover's prime {}", cert.p, pres.p));
    }
    if cert.meta.cover_index != pres.states {
        return reject(format!("cover index {} differs from {}", cert.meta.cover_index, pres.states));
    }
    if cert.generator_images.len() != pres.generators.len() {
        return reject(format!(
            "{} generator images for {} generators",
            cert.generator_images.len(),
            pres.generators.len()
        ));
    }
    if cert.degree == 0 {
        return reject("degree 0");
    }
    for (i, g) in cert.generator_images.iter().chain([&cert.element_image]).enumerate() {
        if g.degree() != cert.degree || Perm::from_images(g.images().to_vec()).is_none() {
            return reject(format!("image {i} is not a permutation of 0..{}", cert.degree));
        }
    }
    if w.max_index() > pres.generators.len() {
        return reject("element uses generators outside the presentation");
    }
    for (i, r) in pres.relators.iter().enumerate() {
        if !evaluate(&cert.generator_images, cert.degree, r).is_identity() {
            return reject(format!("relator {i} does not map to the identity"));
        }
    }
    let order = StabilizerChain::new(&cert.generator_images, cert.degree).order();
    match p_power_exponent(order, cert.p) {
        Some(a) if a == cert.order_exp => {}
        Some(a) => return reject(format!("group order is {}^{a}, certificate claims {}^{}", cert.p, cert.p, cert.order_exp)),
        None => return reject(format!("group order {order} is not a power of {}", cert.p)),
    }
    let image = evaluate(&cert.generator_images, cert.degree, w);
    if image != cert.element_image {
        return reject("element image does not match the generator images");
    }
    if image.is_identity() {
        return reject("element maps to the identity");
    }
    VerifyReport { ok: true, diagnostic: "ok".into(), group_order: Some(order) }
}
