//! Graphs of free groups: validation of algebraic cleanness, collapse of a
//! spanning tree to a multiple HNN extension, Britton reduction and the
//! normal poly-free chain.
//!
//! Conventions: edge `e` runs from `τ(ē)` to `τ(e)`; its factor lives in
//! `G_{τ(e)}`. Of each pair `{e, ē}` exactly one edge carries an edge map,
//! sending the basis of `factor(e)` to a basis of `factor(ē)`; the relation
//! is `e · g · e⁻¹ = map(g)` for `g` in `factor(e)`.

mod britton;
mod collapse;
mod word;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegrp::{
    extend_partial, factor_membership, fold_subgroup, Basis, BasisAlignedFactor, FreeMap,
    PartialAutomorphism, Word,
};

pub use britton::{britton_generic, britton_reduce, has_pinch, has_pinch_generic, is_trivial, HnnData};
pub use collapse::{collapse, rewritten_original_relators, TreeRecord};
pub use word::{GoGWord, Syllable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: usize,
    pub bar: usize,
    pub tau: usize,
}

/// The underlying graph: vertices and oriented edges with `bar` and `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeSpec>,
}

impl Graph {
    pub fn edge(&self, id: usize) -> Option<&EdgeSpec> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// `τ(ē)`, the vertex the edge leaves.
    pub fn origin(&self, id: usize) -> usize {
        let bar = self.edge(id).expect("edge").bar;
        self.edge(bar).expect("bar edge").tau
    }

    pub fn terminus(&self, id: usize) -> usize {
        self.edge(id).expect("edge").tau
    }
}

/// Deterministic BFS spanning tree from the least vertex. Edges are returned
/// oriented away from the root, in discovery order; at each vertex the
/// leaving edges are tried by increasing id.
pub fn spanning_tree(g: &Graph) -> Result<Vec<usize>> {
    let Some(&root) = g.vertices.iter().min() else { return Ok(Vec::new()) };
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    let mut edges: Vec<&EdgeSpec> = g.edges.iter().collect();
    edges.sort_by_key(|e| e.id);
    while let Some(v) = queue.pop_front() {
        for e in &edges {
            if g.origin(e.id) == v && seen.insert(e.tau) {
                tree.push(e.id);
                queue.push_back(e.tau);
            }
        }
    }
    if seen.len() != g.vertices.len() {
        return Err(Error::Disconnected);
    }
    Ok(tree)
}

/// A graph of finite-rank free groups, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphOfGroups {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeSpec>,
    pub vertex_ranks: BTreeMap<usize, usize>,
    pub edge_factors: BTreeMap<usize, BasisAlignedFactor>,
    pub edge_maps: BTreeMap<usize, FreeMap>,
}

/// Outcome of [`validate_clean`]: every violation found, in a fixed order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Error>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl GraphOfGroups {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn graph(&self) -> Graph {
        Graph { vertices: self.vertices.clone(), edges: self.edges.clone() }
    }

    pub fn rank(&self, v: usize) -> usize {
        self.vertex_ranks.get(&v).copied().unwrap_or(0)
    }

    pub fn edge(&self, id: usize) -> Option<&EdgeSpec> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// `factor(e)` inside `G_{τ(e)}`.
    pub fn factor(&self, id: usize) -> Result<BasisAlignedFactor> {
        let e = self.edge(id).ok_or_else(|| Error::Invalid(format!("no edge {id}")))?;
        let f = self
            .edge_factors
            .get(&id)
            .ok_or_else(|| Error::Invalid(format!("edge {id} has no factor")))?;
        f.in_ambient(self.rank(e.tau))
    }

    /// The edge of the pair `{id, bar(id)}` that carries the edge map.
    pub fn carrier(&self, id: usize) -> Option<usize> {
        let bar = self.edge(id)?.bar;
        if self.edge_maps.contains_key(&id) {
            Some(id)
        } else if self.edge_maps.contains_key(&bar) {
            Some(bar)
        } else {
            None
        }
    }

    /// Sum of vertex ranks.
    pub fn total_vertex_rank(&self) -> usize {
        self.vertices.iter().map(|&v| self.rank(v)).sum()
    }
}

/// Checks the graph axioms and that every edge map is an isomorphism of
/// basis-aligned free factors (images verified by folding). Never panics;
/// every violation is reported.
pub fn validate_clean(g: &GraphOfGroups) -> ValidationReport {
    let mut violations = Vec::new();
    let mut bad = |e: Error| violations.push(e);
    let vertices: BTreeSet<usize> = g.vertices.iter().copied().collect();
    if vertices.len() != g.vertices.len() {
        bad(Error::Invalid("vertex ids repeat".into()));
    }
    if vertices.is_empty() {
        bad(Error::Invalid("graph has no vertices".into()));
    }
    for &v in &vertices {
        if g.rank(v) == 0 {
            bad(Error::Invalid(format!("vertex {v} has no positive rank")));
        }
    }
    let ids: BTreeSet<usize> = g.edges.iter().map(|e| e.id).collect();
    if ids.len() != g.edges.len() {
        bad(Error::Invalid("edge ids repeat".into()));
    }
    let mut structural = true;
    for e in &g.edges {
        if !vertices.contains(&e.tau) {
            bad(Error::Invalid(format!("edge {} ends at unknown vertex {}", e.id, e.tau)));
            structural = false;
        }
        if e.bar == e.id {
            bad(Error::Invalid(format!("edge {} is its own reverse (bar(e) = e)", e.id)));
            structural = false;
        } else {
            match g.edge(e.bar) {
                None => {
                    bad(Error::Invalid(format!("edge {} has unknown reverse {}", e.id, e.bar)));
                    structural = false;
                }
                Some(b) if b.bar != e.id => {
                    bad(Error::Invalid(format!("bar is not an involution on edge {}", e.id)));
                    structural = false;
                }
                _ => {}
            }
        }
    }
    if !structural {
        return ValidationReport { violations };
    }
    if !vertices.is_empty() {
        if let Err(e) = spanning_tree(&g.graph()) {
            bad(e);
        }
    }
    for e in &g.edges {
        if let Err(err) = g.factor(e.id) {
            bad(err);
        }
        if g.edge_maps.contains_key(&e.id) && g.edge_maps.contains_key(&e.bar) {
            bad(Error::Invalid(format!("both edges {} and {} carry a map", e.id, e.bar)));
        }
        if g.carrier(e.id).is_none() {
            bad(Error::Invalid(format!("edge pair {{{}, {}}} carries no map", e.id, e.bar)));
        }
    }
    for (&id, map) in &g.edge_maps {
        let Some(e) = g.edge(id) else {
            bad(Error::Invalid(format!("map on unknown edge {id}")));
            continue;
        };
        let (Ok(dom), Ok(cod)) = (g.factor(id), g.factor(e.bar)) else { continue };
        if let Err(err) = check_factor_iso(&dom, &cod, map) {
            bad(err);
        }
    }
    ValidationReport { violations }
}

/// `map` sends the basis of `dom` onto a basis of `cod` (ambient of `cod`).
fn check_factor_iso(dom: &BasisAlignedFactor, cod: &BasisAlignedFactor, map: &FreeMap) -> Result<()> {
    if dom.rank() != cod.rank() {
        return Err(Error::RankMismatch { domain: dom.rank(), codomain: cod.rank() });
    }
    if map.source_rank() != dom.rank() {
        return Err(Error::BasisMismatch { expected: dom.rank(), found: map.source_rank() });
    }
    for img in map.images() {
        if !factor_membership(img, cod).unwrap_or(false) {
            return Err(Error::NotABasisOfFactor(format!("image {img} leaves the target factor")));
        }
    }
    let graph = fold_subgroup(map.images());
    for b in cod.basis_words() {
        if !graph.membership(&b) {
            return Err(Error::NotABasisOfFactor(format!("{b} is not generated by the images")));
        }
    }
    Ok(())
}

/// A one-vertex graph of free groups: the vertex group `F(x_1..x_rank)` and
/// loops `t_i` with `t_i u t_i⁻¹ = φ_i(u)` for `u ∈ N_i = domain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanPresentation {
    pub rank: usize,
    pub loops: Vec<PartialAutomorphism>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree_record: Option<TreeRecord>,
}

impl CleanPresentation {
    /// Loops given as `(domain indices, codomain indices, images of the
    /// domain basis)`; each extension is chosen canonically.
    pub fn new(rank: usize, loops: &[(Vec<usize>, Vec<usize>, Vec<Word>)]) -> Result<Self> {
        let loops = loops
            .iter()
            .map(|(n, m, images)| {
                let dom = BasisAlignedFactor::new(rank, n.clone())?;
                let cod = BasisAlignedFactor::new(rank, m.clone())?;
                let map = FreeMap::new(dom.rank(), rank, images.clone())?;
                extend_partial(&dom, &cod, &map)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CleanPresentation { rank, loops, tree_record: None })
    }

    pub fn basis(&self) -> Basis {
        Basis::standard("x", self.rank)
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    /// Parses a word over `x1..x{rank}` and `t1..t{loops}`.
    pub fn parse_word(&self, text: &str) -> Result<GoGWord> {
        GoGWord::parse(text, self.rank, self.loops.len())
    }

    /// Rejects words that mention generators outside the presentation.
    pub fn check_word(&self, w: &GoGWord) -> Result<()> {
        if w.max_vertex_index() > self.rank {
            return Err(Error::IndexOutOfRange { index: w.max_vertex_index() as i32, rank: self.rank });
        }
        if w.max_loop_index() > self.loops.len() {
            return Err(Error::IndexOutOfRange {
                index: w.max_loop_index() as i32,
                rank: self.loops.len(),
            });
        }
        Ok(())
    }
}

/// Generators `x_1..x_rank, t_1..t_k` and the defining relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub rank: usize,
    pub loops: usize,
    pub relators: Vec<GoGWord>,
}

impl Presentation {
    pub fn generator_names(&self) -> Vec<String> {
        (1..=self.rank).map(|i| format!("x{i}")).chain((1..=self.loops).map(|i| format!("t{i}"))).collect()
    }
}

/// One relator `t_i u t_i⁻¹ φ_i(u)⁻¹` per loop and per basis element `u` of `N_i`.
pub fn pi1_presentation(c: &CleanPresentation) -> Presentation {
    let mut relators = Vec::new();
    for (i, phi) in c.loops.iter().enumerate() {
        let t = i as i32 + 1;
        for u in phi.domain.basis_words() {
            let mut r = GoGWord::loop_letter(t);
            r.push_vertex(u.clone());
            r.push_loop(-t);
            r.push_vertex(phi.forward(&u).inverse());
            relators.push(r);
        }
    }
    Presentation { rank: c.rank, loops: c.loops.len(), relators }
}

/// Image in the free group on the loop letters: vertex syllables deleted.
pub fn project_to_graph_group(w: &GoGWord) -> Word {
    let letters: Vec<i32> = w
        .syllables()
        .iter()
        .filter_map(|s| match s {
            Syllable::Loop(l) => Some(*l),
            Syllable::Vertex(_) => None,
        })
        .collect();
    Word::from_letters(&letters)
}

/// The chain `1 ⊴ ⟨⟨F⟩⟩ ⊴ π₁` with free quotients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyFreeChain {
    /// Rank of `π₁ / ⟨⟨F⟩⟩`, free on the loop letters.
    pub quotient_rank: usize,
    /// Every relator projects to the identity in the loop-letter group.
    pub relators_project_trivially: bool,
    /// Loop factors are basis-aligned and the loop maps verified isomorphisms,
    /// so `⟨⟨F⟩⟩` is a tree of copies of `F` amalgamated along free factors.
    pub kernel_is_tree_of_free_groups: bool,
    /// Number of nontrivial terms above `1`.
    pub length: usize,
}

pub fn polyfree_chain(c: &CleanPresentation) -> PolyFreeChain {
    let pres = pi1_presentation(c);
    let relators_project_trivially =
        pres.relators.iter().all(|r| project_to_graph_group(r).is_identity());
    let kernel_is_tree_of_free_groups = c.loops.iter().all(|phi| {
        extend_partial(&phi.domain, &phi.codomain, &phi.map)
            .map(|re| re.extension == phi.extension)
            .unwrap_or(false)
    });
    PolyFreeChain {
        quotient_rank: c.loops.len(),
        relators_project_trivially,
        kernel_is_tree_of_free_groups,
        length: if c.loops.is_empty() { 1 } else { 2 },
    }
}

#[cfg(test)]
mod tests;
