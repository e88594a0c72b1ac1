//! Collapsing a spanning tree: amalgamating tree vertex groups along their
//! identified free factors gives a free group with an explicit basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{spanning_tree, validate_clean, CleanPresentation, GoGWord, GraphOfGroups};
use crate::error::{Error, Result};
use crate::freegrp::{extend_partial, fold_subgroup, BasisAlignedFactor, FreeMap, Word};

/// How the collapsed presentation arose from the original graph of groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub root: usize,
    /// Tree edges, oriented away from the root.
    pub tree_edges: Vec<usize>,
    /// For loop `t_i`, the original edge (carrying the edge map) it comes from.
    pub loop_edges: Vec<usize>,
    /// `(vertex, generator)` each collapsed generator was created from.
    pub provenance: Vec<(usize, usize)>,
    /// Image of every vertex generator in the collapsed basis.
    pub vertex_dictionary: BTreeMap<usize, Vec<Word>>,
}

impl TreeRecord {
    /// Image of an original edge letter: tree edges are trivial.
    pub fn edge_image(&self, g: &GraphOfGroups, e: usize) -> GoGWord {
        let bar = g.edge(e).map(|s| s.bar);
        for (i, &c) in self.loop_edges.iter().enumerate() {
            let t = i as i32 + 1;
            if c == e {
                return GoGWord::loop_letter(t);
            }
            if Some(c) == bar {
                return GoGWord::loop_letter(-t);
            }
        }
        GoGWord::identity()
    }

    pub fn vertex_image(&self, v: usize, w: &Word) -> Word {
        let dict = &self.vertex_dictionary[&v];
        let raw: Vec<Word> = w
            .letters()
            .iter()
            .map(|&l| {
                let img = &dict[l.unsigned_abs() as usize - 1];
                if l > 0 { img.clone() } else { img.inverse() }
            })
            .collect();
        raw.iter().fold(Word::identity(), |acc, x| acc.concat(x))
    }
}

/// The identification of `factor(e)` with `factor(ē)`, as the images of the
/// basis of `factor(e)` (words in `G_{τ(ē)}`).
fn transported_basis(g: &GraphOfGroups, e: usize) -> Result<Vec<Word>> {
    let bar = g.edge(e).expect("edge").bar;
    if let Some(map) = g.edge_maps.get(&e) {
        return Ok(map.images().to_vec());
    }
    let map = &g.edge_maps[&bar];
    let here = g.factor(e)?;
    let there = g.factor(bar)?;
    let graph = fold_subgroup(map.images());
    here.basis_words()
        .iter()
        .map(|b| {
            let expr = graph
                .express(b)
                .ok_or_else(|| Error::NotABasisOfFactor(format!("{b} not in the image of edge {bar}")))?;
            Ok(there.embed(&expr))
        })
        .collect()
}

fn as_aligned(words: &[Word], rank: usize, what: &str) -> Result<BasisAlignedFactor> {
    let selected = words
        .iter()
        .map(|w| match w.letters() {
            [l] if *l > 0 => Ok(*l as usize),
            _ => Err(Error::NotClean(format!(
                "{what} is not basis-aligned after collapsing the tree (generator becomes {w})"
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    BasisAlignedFactor::new(rank, selected)
}

/// Collapses the BFS spanning tree. The new basis lists the root's
/// generators, then, for each tree edge in order, the child's generators
/// outside the edge factor. Non-tree edge pairs become loops, ordered by the
/// smaller edge id of the pair.
pub fn collapse(g: &GraphOfGroups) -> Result<CleanPresentation> {
    let report = validate_clean(g);
    if let Some(first) = report.violations.into_iter().next() {
        return Err(match first {
            Error::Disconnected => Error::Disconnected,
            other => Error::NotClean(other.to_string()),
        });
    }
    let graph = g.graph();
    let tree = spanning_tree(&graph)?;
    let root = *g.vertices.iter().min().expect("nonempty");
    let mut dict: BTreeMap<usize, Vec<Word>> = BTreeMap::new();
    let mut provenance = Vec::new();
    dict.insert(root, (1..=g.rank(root) as i32).map(Word::letter).collect());
    provenance.extend((1..=g.rank(root)).map(|j| (root, j)));
    for &e in &tree {
        let child = graph.terminus(e);
        let parent = graph.origin(e);
        let f = g.factor(e)?;
        let images = transported_basis(g, e)?;
        let mut words = vec![Word::identity(); g.rank(child)];
        for (k, &s) in f.selected().iter().enumerate() {
            words[s - 1] = vertex_image_raw(&dict[&parent], &images[k]);
        }
        for j in f.complement() {
            provenance.push((child, j));
            words[j - 1] = Word::letter(provenance.len() as i32);
        }
        dict.insert(child, words);
    }
    let rank = provenance.len();
    let tree_pairs: Vec<(usize, usize)> = tree
        .iter()
        .map(|&e| {
            let b = g.edge(e).unwrap().bar;
            (e.min(b), e.max(b))
        })
        .collect();
    let mut pairs: Vec<usize> = g
        .edges
        .iter()
        .filter(|e| e.id < e.bar && !tree_pairs.contains(&(e.id, e.bar)))
        .map(|e| e.id)
        .collect();
    pairs.sort_unstable();
    let mut loops = Vec::new();
    let mut loop_edges = Vec::new();
    for e in pairs {
        let c = g.carrier(e).expect("validated");
        let cb = g.edge(c).unwrap().bar;
        let (vc, vb) = (g.edge(c).unwrap().tau, g.edge(cb).unwrap().tau);
        let dom_words: Vec<Word> =
            g.factor(c)?.basis_words().iter().map(|w| vertex_image_raw(&dict[&vc], w)).collect();
        let cod_words: Vec<Word> =
            g.factor(cb)?.basis_words().iter().map(|w| vertex_image_raw(&dict[&vb], w)).collect();
        let dom = as_aligned(&dom_words, rank, &format!("factor of edge {c}"))?;
        let cod = as_aligned(&cod_words, rank, &format!("factor of edge {cb}"))?;
        let images: Vec<Word> =
            g.edge_maps[&c].images().iter().map(|w| vertex_image_raw(&dict[&vb], w)).collect();
        let map = FreeMap::new(dom.rank(), rank, images)?;
        loops.push(extend_partial(&dom, &cod, &map)?);
        loop_edges.push(c);
    }
    let record = TreeRecord { root, tree_edges: tree, loop_edges, provenance, vertex_dictionary: dict };
    Ok(CleanPresentation { rank, loops, tree_record: Some(record) })
}

fn vertex_image_raw(dict: &[Word], w: &Word) -> Word {
    w.letters().iter().fold(Word::identity(), |acc, &l| {
        let img = &dict[l.unsigned_abs() as usize - 1];
        acc.concat(&if l > 0 { img.clone() } else { img.inverse() })
    })
}

/// Every relator of the original graph of groups — `e g e⁻¹ map(g)⁻¹` for
/// each edge pair and basis element `g` of its factor, with tree edges
/// trivial — rewritten through the collapse dictionary.
pub fn rewritten_original_relators(g: &GraphOfGroups, c: &CleanPresentation) -> Result<Vec<GoGWord>> {
    let rec = c
        .tree_record
        .as_ref()
        .ok_or_else(|| Error::Invalid("presentation carries no collapse record".into()))?;
    let mut out = Vec::new();
    let mut carriers: Vec<usize> = g.edge_maps.keys().copied().collect();
    carriers.sort_unstable();
    for e in carriers {
        let bar = g.edge(e).ok_or_else(|| Error::Invalid(format!("no edge {e}")))?.bar;
        let (ve, vb) = (g.edge(e).unwrap().tau, g.edge(bar).unwrap().tau);
        let t = rec.edge_image(g, e);
        for (b, img) in g.factor(e)?.basis_words().iter().zip(g.edge_maps[&e].images()) {
            let mut r = t.clone();
            r = r.concat(&GoGWord::vertex(rec.vertex_image(ve, b)));
            r = r.concat(&t.inverse());
            r = r.concat(&GoGWord::vertex(rec.vertex_image(vb, img).inverse()));
            out.push(r);
        }
    }
    Ok(out)
}
