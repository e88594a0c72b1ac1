//! The θ₁ cover: the finite-index subgroup `G` of `π₁` on which the
//! separation is carried out, with an explicit presentation.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegrp::{Automorphism, FreeMap, Word};
use crate::gog::{CleanPresentation, EdgeSpec, GoGWord, GraphOfGroups, Syllable};
use crate::pfiltration::{theta1, FpMatrix};

/// Action of the loop letters on the group generated by the `θ₁(φ_i^ext)`:
/// state `s` moves to `s·θ₁(φ_i^ext)` along `t_i`. The kernel `Q` of
/// `Q' → GL(L_1)` is the fundamental group of this graph at state 0.
#[derive(Clone, Debug)]
pub struct SchreierCover {
    pub p: u32,
    pub rank: usize,
    /// States in BFS order; state 0 is the identity.
    pub states: Vec<FpMatrix>,
    pub next: Vec<Vec<u32>>,
    pub prev: Vec<Vec<u32>>,
    /// `tree[s][i]`: edge `(s, i)` belongs to the BFS spanning tree.
    pub tree: Vec<Vec<bool>>,
    /// Tree path (positive loop letters) from state 0 to each state.
    pub tree_path: Vec<Vec<i32>>,
    /// Non-tree edges `(s, i)` in order; `t_{s,i}` generators of the cover.
    pub non_tree: Vec<(u32, usize)>,
}

impl SchreierCover {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn loop_count(&self) -> usize {
        self.next.first().map_or(0, |r| r.len())
    }

    pub fn state_of(&self, m: &FpMatrix) -> Option<usize> {
        self.states.iter().position(|s| s == m)
    }

    /// State reached from state 0 by the loop letters of `w`.
    pub fn end_state(&self, w: &GoGWord) -> u32 {
        w.syllables().iter().fold(0, |s, syl| match syl {
            Syllable::Loop(l) if *l > 0 => self.next[s as usize][*l as usize - 1],
            Syllable::Loop(l) => self.prev[s as usize][(-l) as usize - 1],
            Syllable::Vertex(_) => s,
        })
    }

    fn non_tree_index(&self) -> HashMap<(u32, usize), usize> {
        self.non_tree.iter().enumerate().map(|(k, &e)| (e, k)).collect()
    }
}

pub fn kernel_cover(extensions: &[Automorphism], rank: usize, p: u32, cap: usize) -> Result<SchreierCover> {
    let gens: Vec<FpMatrix> = extensions.iter().map(|a| theta1(a, p)).collect();
    let k = gens.len();
    let mut states = vec![FpMatrix::identity(p, rank)];
    let mut index = HashMap::from([(states[0].clone(), 0u32)]);
    let mut next: Vec<Vec<u32>> = Vec::new();
    let mut tree: Vec<Vec<bool>> = Vec::new();
    let mut tree_path = vec![Vec::new()];
    let mut s = 0;
    while s < states.len() {
        let mut row = Vec::with_capacity(k);
        let mut trow = Vec::with_capacity(k);
        for (i, g) in gens.iter().enumerate() {
            let m = states[s].mul(g);
            let (t, fresh) = match index.get(&m) {
                Some(&t) => (t, false),
                None => {
                    if states.len() >= cap {
                        return Err(Error::CapExceeded { cap: "element", limit: cap });
                    }
                    let t = states.len() as u32;
                    index.insert(m.clone(), t);
                    states.push(m);
                    let mut path = tree_path[s].clone();
                    path.push(i as i32 + 1);
                    tree_path.push(path);
                    (t, true)
                }
            };
            row.push(t);
            trow.push(fresh);
        }
        next.push(row);
        tree.push(trow);
        s += 1;
    }
    let mut prev = vec![vec![0u32; k]; states.len()];
    for (s, row) in next.iter().enumerate() {
        for (i, &t) in row.iter().enumerate() {
            prev[t as usize][i] = s as u32;
        }
    }
    let non_tree = (0..states.len())
        .flat_map(|s| (0..k).map(move |i| (s as u32, i)))
        .filter(|&(s, i)| !tree[s as usize][i])
        .collect();
    Ok(SchreierCover { p, rank, states, next, prev, tree, tree_path, non_tree })
}

/// The lifted graph of groups: one copy of the vertex group per state and
/// an edge pair per `(state, loop)`, running from `s` to `s·θ₁(φ_i)`.
pub fn lift_gog(c: &CleanPresentation, s: &SchreierCover) -> Result<GraphOfGroups> {
    if s.loop_count() != c.loops.len() {
        return Err(Error::Invalid("cover and presentation have different loops".into()));
    }
    let k = c.loops.len();
    let mut g = GraphOfGroups {
        name: None,
        vertices: (0..s.state_count()).collect(),
        edges: Vec::new(),
        vertex_ranks: (0..s.state_count()).map(|v| (v, c.rank)).collect(),
        edge_factors: Default::default(),
        edge_maps: Default::default(),
    };
    for st in 0..s.state_count() {
        for (i, phi) in c.loops.iter().enumerate() {
            let id = 2 * (st * k + i);
            let to = s.next[st][i] as usize;
            g.edges.push(EdgeSpec { id, bar: id + 1, tau: to });
            g.edges.push(EdgeSpec { id: id + 1, bar: id, tau: st });
            g.edge_factors.insert(id, phi.domain.clone());
            g.edge_factors.insert(id + 1, phi.codomain.clone());
            g.edge_maps.insert(id, FreeMap::new(phi.domain.rank(), c.rank, phi.map.images().to_vec())?);
        }
    }
    Ok(g)
}

/// A generator of the cover presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CoverGenerator {
    /// `x_j` in the copy of the vertex group at state `s`.
    Vertex { state: u32, index: usize },
    /// Non-tree lift of `t_i` leaving state `s`.
    Loop { state: u32, index: usize },
}

/// A presentation of `G = π₁` of the lifted graph of groups relative to its
/// spanning tree. Words are flat over generator numbers `1..=len`.
#[derive(Clone, Debug)]
pub struct CoverPresentation {
    pub p: u32,
    pub rank: usize,
    pub states: usize,
    pub generators: Vec<CoverGenerator>,
    pub relators: Vec<Word>,
    /// Each generator as an element of the original `π₁`.
    pub images: Vec<GoGWord>,
}

impl CoverPresentation {
    pub fn generator_name(&self, g: usize) -> String {
        match &self.generators[g] {
            CoverGenerator::Vertex { state, index } => format!("x{index}@{state}"),
            CoverGenerator::Loop { state, index } => format!("t{}@{state}", index + 1),
        }
    }
}

pub fn cover_presentation(c: &CleanPresentation, s: &SchreierCover) -> CoverPresentation {
    let r = c.rank;
    let n = s.state_count();
    let nt = s.non_tree_index();
    let vertex_gen = |st: usize, j: usize| (st * r + j) as i32;
    let loop_gen = |k: usize| (n * r + k + 1) as i32;
    let mut generators = Vec::new();
    let mut images = Vec::new();
    let path = |st: usize| {
        let mut w = GoGWord::identity();
        for &l in &s.tree_path[st] {
            w.push_loop(l);
        }
        w
    };
    for st in 0..n {
        for j in 1..=r {
            generators.push(CoverGenerator::Vertex { state: st as u32, index: j });
            let g = path(st);
            images.push(g.concat(&GoGWord::vertex(Word::letter(j as i32))).concat(&g.inverse()));
        }
    }
    for &(st, i) in &s.non_tree {
        generators.push(CoverGenerator::Loop { state: st, index: i });
        let to = s.next[st as usize][i] as usize;
        images.push(path(st as usize).concat(&GoGWord::loop_letter(i as i32 + 1)).concat(&path(to).inverse()));
    }
    let at = |st: usize, w: &Word| w.relabel(|j| vertex_gen(st, j) as usize);
    let mut relators = Vec::new();
    for st in 0..n {
        for (i, phi) in c.loops.iter().enumerate() {
            let to = s.next[st][i] as usize;
            let t = nt.get(&(st as u32, i)).map(|&k| loop_gen(k));
            for u in phi.domain.basis_words() {
                let mut raw = Vec::new();
                raw.extend(t);
                raw.extend_from_slice(at(to, &u).letters());
                raw.extend(t.map(|x| -x));
                raw.extend_from_slice(at(st, &phi.forward(&u)).inverse().letters());
                relators.push(Word::from_letters(&raw));
            }
        }
    }
    CoverPresentation { p: s.p, rank: r, states: n, generators, relators, images }
}

/// Reidemeister–Schreier rewriting of `w ∈ G` into the cover generators.
pub fn rewrite_into_cover(w: &GoGWord, s: &SchreierCover) -> Result<Word> {
    let r = s.rank;
    let n = s.state_count();
    let nt = s.non_tree_index();
    let mut st = 0u32;
    let mut raw = Vec::new();
    for syl in w.syllables() {
        match syl {
            Syllable::Vertex(u) => {
                raw.extend(u.letters().iter().map(|&l| l.signum() * (st as i32 * r as i32 + l.abs())));
            }
            Syllable::Loop(l) => {
                let i = l.unsigned_abs() as usize - 1;
                if *l > 0 {
                    if let Some(&k) = nt.get(&(st, i)) {
                        raw.push((n * r + k + 1) as i32);
                    }
                    st = s.next[st as usize][i];
                } else {
                    let from = s.prev[st as usize][i];
                    if let Some(&k) = nt.get(&(from, i)) {
                        raw.push(-((n * r + k + 1) as i32));
                    }
                    st = from;
                }
            }
        }
    }
    if st != 0 {
        return Err(Error::OutsideSubgroup { state: st as usize });
    }
    Ok(Word::from_letters(&raw))
}
