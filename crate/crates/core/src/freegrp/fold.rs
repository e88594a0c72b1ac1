//! Stallings folding with witness tracking.
//!
//! Every directed edge carries, besides its letter, a witness word over the
//! subgroup generators. For every closed path at the basepoint, substituting
//! the generators into the product of witnesses gives the path label. Folds
//! preserve this, so reading a member word through the folded graph expresses
//! it in terms of the generators.

use std::collections::{BTreeMap, VecDeque};

use super::word::Word;

/// Folded core graph of a finitely generated subgroup of a free group.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    adj: Vec<BTreeMap<i32, (usize, Word)>>,
    alive: Vec<bool>,
    generators: usize,
}

struct Folder {
    adj: Vec<BTreeMap<i32, (usize, Word)>>,
    parent: Vec<usize>,
    shift: Vec<Word>,
    queue: VecDeque<(usize, i32, usize, Word)>,
}

impl Folder {
    fn new_vertex(&mut self) -> usize {
        self.adj.push(BTreeMap::new());
        self.parent.push(self.adj.len() - 1);
        self.shift.push(Word::identity());
        self.adj.len() - 1
    }

    // Root of `v` and the word `g` such that an edge leaving `v` with
    // witness `w` leaves the root with witness `g w`.
    fn find(&self, mut v: usize) -> (usize, Word) {
        let mut g = Word::identity();
        while self.parent[v] != v {
            g = self.shift[v].concat(&g);
            v = self.parent[v];
        }
        (v, g)
    }

    fn run(&mut self) {
        while let Some((u, a, v, w)) = self.queue.pop_front() {
            let (u, gu) = self.find(u);
            let (v, gv) = self.find(v);
            let w = gu.concat(&w).concat(&gv.inverse());
            if let Some((v2, w2)) = self.adj[u].get(&a).cloned() {
                // keep the smaller vertex as root so the basepoint survives;
                // out-edges of the merged vertex get g·w, in-edges w·g⁻¹
                if v > v2 {
                    self.merge(v, v2, w2.inverse().concat(&w));
                } else if v < v2 {
                    self.merge(v2, v, w.inverse().concat(&w2));
                }
                continue;
            }
            if self.adj[v].contains_key(&-a) {
                self.queue.push_back((v, -a, u, w.inverse()));
                continue;
            }
            self.adj[u].insert(a, (v, w.clone()));
            self.adj[v].insert(-a, (u, w.inverse()));
        }
    }

    fn merge(&mut self, v: usize, into: usize, g: Word) {
        let edges = std::mem::take(&mut self.adj[v]);
        for (&b, (x, wx)) in &edges {
            if *x == v {
                self.queue.push_back((into, b, into, g.concat(wx).concat(&g.inverse())));
            } else {
                self.adj[*x].remove(&-b);
                self.queue.push_back((into, b, *x, g.concat(wx)));
            }
        }
        self.parent[v] = into;
        self.shift[v] = g;
    }
}

/// Folds the subgroup generated by `gens`. An empty list gives the trivial subgroup.
pub fn fold_subgroup(gens: &[Word]) -> SubgroupGraph {
    let mut f = Folder { adj: Vec::new(), parent: Vec::new(), shift: Vec::new(), queue: VecDeque::new() };
    let base = f.new_vertex();
    for (j, g) in gens.iter().enumerate() {
        let letters = g.letters();
        if letters.is_empty() {
            continue;
        }
        let mut prev = base;
        for (k, &l) in letters.iter().enumerate() {
            let next = if k + 1 == letters.len() { base } else { f.new_vertex() };
            let wit = if k == 0 { Word::letter(j as i32 + 1) } else { Word::identity() };
            f.queue.push_back((prev, l, next, wit));
            prev = next;
        }
    }
    f.run();
    let alive = (0..f.adj.len()).map(|v| f.parent[v] == v).collect();
    SubgroupGraph { adj: f.adj, alive, generators: gens.len() }
}

impl SubgroupGraph {
    /// Reads `w` from the basepoint. Returns the witness product (a word in
    /// the subgroup generators) when `w` is a member.
    pub fn express(&self, w: &Word) -> Option<Word> {
        let mut at = 0;
        let mut acc = Word::identity();
        for &l in w.letters() {
            let (next, wit) = self.adj[at].get(&l)?;
            acc = acc.concat(wit);
            at = *next;
        }
        (at == 0).then_some(acc)
    }

    pub fn membership(&self, w: &Word) -> bool {
        self.express(w).is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().zip(&self.alive).filter(|(_, &a)| a).map(|(m, _)| m.len()).sum::<usize>() / 2
    }

    /// Rank of the subgroup, `E − V + 1` of the folded graph.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    /// True when the folded graph is a bouquet carrying every letter of `F_rank`.
    pub fn is_whole_group(&self, rank: usize) -> bool {
        self.vertex_count() == 1 && (1..=rank as i32).all(|i| self.adj[0].contains_key(&i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn w(l: &[i32]) -> Word {
        Word::from_letters(l)
    }

    #[test]
    fn examples() {
        let g = fold_subgroup(&[w(&[1, 2]), w(&[2])]);
        assert!(g.membership(&w(&[1])));
        assert_eq!(g.rank(), 2);
        let sq = fold_subgroup(&[w(&[1, 1])]);
        assert!(!sq.membership(&w(&[1])));
        assert_eq!(sq.vertex_count(), 2);
        let triv = fold_subgroup(&[]);
        assert!(!triv.membership(&w(&[1])));
        assert!(triv.membership(&Word::identity()));
        assert_eq!(triv.rank(), 0);
    }

    #[test]
    fn witnesses_evaluate_to_the_word() {
        let gens = vec![w(&[1, 2, -1]), w(&[1, 1]), w(&[2, 1, 2])];
        let g = fold_subgroup(&gens);
        for target in [w(&[1, 2, 1]), w(&[1, 1, 1, 2, -1]), w(&[2, 1, 2, 1, 1])] {
            let wit = g.express(&target).expect("member");
            let mut val = Word::identity();
            for &l in wit.letters() {
                let s = &gens[l.unsigned_abs() as usize - 1];
                val = val.concat(&if l > 0 { s.clone() } else { s.inverse() });
            }
            assert_eq!(val, target);
        }
    }

    // brute-force oracle: all products of at most `k` generator letters
    fn enumerate(gens: &[Word], k: usize) -> HashSet<Word> {
        let mut letters: Vec<Word> = gens.to_vec();
        letters.extend(gens.iter().map(|g| g.inverse()));
        let mut seen: HashSet<Word> = HashSet::from([Word::identity()]);
        let mut frontier = vec![Word::identity()];
        for _ in 0..k {
            let mut next = Vec::new();
            for f in &frontier {
                for l in &letters {
                    let p = f.concat(l);
                    if seen.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    fn all_words(max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for f in &frontier {
                for l in [1, -1, 2, -2] {
                    if f.letters().last() == Some(&-l) {
                        continue;
                    }
                    let p = f.concat(&Word::letter(l));
                    next.push(p.clone());
                    out.push(p);
                }
            }
            frontier = next;
        }
        out
    }

    #[test]
    fn membership_matches_enumeration_up_to_length_8() {
        let cases = vec![
            vec![w(&[1, 1])],
            vec![w(&[1, 2]), w(&[2, 1])],
            vec![w(&[1, 2, -1]), w(&[2, 2])],
            vec![w(&[1, 1]), w(&[2, 2])],
            vec![w(&[1, 2, -1, -2])],
        ];
        let words = all_words(8);
        for gens in cases {
            let g = fold_subgroup(&gens);
            assert!(g.rank() <= 2);
            let found: HashSet<Word> = enumerate(&gens, 10).into_iter().filter(|x| x.len() <= 8).collect();
            for x in &words {
                let member = g.membership(x);
                // any member of length ≤ 8 is a product of few generators for these subgroups
                assert_eq!(member, found.contains(x), "{gens:?} {x}");
            }
        }
    }
}
