//! Permutations acting on the right, and Schreier–Sims group orders.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

/// A permutation of `0..n`; `x·g = g[x]`, and `a.then(b)` applies `a` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Checks that `images` is a bijection of `0..len`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Multiplicative order (lcm of cycle lengths).
    pub fn order(&self) -> u128 {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        self.cycle_lengths().into_iter().fold(1u128, |acc, l| {
            let l = l as u128;
            acc / gcd(acc, l) * l
        })
    }
}

/// `Some(a)` when `n = p^a`.
pub fn p_power_exponent(n: u128, p: u32) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut n = n;
    let mut a = 0;
    while n.is_multiple_of(p as u128) {
        n /= p as u128;
        a += 1;
    }
    (n == 1).then_some(a)
}

struct Level {
    point: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    // orbit point -> (predecessor, generator index)
    tree: HashMap<u32, (u32, usize)>,
    checked: HashSet<(u32, usize)>,
}

impl Level {
    fn new(point: u32) -> Self {
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            tree: HashMap::from([(point, (point, usize::MAX))]),
            checked: HashSet::new(),
        }
    }

    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let b = self.orbit[i];
            for (k, g) in self.gens.iter().enumerate() {
                let c = g.apply(b);
                if let std::collections::hash_map::Entry::Vacant(e) = self.tree.entry(c) {
                    e.insert((b, k));
                    self.orbit.push(c);
                }
            }
            i += 1;
        }
    }

    /// `u` with `point·u = b`.
    fn transversal(&self, b: u32, n: usize) -> Perm {
        let mut path = Vec::new();
        let mut x = b;
        while x != self.point {
            let (pred, k) = self.tree[&x];
            path.push(k);
            x = pred;
        }
        let mut u = Perm::identity(n);
        for &k in path.iter().rev() {
            u = u.then(&self.gens[k]);
        }
        u
    }
}

/// Base and strong generating set of a permutation group.
pub struct StabilizerChain {
    n: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(gens: &[Perm], n: usize) -> Self {
        let mut chain = StabilizerChain { n, levels: Vec::new() };
        for g in gens {
            assert_eq!(g.degree(), n);
            if !g.is_identity() {
                chain.add_strong(g.clone(), 0);
            }
        }
        chain.complete();
        chain
    }

    fn add_strong(&mut self, g: Perm, from: usize) {
        let mut j = from;
        loop {
            if j == self.levels.len() {
                let moved = (0..self.n as u32).find(|&x| g.apply(x) != x).expect("non-identity");
                self.levels.push(Level::new(moved));
            }
            self.levels[j].gens.push(g.clone());
            self.levels[j].extend_orbit();
            if g.apply(self.levels[j].point) != self.levels[j].point {
                break;
            }
            j += 1;
        }
    }

    /// Strips `g` from level `from`; returns the residue and the level at
    /// which stripping stopped (`levels.len()` when it passed every level).
    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(level.point);
            if !level.tree.contains_key(&b) {
                return (g, i);
            }
            g = g.then(&level.transversal(b, self.n).inverse());
        }
        (g, self.levels.len())
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        'outer: while i > 0 {
            let lvl = i - 1;
            let orbit = self.levels[lvl].orbit.clone();
            for &b in &orbit {
                for k in 0..self.levels[lvl].gens.len() {
                    if self.levels[lvl].checked.contains(&(b, k)) {
                        continue;
                    }
                    let level = &self.levels[lvl];
                    let c = level.gens[k].apply(b);
                    let h = level
                        .transversal(b, self.n)
                        .then(&level.gens[k])
                        .then(&level.transversal(c, self.n).inverse());
                    self.levels[lvl].checked.insert((b, k));
                    if h.is_identity() {
                        continue;
                    }
                    let (y, j) = self.strip(h, lvl + 1);
                    if j < self.levels.len() || !y.is_identity() {
                        self.add_strong(y, lvl + 1);
                        i = j + 1;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.orbit_lengths().iter().map(|&l| l as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (y, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && y.is_identity()
    }
}

/// Orbit of `start` under `gens`.
pub fn orbit(gens: &[Perm], start: u32) -> Vec<u32> {
    let mut seen = HashSet::from([start]);
    let mut out = vec![start];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let c = g.apply(out[i]);
            if seen.insert(c) {
                out.push(c);
            }
        }
        i += 1;
    }
    out
}
