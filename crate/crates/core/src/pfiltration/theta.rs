//! The action `θ₁` of automorphisms on `L_1 = H_1(F; F_p)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegrp::Automorphism;

/// Square matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpMatrix {
    p: u32,
    n: usize,
    entries: Vec<u32>,
}

impl FpMatrix {
    pub fn identity(p: u32, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        FpMatrix { p, n, entries }
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let n = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| x % p)).collect::<Vec<_>>();
        assert_eq!(entries.len(), n * n);
        FpMatrix { p, n, entries }
    }

    pub fn from_columns(p: u32, cols: &[Vec<u32>]) -> Self {
        let n = cols.len();
        let mut entries = vec![0; n * n];
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for (i, &x) in c.iter().enumerate() {
                entries[i * n + j] = x % p;
            }
        }
        FpMatrix { p, n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = (entries[i * n + j] + a * other.get(k, j)) % self.p;
                }
            }
        }
        FpMatrix { p: self.p, n, entries }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum::<u32>() % self.p)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == FpMatrix::identity(self.p, self.n)
    }
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Column `i` is the exponent-sum vector of the image of `x_i`, mod `p`.
pub fn theta1(a: &Automorphism, p: u32) -> FpMatrix {
    let n = a.rank();
    let mut entries = vec![0; n * n];
    for i in 0..n {
        let sums = &a.forward.images()[i].exponent_sums(n);
        for (r, s) in sums.iter().enumerate() {
            entries[r * n + i] = s.rem_euclid(p as i64) as u32;
        }
    }
    FpMatrix { p, n, entries }
}

/// Order of the group generated by `gens` (BFS, capped).
pub fn matrix_group_order(gens: &[FpMatrix], p: u32, n: usize, cap: usize) -> Result<usize> {
    let mut seen = HashMap::new();
    let id = FpMatrix::identity(p, n);
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let h = m.mul(g);
            if !seen.contains_key(&h) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded { cap: "element", limit: cap });
                }
                seen.insert(h.clone(), ());
                queue.push_back(h);
            }
        }
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta1_examples() {
        assert!(theta1(&Automorphism::identity(2), 2).is_identity());
        let swap = Automorphism::from_images(2, &[&[2], &[1]]).unwrap();
        assert_eq!(theta1(&swap, 2), FpMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]));
        let t = Automorphism::from_images(2, &[&[1, 2], &[2]]).unwrap();
        assert_eq!(theta1(&t, 2), FpMatrix::from_rows(2, &[vec![1, 0], vec![1, 1]]));
    }

    #[test]
    fn theta1_is_multiplicative() {
        let a = Automorphism::from_images(2, &[&[1, 2], &[2]]).unwrap();
        let b = Automorphism::from_images(2, &[&[2], &[1, -2]]).unwrap();
        for p in [2, 3, 5] {
            let ab = a.compose(&b).unwrap();
            assert_eq!(theta1(&ab, p), theta1(&a, p).mul(&theta1(&b, p)));
        }
    }

    #[test]
    fn gl2_over_f2_has_order_six() {
        let s = FpMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        let t = FpMatrix::from_rows(2, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(matrix_group_order(std::slice::from_ref(&s), 2, 2, 100).unwrap(), 2);
        assert_eq!(matrix_group_order(&[s, t], 2, 2, 100).unwrap(), 6);
    }
}
