//! Truncated Magnus algebra `F_p⟨X_1..X_r⟩ / (degree > d)`.
//!
//! A series is a dense coefficient vector indexed by monomials, laid out by
//! degree; inside a degree block a monomial `X_{i1}…X_{ik}` has index
//! `Σ i_j r^{k-j}` (0-based letters), so concatenation of monomials is
//! `idx(u)·r^{|v|} + idx(v)`.

use crate::error::{Error, Result};
use crate::freegrp::Word;

use super::Caps;

pub const SUPPORTED_PRIMES: [u32; 3] = [2, 3, 5];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusContext {
    p: u32,
    rank: usize,
    degree: usize,
    offsets: Vec<usize>,
    powers: Vec<usize>,
}

/// An element of the truncated algebra. Group elements have constant term 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedSeries {
    coeffs: Vec<u8>,
}

impl TruncatedSeries {
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }
}

impl MagnusContext {
    pub fn new(p: u32, rank: usize, degree: usize, caps: &Caps) -> Result<Self> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::UnsupportedPrime(p));
        }
        if rank == 0 || degree == 0 {
            return Err(Error::Invalid("rank and truncation degree must be positive".into()));
        }
        let mut offsets = Vec::with_capacity(degree + 2);
        let mut powers = Vec::with_capacity(degree + 1);
        let mut total: usize = 0;
        let mut pw: usize = 1;
        for _ in 0..=degree {
            offsets.push(total);
            powers.push(pw);
            total = total.checked_add(pw).filter(|&t| t <= caps.monomial_cap).ok_or(
                Error::CapExceeded { cap: "monomial", limit: caps.monomial_cap },
            )?;
            pw = pw.saturating_mul(rank);
        }
        offsets.push(total);
        Ok(MagnusContext { p, rank, degree, offsets, powers })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomial_count(&self) -> usize {
        self.offsets[self.degree + 1]
    }

    fn block(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn zero(&self) -> TruncatedSeries {
        TruncatedSeries { coeffs: vec![0; self.monomial_count()] }
    }

    pub fn one(&self) -> TruncatedSeries {
        let mut s = self.zero();
        s.coeffs[0] = 1;
        s
    }

    /// `X_i` (1-indexed generator) as a series.
    pub fn variable(&self, i: usize) -> TruncatedSeries {
        let mut s = self.zero();
        s.coeffs[self.offsets[1] + i - 1] = 1;
        s
    }

    /// Coefficient of the monomial given by 1-indexed letters.
    pub fn coefficient(&self, s: &TruncatedSeries, monomial: &[usize]) -> u8 {
        if monomial.len() > self.degree {
            return 0;
        }
        let idx = monomial.iter().fold(0, |acc, &i| acc * self.rank + (i - 1));
        s.coeffs[self.offsets[monomial.len()] + idx]
    }

    pub fn is_one(&self, s: &TruncatedSeries) -> bool {
        s.coeffs[0] == 1 && s.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn block_is_zero(&self, s: &TruncatedSeries, k: usize) -> bool {
        s.coeffs[self.block(k)].iter().all(|&c| c == 0)
    }

    /// Lowest degree `k ≥ 1` with a nonzero coefficient, if any.
    pub fn lead_degree(&self, s: &TruncatedSeries) -> Option<usize> {
        (1..=self.degree).find(|&k| !self.block_is_zero(s, k))
    }

    pub fn block_coeffs<'a>(&self, s: &'a TruncatedSeries, k: usize) -> &'a [u8] {
        &s.coeffs[self.block(k)]
    }

    pub fn add(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        let p = self.p as u8;
        TruncatedSeries { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % p).collect() }
    }

    pub fn sub(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        let p = self.p as u8;
        TruncatedSeries { coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + p - y) % p).collect() }
    }

    pub fn scale(&self, a: &TruncatedSeries, c: u8) -> TruncatedSeries {
        let p = self.p;
        TruncatedSeries { coeffs: a.coeffs.iter().map(|&x| ((x as u32 * c as u32) % p) as u8).collect() }
    }

    pub fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        let d = self.degree;
        let nonzero_a: Vec<usize> = (0..=d).filter(|&k| !self.block_is_zero(a, k)).collect();
        let nonzero_b: Vec<usize> = (0..=d).filter(|&k| !self.block_is_zero(b, k)).collect();
        let mut acc = vec![0u32; self.monomial_count()];
        for &da in &nonzero_a {
            let ablock = &a.coeffs[self.block(da)];
            for &db in nonzero_b.iter().take_while(|&&db| da + db <= d) {
                let bblock = &b.coeffs[self.block(db)];
                let out = self.offsets[da + db];
                let stride = self.powers[db];
                for (ia, &ca) in ablock.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    let base = out + ia * stride;
                    let ca = ca as u32;
                    for (ib, &cb) in bblock.iter().enumerate() {
                        if cb != 0 {
                            acc[base + ib] += ca * cb as u32;
                        }
                    }
                }
            }
        }
        let p = self.p;
        TruncatedSeries { coeffs: acc.into_iter().map(|c| (c % p) as u8).collect() }
    }

    /// `s · X_i`: shifts every monomial one degree up.
    fn shift_right(&self, s: &TruncatedSeries, i: usize) -> TruncatedSeries {
        let mut out = self.zero();
        for k in 0..self.degree {
            let src = self.block(k);
            let dst = self.offsets[k + 1];
            for (j, &c) in s.coeffs[src].iter().enumerate() {
                if c != 0 {
                    out.coeffs[dst + j * self.rank + (i - 1)] = c;
                }
            }
        }
        out
    }

    /// `s · (1 + X_i)^{±1}` for a signed 1-indexed letter.
    pub fn mul_letter(&self, s: &TruncatedSeries, l: i32) -> TruncatedSeries {
        let i = l.unsigned_abs() as usize;
        if l > 0 {
            return self.add(s, &self.shift_right(s, i));
        }
        // (1 + X)^{-1} = Σ (-X)^k
        let mut acc = s.clone();
        let mut term = s.clone();
        for k in 1..=self.degree {
            term = self.shift_right(&term, i);
            if term.coeffs.iter().all(|&c| c == 0) {
                break;
            }
            acc = if k % 2 == 1 { self.sub(&acc, &term) } else { self.add(&acc, &term) };
        }
        acc
    }

    /// Image of a word under `x_i ↦ 1 + X_i`.
    pub fn embed(&self, w: &Word) -> Result<TruncatedSeries> {
        if w.max_index() > self.rank {
            return Err(Error::BasisMismatch { expected: self.rank, found: w.max_index() });
        }
        Ok(w.letters().iter().fold(self.one(), |s, &l| self.mul_letter(&s, l)))
    }

    /// Inverse of a unit `1 + a`.
    pub fn inverse(&self, g: &TruncatedSeries) -> TruncatedSeries {
        debug_assert_eq!(g.coeffs[0], 1);
        let mut a = g.clone();
        a.coeffs[0] = 0;
        let neg_a = self.scale(&a, (self.p - 1) as u8);
        let mut acc = self.one();
        let mut term = self.one();
        for _ in 0..self.degree {
            term = self.mul(&term, &neg_a);
            if term.coeffs.iter().all(|&c| c == 0) {
                break;
            }
            acc = self.add(&acc, &term);
        }
        acc
    }

    pub fn pow(&self, g: &TruncatedSeries, e: u64) -> TruncatedSeries {
        let mut result = self.one();
        let mut base = g.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Signed power; negative exponents use the inverse.
    pub fn zpow(&self, g: &TruncatedSeries, e: i64) -> TruncatedSeries {
        if e < 0 {
            self.pow(&self.inverse(g), e.unsigned_abs())
        } else {
            self.pow(g, e as u64)
        }
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(&ab, &self.inverse(&ba))
    }

    /// Algebra endomorphism `X_i ↦ images[i] − 1`, tabulated on all monomials.
    pub fn substitution(&self, images: &[TruncatedSeries]) -> Substitution {
        assert_eq!(images.len(), self.rank);
        let ys: Vec<TruncatedSeries> = images
            .iter()
            .map(|g| {
                let mut y = g.clone();
                y.coeffs[0] = 0;
                y
            })
            .collect();
        let mut table = Vec::with_capacity(self.monomial_count());
        table.push(self.one());
        for k in 1..=self.degree {
            for idx in 0..self.powers[k] {
                let prefix = idx / self.rank;
                let last = idx % self.rank;
                let prev = &table[self.offsets[k - 1] + prefix];
                table.push(self.mul(prev, &ys[last]));
            }
        }
        Substitution { table }
    }
}

/// A tabulated algebra endomorphism of the truncated algebra.
#[derive(Clone, Debug)]
pub struct Substitution {
    table: Vec<TruncatedSeries>,
}

impl Substitution {
    pub fn apply(&self, ctx: &MagnusContext, s: &TruncatedSeries) -> TruncatedSeries {
        let mut acc = vec![0u32; ctx.monomial_count()];
        for (u, &c) in s.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &t) in self.table[u].coeffs.iter().enumerate() {
                if t != 0 {
                    acc[j] += c as u32 * t as u32;
                }
            }
        }
        TruncatedSeries { coeffs: acc.into_iter().map(|c| (c % ctx.p) as u8).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegrp::Word;
    use proptest::prelude::*;

    fn ctx(p: u32, rank: usize, d: usize) -> MagnusContext {
        MagnusContext::new(p, rank, d, &Caps::default()).unwrap()
    }

    #[test]
    fn embed_examples() {
        let c = ctx(3, 2, 2);
        assert!(c.is_one(&c.embed(&Word::from_letters(&[1, -1])).unwrap()));
        let inv = c.embed(&Word::letter(-1)).unwrap();
        assert_eq!(c.coefficient(&inv, &[]), 1);
        assert_eq!(c.coefficient(&inv, &[1]), 2); // -1 mod 3
        assert_eq!(c.coefficient(&inv, &[1, 1]), 1);
        // [x, y] = 1 + XY - YX at degree 2
        let comm = c.embed(&Word::commutator(&Word::letter(1), &Word::letter(2))).unwrap();
        let mut expected = c.one();
        expected = c.add(&expected, &c.mul(&c.variable(1), &c.variable(2)));
        expected = c.sub(&expected, &c.mul(&c.variable(2), &c.variable(1)));
        assert_eq!(comm, expected);
    }

    #[test]
    fn monomial_cap_is_enforced() {
        let caps = Caps { monomial_cap: 100, ..Caps::default() };
        assert!(matches!(
            MagnusContext::new(2, 2, 7, &caps),
            Err(Error::CapExceeded { cap: "monomial", .. })
        ));
        assert!(MagnusContext::new(7, 2, 2, &Caps::default()).is_err());
    }

    #[test]
    fn inverse_and_substitution() {
        let c = ctx(2, 2, 4);
        let g = c.embed(&Word::from_letters(&[1, 2, 2, -1, 2])).unwrap();
        assert!(c.is_one(&c.mul(&g, &c.inverse(&g))));
        // substitution by the images of x ↦ xy, y ↦ y agrees with mapping words first
        let images = [Word::from_letters(&[1, 2]), Word::letter(2)];
        let sub = c.substitution(&images.iter().map(|w| c.embed(w).unwrap()).collect::<Vec<_>>());
        let w = Word::from_letters(&[1, 1, -2, 1, 2, 2]);
        let mapped = crate::freegrp::FreeMap::new(2, 2, images.to_vec()).unwrap().apply(&w).unwrap();
        assert_eq!(sub.apply(&c, &c.embed(&w).unwrap()), c.embed(&mapped).unwrap());
    }

    fn word() -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..14)
            .prop_map(|l| Word::from_letters(&l))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn embed_is_multiplicative(a in word(), b in word()) {
            let c = ctx(3, 2, 4);
            let lhs = c.embed(&a.concat(&b)).unwrap();
            let rhs = c.mul(&c.embed(&a).unwrap(), &c.embed(&b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
