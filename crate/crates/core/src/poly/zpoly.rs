//! Sparse multivariate polynomials over the integers with packed monomials.
//! Exponents of `nvars` variables share one `u64`, variable 0 in the high
//! bits, so integer order on the packed word is lexicographic order.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::PolyError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ZPoly {
    nvars: usize,
    /// Sorted by monomial, descending; coefficients nonzero.
    terms: Vec<(u64, BigInt)>,
}

fn bits_for(nvars: usize) -> u32 {
    if nvars == 0 {
        0
    } else {
        64 / nvars as u32
    }
}

impl ZPoly {
    pub fn zero(nvars: usize) -> Self {
        ZPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((0, c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    fn mask(&self) -> u64 {
        let b = bits_for(self.nvars);
        if b >= 64 {
            u64::MAX
        } else {
            (1u64 << b) - 1
        }
    }

    fn shift(&self, var: usize) -> u32 {
        bits_for(self.nvars) * (self.nvars - 1 - var) as u32
    }

    pub fn max_exponent(nvars: usize) -> u64 {
        ZPoly::zero(nvars).mask()
    }

    pub fn pack(&self, exps: &[u32]) -> Result<u64, PolyError> {
        let mask = self.mask();
        let mut m = 0u64;
        for (v, &e) in exps.iter().enumerate() {
            if e as u64 > mask {
                return Err(PolyError::ExponentOverflow);
            }
            if self.nvars > 0 {
                m |= (e as u64) << self.shift(v);
            }
        }
        Ok(m)
    }

    pub fn unpack(&self, m: u64) -> Vec<u32> {
        let mask = self.mask();
        (0..self.nvars)
            .map(|v| ((m >> self.shift(v)) & mask) as u32)
            .collect()
    }

    /// Builds from unsorted `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(nvars);
        let mut map: BTreeMap<u64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            let m = p.pack(&e)?;
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        p.terms = map
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(p)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &BigInt)> + '_ {
        self.terms.iter().map(move |(m, c)| (self.unpack(*m), c))
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.nvars];
        for (m, _) in &self.terms {
            for (v, e) in self.unpack(*m).into_iter().enumerate() {
                d[v] = d[v].max(e);
            }
        }
        d
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 0)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        ZPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Divides every coefficient by `c`, which must divide them all.
    pub fn div_scalar(&self, c: &BigInt) -> Self {
        ZPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, a / c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        ZPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, -a)).collect(),
        }
    }

    fn merge(&self, other: &ZPoly, negate: bool) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = j >= other.terms.len()
                || (i < self.terms.len() && self.terms[i].0 > other.terms[j].0);
            let take_right = i >= self.terms.len()
                || (j < other.terms.len() && other.terms[j].0 > self.terms[i].0);
            if take_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else if take_right {
                let (m, c) = &other.terms[j];
                out.push((*m, if negate { -c } else { c.clone() }));
                j += 1;
            } else {
                let c = if negate {
                    &self.terms[i].1 - &other.terms[j].1
                } else {
                    &self.terms[i].1 + &other.terms[j].1
                };
                if !c.is_zero() {
                    out.push((self.terms[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        ZPoly {
            nvars: self.nvars,
            terms: out,
        }
    }

    #[cfg(test)]
    pub fn add(&self, other: &ZPoly) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &ZPoly) -> Self {
        self.merge(other, true)
    }

    fn check_product_degrees(&self, other: &ZPoly) -> Result<(), PolyError> {
        let max = Self::max_exponent(self.nvars);
        let a = self.degrees();
        let b = other.degrees();
        if a.iter().zip(&b).any(|(x, y)| *x as u64 + *y as u64 > max) {
            return Err(PolyError::ExponentOverflow);
        }
        Ok(())
    }

    pub fn mul(&self, other: &ZPoly) -> Result<Self, PolyError> {
        debug_assert_eq!(self.nvars, other.nvars);
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        self.check_product_degrees(other)?;
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let (single, many) = if self.terms.len() == 1 {
                (&self.terms[0], other)
            } else {
                (&other.terms[0], self)
            };
            // Adding a fixed monomial preserves order.
            return Ok(ZPoly {
                nvars: self.nvars,
                terms: many
                    .terms
                    .iter()
                    .map(|(m, c)| (m + single.0, c * &single.1))
                    .collect(),
            });
        }
        let mut acc: HashMap<u64, BigInt> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                match acc.entry(ma + mb) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let mut terms: Vec<(u64, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        Ok(ZPoly {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> Result<Self, PolyError> {
        let mut out = Self::constant(self.nvars, BigInt::one());
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    fn divides_monomial(&self, d: u64, m: u64) -> bool {
        let mask = self.mask();
        (0..self.nvars).all(|v| {
            let s = self.shift(v);
            (m >> s) & mask >= (d >> s) & mask
        })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`
    /// in `Z[vars]`.
    pub fn div_exact(&self, d: &ZPoly) -> Option<Self> {
        debug_assert_eq!(self.nvars, d.nvars);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let (lm, lc) = &d.terms[0];
        if d.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !self.divides_monomial(*lm, *m) {
                    return None;
                }
                let (q, r) = c.div_rem(lc);
                if !r.is_zero() {
                    return None;
                }
                terms.push((m - lm, q));
            }
            return Some(ZPoly {
                nvars: self.nvars,
                terms,
            });
        }
        let mut rem: BTreeMap<u64, BigInt> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(u64, BigInt)> = Vec::new();
        while let Some((&m, c)) = rem.iter().next_back() {
            if !self.divides_monomial(*lm, m) {
                return None;
            }
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            let qm = m - lm;
            for (dm, dc) in &d.terms {
                let key = qm + dm;
                let delta = &qc * dc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        Some(ZPoly {
            nvars: self.nvars,
            terms: quot,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(nvars: usize, t: &[(&[u32], i64)]) -> ZPoly {
        ZPoly::from_terms(nvars, t.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c)))).unwrap()
    }

    #[test]
    fn pack_round_trip() {
        let p = ZPoly::zero(3);
        let m = p.pack(&[3, 0, 17]).unwrap();
        assert_eq!(p.unpack(m), vec![3, 0, 17]);
        assert!(p.pack(&[1 << 22, 0, 0]).is_err());
    }

    #[test]
    fn product_and_quotient() {
        let a = zp(2, &[(&[1, 0], 1), (&[0, 1], -2), (&[0, 0], 3)]);
        let b = zp(2, &[(&[2, 1], 5), (&[0, 0], -1)]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.div_exact(&a).unwrap(), b);
        assert_eq!(ab.div_exact(&b).unwrap(), a);
        let c = zp(2, &[(&[1, 0], 1), (&[0, 0], 1)]);
        assert!(ab.div_exact(&c).is_none());
    }

    #[test]
    fn add_cancels() {
        let a = zp(1, &[(&[2], 1), (&[0], 4)]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&a.neg()), ZPoly::zero(1));
    }

    #[test]
    fn overflowing_product_is_rejected() {
        let big = (ZPoly::max_exponent(4)) as u32;
        let a = zp(4, &[(&[big, 0, 0, 0], 1)]);
        assert!(matches!(a.mul(&a), Err(PolyError::ExponentOverflow)));
    }
}
