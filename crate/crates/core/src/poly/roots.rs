//! Real-root isolation by Sturm sequences and root refinement.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::intpoly::{self, IntPoly};
use super::rat::{rat_from_f64, rat_to_f64, Rat};
use super::upoly::RatPoly;

/// Interval `(lo, hi]` holding exactly one distinct real root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "rat_string")]
    pub lo: Rat,
    #[serde(with = "rat_string")]
    pub hi: Rat,
    /// Sturm sign-variation difference across the interval (always 1).
    pub sign_change_count: usize,
    /// Multiplicity of the enclosed root in the input polynomial.
    pub multiplicity: u32,
}

mod rat_string {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sturm sequence of a square-free integer polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<IntPoly>,
}

impl SturmSequence {
    fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone()];
        let d = intpoly::derivative(p);
        if !d.is_empty() {
            seq.push(intpoly::primitive(&d));
        }
        while seq.len() >= 2 {
            let a = &seq[seq.len() - 2];
            let b = &seq[seq.len() - 1];
            if b.len() <= 1 {
                break;
            }
            let r = intpoly::prem(a, b);
            if r.is_empty() {
                break;
            }
            // prem = lc(b)^(delta+1) * rem, so -rem has the sign below.
            let delta = a.len() - b.len();
            let lc_neg = b.last().unwrap().is_negative();
            let flip = !(lc_neg && (delta + 1) % 2 == 1);
            let mut next = intpoly::primitive(&r);
            // primitive() made the leading coefficient positive; restore the
            // true sign of -rem.
            let r_lead_neg = r.last().unwrap().is_negative();
            let want_neg = r_lead_neg != flip;
            if want_neg {
                for c in next.iter_mut() {
                    *c = -&*c;
                }
            }
            seq.push(next);
        }
        SturmSequence { seq }
    }

    fn variations<F: Fn(&IntPoly) -> Sign>(&self, sign: F) -> usize {
        let mut count = 0;
        let mut last = Sign::NoSign;
        for p in &self.seq {
            let s = sign(p);
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, x: &Rat) -> usize {
        self.variations(|p| intpoly::sign_at(p, x))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        self.variations(|p| intpoly::sign_at_infinity(p, positive))
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Rat, hi: &Rat) -> usize {
        self.variations_at(lo)
            .saturating_sub(self.variations_at(hi))
    }
}

/// Primitive square-free integer part of `p`.
fn square_free_int(p: &RatPoly) -> IntPoly {
    let (_, ints) = p.to_primitive_integer();
    if ints.len() <= 2 {
        return ints;
    }
    let g = intpoly::gcd(&ints, &intpoly::derivative(&ints));
    intpoly::primitive(&intpoly::div_exact(&ints, &g).expect("gcd divides"))
}

/// A power of two strictly above the absolute value of every real root.
pub fn root_bound(p: &RatPoly) -> Rat {
    let (_, ints) = p.to_primitive_integer();
    let Some(d) = intpoly::degree(&ints) else {
        return Rat::one();
    };
    let lc = ints[d].abs();
    // Cauchy: 1 + max |a_i / a_d|.
    let mut max = BigInt::zero();
    for c in &ints[..d] {
        let q = c.abs() / &lc + 1;
        if q > max {
            max = q;
        }
    }
    let bound: BigInt = max + 1;
    let bits = bound.bits();
    Rat::from_integer(BigInt::one() << bits)
}

/// Isolates every distinct real root of `p` in `(lo, hi]`, in increasing
/// order. Multiplicities refer to `p` itself.
pub fn isolate_real_roots(p: &RatPoly, lo: &Rat, hi: &Rat) -> Vec<RootInterval> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    if lo >= hi || p.degree() == Some(0) {
        return Vec::new();
    }
    let sf = square_free_int(p);
    let sturm = SturmSequence::new(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), sturm.count(lo, hi))];
    while let Some((a, b, n)) = stack.pop() {
        match n {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mid = (&a + &b) / Rat::from_integer(BigInt::from(2));
                let left = sturm.count(&a, &mid);
                stack.push((mid.clone(), b, n - left));
                stack.push((a, mid, left));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    let factors = intpoly::square_free_decomposition(&p.to_primitive_integer().1);
    let factor_seqs: Vec<(SturmSequence, u32)> = if factors.len() > 1 {
        factors
            .iter()
            .map(|(f, m)| (SturmSequence::new(f), *m))
            .collect()
    } else {
        Vec::new()
    };
    let single = factors.first().map_or(1, |(_, m)| *m);
    out.into_iter()
        .map(|(lo, hi)| {
            let multiplicity = if factor_seqs.is_empty() {
                single
            } else {
                factor_seqs
                    .iter()
                    .find(|(s, _)| s.count(&lo, &hi) > 0)
                    .map(|(_, m)| *m)
                    .unwrap_or(1)
            };
            RootInterval {
                lo,
                hi,
                sign_change_count: 1,
                multiplicity,
            }
        })
        .collect()
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &RatPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    SturmSequence::new(&square_free_int(p)).count_all()
}

/// Isolates all real roots.
pub fn isolate_all_real_roots(p: &RatPoly) -> Vec<RootInterval> {
    let b = root_bound(p);
    isolate_real_roots(p, &-b.clone(), &b)
}

/// Refines an isolating interval to width below `tol` by exact bisection,
/// then polishes with a safeguarded Newton step and rounds to the nearest
/// double where the sign pattern allows it.
pub fn refine_root(p: &RatPoly, iv: &RootInterval, tol: f64) -> f64 {
    let sf = square_free_int(p);
    refine_square_free(&sf, iv, tol)
}

/// Isolates and refines every root in `(lo, hi]`.
pub fn real_roots(p: &RatPoly, lo: &Rat, hi: &Rat, tol: f64) -> Vec<f64> {
    let sf = square_free_int(p);
    isolate_real_roots(p, lo, hi)
        .iter()
        .map(|iv| refine_square_free(&sf, iv, tol))
        .collect()
}

fn half() -> Rat {
    Rat::new(BigInt::one(), BigInt::from(2))
}

fn refine_square_free(sf: &IntPoly, iv: &RootInterval, tol: f64) -> f64 {
    let mut a = iv.lo.clone();
    let mut b = iv.hi.clone();
    if intpoly::sign_at(sf, &b) == Sign::NoSign {
        return rat_to_f64(&b);
    }
    let sb = intpoly::sign_at(sf, &b);
    // Move `a` off a neighbouring root if needed.
    while intpoly::sign_at(sf, &a) == Sign::NoSign {
        let mid = (&a + &b) * half();
        let sm = intpoly::sign_at(sf, &mid);
        if sm == Sign::NoSign {
            return rat_to_f64(&mid);
        }
        if sm != sb {
            a = mid;
        } else {
            b = mid;
        }
    }
    let sa = intpoly::sign_at(sf, &a);
    let tol_r = rat_from_f64(tol.max(0.0)).unwrap_or_else(Rat::zero);
    while &b - &a >= tol_r {
        let mid = (&a + &b) * half();
        let sm = intpoly::sign_at(sf, &mid);
        if sm == Sign::NoSign {
            return rat_to_f64(&mid);
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
        if (&b - &a) < Rat::new(BigInt::one(), BigInt::one() << 1100u32) {
            break;
        }
    }
    let (af, bf) = (rat_to_f64(&a), rat_to_f64(&b));
    let f = |x: f64| horner_f64(sf, x);
    let df = |x: f64| horner_f64(&intpoly::derivative(sf), x);
    let mut x = rat_to_f64(&((&a + &b) * half()));
    for _ in 0..3 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let nx = x - f(x) / d;
        if !(nx >= af && nx <= bf) || !nx.is_finite() {
            break;
        }
        x = nx;
    }
    round_to_nearest(sf, x, sa, af, bf)
}

/// Walks a few ulps from `x` to the double nearest the root, using exact
/// signs. `sa` is the sign of `sf` just left of the root.
fn round_to_nearest(sf: &IntPoly, x: f64, sa: Sign, af: f64, bf: f64) -> f64 {
    let exact_sign = |v: f64| match rat_from_f64(v) {
        Some(r) => intpoly::sign_at(sf, &r),
        None => Sign::NoSign,
    };
    let sx = exact_sign(x);
    if sx == Sign::NoSign {
        return x;
    }
    // Find adjacent doubles lo < hi with sign(lo) = sa and sign(hi) != sa.
    let (mut lo, mut hi) = (x, x);
    if sx == sa {
        for _ in 0..16 {
            let n = next_up(hi);
            let s = exact_sign(n);
            if s == Sign::NoSign {
                return n;
            }
            if s != sa {
                lo = hi;
                hi = n;
                break;
            }
            hi = n;
        }
    } else {
        for _ in 0..16 {
            let n = next_down(lo);
            let s = exact_sign(n);
            if s == Sign::NoSign {
                return n;
            }
            if s == sa {
                hi = lo;
                lo = n;
                break;
            }
            lo = n;
        }
    }
    if lo == hi || exact_sign(lo) != sa || exact_sign(hi) == sa {
        return x.clamp(af.min(bf), bf.max(af));
    }
    let mid = (rat_from_f64(lo).unwrap() + rat_from_f64(hi).unwrap()) * half();
    let sm = intpoly::sign_at(sf, &mid);
    if sm == sa {
        hi
    } else {
        lo
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    if x == 0.0 {
        return f64::from_bits(1);
    }
    let bits = x.to_bits();
    f64::from_bits(if x > 0.0 { bits + 1 } else { bits - 1 })
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

fn horner_f64(p: &[BigInt], x: f64) -> f64 {
    use num_traits::ToPrimitive;
    p.iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::{rat, rat_int};

    #[test]
    fn sqrt_two() {
        let p = RatPoly::from_i64(&[-2, 0, 1]);
        let ivs = isolate_real_roots(&p, &rat_int(-2), &rat_int(2));
        assert_eq!(ivs.len(), 2);
        let r: Vec<f64> = ivs.iter().map(|iv| refine_root(&p, iv, 1e-12)).collect();
        assert_eq!(r[0], -std::f64::consts::SQRT_2);
        assert_eq!(r[1], std::f64::consts::SQRT_2);
    }

    #[test]
    fn rational_root() {
        let p = RatPoly::new(vec![rat(-1, 3), rat(1, 1)]);
        let iv = isolate_all_real_roots(&p);
        assert_eq!(iv.len(), 1);
        assert_eq!(refine_root(&p, &iv[0], 1e-12), 0.3333333333333333);
    }

    #[test]
    fn multiple_root_reported_once() {
        let p = RatPoly::from_i64(&[0, 0, 0, 1]);
        let iv = isolate_real_roots(&p, &rat_int(-1), &rat_int(1));
        assert_eq!(iv.len(), 1);
        assert_eq!(iv[0].multiplicity, 3);
        assert_eq!(refine_root(&p, &iv[0], 1e-13), 0.0);
    }

    #[test]
    fn half_open_interval_semantics() {
        // Roots at 0 and 1; (0, 1] contains only 1.
        let p = RatPoly::from_i64(&[0, -1, 1]);
        let iv = isolate_real_roots(&p, &rat_int(0), &rat_int(1));
        assert_eq!(iv.len(), 1);
        assert_eq!(refine_root(&p, &iv[0], 1e-13), 1.0);
    }

    #[test]
    fn no_real_roots() {
        let p = RatPoly::from_i64(&[1, 0, 1]);
        assert!(isolate_all_real_roots(&p).is_empty());
        assert_eq!(count_real_roots(&p), 0);
        assert_eq!(count_real_roots(&RatPoly::from_i64(&[-1, 0, 0, 1])), 1);
    }

    #[test]
    fn mixed_multiplicities() {
        // (x - 1)^2 (x + 2) (x^2 - 3)
        let a = RatPoly::from_i64(&[-1, 1]);
        let p = &(&(&a * &a) * &RatPoly::from_i64(&[2, 1])) * &RatPoly::from_i64(&[-3, 0, 1]);
        let iv = isolate_all_real_roots(&p);
        let mult: Vec<u32> = iv.iter().map(|i| i.multiplicity).collect();
        assert_eq!(mult, vec![1, 1, 2, 1]);
        let roots: Vec<f64> = iv.iter().map(|i| refine_root(&p, i, 1e-13)).collect();
        let expect = [-2.0, -3f64.sqrt(), 1.0, 3f64.sqrt()];
        for (r, e) in roots.iter().zip(expect) {
            assert!((r - e).abs() < 1e-13, "{r} vs {e}");
        }
    }
}
