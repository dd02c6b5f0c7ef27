//! Univariate integer polynomial primitives (dense, lowest degree first):
//! contents, pseudo-remainders, exact division, a modular GCD and Yun's
//! square-free decomposition. These keep root isolation fast on the large
//! eliminants, where rational Euclid would drown in coefficient growth.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rat::Rat;

pub(crate) type IntPoly = Vec<BigInt>;

pub(crate) fn trim(p: &mut IntPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigInt]) -> Option<usize> {
    p.len().checked_sub(1)
}

pub(crate) fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

/// Primitive part with a positive leading coefficient.
pub(crate) fn primitive(p: &[BigInt]) -> IntPoly {
    let mut out: IntPoly = p.to_vec();
    trim(&mut out);
    if out.is_empty() {
        return out;
    }
    let mut g = content(&out);
    if out.last().unwrap().is_negative() {
        g = -g;
    }
    for c in out.iter_mut() {
        *c = &*c / &g;
    }
    out
}

pub(crate) fn derivative(p: &[BigInt]) -> IntPoly {
    let mut out: IntPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    trim(&mut out);
    out
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn prem(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let db = degree(b).expect("pseudo-division by zero");
    let mut r: IntPoly = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else {
        return r;
    };
    if da < db {
        return r;
    }
    let lb = &b[db];
    let mut steps = da - db + 1;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * bc;
        }
        trim(&mut r);
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Quotient of an exact division in `Z[x]`; `None` if `b` does not divide `a`.
pub(crate) fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let db = degree(b)?;
    let mut r: IntPoly = a.to_vec();
    trim(&mut r);
    let Some(da) = degree(&r) else {
        return Some(Vec::new());
    };
    if da < db {
        return None;
    }
    let lb = &b[db];
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (db..=da).rev() {
        if r[k].is_zero() {
            continue;
        }
        let (qc, rem) = r[k].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k - db + j] -= &qc * bc;
        }
        q[k - db] = qc;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

/// Sign of `p(x)` at a rational point, computed exactly.
pub(crate) fn sign_at(p: &[BigInt], x: &Rat) -> Sign {
    let Some(d) = degree(p) else {
        return Sign::NoSign;
    };
    // p(a/b) * b^d = sum c_i a^i b^(d-i), with b > 0.
    let a = x.numer();
    let b = x.denom();
    let mut acc = p[d].clone();
    let mut bpow = BigInt::one();
    for i in (0..d).rev() {
        bpow *= b;
        acc = acc * a + &p[i] * &bpow;
    }
    acc.sign()
}

/// Sign of the leading behaviour as `x -> +inf` (`positive = true`) or `-inf`.
pub(crate) fn sign_at_infinity(p: &[BigInt], positive: bool) -> Sign {
    let Some(d) = degree(p) else {
        return Sign::NoSign;
    };
    let s = p[d].sign();
    if positive || d % 2 == 0 {
        s
    } else {
        -s
    }
}

// ---- modular arithmetic -------------------------------------------------

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Deterministic descending sequence of 62-bit primes.
struct Primes {
    next: u64,
}

impl Iterator for Primes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

fn primes() -> Primes {
    Primes {
        next: (1u64 << 62) - 1,
    }
}

fn reduce(p: &[BigInt], m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    let mut out: Vec<u64> = p
        .iter()
        .map(|c| c.mod_floor(&mb).to_u64().unwrap())
        .collect();
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn monic_gcd_mod(a: Vec<u64>, b: Vec<u64>, m: u64) -> Vec<u64> {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        // a <- a mod b
        let db = b.len() - 1;
        let inv = pow_mod(b[db], m - 2, m);
        while a.len() > db {
            let da = a.len() - 1;
            let q = mul_mod(a[da], inv, m);
            if q != 0 {
                for (j, &bc) in b.iter().enumerate() {
                    let t = mul_mod(q, bc, m);
                    let idx = da - db + j;
                    a[idx] = (a[idx] + m - t) % m;
                }
            }
            a.pop();
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = pow_mod(lc, m - 2, m);
        for c in a.iter_mut() {
            *c = mul_mod(*c, inv, m);
        }
    }
    a
}

fn symmetric_lift(c: &BigInt, modulus: &BigInt, half: &BigInt) -> BigInt {
    if c > half {
        c - modulus
    } else {
        c.clone()
    }
}

/// Greatest common divisor in `Z[x]`, primitive with positive leading
/// coefficient. Dense modular algorithm: gcds modulo word-sized primes are
/// combined by CRT until the lifted candidate divides both inputs.
pub(crate) fn gcd(f: &[BigInt], g: &[BigInt]) -> IntPoly {
    let f = primitive(f);
    let g = primitive(g);
    if f.is_empty() {
        return g;
    }
    if g.is_empty() {
        return f;
    }
    if f.len() == 1 || g.len() == 1 {
        return vec![BigInt::one()];
    }
    let lf = f.last().unwrap();
    let lg = g.last().unwrap();
    let lc_gcd = lf.gcd(lg);

    let mut best_deg = usize::MAX;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut last_candidate: Option<IntPoly> = None;

    for p in primes() {
        let pb = BigInt::from(p);
        if (lf % &pb).is_zero() || (lg % &pb).is_zero() {
            continue;
        }
        let h = monic_gcd_mod(reduce(&f, p), reduce(&g, p), p);
        let d = h.len() - 1;
        if d == 0 {
            return vec![BigInt::one()];
        }
        if d > best_deg {
            continue;
        }
        let scale = lc_gcd.mod_floor(&pb).to_u64().unwrap();
        let h: Vec<u64> = h.iter().map(|&c| mul_mod(c, scale, p)).collect();
        if d < best_deg {
            best_deg = d;
            modulus = pb;
            acc = h.iter().map(|&c| BigInt::from(c)).collect();
            last_candidate = None;
        } else {
            // CRT: x = a + M * ((b - a) * M^{-1} mod p)
            let m_mod = modulus.mod_floor(&BigInt::from(p)).to_u64().unwrap();
            let m_inv = pow_mod(m_mod, p - 2, p);
            for (a, &b) in acc.iter_mut().zip(h.iter()) {
                let a_mod = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                let diff = (b + p - a_mod) % p;
                let t = mul_mod(diff, m_inv, p);
                *a += &modulus * BigInt::from(t);
            }
            modulus *= BigInt::from(p);
        }
        let half = &modulus >> 1;
        let lifted: IntPoly = acc
            .iter()
            .map(|c| symmetric_lift(c, &modulus, &half))
            .collect();
        let candidate = primitive(&lifted);
        if last_candidate.as_ref() == Some(&candidate)
            && div_exact(&f, &candidate).is_some()
            && div_exact(&g, &candidate).is_some()
        {
            return candidate;
        }
        last_candidate = Some(candidate);
    }
    unreachable!("ran out of 62-bit primes")
}

/// Yun's square-free decomposition: returns `(factor, multiplicity)` pairs
/// with primitive, pairwise coprime, square-free factors of positive degree
/// such that `f = c * prod factor^multiplicity` for some constant `c`.
pub(crate) fn square_free_decomposition(f: &[BigInt]) -> Vec<(IntPoly, u32)> {
    let f = primitive(f);
    let mut out = Vec::new();
    if f.len() <= 1 {
        return out;
    }
    let fp = derivative(&f);
    let a0 = gcd(&f, &fp);
    let mut b = div_exact(&f, &a0).expect("gcd divides f");
    let c = div_exact(&fp, &a0).expect("gcd divides f'");
    let mut d = sub(&c, &derivative(&b));
    let mut i = 1u32;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        let bn = div_exact(&b, &a).expect("gcd divides b");
        let cn = div_exact(&d, &a).expect("gcd divides d");
        if a.len() > 1 {
            out.push((a, i));
        }
        d = sub(&cn, &derivative(&bn));
        b = bn;
        i += 1;
    }
    out
}

pub(crate) fn sub(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    let mut out: IntPoly = (0..n)
        .map(|k| a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero))
        .collect();
    trim(&mut out);
    out
}

#[cfg(test)]
pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(v: &[i64]) -> IntPoly {
        let mut p: IntPoly = v.iter().map(|&c| BigInt::from(c)).collect();
        trim(&mut p);
        p
    }

    #[test]
    fn prime_generator_yields_primes() {
        let ps: Vec<u64> = primes().take(5).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| is_prime_u64(p) && p < (1 << 62)));
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64(1_000_000_007));
    }

    #[test]
    fn gcd_recovers_common_factor() {
        // (x - 2)(3x + 1) and (x - 2)(x^2 + 5)
        let common = ip(&[-2, 1]);
        let f = mul(&common, &ip(&[1, 3]));
        let g = mul(&common, &ip(&[5, 0, 1]));
        assert_eq!(gcd(&f, &g), common);
        assert_eq!(gcd(&ip(&[1, 1]), &ip(&[2, 1])), ip(&[1]));
    }

    #[test]
    fn gcd_with_large_coefficients() {
        let big = BigInt::from(10).pow(40u32);
        let mut h: IntPoly = vec![big.clone() + 7, BigInt::from(-3), big.clone() * 11 + 1];
        h = primitive(&h);
        let f = mul(&mul(&h, &h), &ip(&[1, 0, 1]));
        let g = mul(&h, &ip(&[-5, 2, 9, 1]));
        assert_eq!(gcd(&f, &g), h);
    }

    #[test]
    fn square_free_parts() {
        // x^3 (x - 1)^2 (x + 2)
        let f = mul(
            &mul(&ip(&[0, 0, 0, 1]), &mul(&ip(&[-1, 1]), &ip(&[-1, 1]))),
            &ip(&[2, 1]),
        );
        let sf = square_free_decomposition(&f);
        assert_eq!(
            sf,
            vec![(ip(&[2, 1]), 1), (ip(&[-1, 1]), 2), (ip(&[0, 1]), 3)]
        );
    }

    #[test]
    fn pseudo_remainder_matches_rational_remainder() {
        let a = ip(&[1, 2, 3, 4]);
        let b = ip(&[5, 0, 2]);
        let r = prem(&a, &b);
        // lc(b)^2 * a mod b, computed by hand: a mod b = (2 - 10)x + (1 - 15/2)
        assert_eq!(r, ip(&[-26, -32]));
    }

    #[test]
    fn exact_division() {
        let a = mul(&ip(&[3, 1]), &ip(&[-4, 0, 7]));
        assert_eq!(div_exact(&a, &ip(&[3, 1])), Some(ip(&[-4, 0, 7])));
        assert_eq!(div_exact(&a, &ip(&[1, 2])), None);
    }
}
