//! Exact rational scalars.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

/// Builds `num/den` from machine integers.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Exact rational value of a finite `f64` (every finite double is a dyadic
/// rational). Returns `None` for NaN and infinities.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Nearest `f64` to a rational.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    // Scale so the integer quotient carries 64 significant bits.
    let n = r.numer().abs();
    let d = r.denom().clone();
    let shift = d.bits() as i64 - n.bits() as i64 + 64;
    let q = if shift >= 0 {
        (n << shift as usize) / &d
    } else {
        (n >> (-shift) as usize) / &d
    };
    let mant = q.to_f64().unwrap_or(f64::INFINITY);
    // Two steps keep each power of two representable.
    let e = -(shift as i32);
    let v = mant * 2f64.powi(e / 2) * 2f64.powi(e - e / 2);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Simplest rational within `tol` of `x`, found by walking the continued
/// fraction expansion. Used to turn user-supplied decimals such as an
/// eccentricity of `0.7` into `7/10`.
pub fn rat_approx(x: f64, tol: f64) -> Rat {
    assert!(x.is_finite(), "cannot rationalize {x}");
    let neg = x < 0.0;
    let mut rem = x.abs();
    // Convergents h/k.
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = rem.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let approx = h1.to_f64().unwrap() / k1.to_f64().unwrap();
        let frac = rem - a;
        if (approx - x.abs()).abs() <= tol || frac < 1e-300 {
            break;
        }
        rem = 1.0 / frac;
        if !rem.is_finite() {
            break;
        }
    }
    let r = Rat::new(h1, k1);
    if neg {
        -r
    } else {
        r
    }
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rat>>(values: I) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_round_trip_is_exact() {
        for &x in &[0.1, -3.75, 1e-300, 12345.678, 2f64.powi(60) + 1024.0] {
            let r = rat_from_f64(x).unwrap();
            assert_eq!(rat_to_f64(&r), x);
        }
        assert!(rat_from_f64(f64::NAN).is_none());
    }

    #[test]
    fn huge_ratio_converts() {
        let big = BigInt::from(10).pow(400u32);
        let r = Rat::new(BigInt::from(1) + &big, big * 3);
        assert!((rat_to_f64(&r) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn approx_finds_short_fractions() {
        assert_eq!(rat_approx(0.7, 1e-12), rat(7, 10));
        assert_eq!(rat_approx(-0.125, 1e-12), rat(-1, 8));
        assert_eq!(rat_approx(3.0, 1e-12), rat_int(3));
        let pi = rat_approx(std::f64::consts::PI, 1e-12);
        assert!((rat_to_f64(&pi) - std::f64::consts::PI).abs() <= 1e-12);
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [rat(1, 4), rat(5, 6), rat(2, 1)];
        assert_eq!(denominator_lcm(&v), BigInt::from(12));
    }
}
