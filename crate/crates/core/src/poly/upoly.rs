//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::intpoly;
use super::rat::{denominator_lcm, rat_to_f64, Rat};
use super::PolyError;

/// Univariate polynomial with exact rational coefficients, lowest degree
/// first. The zero polynomial has no coefficients; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// The linear polynomial `x - root`.
    pub fn linear_factor(root: Rat) -> Self {
        Self::new(vec![-root, Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rat_to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        let dd = divisor.degree().ok_or(PolyError::DegenerateInput(
            "division by the zero polynomial",
        ))?;
        let lc_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = &rem[k] * &lc_inv;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &q * dc;
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Quotient when `divisor` divides `self` exactly, `None` otherwise.
    pub fn div_exact(&self, divisor: &RatPoly) -> Option<RatPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RatPoly::zero());
        }
        // By Gauss's lemma the quotient of primitive parts is integral.
        let (ca, a) = self.to_primitive_integer();
        let (cb, b) = divisor.to_primitive_integer();
        let q = intpoly::div_exact(&a, &b)?;
        Some(RatPoly::from_integers(&q).scale(&(ca / cb)))
    }

    /// Splits into a positive rational content and a primitive integer
    /// polynomial: `self = content * sum(ints[k] x^k)`, with a positive
    /// leading integer coefficient.
    pub fn to_primitive_integer(&self) -> (Rat, Vec<BigInt>) {
        if self.is_zero() {
            return (Rat::zero(), Vec::new());
        }
        let l = denominator_lcm(&self.coeffs);
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let g = intpoly::content(&ints);
        let mut content = Rat::new(g.clone(), l);
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        if ints.last().unwrap().is_negative() {
            for c in ints.iter_mut() {
                *c = -&*c;
            }
            content = -content;
        }
        (content, ints)
    }

    pub fn from_integers(ints: &[BigInt]) -> Self {
        Self::new(ints.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (_, a) = self.to_primitive_integer();
        let (_, b) = other.to_primitive_integer();
        RatPoly::from_integers(&intpoly::gcd(&a, &b)).monic()
    }

    /// Monic square-free part.
    pub fn square_free_part(&self) -> RatPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Pairwise coprime monic square-free factors with multiplicities whose
    /// product is `self` up to a constant.
    pub fn square_free_decomposition(&self) -> Vec<(RatPoly, u32)> {
        let (_, ints) = self.to_primitive_integer();
        intpoly::square_free_decomposition(&ints)
            .into_iter()
            .map(|(f, m)| (RatPoly::from_integers(&f).monic(), m))
            .collect()
    }
}

/// Divides out each factor with its stated multiplicity, exactly.
pub fn strip_known_factors(p: &RatPoly, factors: &[(RatPoly, u32)]) -> Result<RatPoly, PolyError> {
    if p.is_zero() {
        return Ok(RatPoly::zero());
    }
    let (c, mut q) = p.to_primitive_integer();
    for (f, m) in factors {
        let (_, fi) = f.to_primitive_integer();
        for _ in 0..*m {
            q = intpoly::div_exact(&q, &fi).ok_or_else(|| PolyError::NotAFactor {
                factor: f.to_string(),
                multiplicity: *m,
            })?;
        }
    }
    Ok(RatPoly::from_integers(&q).scale(&c))
}

/// Divides out `factor` as often as it divides; returns the quotient and the
/// multiplicity removed.
pub fn strip_all(p: &RatPoly, factor: &RatPoly) -> (RatPoly, u32) {
    if factor.degree().unwrap_or(0) == 0 || p.is_zero() {
        return (p.clone(), 0);
    }
    let (c, mut q) = p.to_primitive_integer();
    let (_, fi) = factor.to_primitive_integer();
    let mut k = 0;
    while let Some(next) = intpoly::div_exact(&q, &fi) {
        q = next;
        k += 1;
    }
    (RatPoly::from_integers(&q).scale(&c), k)
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::rat;

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = RatPoly::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(RatPoly::from_i64(&[0, 0]).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let a = RatPoly::from_i64(&[1, 1]);
        let b = RatPoly::from_i64(&[-1, 1]);
        assert_eq!(&a * &b, RatPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn division_with_remainder() {
        let p = RatPoly::from_i64(&[1, 0, 0, 1]); // x^3 + 1
        let d = RatPoly::from_i64(&[1, 1]);
        let (q, r) = p.div_rem(&d).unwrap();
        assert_eq!(q, RatPoly::from_i64(&[1, -1, 1]));
        assert!(r.is_zero());
        let (_, r) = RatPoly::from_i64(&[1, 0, 1]).div_rem(&d).unwrap();
        assert_eq!(r, RatPoly::from_i64(&[2]));
        assert!(p.div_rem(&RatPoly::zero()).is_err());
    }

    #[test]
    fn primitive_integer_split() {
        let p = RatPoly::new(vec![rat(-1, 2), rat(0, 1), rat(-3, 4)]);
        let (c, ints) = p.to_primitive_integer();
        assert_eq!(c, rat(-1, 4));
        assert_eq!(
            ints,
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(3)]
        );
        assert_eq!(RatPoly::from_integers(&ints).scale(&c), p);
    }

    #[test]
    fn strip_round_trip() {
        let p = RatPoly::from_i64(&[0, 0, 1, 1]);
        let x = RatPoly::from_i64(&[0, 1]);
        assert_eq!(
            strip_known_factors(&p, &[(x.clone(), 2)]).unwrap(),
            RatPoly::from_i64(&[1, 1])
        );
        let err = strip_known_factors(
            &RatPoly::from_i64(&[1, 0, 1]),
            &[(RatPoly::from_i64(&[-1, 1]), 1)],
        );
        assert!(matches!(err, Err(PolyError::NotAFactor { .. })));
        assert_eq!(strip_all(&p, &x), (RatPoly::from_i64(&[1, 1]), 2));
    }

    #[test]
    fn gcd_and_square_free() {
        let a = RatPoly::from_i64(&[-1, 1]);
        let b = RatPoly::from_i64(&[2, 1]);
        let p = &(&a * &a) * &b;
        assert_eq!(p.gcd(&p.derivative()), a);
        assert_eq!(p.square_free_part(), &a * &b);
        assert_eq!(p.square_free_decomposition(), vec![(b, 1), (a, 2)]);
    }

    #[test]
    fn derivative_and_eval() {
        let p = RatPoly::from_i64(&[5, 0, -3, 1]);
        assert_eq!(p.derivative(), RatPoly::from_i64(&[0, -6, 3]));
        assert_eq!(p.eval(&rat(1, 2)), rat(5, 1) - rat(3, 4) + rat(1, 8));
        assert!((p.eval_f64(2.0) - 1.0).abs() < 1e-15);
    }
}
