//! Sparse multivariate polynomials over the rationals with named variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rat::{denominator_lcm, rat_to_f64, Rat};
use super::upoly::RatPoly;
use super::zpoly::ZPoly;
use super::PolyError;

/// Multivariate polynomial. Terms map an exponent vector (one entry per
/// variable, in `vars` order) to a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        MPoly {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let idx = p.index_of(name)?;
        let mut e = vec![0; p.vars.len()];
        e[idx] = 1;
        p.terms.insert(e, Rat::one());
        Ok(p)
    }

    pub fn from_terms<S, I>(vars: &[S], terms: I) -> Self
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut p = Self::zero(vars);
        let n = p.vars.len();
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent vector length must match variables");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn index_of(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    /// Degree in `name`; 0 for the zero polynomial.
    pub fn degree_in(&self, name: &str) -> Result<u32, PolyError> {
        let i = self.index_of(name)?;
        Ok(self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Variables with a nonzero exponent somewhere.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    /// Re-embeds into a variable list that contains every used variable.
    pub fn with_vars<S: AsRef<str>>(&self, vars: &[S]) -> Result<Self, PolyError> {
        let target: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] > 0) {
                        return Err(PolyError::UnknownVariable(v.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let mut out = MPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = x;
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    pub(crate) fn unify(&self, other: &MPoly) -> (MPoly, MPoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        (
            self.with_vars(&vars).expect("superset"),
            other.with_vars(&vars).expect("superset"),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Formal partial derivative.
    pub fn partial(&self, name: &str) -> Result<Self, PolyError> {
        let i = self.index_of(name)?;
        let mut out = MPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * Rat::from_integer(BigInt::from(e[i])));
        }
        Ok(out)
    }

    /// Coefficients with respect to `name`, lowest power first. Each
    /// coefficient keeps the full variable list, with `name` absent.
    pub fn coeffs_in(&self, name: &str) -> Result<Vec<MPoly>, PolyError> {
        let i = self.index_of(name)?;
        let d = self.degree_in(name)? as usize;
        let mut out = vec![MPoly::zero(&self.vars); if self.is_zero() { 0 } else { d + 1 }];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut ne = e.clone();
            ne[i] = 0;
            out[k].terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Inverse of [`MPoly::coeffs_in`].
    pub fn from_coeffs_in(name: &str, coeffs: &[MPoly]) -> Result<Self, PolyError> {
        let vars = coeffs
            .first()
            .map(|c| c.vars.clone())
            .unwrap_or_else(|| vec![name.to_string()]);
        let mut out = MPoly::zero(&vars);
        let i = out.index_of(name)?;
        for (k, c) in coeffs.iter().enumerate() {
            let c = c.with_vars(&vars)?;
            for (e, a) in c.terms {
                if e[i] != 0 {
                    return Err(PolyError::DegenerateInput(
                        "coefficient depends on the main variable",
                    ));
                }
                let mut ne = e;
                ne[i] = k as u32;
                out.add_term(ne, a);
            }
        }
        Ok(out)
    }

    /// Exact value at a rational point. Works over a common denominator so
    /// that no intermediate gcds are taken.
    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len());
        if self.terms.is_empty() {
            return Rat::zero();
        }
        let nv = self.vars.len();
        let mut max_deg = vec![0usize; nv];
        for e in self.terms.keys() {
            for (m, &k) in max_deg.iter_mut().zip(e) {
                *m = (*m).max(k as usize);
            }
        }
        let table = |x: &BigInt, d: usize| {
            let mut t = Vec::with_capacity(d + 1);
            t.push(BigInt::one());
            for i in 0..d {
                let next = &t[i] * x;
                t.push(next);
            }
            t
        };
        let nums: Vec<Vec<BigInt>> = point
            .iter()
            .zip(&max_deg)
            .map(|(x, &d)| table(x.numer(), d))
            .collect();
        let dens: Vec<Vec<BigInt>> = point
            .iter()
            .zip(&max_deg)
            .map(|(x, &d)| table(x.denom(), d))
            .collect();
        let l = denominator_lcm(self.terms.values());
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.numer() * (&l / c.denom());
            for v in 0..nv {
                let k = e[v] as usize;
                if max_deg[v] > 0 {
                    t *= &nums[v][k];
                    t *= &dens[v][max_deg[v] - k];
                }
            }
            acc += t;
        }
        let mut den = l;
        for v in 0..nv {
            den *= &dens[v][max_deg[v]];
        }
        Rat::new(acc, den)
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(rat_to_f64(c), |t, (&k, &x)| t * x.powi(k as i32))
            })
            .sum()
    }

    /// Replaces `name` by a rational value. The variable stays in the list
    /// with exponent zero everywhere.
    pub fn substitute(&self, name: &str, value: &Rat) -> Result<Self, PolyError> {
        let i = self.index_of(name)?;
        let mut out = MPoly::zero(&self.vars);
        let d = self.degree_in(name)? as usize;
        let mut powers = vec![Rat::one(); d + 1];
        for k in 1..=d {
            powers[k] = &powers[k - 1] * value;
        }
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            ne[i] = 0;
            out.add_term(ne, c * &powers[e[i] as usize]);
        }
        Ok(out)
    }

    /// Replaces `name` by a polynomial.
    pub fn substitute_poly(&self, name: &str, value: &MPoly) -> Result<Self, PolyError> {
        let (this, value) = self.unify(value);
        let coeffs = this.coeffs_in(name)?;
        let mut out = MPoly::zero(&this.vars);
        for c in coeffs.iter().rev() {
            out = &(&out * &value) + c;
        }
        Ok(out)
    }

    /// Univariate view; fails if any other variable occurs.
    pub fn to_ratpoly(&self, name: &str) -> Result<RatPoly, PolyError> {
        let i = self.index_of(name)?;
        let d = self.degree_in(name)? as usize;
        let mut coeffs = vec![Rat::zero(); if self.is_zero() { 0 } else { d + 1 }];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &x)| j != i && x > 0) {
                return Err(PolyError::DegenerateInput("polynomial is not univariate"));
            }
            coeffs[e[i] as usize] = c.clone();
        }
        Ok(RatPoly::new(coeffs))
    }

    pub fn from_ratpoly<S: AsRef<str>>(
        p: &RatPoly,
        vars: &[S],
        name: &str,
    ) -> Result<Self, PolyError> {
        let mut out = MPoly::zero(vars);
        let i = out.index_of(name)?;
        let n = out.vars.len();
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = k as u32;
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<Self> {
        let (a, d) = self.unify(d);
        if d.is_zero() {
            return None;
        }
        let idx: Vec<usize> = (0..a.vars.len()).collect();
        let (za, sa) = a.to_zpoly(&idx).ok()?;
        let (zd, sd) = d.to_zpoly(&idx).ok()?;
        let c = zd.content();
        let zq = za.div_exact(&zd.div_scalar(&c))?;
        // a = za / sa and d = c zd' / sd, so a / d = zq sd / (sa c).
        let q = MPoly::from_zpoly(&zq, &a.vars, &idx);
        Some(q.scale(&Rat::new(sd, sa * c)))
    }

    /// Integer image over the variables `keep` (indices into `vars`), with
    /// `self = z / scale`. Variables outside `keep` must not occur.
    pub(crate) fn to_zpoly(&self, keep: &[usize]) -> Result<(ZPoly, BigInt), PolyError> {
        let l = denominator_lcm(self.terms.values());
        let lr = Rat::from_integer(l.clone());
        let terms: Vec<(Vec<u32>, BigInt)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                for (j, &x) in e.iter().enumerate() {
                    if x > 0 && !keep.contains(&j) {
                        return Err(PolyError::DegenerateInput("variable outside the kept set"));
                    }
                }
                Ok((keep.iter().map(|&j| e[j]).collect(), (c * &lr).to_integer()))
            })
            .collect::<Result<_, _>>()?;
        Ok((ZPoly::from_terms(keep.len(), terms)?, l))
    }

    pub(crate) fn from_zpoly<S: AsRef<str>>(z: &ZPoly, vars: &[S], keep: &[usize]) -> Self {
        let mut out = MPoly::zero(vars);
        let n = out.vars.len();
        for (e, c) in z.terms() {
            let mut ne = vec![0; n];
            for (k, &j) in keep.iter().enumerate() {
                ne[j] = e[k];
            }
            out.terms.insert(ne, Rat::from_integer(c.clone()));
        }
        out
    }

    /// Fast `f64` evaluator for repeated numeric use.
    pub fn compile(&self) -> CompiledPoly {
        let nvars = self.vars.len();
        let mut max_deg = vec![0u32; nvars];
        for e in self.terms.keys() {
            for (m, &x) in max_deg.iter_mut().zip(e) {
                *m = (*m).max(x);
            }
        }
        CompiledPoly {
            max_deg,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), rat_to_f64(c)))
                .collect(),
        }
    }
}

/// Polynomial with `f64` coefficients evaluated through per-variable power
/// tables.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    max_deg: Vec<u32>,
    terms: Vec<(Vec<u32>, f64)>,
}

impl CompiledPoly {
    pub fn eval(&self, point: &[f64]) -> f64 {
        let tables: Vec<Vec<f64>> = self
            .max_deg
            .iter()
            .zip(point)
            .map(|(&d, &x)| {
                let mut t = Vec::with_capacity(d as usize + 1);
                let mut acc = 1.0;
                for _ in 0..=d {
                    t.push(acc);
                    acc *= x;
                }
                t
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |t, (v, &k)| t * tables[v][k as usize])
            })
            .sum()
    }
}

impl fmt::Display for MPoly {
    /// One term per line, `coeff * x0^a y0^b`, sorted by exponent vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (e, c) in &self.terms {
            write!(f, "{c}")?;
            let mut first = true;
            for (v, &k) in self.vars.iter().zip(e) {
                if k == 0 {
                    continue;
                }
                write!(f, "{}", if first { " * " } else { " " })?;
                first = false;
                if k == 1 {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{v}^{k}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (mut a, b) = self.unify(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let (mut a, b) = self.unify(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let (a, b) = self.unify(rhs);
        let mut out = MPoly::zero(&a.vars);
        if a.is_zero() || b.is_zero() {
            return out;
        }
        if a.terms.len() * b.terms.len() > 4096 {
            let idx: Vec<usize> = (0..a.vars.len()).collect();
            if let (Ok((za, sa)), Ok((zb, sb))) = (a.to_zpoly(&idx), b.to_zpoly(&idx)) {
                if let Ok(zc) = za.mul(&zb) {
                    let c = MPoly::from_zpoly(&zc, &a.vars, &idx);
                    return c.scale(&Rat::new(BigInt::one(), sa * sb));
                }
            }
        }
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::{rat, rat_int};

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x + 1");
        let b = p("x - 1");
        assert_eq!(&a * &b, p("x^2 - 1"));
        assert!((&a * &MPoly::zero(&["x"])).is_zero());
    }

    #[test]
    fn cancellation_across_variable_lists() {
        let a = MPoly::parse_with_vars("x0^2 + y0^2 - 1", &["x0", "y0"]).unwrap();
        let b = MPoly::parse_with_vars("1 - y0^2", &["y0"]).unwrap();
        let s = &a + &b;
        assert_eq!(s, MPoly::parse_with_vars("x0^2", &["x0", "y0"]).unwrap());
    }

    #[test]
    fn partial_derivatives() {
        let f = MPoly::parse_with_vars("x0^2*y0", &["x0", "y0"]).unwrap();
        assert_eq!(
            f.partial("x0").unwrap(),
            MPoly::parse_with_vars("2*x0*y0", &["x0", "y0"]).unwrap()
        );
        assert!(MPoly::constant(&["x"], rat_int(5))
            .partial("x")
            .unwrap()
            .is_zero());
        assert!(f.partial("z").is_err());
    }

    #[test]
    fn coefficient_split_round_trip() {
        let f = p("3*x^2*y - x*y^2 + 7 + y");
        let c = f.coeffs_in("x").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(MPoly::from_coeffs_in("x", &c).unwrap(), f);
    }

    #[test]
    fn substitution_and_evaluation() {
        let f = p("x^2*y + 1/2*y");
        let g = f.substitute("y", &rat(2, 3)).unwrap();
        assert_eq!(g.eval_rat(&[rat(3, 1), rat(99, 1)]), rat(6, 1) + rat(1, 3));
        assert!((f.eval_f64(&[3.0, 2.0 / 3.0]) - (6.0 + 1.0 / 3.0)).abs() < 1e-14);
        let c = f.compile();
        assert!((c.eval(&[3.0, 2.0 / 3.0]) - (6.0 + 1.0 / 3.0)).abs() < 1e-14);
        let h = f.substitute_poly("x", &p("y + 1")).unwrap();
        assert_eq!(h, p("y^3 + 2*y^2 + 3/2*y").with_vars(h.vars()).unwrap());
    }

    #[test]
    fn exact_division() {
        let a = p("x^2 - y^2");
        let b = p("x + y");
        assert_eq!(a.div_exact(&b).unwrap(), p("x - y"));
        assert!(a.div_exact(&p("x + 2")).is_none());
        let half = p("1/2*x^2 - 1/2");
        assert_eq!(half.div_exact(&p("3*x + 3")).unwrap(), p("1/6*x - 1/6"));
    }

    #[test]
    fn display_lists_terms_in_exponent_order() {
        let f = MPoly::parse_with_vars("2*x0*y0^3 - 1/3 + x0^2", &["x0", "y0"]).unwrap();
        assert_eq!(f.to_string(), "-1/3\n2 * x0 y0^3\n1 * x0^2\n");
    }

    #[test]
    fn large_products_match_schoolbook() {
        let a = p("x + 2*y - 3*z + 1/7").pow(8);
        let b = p("x*y - z + 5").pow(4);
        let fast = &a * &b;
        let mut slow = MPoly::zero(fast.vars());
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                slow.add_term(e, ca * cb);
            }
        }
        assert_eq!(fast, slow);
    }
}
