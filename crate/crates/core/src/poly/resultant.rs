//! Sylvester resultants of multivariate polynomials.

use num_bigint::BigInt;
use num_traits::One;
#[cfg(test)]
use num_traits::Zero;
use rayon::prelude::*;

use super::mpoly::MPoly;
use super::rat::{denominator_lcm, Rat};
use super::zpoly::ZPoly;
use super::PolyError;

/// Coefficients of `p` in variable `var`, lowest first, as integer
/// polynomials over `keep`, together with the common denominator `l` such
/// that `p = sum(coeffs[k] var^k) / l`.
pub(crate) fn integer_coeffs(
    p: &MPoly,
    var: &str,
    keep: &[usize],
) -> Result<(Vec<ZPoly>, BigInt), PolyError> {
    let l = denominator_lcm(p.terms().map(|(_, c)| c));
    let lr = Rat::from_integer(l.clone());
    let coeffs = p
        .coeffs_in(var)?
        .iter()
        .map(|c| c.scale(&lr).to_zpoly(keep).map(|(z, _)| z))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((coeffs, l))
}

/// Variables other than `var` that occur in either polynomial.
pub(crate) fn other_vars(p: &MPoly, q: &MPoly, var_idx: usize) -> Vec<usize> {
    let mut keep: Vec<usize> = p.used_vars();
    for v in q.used_vars() {
        if !keep.contains(&v) {
            keep.push(v);
        }
    }
    keep.retain(|&v| v != var_idx);
    keep.sort_unstable();
    keep
}

pub(crate) fn unify_pair(p: &MPoly, q: &MPoly) -> (MPoly, MPoly) {
    p.unify(q)
}

/// Determinant of a square matrix of integer polynomials by fraction-free
/// Bareiss elimination with row pivoting.
pub(crate) fn bareiss_det(mut m: Vec<Vec<ZPoly>>, nvars: usize) -> Result<ZPoly, PolyError> {
    let n = m.len();
    if n == 0 {
        return Ok(ZPoly::constant(nvars, BigInt::one()));
    }
    let mut prev = ZPoly::constant(nvars, BigInt::one());
    let mut negate = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // Prefer the sparsest available pivot.
            let pick = (k + 1..n)
                .filter(|&r| !m[r][k].is_zero())
                .min_by_key(|&r| m[r][k].len());
            match pick {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(ZPoly::zero(nvars)),
            }
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let pivot = &pivot_row[k];
        tail.par_iter_mut()
            .try_for_each(|row| -> Result<(), PolyError> {
                let factor = row[k].clone();
                for j in k + 1..n {
                    let mut v = pivot.mul(&row[j])?;
                    if !factor.is_zero() && !pivot_row[j].is_zero() {
                        v = v.sub(&factor.mul(&pivot_row[j])?);
                    }
                    row[j] = v
                        .div_exact(&prev)
                        .ok_or(PolyError::DegenerateInput("inexact Bareiss step"))?;
                }
                row[k] = ZPoly::zero(nvars);
                Ok(())
            })?;
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg() } else { det })
}

fn sylvester_matrix(a: &[ZPoly], b: &[ZPoly], nvars: usize) -> Vec<Vec<ZPoly>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![ZPoly::zero(nvars); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![ZPoly::zero(nvars); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Remainder of `b` modulo `a` when the leading coefficient of `a` is the
/// integer `lc`; returned scaled by `lc^(deg b - deg a + 1)`.
fn prem_constant_lc(a: &[ZPoly], b: &[ZPoly], lc: &BigInt) -> Result<Vec<ZPoly>, PolyError> {
    let m = a.len() - 1;
    let mut r: Vec<ZPoly> = b.to_vec();
    if r.len() <= m {
        return Ok(r);
    }
    for k in (m..r.len()).rev() {
        let c = std::mem::replace(&mut r[k], ZPoly::zero(a[0].nvars()));
        for v in r.iter_mut().take(k) {
            *v = v.scale(lc);
        }
        if c.is_zero() {
            continue;
        }
        for (j, aj) in a.iter().enumerate().take(m) {
            if !aj.is_zero() {
                r[k - m + j] = r[k - m + j].sub(&c.mul(aj)?);
            }
        }
    }
    r.truncate(m);
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    Ok(r)
}

fn zpow(p: &ZPoly, k: usize) -> Result<ZPoly, PolyError> {
    p.pow(k as u32)
}

/// Resultant of two coefficient lists (lowest first, leading entries
/// nonzero) over `nvars` variables.
pub(crate) fn resultant_coeffs(a: &[ZPoly], b: &[ZPoly], nvars: usize) -> Result<ZPoly, PolyError> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 {
        return zpow(&a[0], n);
    }
    if n == 0 {
        return zpow(&b[0], m);
    }
    if let Some(lc) = a[m]
        .is_constant()
        .then(|| a[m].leading_coeff().cloned())
        .flatten()
    {
        // Res(A, B) = lc^(n - r) Res(A, B mod A), with B mod A computed as a
        // pseudo-remainder scaled by lc^(n - m + 1).
        if n >= m {
            let pr = prem_constant_lc(a, b, &lc)?;
            if pr.is_empty() {
                return Ok(ZPoly::zero(nvars));
            }
            let r = pr.len() - 1;
            let sub = resultant_coeffs(a, &pr, nvars)?;
            // sub = Res(A, lc^(n-m+1) R) = lc^((n-m+1) m) Res(A, R)
            let num_exp = (n - r) as u32;
            let den_exp = ((n - m + 1) * m) as u32;
            let scaled = if num_exp >= den_exp {
                sub.scale(&lc.pow(num_exp - den_exp))
            } else {
                sub.div_scalar(&lc.pow(den_exp - num_exp))
            };
            return Ok(scaled);
        }
    }
    if b[n].is_constant() && m >= n {
        let res = resultant_coeffs(b, a, nvars)?;
        return Ok(if (m * n) % 2 == 1 { res.neg() } else { res });
    }
    bareiss_det(sylvester_matrix(a, b, nvars), nvars)
}

/// Sylvester resultant of `p` and `q` with respect to `var`. The result
/// keeps the union variable list; `var` no longer occurs in it.
///
/// Polynomials of degree zero in `var` follow the usual convention
/// `Res(c, q) = c^deg(q)`.
pub fn sylvester_resultant(p: &MPoly, q: &MPoly, var: &str) -> Result<MPoly, PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::DegenerateInput(
            "resultant of the zero polynomial",
        ));
    }
    let (p, q) = unify_pair(p, q);
    let vi = p.index_of(var)?;
    let keep = other_vars(&p, &q, vi);
    let (a, la) = integer_coeffs(&p, var, &keep)?;
    let (b, lb) = integer_coeffs(&q, var, &keep)?;
    let m = a.len() - 1;
    let n = b.len() - 1;
    let det = resultant_coeffs(&a, &b, keep.len())?;
    // Res(la p, lb q) = la^n lb^m Res(p, q)
    let scale = Rat::new(BigInt::one(), la.pow(n as u32) * lb.pow(m as u32));
    Ok(MPoly::from_zpoly(&det, p.vars(), &keep).scale(&scale))
}

/// Determinant of the Sylvester matrix evaluated numerically; used in tests
/// as an independent check.
#[cfg(test)]
pub(crate) fn sylvester_det_rat(a: &[Rat], b: &[Rat]) -> Rat {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut mat = vec![vec![Rat::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    let mut det = Rat::one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            mat.swap(piv, col);
            det = -det;
        }
        let pv = mat[col][col].clone();
        det *= &pv;
        for r in col + 1..size {
            let f = &mat[r][col] / &pv;
            if f.is_zero() {
                continue;
            }
            for c in col..size {
                let t = &f * &mat[col][c];
                mat[r][c] -= t;
            }
        }
    }
    det
}
