//! Subresultant remainder sequences and the degree-one member used for
//! back-substitution.

use num_bigint::BigInt;
use num_traits::One;

use super::mpoly::MPoly;
use super::resultant::{integer_coeffs, other_vars, unify_pair};
use super::zpoly::ZPoly;
use super::PolyError;

fn trim(p: &mut Vec<ZPoly>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// `lc(b)^(deg a - deg b + 1) * a` reduced modulo `b`.
fn prem(a: &[ZPoly], b: &[ZPoly]) -> Result<Vec<ZPoly>, PolyError> {
    let db = b.len() - 1;
    let mut r: Vec<ZPoly> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return Ok(r);
    }
    let lb = &b[db];
    let steps = r.len() - db;
    let mut done = 0;
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut().take(dr) {
            *c = c.mul(lb)?;
        }
        r.pop();
        for (j, bj) in b.iter().enumerate().take(db) {
            if !bj.is_zero() {
                let idx = dr - db + j;
                r[idx] = r[idx].sub(&lr.mul(bj)?);
            }
        }
        trim(&mut r);
        done += 1;
    }
    if done < steps {
        let f = lb.pow((steps - done) as u32)?;
        for c in r.iter_mut() {
            *c = c.mul(&f)?;
        }
    }
    Ok(r)
}

fn div_all(p: &[ZPoly], d: &ZPoly) -> Result<Vec<ZPoly>, PolyError> {
    p.iter()
        .map(|c| {
            c.div_exact(d)
                .ok_or(PolyError::DegenerateInput("inexact subresultant division"))
        })
        .collect()
}

/// Subresultant pseudo-remainder sequence of two coefficient lists with
/// `deg a >= deg b`, ending with the last nonzero member.
fn subresultant_prs(a: &[ZPoly], b: &[ZPoly], nvars: usize) -> Result<Vec<Vec<ZPoly>>, PolyError> {
    let one = ZPoly::constant(nvars, BigInt::one());
    let mut seq = vec![a.to_vec(), b.to_vec()];
    let d0 = a.len() - b.len();
    let mut beta = if d0.is_multiple_of(2) {
        one.neg()
    } else {
        one.clone()
    };
    let mut psi = one.neg();
    loop {
        let n = seq.len();
        let (prev, cur) = (&seq[n - 2], &seq[n - 1]);
        if cur.len() == 1 {
            break;
        }
        let r = prem(prev, cur)?;
        if r.is_empty() {
            break;
        }
        let next = div_all(&r, &beta)?;
        // Update psi and beta for the following step.
        let d_prev = prev.len() - cur.len();
        let gamma = cur.last().unwrap().clone();
        let neg_gamma = gamma.neg();
        psi = if d_prev == 0 {
            psi
        } else {
            let num = neg_gamma.pow(d_prev as u32)?;
            let den = psi.pow((d_prev - 1) as u32)?;
            num.div_exact(&den)
                .ok_or(PolyError::DegenerateInput("inexact subresultant division"))?
        };
        let d_cur = cur.len() - next.len();
        beta = neg_gamma.mul(&psi.pow(d_cur as u32)?)?;
        seq.push(next);
    }
    Ok(seq)
}

/// Runs the subresultant remainder sequence of `p` and `q` in `var` and
/// returns `(u1, u0)`, the coefficients of its degree-one member
/// `u1 * var + u0`. Any common root with `u1 != 0` has `var = -u0 / u1`.
///
/// Fails with `ChainCollapse` when no member of degree one exists, or when
/// the sequence ends in a nonzero constant (no common roots at all).
pub fn euclidean_last_linear(p: &MPoly, q: &MPoly, var: &str) -> Result<(MPoly, MPoly), PolyError> {
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::DegenerateInput(
            "remainder sequence of the zero polynomial",
        ));
    }
    let (p, q) = unify_pair(p, q);
    let vi = p.index_of(var)?;
    let keep = other_vars(&p, &q, vi);
    let (a, _) = integer_coeffs(&p, var, &keep)?;
    let (b, _) = integer_coeffs(&q, var, &keep)?;
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let collapse = || PolyError::ChainCollapse {
        var: var.to_string(),
    };
    if b.len() == 1 {
        return Err(collapse());
    }
    let seq = subresultant_prs(&a, &b, keep.len())?;
    let last = seq.last().unwrap();
    if last.len() == 1 && last[0].is_constant() {
        return Err(collapse());
    }
    let linear = seq
        .iter()
        .rev()
        .find(|s| s.len() == 2)
        .ok_or_else(collapse)?;
    let u0 = MPoly::from_zpoly(&linear[0], p.vars(), &keep);
    let u1 = MPoly::from_zpoly(&linear[1], p.vars(), &keep);
    Ok((u1, u0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat::rat_int;
    use crate::poly::resultant::sylvester_resultant;

    fn p(s: &str) -> MPoly {
        s.parse().unwrap()
    }

    #[test]
    fn one_division_step() {
        let (u1, u0) = euclidean_last_linear(&p("x^2 - y"), &p("x^2 - x"), "x").unwrap();
        assert_eq!(u1.as_constant(), Some(rat_int(-1)));
        assert_eq!(u0.with_vars(&["y"]).unwrap(), p("y"));
    }

    #[test]
    fn coprime_linears_collapse() {
        let r = euclidean_last_linear(&p("x - 1"), &p("x - 2"), "x");
        assert!(matches!(r, Err(PolyError::ChainCollapse { .. })));
    }

    #[test]
    fn skipping_degree_one_collapses() {
        // Remainder of x^3 + 1 by x^2 is the constant 1.
        let r = euclidean_last_linear(&p("x^3 + 1"), &p("x^2"), "x");
        assert!(matches!(r, Err(PolyError::ChainCollapse { .. })));
    }

    #[test]
    fn last_member_is_the_principal_subresultant() {
        // For a generic pair the degree-zero member equals the resultant
        // up to sign.
        let (f, g) = unify_pair(
            &p("(y + 2)*x^3 - x^2 + y*x + 1"),
            &p("3*x^2 + (y - 1)*x - 2"),
        );
        let keep = other_vars(&f, &g, f.index_of("x").unwrap());
        let (a, _) = integer_coeffs(&f, "x", &keep).unwrap();
        let (b, _) = integer_coeffs(&g, "x", &keep).unwrap();
        let seq = subresultant_prs(&a, &b, 1).unwrap();
        let last = MPoly::from_zpoly(&seq.last().unwrap()[0], f.vars(), &keep);
        let res = sylvester_resultant(&f, &g, "x").unwrap();
        assert!(last == res || last == -res.clone(), "{last} vs {res}");
    }

    #[test]
    fn common_root_satisfies_linear_member() {
        // Both vanish at x = y + 1.
        let f = p("(x - y - 1)*(x^2 + y)");
        let g = p("(x - y - 1)*(2*x + y^2 + 3)");
        let (u1, u0) = euclidean_last_linear(&f, &g, "x").unwrap();
        for yv in [-2i64, 1, 5] {
            let y = rat_int(yv);
            let a = u1.substitute("y", &y).unwrap().as_constant().unwrap();
            let b = u0.substitute("y", &y).unwrap().as_constant().unwrap();
            assert_eq!(-b / a, rat_int(yv + 1));
        }
    }
}
