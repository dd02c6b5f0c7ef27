//! Polynomial systems of the symmetric cases and their eliminants.

use crate::poly::{rat_int, sylvester_resultant, MPoly, PolyError, Rat, RatPoly};

pub(crate) const VARS_2A: [&str; 3] = ["x0", "y0", "l"];
pub(crate) const VARS_2B: [&str; 3] = ["s", "x0", "l"];

fn k<S: AsRef<str>>(vars: &[S], c: &Rat) -> MPoly {
    MPoly::constant(vars, c.clone())
}

fn ki<S: AsRef<str>>(vars: &[S], c: i64) -> MPoly {
    MPoly::constant(vars, rat_int(c))
}

fn v<S: AsRef<str>>(vars: &[S], name: &str) -> MPoly {
    MPoly::var(vars, name).expect("variable in list")
}

/// `x0^2 + y0^2 - 1` over [`VARS_2A`].
pub(crate) fn unit_circle() -> MPoly {
    let vs = &VARS_2A;
    &(&v(vs, "x0").pow(2) + &v(vs, "y0").pow(2)) - &ki(vs, 1)
}

/// Case 2a (`x1 = x0`, `y1 = -y0`, `s1x = 0`): the first-order conditions
/// of the cost `c(x0, y0, l)` along `unit_circle`, after `s1y` is eliminated through
/// the radius condition at `(x0, y0)`. Returns `(cond_l, cond_t)`.
pub(crate) fn case2a_equations(s0x: &Rat, s0y: &Rat) -> (MPoly, MPoly) {
    let vs = &VARS_2A;
    let (x0, y0, l) = (v(vs, "x0"), v(vs, "y0"), v(vs, "l"));
    let (sx, sy) = (k(vs, s0x), k(vs, s0y));
    let one = ki(vs, 1);
    // s1y = a / u
    let u = &l * &x0;
    let a = &(&(&one + &(&x0 * &sy)) - &(&y0 * &sx)) - &l.pow(2);
    let om = &one - &l;
    // n = c u^2
    let syu_a = &(&sy * &u) - &a;
    let n = &(&(&(&(&sx * &sx) * &u.pow(2)) + &syu_a.pow(2)) + &(&om.pow(2) * &u.pow(2)))
        + &(&(&ki(vs, 2) * &om) * &(&u * &(&(&x0 * &syu_a) - &(&(&y0 * &sx) * &u))));
    let dl = n.partial("l").unwrap();
    let dx = n.partial("x0").unwrap();
    let dy = n.partial("y0").unwrap();
    let cond_l = &(&l * &dl) - &(&ki(vs, 2) * &n);
    let cond_t = &(&(&x0.pow(2) * &dy) - &(&(&x0 * &y0) * &dx)) + &(&(&ki(vs, 2) * &y0) * &n);
    (cond_l, cond_t)
}

/// `Res_x0(unit_circle, Res_l(cond_l, cond_t))` as a polynomial in `y0`, together with
/// the intermediate `res_l(x0, y0)`.
pub(crate) fn case2a_eliminant(
    cond_l: &MPoly,
    cond_t: &MPoly,
) -> Result<(MPoly, RatPoly), PolyError> {
    let res_l = sylvester_resultant(cond_l, cond_t, "l")?;
    let eliminant = sylvester_resultant(&unit_circle(), &res_l, "x0")?;
    Ok((res_l, eliminant.to_ratpoly("y0")?))
}

/// Case 2b (`x1 = -x0`, `y1 = -y0`, `y0 = (1 - l^2)/s0x`): returns
/// `(circle, cond_s, cond_x)` over [`VARS_2B`], where `s` stands for `s1y`.
pub(crate) fn case2b_equations(s0x: &Rat, s0y: &Rat) -> (MPoly, MPoly, MPoly) {
    let vs = &VARS_2B;
    let (s, x0, l) = (v(vs, "s"), v(vs, "x0"), v(vs, "l"));
    let (sx, sy) = (k(vs, s0x), k(vs, s0y));
    let one = ki(vs, 1);
    let two = ki(vs, 2);
    let om = &one - &l;
    let omsq = &one - &l.pow(2);
    let y0 = omsq.scale(&s0x.recip());
    // s1x = p / kk
    let kk = &l * &omsq;
    let p = &(&x0 * &(&(&l * &s) - &sy)) * &sx;
    let dsy = &sy - &s;
    let common = &dsy.pow(2) + &om.pow(2);
    let cross = &(&(&two * &om) * &x0) * &dsy;
    let kk2 = kk.pow(2);
    let a0 = &(&sx * &kk) - &p;
    let a1 = &(&sx * &kk) + &p;
    let tail = &(&two * &om) * &(&y0 * &kk);
    // n_i = Delta_i^2 kk^2
    let n0 = &(&a0.pow(2) + &(&kk2 * &(&common + &cross))) - &(&tail * &a0);
    let n1 = &(&a1.pow(2) + &(&kk2 * &(&common - &cross))) - &(&tail * &a1);

    let circle = &(&(&sx * &sx) * &(&x0.pow(2) - &one)) + &omsq.pow(2);

    let ds0 = n0.partial("s").unwrap();
    let ds1 = n1.partial("s").unwrap();
    let num_s = &(&ds0.pow(2) * &n1) - &(&ds1.pow(2) * &n0);
    let den_s = &(&l.pow(3) * &om.pow(4)) * &(&one + &l).pow(2);
    let cond_s = num_s.div_exact(&den_s).expect("cond_s denominator divides");

    let dk = kk.partial("l").unwrap();
    let s2x0 = &(&sx * &sx) * &x0;
    let h = |n: &MPoly| {
        let gx = &(&two * &kk2) * &n.partial("x0").unwrap();
        let gl = &(&kk * &n.partial("l").unwrap()) - &(&(&two * &dk) * n);
        &gx + &(&s2x0 * &gl)
    };
    let (h0, h1) = (h(&n0), h(&n1));
    let num_x = &(&h1.pow(2) * &n0) - &(&h0.pow(2) * &n1);
    let den_x = &(&l.pow(2) * &om.pow(3)) * &(&one + &l).pow(2);
    let cond_x = num_x.div_exact(&den_x).expect("cond_x denominator divides");
    (circle, cond_s, cond_x)
}

/// `Res_x0(circle, Res_s(cond_s, cond_x))` as a polynomial in `l`, up to a
/// nonzero constant factor. `cond_s` and `cond_x` are first reduced modulo
/// `circle` in `x0`, which leaves the final resultant unchanged because `circle`
/// has a constant leading coefficient in `x0`.
pub(crate) fn case2b_eliminant(
    circle: &MPoly,
    cond_s: &MPoly,
    cond_x: &MPoly,
) -> Result<RatPoly, PolyError> {
    let (rs, rx) = (
        reduce_mod_circle(cond_s, circle)?,
        reduce_mod_circle(cond_x, circle)?,
    );
    let res_s = sylvester_resultant(&rs, &rx, "s")?;
    let p = sylvester_resultant(circle, &res_s, "x0")?;
    p.to_ratpoly("l")
}

/// Remainder of `p` modulo `circle = a x0^2 - b`, i.e. `x0^2` replaced by `b / a`.
pub(crate) fn reduce_mod_circle(p: &MPoly, circle: &MPoly) -> Result<MPoly, PolyError> {
    let cc = circle.coeffs_in("x0")?;
    let a = cc[2]
        .as_constant()
        .ok_or(PolyError::DegenerateInput("circle leading coefficient"))?;
    let x2 = (-&cc[0]).scale(&a.recip());
    let cs = p.coeffs_in("x0")?;
    let mut even = MPoly::zero(p.vars());
    let mut odd = MPoly::zero(p.vars());
    let mut pw = MPoly::one(p.vars());
    for pair in cs.chunks(2) {
        even = &even + &(&pair[0] * &pw);
        if let Some(c) = pair.get(1) {
            odd = &odd + &(c * &pw);
        }
        pw = &pw * &x2;
    }
    Ok(&even + &(&odd * &MPoly::var(p.vars(), "x0")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn reduction_is_linear_in_x0() {
        let (c, a, b) = case2b_equations(&rat(2, 5), &rat(3, 10));
        for p in [&a, &b] {
            let r = reduce_mod_circle(p, &c).unwrap();
            assert!(r.degree_in("x0").unwrap() <= 1);
            let pt = [0.3, 0.2, 0.9];
            let x0 = |l: f64| {
                let sx = 0.4f64;
                (sx * sx - (1.0 - l * l).powi(2)).sqrt() / sx
            };
            let q = [pt[0], x0(pt[2]), pt[2]];
            assert!((r.eval_f64(&q) - p.eval_f64(&q)).abs() < 1e-9);
        }
    }
}
