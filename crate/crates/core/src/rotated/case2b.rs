//! Collinear transfers, `x1 = -x0`, `y1 = -y0`.

use log::{debug, warn};
use num_traits::Signed;

use super::elim::{case2b_eliminant, case2b_equations, VARS_2B};
use super::{case2b_closed, CaseTag, PlanarTransfer, RotatedCandidate, RotatedError, RotatedInput};
use crate::numeric::PolySystem;
use crate::poly::{
    euclidean_last_linear, rat_approx, rat_from_f64, rat_int, rat_to_f64, real_roots, root_bound,
    strip_all, MPoly, PolyError, RatPoly,
};

pub const ELIMINANT_DEGREE: usize = 166;

#[derive(Clone, Debug)]
pub struct Case2bPipeline {
    pub circle: MPoly,
    pub cond_s: MPoly,
    pub cond_x: MPoly,
    /// `Res_x0(circle, Res_s(cond_s, cond_x))` in `l`.
    pub eliminant: RatPoly,
    /// Square-free part of the eliminant with the factors `l`, `l - 1`,
    /// `l + 1` removed.
    pub reduced: RatPoly,
}

pub fn case2b_pipeline(
    s0x: &crate::poly::Rat,
    s0y: &crate::poly::Rat,
) -> Result<Case2bPipeline, RotatedError> {
    let (circle, cond_s, cond_x) = case2b_equations(s0x, s0y);
    let eliminant = match case2b_eliminant(&circle, &cond_s, &cond_x) {
        Ok(p) => p,
        // cond_s and cond_x share a factor in s, e.g. when s0y = 0.
        Err(PolyError::DegenerateInput(_)) => RatPoly::zero(),
        Err(e) => return Err(e.into()),
    };
    let got = eliminant.degree().unwrap_or(0);
    if got != ELIMINANT_DEGREE {
        return Err(RotatedError::PipelineDegreeMismatch {
            stage: "Res_x0(circle, Res_s(cond_s, cond_x))",
            expected: ELIMINANT_DEGREE,
            got,
        });
    }
    let mut reduced = eliminant.clone();
    for f in [[0, 1], [-1, 1], [1, 1]] {
        reduced = strip_all(&reduced, &RatPoly::from_i64(&f)).0;
    }
    let reduced = reduced.square_free_part();
    Ok(Case2bPipeline {
        circle,
        cond_s,
        cond_x,
        eliminant,
        reduced,
    })
}

/// Closed-form `|l1z| = 1` solutions plus the critical points from the
/// eliminant in `l`.
pub fn case2b_solutions(
    inp: &RotatedInput,
    root_tol: f64,
) -> Result<Vec<RotatedCandidate>, RotatedError> {
    let mut out = case2b_closed(inp);
    let pipe = match case2b_pipeline(&inp.s0x, &inp.s0y) {
        Ok(p) => p,
        Err(e @ RotatedError::PipelineDegreeMismatch { .. }) => {
            if inp.sy() == 0.0 {
                debug!("case 2b general branch skipped: {e}");
            } else {
                warn!("case 2b skipped: {e}");
            }
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let linear = match euclidean_last_linear(&pipe.cond_s, &pipe.cond_x, "s") {
        Ok(u) => Some(u),
        Err(PolyError::ChainCollapse { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let system = PolySystem::new(
        &[
            pipe.circle.clone(),
            pipe.cond_s.clone(),
            pipe.cond_x.clone(),
        ],
        &VARS_2B,
    );
    let (sx, sy) = (inp.sx(), inp.sy());
    // |y0| <= 1 confines l^2 to [1 - |s0x|, 1 + |s0x|].
    let ax = inp.s0x.abs();
    let lo = rat_approx(
        (rat_to_f64(&(rat_int(1) - &ax)).max(0.0)).sqrt() * (1.0 - 1e-9),
        1e-12,
    );
    let hi = rat_approx(rat_to_f64(&(rat_int(1) + &ax)).sqrt() * (1.0 + 1e-9), 1e-12);
    let mut ls = real_roots(&pipe.reduced, &-hi.clone(), &-lo.clone(), root_tol);
    ls.extend(real_roots(&pipe.reduced, &lo, &hi, root_tol));
    for l in ls {
        let y0 = (1.0 - l * l) / sx;
        if y0.abs() > 1.0 {
            continue;
        }
        let r = (1.0 - y0 * y0).max(0.0).sqrt();
        let signs: &[f64] = if r == 0.0 { &[1.0] } else { &[1.0, -1.0] };
        for &sign in signs {
            let x0 = sign * r;
            let s = match &linear {
                Some(u) => s_from_linear(u, x0, l),
                None => None,
            }
            .or_else(|| s_from_cond_s(&pipe, x0, l));
            let Some(s) = s else {
                debug!("case 2b: no s1y for l = {l}, x0 = {x0}");
                continue;
            };
            let start = [s, x0, l];
            let polished = system.solve(&start, 0.0, 8);
            let near = polished
                .x
                .iter()
                .zip(&start)
                .all(|(a, b)| (a - b).abs() < 1e-6);
            let [s, x0, l] = if near {
                [polished.x[0], polished.x[1], polished.x[2]]
            } else {
                start
            };
            let k = l * (1.0 - l * l);
            let t = PlanarTransfer {
                x0,
                y0: (1.0 - l * l) / sx,
                x1: -x0,
                y1: -(1.0 - l * l) / sx,
                l,
                s1x: x0 * (l * s - sy) * sx / k,
                s1y: s,
            };
            out.extend(t.candidate(inp, CaseTag::Case2bGeneral));
        }
    }
    Ok(out)
}

fn s_from_linear((u1, u0): &(MPoly, MPoly), x0: f64, l: f64) -> Option<f64> {
    let pt = [rat_int(0), rat_from_f64(x0)?, rat_from_f64(l)?];
    let den = u1.eval_rat(&pt);
    if den == rat_int(0) {
        return None;
    }
    Some(-rat_to_f64(&(u0.eval_rat(&pt) / den)))
}

fn s_from_cond_s(pipe: &Case2bPipeline, x0: f64, l: f64) -> Option<f64> {
    let p = pipe
        .cond_s
        .substitute("x0", &rat_from_f64(x0)?)
        .ok()?
        .substitute("l", &rat_from_f64(l)?)
        .ok()?
        .to_ratpoly("s")
        .ok()?;
    if p.degree().unwrap_or(0) == 0 {
        return None;
    }
    let b = root_bound(&p);
    real_roots(&p, &-b.clone(), &b, 1e-14)
        .into_iter()
        .min_by(|a, b| {
            let ea = pipe.cond_x.eval_f64(&[*a, x0, l]).abs();
            let eb = pipe.cond_x.eval_f64(&[*b, x0, l]).abs();
            ea.total_cmp(&eb)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn eliminant_degree() {
        let p = case2b_pipeline(&rat(2, 5), &rat(3, 10)).unwrap();
        assert_eq!(p.eliminant.degree(), Some(166));
        assert!(p.reduced.degree().unwrap() < 166);
    }
}
