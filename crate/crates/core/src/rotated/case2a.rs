//! Mirror-symmetric transfers, `x1 = x0`, `y1 = -y0`, `s1x = 0`.

use log::{debug, warn};

use super::elim::{case2a_eliminant, case2a_equations, unit_circle, VARS_2A};
use super::{CaseTag, PlanarTransfer, RotatedCandidate, RotatedError, RotatedInput};
use crate::numeric::PolySystem;
use crate::poly::{
    euclidean_last_linear, rat_from_f64, rat_int, rat_to_f64, real_roots, strip_known_factors,
    MPoly, PolyError, Rat, RatPoly,
};

pub const ELIMINANT_DEGREE: usize = 48;
pub const REDUCED_DEGREE: usize = 20;

/// Intermediate results of the elimination for one input.
#[derive(Clone, Debug)]
pub struct Case2aPipeline {
    pub cond_l: MPoly,
    pub cond_t: MPoly,
    /// `Res_l(cond_l, cond_t)` in `(x0, y0)`.
    pub res_l: MPoly,
    /// `Res_x0(x0^2 + y0^2 - 1, res_l)` in `y0`.
    pub eliminant: RatPoly,
    /// `eliminant` without its spurious factors.
    pub reduced: RatPoly,
}

/// `(s0x^2 + s0y^2) y0^2 - 2 s0x y0 + 1 - s0y^2`.
fn spurious_quadratic(s0x: &Rat, s0y: &Rat) -> RatPoly {
    RatPoly::new(vec![
        rat_int(1) - s0y * s0y,
        -(s0x + s0x),
        s0x * s0x + s0y * s0y,
    ])
}

pub fn case2a_pipeline(s0x: &Rat, s0y: &Rat) -> Result<Case2aPipeline, RotatedError> {
    let (cond_l, cond_t) = case2a_equations(s0x, s0y);
    let (res_l, eliminant) = case2a_eliminant(&cond_l, &cond_t)?;
    let got = eliminant.degree().unwrap_or(0);
    if got != ELIMINANT_DEGREE {
        return Err(RotatedError::PipelineDegreeMismatch {
            stage: "Res_x0(unit_circle, Res_l(cond_l, cond_t))",
            expected: ELIMINANT_DEGREE,
            got,
        });
    }
    let y = RatPoly::from_i64(&[0, 1]);
    let factors = [
        (y, 8),
        (RatPoly::from_i64(&[-1, 1]), 6),
        (RatPoly::from_i64(&[1, 1]), 6),
        (spurious_quadratic(s0x, s0y), 4),
    ];
    let reduced = strip_known_factors(&eliminant, &factors)?;
    let got = reduced.degree().unwrap_or(0);
    if got != REDUCED_DEGREE {
        return Err(RotatedError::PipelineDegreeMismatch {
            stage: "reduced case 2a eliminant",
            expected: REDUCED_DEGREE,
            got,
        });
    }
    Ok(Case2aPipeline {
        cond_l,
        cond_t,
        res_l,
        eliminant,
        reduced,
    })
}

/// `res_l(x0, y0) = q0(y0) + x0 q1(y0)` modulo `x0^2 = 1 - y0^2`.
fn parity_split(res_l: &MPoly) -> Result<(RatPoly, RatPoly), PolyError> {
    let cs = res_l.coeffs_in("x0")?;
    let w = RatPoly::from_i64(&[1, 0, -1]);
    let (mut q0, mut q1) = (RatPoly::zero(), RatPoly::zero());
    for (k, c) in cs.iter().enumerate() {
        let c = c.to_ratpoly("y0")?;
        let t = &c * &w.pow((k / 2) as u32);
        if k % 2 == 0 {
            q0 = &q0 + &t;
        } else {
            q1 = &q1 + &t;
        }
    }
    Ok((q0, q1))
}

fn exact(x: f64) -> Rat {
    rat_from_f64(x).expect("finite value")
}

/// Critical points of case 2a off the axes. Each root `y0` of the reduced
/// eliminant gives `x0` from `res_l`, `l` from the last linear remainder of
/// `cond_l`, `cond_t` in `l`, and `s1y` from the radius condition.
pub fn case2a_general(
    inp: &RotatedInput,
    root_tol: f64,
) -> Result<Vec<RotatedCandidate>, RotatedError> {
    let pipe = match case2a_pipeline(&inp.s0x, &inp.s0y) {
        Ok(p) => p,
        Err(e @ RotatedError::PipelineDegreeMismatch { .. }) => {
            warn!("case 2a skipped: {e}");
            return Ok(Vec::new());
        }
        Err(e) => return Err(e),
    };
    let (q0, q1) = parity_split(&pipe.res_l)?;
    let linear = match euclidean_last_linear(&pipe.cond_l, &pipe.cond_t, "l") {
        Ok(u) => Some(u),
        Err(PolyError::ChainCollapse { .. }) => {
            debug!("case 2a: no linear remainder in l, solving cond_l directly");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let system = PolySystem::new(
        &[unit_circle(), pipe.cond_l.clone(), pipe.cond_t.clone()],
        &VARS_2A,
    );
    let ys = real_roots(&pipe.reduced, &rat_int(-1), &rat_int(1), root_tol);
    let mut out = Vec::new();
    for y0 in ys {
        let yr = exact(y0);
        let d = q1.eval(&yr);
        let x0 = if rat_to_f64(&d).abs() > 0.0 {
            -rat_to_f64(&(q0.eval(&yr) / d))
        } else {
            (1.0 - y0 * y0).sqrt()
        };
        let xr = exact(x0);
        let l = match &linear {
            Some((u1, u0)) => {
                let pt = [xr.clone(), yr.clone(), rat_int(0)];
                let den = u1.eval_rat(&pt);
                if den == rat_int(0) {
                    l_from_cond_l(&pipe, &xr, &yr)
                } else {
                    Some(-rat_to_f64(&(u0.eval_rat(&pt) / den)))
                }
            }
            None => l_from_cond_l(&pipe, &xr, &yr),
        };
        let Some(l) = l else {
            debug!("case 2a: no l for y0 = {y0}");
            continue;
        };
        let start = [x0, y0, l];
        let polished = system.solve(&start, 0.0, 8);
        let p = if dist(&polished.x, &start) < 1e-6 {
            polished.x
        } else {
            start.to_vec()
        };
        let (x0, y0, l) = (p[0], p[1], p[2]);
        if x0.abs() < 1e-12 || l.abs() < 1e-12 {
            continue;
        }
        let (sx, sy) = (inp.sx(), inp.sy());
        let s1y = (1.0 + x0 * sy - y0 * sx - l * l) / (l * x0);
        let t = PlanarTransfer {
            x0,
            y0,
            x1: x0,
            y1: -y0,
            l,
            s1x: 0.0,
            s1y,
        };
        out.extend(t.candidate(inp, CaseTag::Case2aGeneral));
    }
    Ok(out)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Real root of `cond_l(x0, y0, .)` that best satisfies `cond_t`.
fn l_from_cond_l(pipe: &Case2aPipeline, x0: &Rat, y0: &Rat) -> Option<f64> {
    let e7 = pipe
        .cond_l
        .substitute("x0", x0)
        .ok()?
        .substitute("y0", y0)
        .ok()?;
    let p = e7.to_ratpoly("l").ok()?;
    if p.degree().unwrap_or(0) == 0 {
        return None;
    }
    let b = crate::poly::root_bound(&p);
    let (xf, yf) = (rat_to_f64(x0), rat_to_f64(y0));
    real_roots(&p, &-b.clone(), &b, 1e-14)
        .into_iter()
        .filter(|l| l.abs() > 1e-12)
        .min_by(|a, b| {
            let ea = pipe.cond_t.eval_f64(&[xf, yf, *a]).abs();
            let eb = pipe.cond_t.eval_f64(&[xf, yf, *b]).abs();
            ea.total_cmp(&eb)
        })
}
