//! Asymmetric transfers: the full Lagrange system solved numerically.

use nalgebra::{DMatrix, DVector};

use super::{CaseTag, PlanarTransfer, RotatedCandidate, RotatedInput};
use crate::numeric::PolySystem;
use crate::poly::{rat_int, CompiledPoly, MPoly};

const VARS: [&str; 16] = [
    "x0", "y0", "x1", "y1", "a", "b", "l", "d0", "d1", "m1", "m2", "m3", "m4", "m5", "m6", "k",
];
const PRIMAL: usize = 9;
pub const SEEDS: usize = 64;

fn v(name: &str) -> MPoly {
    MPoly::var(&VARS, name).unwrap()
}

fn c(x: &crate::poly::Rat) -> MPoly {
    MPoly::constant(&VARS, x.clone())
}

fn ci(x: i64) -> MPoly {
    MPoly::constant(&VARS, rat_int(x))
}

/// The six constraints in the unknowns `x0, y0, x1, y1, s1x = a, s1y = b,
/// l, d0, d1`.
fn constraints(inp: &RotatedInput) -> Vec<MPoly> {
    let (x0, y0, x1, y1) = (v("x0"), v("y0"), v("x1"), v("y1"));
    let (a, b, l, d0, d1) = (v("a"), v("b"), v("l"), v("d0"), v("d1"));
    let (sx, sy) = (c(&inp.s0x), c(&inp.s0y));
    let one = ci(1);
    let two = ci(2);
    let l2 = l.pow(2);
    let circle0 = &(&x0.pow(2) + &y0.pow(2)) - &one;
    let circle1 = &(&x1.pow(2) + &y1.pow(2)) - &one;
    let radius0 =
        &(&l2 + &(&l * &(&(&x0 * &b) - &(&y0 * &a)))) - &(&(&one + &(&x0 * &sy)) - &(&y0 * &sx));
    let radius1 =
        &(&l2 + &(&l * &(&(&x1 * &b) - &(&y1 * &a)))) - &(&(&one + &(&x1 * &sy)) + &(&y1 * &sx));
    // Delta^2 = |ds|^2 + dl^2 + 2 dl (dsy x - dsx y)
    let delta2 = |dsx: &MPoly, dsy: &MPoly, dl: &MPoly, x: &MPoly, y: &MPoly| {
        let base = &(&dsx.pow(2) + &dsy.pow(2)) + &dl.pow(2);
        &base + &(&(&two * dl) * &(&(dsy * x) - &(dsx * y)))
    };
    let impulse0 = &d0.pow(2) - &delta2(&(&sx - &a), &(&sy - &b), &(&one - &l), &x0, &y0);
    let impulse1 = &d1.pow(2) - &delta2(&(&a + &sx), &(&b - &sy), &(&l - &one), &x1, &y1);
    vec![circle0, circle1, radius0, radius1, impulse0, impulse1]
}

fn lagrange_system(inp: &RotatedInput) -> (Vec<MPoly>, Vec<MPoly>) {
    let cons = constraints(inp);
    let cost = &v("d0") + &v("d1");
    let mut eqs = cons.clone();
    for name in &VARS[..PRIMAL] {
        let mut g = cost.partial(name).unwrap();
        for (i, e) in cons.iter().enumerate() {
            let m = v(&format!("m{}", i + 1));
            g = &g - &(&m * &e.partial(name).unwrap());
        }
        eqs.push(g);
    }
    let sym = &ci(1) - &(&v("k") * &(&v("y0") + &v("y1")));
    eqs.push(sym);
    (eqs, cons)
}

fn halton(mut i: usize, base: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Constraints with their gradients in the primal unknowns, compiled.
struct Compiled {
    cons: Vec<CompiledPoly>,
    grads: Vec<Vec<CompiledPoly>>,
}

impl Compiled {
    fn new(cons: &[MPoly]) -> Self {
        Compiled {
            cons: cons.iter().map(|e| e.compile()).collect(),
            grads: cons
                .iter()
                .map(|e| {
                    VARS[..PRIMAL]
                        .iter()
                        .map(|n| e.partial(n).unwrap().compile())
                        .collect()
                })
                .collect(),
        }
    }

    /// Fills `d0`, `d1` from the impulse constraints.
    fn fill_impulses(&self, x: &mut [f64]) {
        for i in 0..2 {
            x[7 + i] = 0.0;
            x[7 + i] = (-self.cons[4 + i].eval(x)).max(0.0).sqrt();
        }
    }

    /// Least-squares multipliers and the stationarity residual norm.
    fn multipliers(&self, x: &[f64]) -> Option<(DVector<f64>, f64)> {
        let g = DMatrix::from_fn(PRIMAL, 6, |r, col| self.grads[col][r].eval(x));
        let mut rhs = DVector::zeros(PRIMAL);
        rhs[7] = 1.0;
        rhs[8] = 1.0;
        let m = g.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
        let res = (&g * &m - rhs).norm();
        Some((m, res))
    }
}

/// Seed from burn angles and `l`: `s1` from the two radius conditions,
/// impulses from the constraints, multipliers by least squares.
fn seed(inp: &RotatedInput, comp: &Compiled, t0: f64, t1: f64, l: f64) -> Option<Vec<f64>> {
    let (x0, y0, x1, y1) = (t0.cos(), t0.sin(), t1.cos(), t1.sin());
    if (y0 + y1).abs() < 1e-3 {
        return None;
    }
    let (sx, sy) = (inp.sx(), inp.sy());
    let r0 = (1.0 + x0 * sy - y0 * sx - l * l) / l;
    let r1 = (1.0 + x1 * sy + y1 * sx - l * l) / l;
    let det = x0 * y1 - y0 * x1;
    if det.abs() < 1e-6 {
        return None;
    }
    // -y a + x b = r
    let a = (x1 * r0 - x0 * r1) / det;
    let b = (y1 * r0 - y0 * r1) / det;
    let mut x = vec![
        x0,
        y0,
        x1,
        y1,
        a,
        b,
        l,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        1.0 / (y0 + y1),
    ];
    comp.fill_impulses(&mut x);
    x[7] = x[7].max(1e-8);
    x[8] = x[8].max(1e-8);
    let (m, _) = comp.multipliers(&x)?;
    x[9..15].copy_from_slice(m.as_slice());
    Some(x)
}

/// Asymmetric critical points (`y0 + y1 != 0`) found by damped Newton from
/// [`SEEDS`] quasi-random starts. May be empty.
pub fn case1_numeric(inp: &RotatedInput) -> Vec<RotatedCandidate> {
    let (eqs, cons) = lagrange_system(inp);
    let comp = Compiled::new(&cons);
    let system = PolySystem::new(&eqs, &VARS);
    let tau = std::f64::consts::TAU;
    let mut found: Vec<Vec<f64>> = Vec::new();
    let mut out = Vec::new();
    for i in 1..=SEEDS {
        let t0 = tau * halton(i, 2);
        let t1 = tau * halton(i, 3);
        let mut l = -2.0 + 4.0 * halton(i, 5);
        if l.abs() < 0.05 {
            l = 0.05f64.copysign(l);
        }
        let Some(x) = seed(inp, &comp, t0, t1, l) else {
            continue;
        };
        let sol = system.solve(&x, 1e-13, 80);
        if sol.residual > 1e-9 {
            continue;
        }
        let p = &sol.x;
        if (p[1] + p[3]).abs() <= 1e-6 || p[7] <= 0.0 || p[8] <= 0.0 {
            continue;
        }
        if found.iter().any(|q| {
            q[..PRIMAL]
                .iter()
                .zip(&p[..PRIMAL])
                .all(|(a, b)| (a - b).abs() < 1e-6)
        }) {
            continue;
        }
        found.push(p.clone());
        let t = PlanarTransfer {
            x0: p[0],
            y0: p[1],
            x1: p[2],
            y1: p[3],
            l: p[6],
            s1x: p[4],
            s1y: p[5],
        };
        out.extend(t.candidate(inp, CaseTag::Case1));
    }
    out
}

/// Norm of the stationarity equations of the Lagrange system at the primal
/// point of `c`, with multipliers fitted by least squares.
pub fn case1_stationarity(inp: &RotatedInput, c: &RotatedCandidate) -> f64 {
    let comp = Compiled::new(&constraints(inp));
    let o = &c.plan.orbits[1];
    let (r0, r1) = (c.plan.burn_points[0], c.plan.burn_points[1]);
    let mut x = vec![0.0; VARS.len()];
    x[..7].copy_from_slice(&[r0.x, r0.y, r1.x, r1.y, o.s.x, o.s.y, o.l.z]);
    comp.fill_impulses(&mut x);
    comp.multipliers(&x).map_or(f64::INFINITY, |(_, r)| r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn half_turn_has_no_asymmetric_solution() {
        let inp = RotatedInput::from_rationals(rat(1, 2), rat(0, 1)).unwrap();
        assert!(case1_numeric(&inp).is_empty());
    }

    #[test]
    fn halton_points_are_in_unit_interval() {
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(3, 3), 1.0 / 9.0);
        assert!((1..100).all(|i| (0.0..1.0).contains(&halton(i, 5))));
    }
}
