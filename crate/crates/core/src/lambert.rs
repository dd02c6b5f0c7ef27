//! Point-to-point transfer minimizing `f2 = Delta0^2 + Delta1^2`.
//!
//! Given positions `r0`, `r1`, the velocity `w0` on arrival at `r0` and the
//! velocity `w1star` wanted on departure from `r1`, find the intermediate
//! orbit. In the canonical frame `rhat0 = (1, 0, 0)`, `rhat1 = (x1, y1, 0)`
//! with `y1 > 0`, `l1 = (0, 0, l)`, `s1 = (sx, sy, 0)` and
//!
//! ```text
//! q1 = l^2 + l sy - k0
//! q2 = l^2 + l (x1 sy - y1 sx) - k1
//! ```

use log::debug;
use nalgebra::{DMatrix, DVector, Matrix3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kepler::{Orbit, Rotation, Vec3};
use crate::numeric::PolySystem;
use crate::poly::{
    rat_from_f64, rat_int, real_roots, root_bound, strip_all, sylvester_resultant, MPoly,
    PolyError, Rat, RatPoly, DEFAULT_ROOT_TOL,
};

const VARS: [&str; 3] = ["sx", "sy", "l"];
/// Smallest `|sin|` of the angle between the positions for the general case.
pub const COLLINEAR_TOL: f64 = 1e-9;
/// Relative tolerance for `k0 = k1` in the same-direction case.
pub const RADIUS_TOL: f64 = 1e-9;
/// Stationarity residual above which a critical point is rejected.
pub const STATIONARITY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LambertError {
    #[error("positions must be nonzero and finite")]
    ZeroPosition,
    #[error("positions are collinear")]
    CollinearInput,
    #[error("positions are not collinear")]
    NotCollinear,
    #[error("same direction needs equal radii (k0 = {k0}, k1 = {k1})")]
    RadiusMismatch { k0: f64, k1: f64 },
    #[error("no critical point has an elliptic intermediate orbit")]
    NoEllipticCandidate,
    #[error("eliminant in l has degree {0}, expected 4")]
    EliminantDegree(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambertInput {
    pub r0: Vec3,
    pub r1: Vec3,
    pub w0: Vec3,
    pub w1star: Vec3,
}

impl LambertInput {
    pub fn new(r0: Vec3, r1: Vec3, w0: Vec3, w1star: Vec3) -> Result<Self, LambertError> {
        let ok = |v: &Vec3| v.iter().all(|c| c.is_finite());
        if r0.norm() == 0.0 || r1.norm() == 0.0 || !(ok(&r0) && ok(&r1) && ok(&w0) && ok(&w1star)) {
            return Err(LambertError::ZeroPosition);
        }
        Ok(LambertInput { r0, r1, w0, w1star })
    }
}

/// Rotation taking world coordinates to the canonical frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFrame {
    pub rotation: Rotation,
}

impl CanonicalFrame {
    pub fn identity() -> Self {
        CanonicalFrame {
            rotation: Rotation::identity(),
        }
    }

    pub fn to_canonical(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }

    pub fn to_world(&self, v: &Vec3) -> Vec3 {
        self.rotation.inverse() * v
    }

    pub fn orbit_to_world(&self, o: &Orbit) -> Orbit {
        o.rotated(&self.rotation.inverse())
    }
}

/// Problem data in the canonical frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramedLambert {
    pub k0: f64,
    pub k1: f64,
    pub x1: f64,
    pub y1: f64,
    pub w0: Vec3,
    pub w1star: Vec3,
}

impl FramedLambert {
    /// `rhat1` at angle `theta` in `(0, pi)` from `rhat0`.
    pub fn from_angle(k0: f64, k1: f64, theta: f64, w0: Vec3, w1star: Vec3) -> Self {
        let (y1, x1) = theta.sin_cos();
        FramedLambert {
            k0,
            k1,
            x1,
            y1,
            w0,
            w1star,
        }
    }

    fn check(&self) -> Result<(), LambertError> {
        if !(self.k0 > 0.0 && self.k1 > 0.0) {
            return Err(LambertError::ZeroPosition);
        }
        if self.y1 <= COLLINEAR_TOL {
            return Err(LambertError::CollinearInput);
        }
        Ok(())
    }

    /// Exact rationals `(k0, k1, x1, y1)` with `x1^2 + y1^2 = 1`, from the
    /// half-angle tangent.
    fn exact_geometry(&self) -> (Rat, Rat, Rat, Rat) {
        let t = if self.x1 > -0.5 {
            self.y1 / (1.0 + self.x1)
        } else {
            (1.0 - self.x1) / self.y1
        };
        let t = rat_from_f64(t).expect("finite");
        let one = rat_int(1);
        let d = &one + &t * &t;
        let x1 = (&one - &t * &t) / &d;
        let y1 = rat_int(2) * &t / d;
        (
            rat_from_f64(self.k0).unwrap(),
            rat_from_f64(self.k1).unwrap(),
            x1,
            y1,
        )
    }

    pub fn orbit(&self, l: f64, sx: f64, sy: f64) -> Orbit {
        Orbit {
            l: Vec3::new(0.0, 0.0, l),
            s: Vec3::new(sx, sy, 0.0),
        }
    }

    /// `(w0star, w1)` on the intermediate orbit.
    pub fn velocities(&self, l: f64, sx: f64, sy: f64) -> (Vec3, Vec3) {
        (
            Vec3::new(sx, sy + l, 0.0),
            Vec3::new(sx - l * self.y1, sy + l * self.x1, 0.0),
        )
    }

    pub fn f2(&self, l: f64, sx: f64, sy: f64) -> f64 {
        let (a, b) = self.velocities(l, sx, sy);
        (a - self.w0).norm_squared() + (self.w1star - b).norm_squared()
    }

    /// `s1` from `q1 = q2 = 0` at a given `l != 0`.
    pub fn s_from_l(&self, l: f64) -> (f64, f64) {
        let sy = (self.k0 - l * l) / l;
        let sx = (l * l + l * self.x1 * sy - self.k1) / (l * self.y1);
        (sx, sy)
    }
}

/// Rotation to the canonical frame, or `CollinearInput` when the positions
/// are (anti)parallel.
pub fn canonical_frame(
    inp: &LambertInput,
) -> Result<(FramedLambert, CanonicalFrame), LambertError> {
    let (n0, n1) = (inp.r0.norm(), inp.r1.norm());
    if n0 == 0.0 || n1 == 0.0 {
        return Err(LambertError::ZeroPosition);
    }
    let e1 = inp.r0 / n0;
    let cross = e1.cross(&(inp.r1 / n1));
    if cross.norm() <= COLLINEAR_TOL {
        return Err(LambertError::CollinearInput);
    }
    let e3 = cross.normalize();
    let e2 = e3.cross(&e1);
    let m = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
    let frame = CanonicalFrame {
        rotation: Rotation::from_matrix_unchecked(m),
    };
    let r1 = frame.to_canonical(&inp.r1) / n1;
    let framed = FramedLambert {
        k0: 1.0 / n0,
        k1: 1.0 / n1,
        x1: r1.x,
        y1: r1.y,
        w0: frame.to_canonical(&inp.w0),
        w1star: frame.to_canonical(&inp.w1star),
    };
    Ok((framed, frame))
}

/// `(q, q1, q2)` over `(sx, sy, l)` with exact coefficients.
pub fn lambert_system(f: &FramedLambert) -> (MPoly, MPoly, MPoly) {
    let (k0, k1, x1, y1) = f.exact_geometry();
    let c = |r: Rat| MPoly::constant(&VARS, r);
    let cf = |x: f64| c(rat_from_f64(x).expect("finite"));
    let (sx, sy, l) = (
        MPoly::var(&VARS, "sx").unwrap(),
        MPoly::var(&VARS, "sy").unwrap(),
        MPoly::var(&VARS, "l").unwrap(),
    );
    let (w0, w1) = (f.w0, f.w1star);
    let q1 = &(&l.pow(2) + &(&l * &sy)) - &c(k0);
    let q2 = &(&l.pow(2) + &(&l * &(&(&c(x1.clone()) * &sy) - &(&c(y1.clone()) * &sx)))) - &c(k1);
    let sq = |p: MPoly| p.pow(2);
    let q = [
        sq(&sx - &cf(w0.x)),
        sq(&(&sy + &l) - &cf(w0.y)),
        sq(cf(w0.z)),
        sq(&(&cf(w1.x) - &sx) + &(&l * &c(y1))),
        sq(&(&cf(w1.y) - &sy) - &(&l * &c(x1))),
        sq(cf(w1.z)),
    ]
    .iter()
    .fold(MPoly::zero(&VARS), |a, b| &a + b);
    (q, q1, q2)
}

fn jacobian_det(ps: [&MPoly; 3]) -> MPoly {
    let d: Vec<Vec<MPoly>> = ps
        .iter()
        .map(|p| VARS.iter().map(|v| p.partial(v).unwrap()).collect())
        .collect();
    let minor = |a: usize, b: usize| &(&d[1][a] * &d[2][b]) - &(&d[1][b] * &d[2][a]);
    let t0 = &d[0][0] * &minor(1, 2);
    let t1 = &d[0][1] * &minor(0, 2);
    let t2 = &d[0][2] * &minor(0, 1);
    &(&t0 - &t1) + &t2
}

/// Eliminant in `l` of `{q1, q2, det d(q, q1, q2)/d(sx, sy, l)}` by
/// resultants, with powers of `l` removed.
pub fn lambert_eliminant(f: &FramedLambert) -> Result<RatPoly, LambertError> {
    let (q, q1, q2) = lambert_system(f);
    let j = jacobian_det([&q, &q1, &q2]);
    let a = sylvester_resultant(&q1, &q2, "sy")?;
    let b = sylvester_resultant(&q1, &j, "sy")?;
    let r = sylvester_resultant(&a, &b, "sx")?.to_ratpoly("l")?;
    Ok(strip_all(&r, &RatPoly::from_i64(&[0, 1])).0)
}

/// The quartic in `l` as printed in the literature, evaluated on the same
/// exact data as [`lambert_eliminant`].
pub fn printed_p3(f: &FramedLambert) -> RatPoly {
    let (k0, k1, x1, y1) = f.exact_geometry();
    let r = |x: f64| rat_from_f64(x).expect("finite");
    let (w0x, w0y) = (r(f.w0.x), r(f.w0.y));
    let (w1x, w1y) = (r(f.w1star.x), r(f.w1star.y));
    let p = |k: u32| -> Rat {
        let mut out = rat_int(1);
        for _ in 0..k {
            out *= &y1;
        }
        out
    };
    let i = |n: i64| rat_int(n);
    let c4 = i(2) * p(4);
    let c3 = &x1 * p(4) * &w1y - &x1 * p(3) * &w0x + &x1 * p(3) * &w1x - p(5) * &w1x + p(4) * &w1y
        - p(3) * &w0x
        + p(3) * &w1x;
    let ws = &w0x + &w1x;
    let wy = &w0y + &w1y;
    let c1 =
        -(&k0 * &x1 * p(3) * &ws - i(2) * &k0 * &x1 * p(2) * &wy - i(2) * &k0 * &x1 * &y1 * &ws
            + &k0 * p(4) * &wy
            + i(2) * &k0 * p(3) * &ws
            - i(2) * &k0 * p(2) * &wy
            - i(2) * &k0 * &y1 * &ws
            + i(2) * &k1 * &x1 * &y1 * &ws
            - &k1 * p(3) * &ws
            + i(2) * &k1 * &y1 * &ws);
    let (k00, k01, k11) = (&k0 * &k0, &k0 * &k1, &k1 * &k1);
    let c0 = -(i(4) * &k00 * &x1 - i(2) * &k00 * p(2) + i(4) * &k00 + i(4) * &k01 * &x1 * p(2)
        - i(8) * &k01 * &x1
        + i(8) * &k01 * p(2)
        - i(8) * &k01
        + i(4) * &k11 * &x1
        - i(2) * &k11 * p(2)
        + i(4) * &k11);
    RatPoly::new(vec![c0, c1, Rat::from_integer(0.into()), c3, c4])
}

/// `true` when `a = c b` for some nonzero rational `c`.
pub fn proportional(a: &RatPoly, b: &RatPoly) -> bool {
    if a.degree() != b.degree() || a.is_zero() || b.is_zero() {
        return false;
    }
    let d = a.degree().unwrap();
    let c = a.coeff(d) / b.coeff(d);
    (0..=d).all(|k| a.coeff(k) == &c * b.coeff(k))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambertCase {
    General,
    AlignedSame,
    AlignedOpposite,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambertSolution {
    /// Intermediate orbit; `None` if `(r0, w0star)` is not on an ellipse.
    pub orbit1: Option<Orbit>,
    pub w0star: Vec3,
    pub w1: Vec3,
    pub f2: f64,
    pub case_tag: LambertCase,
    pub stationarity_residual: f64,
    /// `|1/r - k1|` of `orbit1` at `rhat1`.
    pub endpoint_residual: f64,
    /// Cheapest of the returned candidates.
    pub minimum: bool,
}

/// Least-squares multipliers for `grad q = m1 grad q1 + m2 grad q2` and the
/// residual norm, in `(sx, sy, l)`.
pub fn stationarity_residual(f: &FramedLambert, l: f64, sx: f64, sy: f64) -> f64 {
    let (w0, w1) = (f.w0, f.w1star);
    let (x1, y1) = (f.x1, f.y1);
    let a = (sx - w0.x, sy + l - w0.y);
    let b = (w1.x - sx + l * y1, w1.y - sy - l * x1);
    let gq = DVector::from_vec(vec![
        2.0 * a.0 - 2.0 * b.0,
        2.0 * a.1 - 2.0 * b.1,
        2.0 * a.1 + 2.0 * b.0 * y1 - 2.0 * b.1 * x1,
    ]);
    let g1 = [0.0, l, 2.0 * l + sy];
    let g2 = [-l * y1, l * x1, 2.0 * l + x1 * sy - y1 * sx];
    let m = DMatrix::from_fn(3, 2, |r, c| if c == 0 { g1[r] } else { g2[r] });
    match m.clone().svd(true, true).solve(&gq, 1e-14) {
        Ok(lam) => (&m * lam - gq).norm(),
        Err(_) => f64::INFINITY,
    }
}

/// Critical points of `f2` for linearly independent positions, in the
/// canonical frame, cheapest first with the cheapest flagged.
pub fn solve_general(f: &FramedLambert) -> Result<Vec<LambertSolution>, LambertError> {
    f.check()?;
    let quartic = lambert_eliminant(f)?;
    let deg = quartic.degree().unwrap_or(0);
    if deg != 4 {
        return Err(LambertError::EliminantDegree(deg));
    }
    if !proportional(&quartic, &printed_p3(f)) {
        debug!("lambert: eliminant is not proportional to the printed quartic");
    }
    let (q, q1, q2) = lambert_system(f);
    let j = jacobian_det([&q, &q1, &q2]);
    let system = PolySystem::new(&[q1, q2, j], &VARS);
    let b = root_bound(&quartic);
    let mut out: Vec<LambertSolution> = Vec::new();
    for l in real_roots(&quartic, &-b.clone(), &b, DEFAULT_ROOT_TOL) {
        if l == 0.0 {
            debug!("lambert: discarding root l = 0");
            continue;
        }
        let (sx, sy) = f.s_from_l(l);
        let start = [sx, sy, l];
        let pol = system.solve(&start, 0.0, 8);
        let near = pol
            .x
            .iter()
            .zip(&start)
            .all(|(a, b)| (a - b).abs() < 1e-6 * (1.0 + b.abs()));
        let [sx, sy, l] = if near && pol.residual.is_finite() {
            [pol.x[0], pol.x[1], pol.x[2]]
        } else {
            start
        };
        let orbit = f.orbit(l, sx, sy);
        if orbit.s.norm() >= orbit.l.norm() {
            debug!("lambert: discarding non-elliptic critical point l = {l}");
            continue;
        }
        let res = stationarity_residual(f, l, sx, sy);
        if res >= STATIONARITY_TOL {
            debug!("lambert: discarding l = {l}, stationarity residual {res:e}");
            continue;
        }
        let (w0star, w1) = f.velocities(l, sx, sy);
        let rhat1 = Vec3::new(f.x1, f.y1, 0.0);
        out.push(LambertSolution {
            orbit1: Some(orbit),
            w0star,
            w1,
            f2: f.f2(l, sx, sy),
            case_tag: LambertCase::General,
            stationarity_residual: res,
            endpoint_residual: (orbit.inverse_radius_at(&rhat1) - f.k1).abs(),
            minimum: false,
        });
    }
    if out.is_empty() {
        return Err(LambertError::NoEllipticCandidate);
    }
    out.sort_by(|a, b| a.f2.total_cmp(&b.f2));
    out[0].minimum = true;
    Ok(out)
}

/// Orbit through `r` with velocity `w` (`mu = 1`), if elliptic.
pub fn orbit_through(r: &Vec3, w: &Vec3) -> Option<Orbit> {
    let h = r.cross(w);
    let h2 = h.norm_squared();
    if h2 == 0.0 || !h2.is_finite() {
        return None;
    }
    let l = h / h2;
    Orbit::new(l, w - l.cross(&(r / r.norm()))).ok()
}

fn aligned(inp: &LambertInput) -> Result<(Vec3, f64, f64, f64), LambertError> {
    let (n0, n1) = (inp.r0.norm(), inp.r1.norm());
    if n0 == 0.0 || n1 == 0.0 {
        return Err(LambertError::ZeroPosition);
    }
    let e = inp.r0 / n0;
    let c = (inp.r1 / n1).dot(&e);
    if e.cross(&(inp.r1 / n1)).norm() > COLLINEAR_TOL {
        return Err(LambertError::NotCollinear);
    }
    Ok((e, 1.0 / n0, 1.0 / n1, c.signum()))
}

/// `rhat0 = rhat1`: both burns at one point, `w0star = w1` is the midpoint
/// of `w0` and `w1star`.
pub fn solve_aligned_same(inp: &LambertInput) -> Result<LambertSolution, LambertError> {
    let (_, k0, k1, dir) = aligned(inp)?;
    if dir < 0.0 {
        return Err(LambertError::NotCollinear);
    }
    if (k0 - k1).abs() > RADIUS_TOL * k0.max(k1) {
        return Err(LambertError::RadiusMismatch { k0, k1 });
    }
    let w = (inp.w0 + inp.w1star) / 2.0;
    let grad = 2.0 * (w - inp.w0) + 2.0 * (w - inp.w1star);
    Ok(LambertSolution {
        orbit1: orbit_through(&inp.r0, &w),
        w0star: w,
        w1: w,
        f2: (inp.w1star - inp.w0).norm_squared() / 2.0,
        case_tag: LambertCase::AlignedSame,
        stationarity_residual: grad.norm(),
        endpoint_residual: 0.0,
        minimum: true,
    })
}

/// `rhat0 = -rhat1`: closed form with `w1x = w0x*` and
/// `w1perp = -(k1/k0) w0perp*`, components taken along `rhat0`.
pub fn solve_aligned_opposite(inp: &LambertInput) -> Result<LambertSolution, LambertError> {
    let (e, k0, k1, dir) = aligned(inp)?;
    if dir > 0.0 {
        return Err(LambertError::NotCollinear);
    }
    let split = |v: &Vec3| (v.dot(&e), v - e * v.dot(&e));
    let (a0, p0) = split(&inp.w0);
    let (a1, p1) = split(&inp.w1star);
    let ax = (a0 + a1) / 2.0;
    let perp = (p0 * k0 - p1 * k1) * (k0 / (k0 * k0 + k1 * k1));
    let w0star = e * ax + perp;
    let ratio = k1 / k0;
    let w1 = e * ax - perp * ratio;
    let f2 = (w0star - inp.w0).norm_squared() + (inp.w1star - w1).norm_squared();
    let grad_x = 2.0 * (ax - a0) + 2.0 * (ax - a1);
    let grad_p = (perp - p0) * 2.0 + (p1 + perp * ratio) * (2.0 * ratio);
    let orbit1 = orbit_through(&inp.r0, &w0star);
    let endpoint_residual = orbit1.map_or(f64::NAN, |o| (o.inverse_radius_at(&-e) - k1).abs());
    Ok(LambertSolution {
        orbit1,
        w0star,
        w1,
        f2,
        case_tag: LambertCase::AlignedOpposite,
        stationarity_residual: grad_x.hypot(grad_p.norm()),
        endpoint_residual,
        minimum: true,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambertReport {
    /// Candidates in world coordinates, cheapest first.
    pub candidates: Vec<LambertSolution>,
    pub frame: Option<CanonicalFrame>,
}

impl LambertReport {
    pub fn best(&self) -> &LambertSolution {
        &self.candidates[0]
    }
}

/// Dispatches on the geometry and maps the answer back to world
/// coordinates.
pub fn solve_lambert(inp: &LambertInput) -> Result<LambertReport, LambertError> {
    match canonical_frame(inp) {
        Ok((framed, frame)) => {
            let candidates = solve_general(&framed)?
                .into_iter()
                .map(|mut s| {
                    s.orbit1 = s.orbit1.map(|o| frame.orbit_to_world(&o));
                    s.w0star = frame.to_world(&s.w0star);
                    s.w1 = frame.to_world(&s.w1);
                    s
                })
                .collect();
            Ok(LambertReport {
                candidates,
                frame: Some(frame),
            })
        }
        Err(LambertError::CollinearInput) => {
            let same = inp.r0.dot(&inp.r1) > 0.0;
            let s = if same {
                solve_aligned_same(inp)?
            } else {
                solve_aligned_opposite(inp)?
            };
            Ok(LambertReport {
                candidates: vec![s],
                frame: None,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn symmetric() -> FramedLambert {
        FramedLambert {
            k0: 1.0,
            k1: 1.0,
            x1: 0.0,
            y1: 1.0,
            w0: Vec3::y(),
            w1star: -Vec3::x(),
        }
    }

    #[test]
    fn frame_of_perpendicular_positions() {
        let inp = LambertInput::new(
            Vec3::new(0.0, 2.0, 0.0),
            Vec3::new(-3.0, 0.0, 0.0),
            Vec3::x(),
            Vec3::y(),
        )
        .unwrap();
        let (f, frame) = canonical_frame(&inp).unwrap();
        assert_relative_eq!(frame.to_canonical(&Vec3::y()), Vec3::x(), epsilon = 1e-15);
        assert!(f.x1.abs() < 1e-15 && (f.y1 - 1.0).abs() < 1e-15);
        assert_relative_eq!(f.k0, 0.5);
        assert_relative_eq!(f.k1, 1.0 / 3.0);
        let back = frame.to_world(&frame.to_canonical(&Vec3::new(0.3, -0.2, 0.9)));
        assert_relative_eq!(back, Vec3::new(0.3, -0.2, 0.9), epsilon = 1e-15);
    }

    #[test]
    fn canonical_input_keeps_identity() {
        let inp =
            LambertInput::new(Vec3::x(), Vec3::new(0.6, 0.8, 0.0), Vec3::y(), Vec3::x()).unwrap();
        let (_, frame) = canonical_frame(&inp).unwrap();
        assert_relative_eq!(
            frame.rotation.matrix(),
            Rotation::identity().matrix(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn collinear_is_rejected() {
        let inp = LambertInput::new(Vec3::x(), Vec3::x() * 2.0, Vec3::y(), Vec3::y()).unwrap();
        assert_eq!(
            canonical_frame(&inp).unwrap_err(),
            LambertError::CollinearInput
        );
    }

    #[test]
    fn symmetric_instance() {
        let f = symmetric();
        let sols = solve_general(&f).unwrap();
        let best = &sols[0];
        assert!(best.minimum);
        let o = best.orbit1.unwrap();
        let (l, sx, sy) = (o.l.z, o.s.x, o.s.y);
        assert!((l * l + l * sy - 1.0).abs() < 1e-10);
        assert!((l * l - l * sx - 1.0).abs() < 1e-10);
        // The unit circle connects the two points with the given velocities.
        assert!(best.f2 < 1e-20, "{}", best.f2);
    }

    #[test]
    fn eliminant_matches_printed_quartic() {
        let f = FramedLambert::from_angle(
            1.0,
            0.5,
            0.7,
            Vec3::new(0.2, 0.9, 0.1),
            Vec3::new(-0.6, 0.25, 0.0),
        );
        let e = lambert_eliminant(&f).unwrap();
        assert_eq!(e.degree(), Some(4));
        assert!(proportional(&e, &printed_p3(&f)));
    }

    #[test]
    fn midpoint() {
        let inp = LambertInput::new(Vec3::x(), Vec3::x(), Vec3::x(), Vec3::y()).unwrap();
        let s = solve_aligned_same(&inp).unwrap();
        assert_eq!(s.w0star, Vec3::new(0.5, 0.5, 0.0));
        assert_eq!(s.f2, 1.0);
        let bad = LambertInput::new(Vec3::x(), Vec3::x() * 2.0, Vec3::x(), Vec3::y()).unwrap();
        assert!(matches!(
            solve_aligned_same(&bad),
            Err(LambertError::RadiusMismatch { .. })
        ));
    }

    #[test]
    fn opposite_closed_form() {
        let inp = LambertInput::new(Vec3::x(), -Vec3::x(), Vec3::y(), -Vec3::y()).unwrap();
        let s = solve_aligned_opposite(&inp).unwrap();
        assert_relative_eq!(s.w0star, Vec3::y(), epsilon = 1e-15);
        assert!(s.f2 < 1e-30 && s.endpoint_residual < 1e-15);
        let inp = LambertInput::new(Vec3::x(), -Vec3::x() * 0.5, Vec3::y(), -Vec3::y()).unwrap();
        let s = solve_aligned_opposite(&inp).unwrap();
        assert_relative_eq!(s.w0star.y, 0.6, epsilon = 1e-15);
        assert!(s.stationarity_residual < 1e-14);
    }
}
