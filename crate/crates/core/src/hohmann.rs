//! Two-impulse transfers between concentric coplanar circular orbits,
//! allowing the intermediate orbit to leave the plane.
//!
//! The circles have `l = (0, 0, l0z)` and `(0, 0, l2z)`; the sign of `lz`
//! is the sense of rotation. The first burn is at `rhat0 = (1, 0, 0)`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kepler::{Orbit, Vec3};
use crate::poly::{rat_int, real_roots, RatPoly};
use crate::transfer::{impulses_with_tol, validate_plan, TransferPlan};

/// Tolerance below which `|l0z|` and `|l2z|` count as equal.
pub const SAME_RADIUS_TOL: f64 = 1e-12;
const VALID_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HohmannError {
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HohmannInput {
    pub l0z: f64,
    pub l2z: f64,
}

impl HohmannInput {
    pub fn new(l0z: f64, l2z: f64) -> Result<Self, HohmannError> {
        if !(l0z.is_finite() && l2z.is_finite()) || l0z == 0.0 || l2z == 0.0 {
            return Err(HohmannError::InvalidInput(
                "l0z and l2z must be finite and nonzero",
            ));
        }
        Ok(HohmannInput { l0z, l2z })
    }

    /// Circles of radius `r0`, `r2` with `dir = +-1` the sense of rotation.
    pub fn from_radii(r0: f64, r2: f64, dir0: i8, dir2: i8) -> Result<Self, HohmannError> {
        if !(r0 > 0.0 && r2 > 0.0 && r0.is_finite() && r2.is_finite()) {
            return Err(HohmannError::InvalidInput("radii must be positive"));
        }
        if dir0.abs() != 1 || dir2.abs() != 1 {
            return Err(HohmannError::InvalidInput("directions must be +1 or -1"));
        }
        HohmannInput::new(f64::from(dir0) / r0.sqrt(), f64::from(dir2) / r2.sqrt())
    }

    fn initial(&self) -> Orbit {
        Orbit::planar(self.l0z, 0.0, 0.0).expect("circle")
    }

    fn target(&self) -> Orbit {
        Orbit::planar(self.l2z, 0.0, 0.0).expect("circle")
    }

    pub fn same_radius(&self) -> bool {
        (self.l0z.abs() - self.l2z.abs()).abs()
            <= SAME_RADIUS_TOL * self.l0z.abs().max(self.l2z.abs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HohmannBranch {
    Coplanar,
    OutOfPlane,
    SameOrbit,
    Reversal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HohmannBranchSolution {
    pub plan: TransferPlan,
    pub f1: f64,
    pub branch: HohmannBranch,
    pub feasible: bool,
    /// Both signs of `l1z` give the same cost (`l0z + l2z = 0`).
    #[serde(default)]
    pub tie: bool,
}

fn solution(plan: TransferPlan, branch: HohmannBranch) -> HohmannBranchSolution {
    let scale = plan
        .orbits
        .iter()
        .map(|o| o.l.norm_squared())
        .fold(1.0, f64::max);
    let feasible = validate_plan(&plan).is_valid(VALID_TOL * scale);
    let f1 = impulses_with_tol(&plan, f64::INFINITY).map_or(f64::NAN, |c| c.f1);
    HohmannBranchSolution {
        plan,
        f1,
        branch,
        feasible,
        tie: false,
    }
}

fn two_burn(inp: &HohmannInput, mid: Orbit, rhat1: Vec3) -> TransferPlan {
    TransferPlan {
        orbits: vec![inp.initial(), mid, inp.target()],
        burn_points: vec![Vec3::x(), rhat1],
    }
}

/// Closed-form cost of the coplanar solution with `l1z` of sign `sign`.
pub fn coplanar_cost(l0z: f64, l2z: f64, sign: f64) -> f64 {
    let n = (l0z * l0z + l2z * l2z).sqrt();
    let r2 = std::f64::consts::SQRT_2;
    (sign * r2 * l0z * l0z / n - l0z).abs() + (sign * r2 * l2z * l2z / n - l2z).abs()
}

/// The two planar solutions, `l1z = +-sqrt((l0z^2 + l2z^2) / 2)` with the
/// second burn at `(-1, 0, 0)`, cheapest first.
pub fn solve_coplanar(inp: &HohmannInput) -> Vec<HohmannBranchSolution> {
    let (a, b) = (inp.l0z * inp.l0z, inp.l2z * inp.l2z);
    let mag = ((a + b) / 2.0).sqrt();
    let tie = inp.l0z + inp.l2z == 0.0;
    let mut out: Vec<HohmannBranchSolution> = [mag, -mag]
        .into_iter()
        .map(|l1z| {
            let mid = Orbit {
                l: Vec3::new(0.0, 0.0, l1z),
                s: Vec3::new(0.0, (a - b) / (a + b) * l1z, 0.0),
            };
            let mut s = solution(two_burn(inp, mid, -Vec3::x()), HohmannBranch::Coplanar);
            s.tie = tie;
            s
        })
        .collect();
    out.sort_by(|x, y| x.f1.total_cmp(&y.f1));
    out
}

/// Real roots `(a1, a2)` of `a^4 + 2a^3 + 2a + 1`, computed once.
pub fn out_of_plane_window() -> (f64, f64) {
    static WINDOW: OnceLock<(f64, f64)> = OnceLock::new();
    *WINDOW.get_or_init(|| {
        let p = RatPoly::from_i64(&[1, 2, 0, 2, 1]);
        let r = real_roots(&p, &rat_int(-4), &rat_int(4), 1e-16);
        assert_eq!(r.len(), 2, "a^4 + 2a^3 + 2a + 1 has two real roots");
        (r[0], r[1])
    })
}

/// `l1z` of the solutions with `l1y != 0`.
pub fn out_of_plane_l1z(l0z: f64, l2z: f64) -> f64 {
    let (p, q) = (l0z, l2z);
    let num = p.powi(5)
        + p.powi(4) * q
        + 4.0 * p.powi(3) * q * q
        + 4.0 * p * p * q.powi(3)
        + p * q.powi(4)
        + q.powi(5);
    num / (4.0 * p * q * (p * p + p * q + q * q))
}

/// Solutions with the intermediate orbit out of the plane. Empty unless
/// `l2z / l0z` lies strictly inside [`out_of_plane_window`].
pub fn solve_out_of_plane(inp: &HohmannInput) -> Vec<HohmannBranchSolution> {
    let (a1, a2) = out_of_plane_window();
    let ratio = inp.l2z / inp.l0z;
    if !(a1 < ratio && ratio < a2) {
        return Vec::new();
    }
    let (a, b) = (inp.l0z * inp.l0z, inp.l2z * inp.l2z);
    let c = (a - b) / (a + b);
    let l1z = out_of_plane_l1z(inp.l0z, inp.l2z);
    let l1y_sq = (a + b) / 2.0 - l1z * l1z;
    if l1y_sq <= 0.0 {
        return Vec::new();
    }
    let mut out: Vec<HohmannBranchSolution> = [l1y_sq.sqrt(), -l1y_sq.sqrt()]
        .into_iter()
        .map(|l1y| {
            let mid = Orbit {
                l: Vec3::new(0.0, l1y, l1z),
                s: Vec3::new(0.0, c * l1z, -c * l1y),
            };
            solution(two_burn(inp, mid, -Vec3::x()), HohmannBranch::OutOfPlane)
        })
        .collect();
    out.sort_by(|x, y| x.f1.total_cmp(&y.f1));
    out
}

/// `|l0z| = |l2z|`: nothing to do for equal orbits, otherwise a reversal of
/// the sense of rotation with both burns at `rhat0`. `None` when the radii
/// differ.
pub fn solve_same_radius_cases(inp: &HohmannInput) -> Option<HohmannBranchSolution> {
    if !inp.same_radius() {
        return None;
    }
    if inp.l0z.signum() == inp.l2z.signum() {
        let plan = TransferPlan {
            orbits: vec![inp.initial(), inp.initial(), inp.target()],
            burn_points: vec![Vec3::x(), Vec3::x()],
        };
        return Some(solution(plan, HohmannBranch::SameOrbit));
    }
    // One of infinitely many: velocity l0z / sqrt 2 in between.
    let l1z = std::f64::consts::SQRT_2 * inp.l0z;
    let mid = Orbit {
        l: Vec3::new(0.0, 0.0, l1z),
        s: Vec3::new(0.0, inp.l0z * inp.l0z / l1z - l1z, 0.0),
    };
    Some(solution(
        two_burn(inp, mid, Vec3::x()),
        HohmannBranch::Reversal,
    ))
}

/// Every branch, cheapest first.
pub fn all_branches(inp: &HohmannInput) -> Vec<HohmannBranchSolution> {
    let mut out = solve_coplanar(inp);
    out.extend(solve_out_of_plane(inp));
    out.extend(solve_same_radius_cases(inp));
    out.sort_by(|x, y| x.f1.total_cmp(&y.f1));
    out
}

/// Cheapest two-impulse transfer between circles of radius `r0` and `r2`.
pub fn best_transfer(
    r0: f64,
    r2: f64,
    dir0: i8,
    dir2: i8,
) -> Result<HohmannBranchSolution, HohmannError> {
    let inp = HohmannInput::from_radii(r0, r2, dir0, dir2)?;
    Ok(all_branches(&inp)
        .into_iter()
        .find(|s| s.feasible)
        .expect("the coplanar branch is always feasible"))
}

/// Three-impulse bi-elliptic plan from `r0` to `r2` through apogee `rb`,
/// prograde, burns at `+x`, `-x`, `+x`.
pub fn bi_elliptic_plan(r0: f64, r2: f64, rb: f64) -> Result<TransferPlan, HohmannError> {
    if !(r0 > 0.0 && r2 > 0.0 && rb >= r0.max(r2)) {
        return Err(HohmannError::InvalidInput(
            "need positive radii and rb >= max(r0, r2)",
        ));
    }
    // Perigee at +x with radius rp, apogee at -x with radius ra.
    let ellipse = |rp: f64, ra: f64| {
        let l = ((1.0 / rp + 1.0 / ra) / 2.0).sqrt();
        Orbit {
            l: Vec3::new(0.0, 0.0, l),
            s: Vec3::new(0.0, (1.0 / rp - 1.0 / ra) / (2.0 * l), 0.0),
        }
    };
    let circle = |r: f64| Orbit::planar(1.0 / r.sqrt(), 0.0, 0.0).expect("circle");
    Ok(TransferPlan {
        orbits: vec![circle(r0), ellipse(r0, rb), ellipse(r2, rb), circle(r2)],
        burn_points: vec![Vec3::x(), -Vec3::x(), Vec3::x()],
    })
}

/// Classical Hohmann cost between prograde circles of radii `r0`, `r2`
/// with `mu = 1`.
pub fn classical_hohmann_dv(r0: f64, r2: f64) -> f64 {
    let a = (r0 + r2) / 2.0;
    let vp = (2.0 / r0 - 1.0 / a).sqrt();
    let va = (2.0 / r2 - 1.0 / a).sqrt();
    (vp - (1.0 / r0).sqrt()).abs() + ((1.0 / r2).sqrt() - va).abs()
}
