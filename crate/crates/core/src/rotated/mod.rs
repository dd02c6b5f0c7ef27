//! Transfers between two identical coplanar ellipses rotated by an angle.
//!
//! Both ellipses have `l = (0, 0, 1)`; the initial one has
//! `s0 = (s0x, s0y, 0)` and the final one `s2 = (-s0x, s0y, 0)`, so they are
//! mirror images across the y axis and rotated by `alpha = 2 atan(s0x/s0y)`.
//! The intermediate orbit stays in the plane. Critical transfers split into
//! the asymmetric case 1, the mirror-symmetric case 2a (`x1 = x0`,
//! `y1 = -y0`) and the collinear case 2b (`x1 = -x0`, `y1 = -y0`).

mod apogee;
mod case1;
mod case2a;
mod case2b;
mod elim;

use log::debug;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kepler::{Orbit, Vec3};
use crate::poly::{rat_approx, rat_to_f64, PolyError, Rat, DEFAULT_ROOT_TOL};
use crate::transfer::{impulses, validate_plan, TransferPlan, PLAN_TOL};

pub use apogee::{apogee_to_apogee_cost, ApogeeTransfer};
pub use case1::{case1_numeric, case1_stationarity};
pub use case2a::{case2a_general, case2a_pipeline, Case2aPipeline};
pub use case2b::{case2b_pipeline, case2b_solutions, Case2bPipeline};

/// Largest angle error accepted by [`params_from_angle`], in degrees.
pub const ANGLE_TOL_DEG: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RotatedError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{stage}: expected degree {expected}, got {got}")]
    PipelineDegreeMismatch {
        stage: &'static str,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),
}

/// Problem data. `s0x`, `s0y` are exact; `e`, `alpha_deg`, `a`, `b` describe
/// where they came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatedInput {
    #[serde(with = "rat_str")]
    pub s0x: Rat,
    #[serde(with = "rat_str")]
    pub s0y: Rat,
    pub e: f64,
    pub alpha_deg: f64,
    pub a: i64,
    pub b: i64,
}

mod rat_str {
    use crate::poly::Rat;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl RotatedInput {
    pub fn from_rationals(s0x: Rat, s0y: Rat) -> Result<Self, RotatedError> {
        let e2 = &s0x * &s0x + &s0y * &s0y;
        if e2 >= Rat::from_integer(1.into()) {
            return Err(RotatedError::InvalidInput(
                "s0x^2 + s0y^2 must be below 1".into(),
            ));
        }
        let (x, y) = (rat_to_f64(&s0x), rat_to_f64(&s0y));
        Ok(RotatedInput {
            e: x.hypot(y),
            alpha_deg: 2.0 * x.atan2(y).to_degrees(),
            s0x,
            s0y,
            a: 0,
            b: 0,
        })
    }

    pub fn sx(&self) -> f64 {
        rat_to_f64(&self.s0x)
    }

    pub fn sy(&self) -> f64 {
        rat_to_f64(&self.s0y)
    }

    pub fn is_circular(&self) -> bool {
        self.e < 1e-12
    }

    pub fn initial_orbit(&self) -> Orbit {
        Orbit {
            l: Vec3::z(),
            s: Vec3::new(self.sx(), self.sy(), 0.0),
        }
    }

    pub fn final_orbit(&self) -> Orbit {
        Orbit {
            l: Vec3::z(),
            s: Vec3::new(-self.sx(), self.sy(), 0.0),
        }
    }

    /// Apogee directions of the initial and final ellipses.
    pub fn apogee_dirs(&self) -> Option<(Vec3, Vec3)> {
        if self.is_circular() {
            return None;
        }
        let (x, y, e) = (self.sx(), self.sy(), self.e);
        Some((Vec3::new(-y, x, 0.0) / e, Vec3::new(-y, -x, 0.0) / e))
    }
}

/// Rational `(s0x, s0y)` for eccentricity `e` and angle `alpha_deg`, using
/// the smallest `a` (with `0 <= b <= a`) whose angle
/// `2 atan((a^2 - b^2) / (2ab))` is within [`ANGLE_TOL_DEG`].
pub fn params_from_angle(e: f64, alpha_deg: f64) -> Result<RotatedInput, RotatedError> {
    if !(0.0..1.0).contains(&e) {
        return Err(RotatedError::InvalidInput(format!(
            "eccentricity {e} outside [0, 1)"
        )));
    }
    if !(alpha_deg > 0.0 && alpha_deg <= 180.0) {
        return Err(RotatedError::InvalidInput(format!(
            "angle {alpha_deg} outside (0, 180]"
        )));
    }
    let (a, b) = angle_integers(alpha_deg);
    let er = rat_approx(e, 1e-12);
    let (ar, br) = (Rat::from_integer(a.into()), Rat::from_integer(b.into()));
    let den = &ar * &ar + &br * &br;
    let s0x = &er * (&ar * &ar - &br * &br) / &den;
    let s0y = &er * Rat::from_integer(2.into()) * &ar * &br / &den;
    let mut inp = RotatedInput::from_rationals(s0x, s0y)?;
    inp.a = a;
    inp.b = b;
    if e == 0.0 {
        inp.alpha_deg = alpha_deg;
    }
    Ok(inp)
}

fn pair_angle(a: i64, b: i64) -> f64 {
    let (a, b) = (a as f64, b as f64);
    2.0 * (a * a - b * b).atan2(2.0 * a * b).to_degrees()
}

fn angle_integers(alpha_deg: f64) -> (i64, i64) {
    if alpha_deg == 180.0 {
        return (1, 0);
    }
    let t = ((180.0 - alpha_deg) / 4.0).to_radians().tan();
    let mut best = (1, 0, f64::INFINITY);
    for a in 1..=100_000i64 {
        let centre = (a as f64 * t).round() as i64;
        for b in [centre - 1, centre, centre + 1] {
            if b < 0 || b > a {
                continue;
            }
            let err = (pair_angle(a, b) - alpha_deg).abs();
            if err < best.2 {
                best = (a, b, err);
            }
        }
        if best.2 < ANGLE_TOL_DEG {
            break;
        }
    }
    (best.0, best.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    Case1,
    Case2aAxis,
    Case2aGeneral,
    Case2bClosed,
    Case2bGeneral,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Case1 => "case1",
            CaseTag::Case2aAxis => "case2a_axis",
            CaseTag::Case2aGeneral => "case2a_general",
            CaseTag::Case2bClosed => "case2b_closed",
            CaseTag::Case2bGeneral => "case2b_general",
        }
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatedCandidate {
    pub plan: TransferPlan,
    pub f1: f64,
    pub case_tag: CaseTag,
    pub separation_angle_deg: f64,
    /// Known to be beaten by another closed-form candidate.
    pub dominated: bool,
    /// Range of `s1x` giving the same cost, when the solution is a family.
    pub s1x_range: Option<(f64, f64)>,
}

/// Unknowns of a planar two-impulse transfer between the two ellipses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct PlanarTransfer {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub l: f64,
    pub s1x: f64,
    pub s1y: f64,
}

impl PlanarTransfer {
    pub fn plan(&self, inp: &RotatedInput) -> TransferPlan {
        TransferPlan {
            orbits: vec![
                inp.initial_orbit(),
                Orbit {
                    l: Vec3::new(0.0, 0.0, self.l),
                    s: Vec3::new(self.s1x, self.s1y, 0.0),
                },
                inp.final_orbit(),
            ],
            burn_points: vec![
                Vec3::new(self.x0, self.y0, 0.0),
                Vec3::new(self.x1, self.y1, 0.0),
            ],
        }
    }

    /// Validated candidate, or `None` (logged) when the plan breaks a
    /// constraint or the intermediate orbit is not an ellipse.
    pub fn candidate(&self, inp: &RotatedInput, tag: CaseTag) -> Option<RotatedCandidate> {
        let plan = self.plan(inp);
        let res = validate_plan(&plan);
        if let Some(v) = res.first_violation(PLAN_TOL) {
            debug!("{tag}: dropping candidate {self:?}: {v}");
            return None;
        }
        let cost = impulses(&plan).ok()?;
        Some(RotatedCandidate {
            separation_angle_deg: separation_of(&plan, inp),
            plan,
            f1: cost.f1,
            case_tag: tag,
            dominated: false,
            s1x_range: None,
        })
    }
}

fn separation_of(plan: &TransferPlan, inp: &RotatedInput) -> f64 {
    match inp.apogee_dirs() {
        Some((apo, _)) => {
            let r = plan.burn_points[0].normalize();
            apo.dot(&r).clamp(-1.0, 1.0).acos().to_degrees()
        }
        None => 0.0,
    }
}

/// Angle in degrees between the apogee of the initial ellipse and the first
/// burn point; 0 for circular orbits.
pub fn separation_angle(c: &RotatedCandidate, inp: &RotatedInput) -> f64 {
    separation_of(&c.plan, inp)
}

/// The two axis solutions of case 2a: `x0 = 0`, `y0 = +-1 = -y1`,
/// `s1 = (0, s0y)`, `l1z = sqrt(1 -+ s0x)`.
pub fn case2a_axis_solutions(inp: &RotatedInput) -> Vec<RotatedCandidate> {
    let (sx, sy) = (inp.sx(), inp.sy());
    let mut out = Vec::new();
    for y0 in [1.0, -1.0] {
        let u: f64 = 1.0 - y0 * sx;
        let t = PlanarTransfer {
            x0: 0.0,
            y0,
            x1: 0.0,
            y1: -y0,
            l: u.sqrt(),
            s1x: 0.0,
            s1y: sy,
        };
        if sy.abs() >= t.l {
            debug!("case2a_axis: intermediate orbit for y0 = {y0} is not elliptic");
            continue;
        }
        out.extend(t.candidate(inp, CaseTag::Case2aAxis));
    }
    out
}

/// Closed-form cost of the axis solutions, `2 |u - sqrt(u)|` with
/// `u = 1 -+ s0x`, for `y0 = +1` and `y0 = -1`.
pub fn axis_costs(s0x: f64) -> (f64, f64) {
    let f = |u: f64| 2.0 * (u - u.sqrt()).abs();
    (f(1.0 - s0x), f(1.0 + s0x))
}

/// Cost of the `l1z = -1` solution of case 2b.
pub fn case2b_reversed_cost(s0x: f64, s0y: f64) -> f64 {
    ((1.0 + s0y).abs() + (1.0 - s0y).abs()) * (4.0 + s0x * s0x).sqrt()
}

/// Closed-form solutions of case 2b with `|l1z| = 1`.
pub fn case2b_closed(inp: &RotatedInput) -> Vec<RotatedCandidate> {
    let (sx, sy) = (inp.sx(), inp.sy());
    let mut out = Vec::new();
    let family = PlanarTransfer {
        x0: 1.0,
        y0: 0.0,
        x1: -1.0,
        y1: 0.0,
        l: 1.0,
        s1x: 0.0,
        s1y: sy,
    };
    if let Some(mut c) = family.candidate(inp, CaseTag::Case2bClosed) {
        c.s1x_range = Some((-sx.abs(), sx.abs()));
        out.push(c);
    }
    let reversed = PlanarTransfer {
        x0: 1.0,
        y0: 0.0,
        x1: -1.0,
        y1: 0.0,
        l: -1.0,
        s1x: -sx * sy,
        s1y: -sy,
    };
    if let Some(mut c) = reversed.candidate(inp, CaseTag::Case2bClosed) {
        c.dominated = true;
        out.push(c);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseSelection {
    All,
    Case1,
    Case2a,
    Case2b,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub cases: CaseSelection,
    pub root_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            cases: CaseSelection::All,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotatedSolution {
    pub winner: RotatedCandidate,
    /// Every candidate, cheapest first.
    pub all: Vec<RotatedCandidate>,
}

/// Runs every case and returns the cheapest candidate.
pub fn best_rotated_transfer(inp: &RotatedInput) -> Result<RotatedSolution, RotatedError> {
    solve_rotated(inp, &SolveOptions::default())
}

pub fn solve_rotated(
    inp: &RotatedInput,
    opts: &SolveOptions,
) -> Result<RotatedSolution, RotatedError> {
    let want = |c: CaseSelection| opts.cases == CaseSelection::All || opts.cases == c;
    let mut all = Vec::new();
    let general = inp.sx() != 0.0;
    if want(CaseSelection::Case2a) {
        all.extend(case2a_axis_solutions(inp));
        if general {
            all.extend(case2a_general(inp, opts.root_tol)?);
        }
    }
    if want(CaseSelection::Case2b) && general {
        all.extend(case2b_solutions(inp, opts.root_tol)?);
    }
    if want(CaseSelection::Case1) && !inp.is_circular() {
        all.extend(case1_numeric(inp));
    }
    all.sort_by(|a, b| a.f1.total_cmp(&b.f1).then(a.case_tag.cmp(&b.case_tag)));
    let winner = all
        .first()
        .cloned()
        .ok_or(RotatedError::DegenerateGeometry(
            "no candidate transfer found",
        ))?;
    Ok(RotatedSolution { winner, all })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use approx::assert_relative_eq;

    #[test]
    fn half_turn_parameters() {
        let p = params_from_angle(0.5, 180.0).unwrap();
        assert_eq!((p.a, p.b), (1, 0));
        assert_eq!(p.s0x, rat(1, 2));
        assert_eq!(p.s0y, rat(0, 1));
    }

    #[test]
    fn right_angle_parameters() {
        let p = params_from_angle(0.5, 90.0).unwrap();
        assert!((pair_angle(p.a, p.b) - 90.0).abs() < ANGLE_TOL_DEG);
        assert!((p.alpha_deg - 90.0).abs() < ANGLE_TOL_DEG);
        assert_eq!(&p.s0x * &p.s0x + &p.s0y * &p.s0y, rat(1, 4));
        // Nothing smaller works.
        for a in 1..p.a {
            for b in 0..=a {
                assert!((pair_angle(a, b) - 90.0).abs() >= ANGLE_TOL_DEG);
            }
        }
    }

    #[test]
    fn circular_is_flagged() {
        let p = params_from_angle(0.0, 30.0).unwrap();
        assert!(p.is_circular());
        let sol = best_rotated_transfer(&p).unwrap();
        assert!(sol.winner.f1.abs() < 1e-15);
    }

    #[test]
    fn axis_values() {
        let inp = RotatedInput::from_rationals(rat(1, 2), rat(0, 1)).unwrap();
        let c = case2a_axis_solutions(&inp);
        assert_eq!(c.len(), 2);
        let (a, b) = axis_costs(0.5);
        assert_relative_eq!(c[0].f1, a, max_relative = 1e-14);
        assert_relative_eq!(c[1].f1, b, max_relative = 1e-14);
        assert_relative_eq!(a, 2.0 * (0.5 - 0.5f64.sqrt()).abs(), max_relative = 1e-15);
        assert_relative_eq!(b, 2.0 * (1.5 - 1.5f64.sqrt()).abs(), max_relative = 1e-15);
        assert!((c[0].separation_angle_deg).abs() < 1e-12);
    }

    #[test]
    fn closed_case2b_costs() {
        let inp = RotatedInput::from_rationals(rat(3, 10), rat(2, 5)).unwrap();
        let c = case2b_closed(&inp);
        assert_eq!(c.len(), 2);
        assert_relative_eq!(c[0].f1, 0.6, max_relative = 1e-14);
        assert_relative_eq!(
            c[1].f1,
            case2b_reversed_cost(0.3, 0.4),
            max_relative = 1e-14
        );
        assert!(c[1].dominated);
    }
}
