//! Multi-impulse transfer plans: constraint residuals and the costs `f1`, `f2`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kepler::{Orbit, Rotation, Vec3};

/// Default tolerance for equality constraints of a plan.
pub const PLAN_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransferError {
    #[error(
        "plan needs n >= 1 burn points and n + 1 orbits (got {orbits} orbits, {points} points)"
    )]
    Shape { orbits: usize, points: usize },
    #[error("invalid plan: {0}")]
    InvalidPlan(Residual),
    #[error("scale factor must be nonzero and finite")]
    BadScale,
}

/// Sequence of orbits joined by impulses at the unit directions
/// `burn_points[i]`, between `orbits[i]` and `orbits[i + 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferPlan {
    pub orbits: Vec<Orbit>,
    pub burn_points: Vec<Vec3>,
}

impl TransferPlan {
    pub fn new(orbits: Vec<Orbit>, burn_points: Vec<Vec3>) -> Result<Self, TransferError> {
        let plan = TransferPlan {
            orbits,
            burn_points,
        };
        plan.check_shape()?;
        Ok(plan)
    }

    pub fn check_shape(&self) -> Result<(), TransferError> {
        if self.burn_points.is_empty() || self.orbits.len() != self.burn_points.len() + 1 {
            return Err(TransferError::Shape {
                orbits: self.orbits.len(),
                points: self.burn_points.len(),
            });
        }
        Ok(())
    }

    pub fn impulse_count(&self) -> usize {
        self.burn_points.len()
    }

    /// Velocities `(w_i, w_i*)` just before and after impulse `i`.
    pub fn velocities(&self, i: usize) -> (Vec3, Vec3) {
        let r = &self.burn_points[i];
        (
            self.orbits[i].velocity_at(r),
            self.orbits[i + 1].velocity_at(r),
        )
    }

    /// Radius of burn point `i` measured on the orbit before the impulse.
    pub fn burn_radius(&self, i: usize) -> f64 {
        1.0 / self.orbits[i].inverse_radius_at(&self.burn_points[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualKind {
    /// `rhat_i . l_i`
    PlaneBefore,
    /// `rhat_i . l_{i+1}`
    PlaneAfter,
    /// `| |rhat_i|^2 - 1 |`
    UnitNorm,
    /// Difference of the two inverse radii at `rhat_i`.
    RadiusMatch,
    /// `l_i . s_i`
    OrbitOrthogonality,
    /// `|l_i| - |s_i|`; must be positive rather than small.
    EllipticMargin,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub kind: ResidualKind,
    pub index: usize,
    pub value: f64,
}

impl Residual {
    pub fn is_margin(&self) -> bool {
        self.kind == ResidualKind::EllipticMargin
    }

    pub fn violates(&self, tol: f64) -> bool {
        if self.is_margin() {
            self.value.is_nan() || self.value <= 0.0
        } else {
            self.value.is_nan() || self.value >= tol
        }
    }
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.kind {
            ResidualKind::PlaneBefore => "burn point off the plane of the orbit before it",
            ResidualKind::PlaneAfter => "burn point off the plane of the orbit after it",
            ResidualKind::UnitNorm => "burn point is not a unit vector",
            ResidualKind::RadiusMatch => "radius mismatch at burn point",
            ResidualKind::OrbitOrthogonality => "orbit has l.s != 0",
            ResidualKind::EllipticMargin => "orbit is not elliptic",
        };
        write!(
            f,
            "{name} (index {}, residual {:e})",
            self.index, self.value
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanResiduals {
    pub entries: Vec<Residual>,
}

impl PlanResiduals {
    pub fn first_violation(&self, tol: f64) -> Option<&Residual> {
        self.entries.iter().find(|r| r.violates(tol))
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        self.first_violation(tol).is_none()
    }

    /// Largest equality residual.
    pub fn max_equality(&self) -> f64 {
        self.entries
            .iter()
            .filter(|r| !r.is_margin())
            .map(|r| r.value)
            .fold(0.0, f64::max)
    }
}

/// Residuals of every constraint. Panics only if the plan shape is wrong,
/// see [`TransferPlan::check_shape`].
pub fn validate_plan(p: &TransferPlan) -> PlanResiduals {
    let mut entries = Vec::new();
    for (i, r) in p.burn_points.iter().enumerate() {
        let (a, b) = (&p.orbits[i], &p.orbits[i + 1]);
        let mut push = |kind, value: f64| {
            entries.push(Residual {
                kind,
                index: i,
                value,
            })
        };
        push(ResidualKind::PlaneBefore, r.dot(&a.l).abs());
        push(ResidualKind::PlaneAfter, r.dot(&b.l).abs());
        push(ResidualKind::UnitNorm, (r.norm_squared() - 1.0).abs());
        push(
            ResidualKind::RadiusMatch,
            (a.inverse_radius_at(r) - b.inverse_radius_at(r)).abs(),
        );
    }
    for (i, o) in p.orbits.iter().enumerate() {
        entries.push(Residual {
            kind: ResidualKind::OrbitOrthogonality,
            index: i,
            value: o.l.dot(&o.s).abs(),
        });
        entries.push(Residual {
            kind: ResidualKind::EllipticMargin,
            index: i,
            value: o.elliptic_margin(),
        });
    }
    PlanResiduals { entries }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub deltas: Vec<f64>,
    pub f1: f64,
    pub f2: f64,
}

impl CostReport {
    pub fn from_deltas(deltas: Vec<f64>) -> Self {
        let f1 = deltas.iter().sum();
        let f2 = deltas.iter().map(|d| d * d).sum();
        CostReport { deltas, f1, f2 }
    }
}

/// `Delta_i^2` from the expansion
/// `|ds|^2 + |dl|^2 + 2 (ds x dl) . rhat` with `ds = s_i - s_{i+1}`,
/// `dl = l_i - l_{i+1}`.
pub fn delta_squared_identity(p: &TransferPlan, i: usize) -> f64 {
    let ds = p.orbits[i].s - p.orbits[i + 1].s;
    let dl = p.orbits[i].l - p.orbits[i + 1].l;
    ds.norm_squared() + dl.norm_squared() + 2.0 * ds.cross(&dl).dot(&p.burn_points[i])
}

/// Relative gap between `|w_i - w_i*|^2` and [`delta_squared_identity`],
/// measured against `(|ds| + |dl|)^2`.
pub fn delta_identity_gap(p: &TransferPlan, i: usize) -> f64 {
    let (w, ws) = p.velocities(i);
    let direct = (w - ws).norm_squared();
    let ds = (p.orbits[i].s - p.orbits[i + 1].s).norm();
    let dl = (p.orbits[i].l - p.orbits[i + 1].l).norm();
    let scale = (ds + dl).powi(2);
    if scale == 0.0 {
        return direct;
    }
    (direct - delta_squared_identity(p, i)).abs() / scale
}

/// Impulse magnitudes and costs of a plan validated at `tol`.
pub fn impulses_with_tol(p: &TransferPlan, tol: f64) -> Result<CostReport, TransferError> {
    p.check_shape()?;
    if let Some(r) = validate_plan(p).first_violation(tol) {
        return Err(TransferError::InvalidPlan(*r));
    }
    let deltas = (0..p.impulse_count())
        .map(|i| {
            debug_assert!(delta_identity_gap(p, i) < 1e-10);
            let (w, ws) = p.velocities(i);
            (w - ws).norm()
        })
        .collect();
    Ok(CostReport::from_deltas(deltas))
}

pub fn impulses(p: &TransferPlan) -> Result<CostReport, TransferError> {
    impulses_with_tol(p, PLAN_TOL)
}

/// Scales every `l_i`, `s_i` by `c`. Inverse radii scale by `c^2` on both
/// sides of each burn, so the burn directions are kept.
pub fn scale_plan(p: &TransferPlan, c: f64) -> Result<TransferPlan, TransferError> {
    if c == 0.0 || !c.is_finite() {
        return Err(TransferError::BadScale);
    }
    let out = TransferPlan {
        orbits: p.orbits.iter().map(|o| o.scaled(c)).collect(),
        burn_points: p.burn_points.clone(),
    };
    let before = validate_plan(p).is_valid(PLAN_TOL);
    if before {
        if let Some(r) = validate_plan(&out).first_violation(PLAN_TOL * (c * c).max(1.0)) {
            return Err(TransferError::InvalidPlan(*r));
        }
    }
    Ok(out)
}

pub fn rotate_plan(p: &TransferPlan, r: &Rotation) -> TransferPlan {
    TransferPlan {
        orbits: p.orbits.iter().map(|o| o.rotated(r)).collect(),
        burn_points: p.burn_points.iter().map(|b| r * b).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoints {
    PointToPoint,
    PointToOrbit,
    OrbitToOrbit,
}

/// Number of unknowns and equations describing the configuration space of
/// an `n`-impulse transfer (`n >= 2`), in three or two dimensions.
pub fn configuration_counts(kind: Endpoints, planar: bool, n: usize) -> (usize, usize) {
    let n = n as isize;
    let (u, e) = match (kind, planar) {
        (Endpoints::PointToPoint, false) => (9 * n - 12, 5 * n - 5),
        (Endpoints::PointToOrbit, false) => (9 * n - 9, 5 * n - 3),
        (Endpoints::OrbitToOrbit, false) => (9 * n - 6, 5 * n - 1),
        (Endpoints::PointToPoint, true) => (5 * n - 7, 2 * n - 2),
        (Endpoints::PointToOrbit, true) => (5 * n - 5, 2 * n - 1),
        (Endpoints::OrbitToOrbit, true) => (5 * n - 3, 2 * n),
    };
    (u.max(0) as usize, e.max(0) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn circle(lz: f64) -> Orbit {
        Orbit::planar(lz, 0.0, 0.0).unwrap()
    }

    fn hohmann_1_2() -> TransferPlan {
        // Transfer ellipse between radii 1 and 2: perigee on +x.
        let l1 = (0.75f64).sqrt();
        let s1y = l1 / 3.0;
        TransferPlan::new(
            vec![
                circle(1.0),
                Orbit::planar(l1, 0.0, s1y).unwrap(),
                circle(0.5f64.sqrt()),
            ],
            vec![Vec3::x(), -Vec3::x()],
        )
        .unwrap()
    }

    #[test]
    fn identical_orbits_cost_nothing() {
        let o = Orbit::planar(1.0, 0.1, 0.2).unwrap();
        let p = TransferPlan::new(vec![o, o], vec![Vec3::y()]).unwrap();
        let res = validate_plan(&p);
        assert_eq!(res.max_equality(), 0.0);
        let c = impulses(&p).unwrap();
        assert_eq!(c.f1, 0.0);
    }

    #[test]
    fn hohmann_cost() {
        let p = hohmann_1_2();
        assert!(validate_plan(&p).max_equality() < 1e-15);
        let c = impulses(&p).unwrap();
        let (r1, r2) = (1.0f64, 2.0f64);
        let classical = (2.0 * r2 / (r1 * (r1 + r2))).sqrt() - (1.0 / r1).sqrt()
            + (1.0 / r2).sqrt()
            - (2.0 * r1 / (r2 * (r1 + r2))).sqrt();
        assert_relative_eq!(c.f1, classical, max_relative = 1e-14);
        assert_relative_eq!(c.f2, c.deltas.iter().map(|d| d * d).sum::<f64>());
    }

    #[test]
    fn reversal_costs_twice_the_speed() {
        let p = TransferPlan::new(vec![circle(1.0), circle(-1.0)], vec![Vec3::x()]).unwrap();
        assert_relative_eq!(impulses(&p).unwrap().f1, 2.0);
    }

    #[test]
    fn non_unit_point_is_reported() {
        let o = circle(1.0);
        let p = TransferPlan::new(vec![o, o], vec![Vec3::new(1.5, 0.0, 0.0)]).unwrap();
        let res = validate_plan(&p);
        let unit = res
            .entries
            .iter()
            .find(|r| r.kind == ResidualKind::UnitNorm)
            .unwrap();
        assert_relative_eq!(unit.value, 1.25);
        assert!(matches!(impulses(&p), Err(TransferError::InvalidPlan(_))));
    }

    #[test]
    fn scaling_and_rotation() {
        let p = hohmann_1_2();
        let f = impulses(&p).unwrap();
        let f2 = impulses(&scale_plan(&p, 2.0).unwrap()).unwrap();
        assert_relative_eq!(f2.f1, 2.0 * f.f1, max_relative = 1e-12);
        assert_relative_eq!(f2.f2, 4.0 * f.f2, max_relative = 1e-12);
        let fm = impulses(&scale_plan(&p, -1.0).unwrap()).unwrap();
        assert_relative_eq!(fm.f1, f.f1, max_relative = 1e-12);
        assert!(scale_plan(&p, 0.0).is_err());
        let rot = Rotation::from_axis_angle(&Vec3::z_axis(), std::f64::consts::FRAC_PI_2);
        let fr = impulses(&rotate_plan(&p, &rot)).unwrap();
        assert_relative_eq!(fr.f1, f.f1, max_relative = 1e-12);
    }

    #[test]
    fn counting_row() {
        assert_eq!(
            configuration_counts(Endpoints::OrbitToOrbit, true, 2),
            (7, 4)
        );
        assert_eq!(
            configuration_counts(Endpoints::OrbitToOrbit, false, 2),
            (12, 9)
        );
    }

    #[test]
    fn plan_json() {
        let p = TransferPlan::new(vec![circle(1.0), circle(1.0)], vec![Vec3::x()]).unwrap();
        let j = serde_json::to_value(&p).unwrap();
        assert_eq!(j["burn_points"], serde_json::json!([[1.0, 0.0, 0.0]]));
        assert_eq!(j["orbits"][0]["l"], serde_json::json!([0.0, 0.0, 1.0]));
        let c = serde_json::to_value(impulses(&p).unwrap()).unwrap();
        assert_eq!(
            c,
            serde_json::json!({"deltas": [0.0], "f1": 0.0, "f2": 0.0})
        );
    }
}
