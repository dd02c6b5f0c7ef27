//! Elliptic Keplerian orbits in the `(l, s)` parametrisation.
//!
//! With `h` the angular momentum and `e` the eccentricity vector,
//! `l = sqrt(mu) h / |h|^2` and `s = l x e`. The inverse radius and the
//! normalised velocity `w = rdot / sqrt(mu)` at a direction `rhat` in the
//! orbital plane are then
//!
//! ```text
//! 1/r = |l|^2 + (s x l) . rhat        w = s + l x rhat
//! ```

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec3 = Vector3<f64>;
pub type Rotation = Rotation3<f64>;

/// Smallest accepted `|l|`.
pub const L_EPS: f64 = 1e-9;
/// Relative `l . s` violation that construction silently projects away.
pub const SNAP_TOL: f64 = 1e-12;
/// Eccentricity below which the apogee direction is reported as undefined.
pub const CIRCULAR_EPS: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KeplerError {
    #[error("orbit is not elliptic (eccentricity {0})")]
    NotElliptic(f64),
    #[error("degenerate orbit: {0}")]
    DegenerateOrbit(&'static str),
    #[error("l and s are not orthogonal (l.s = {0:e})")]
    NotOrthogonal(f64),
    #[error("point direction invalid: {0}")]
    BadDirection(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// One elliptic orbit. Fields are public so that plans read from files can
/// be inspected before validation; [`Orbit::new`] enforces the invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub l: Vec3,
    pub s: Vec3,
}

impl Orbit {
    /// Checks `|l| > L_EPS`, `l . s = 0` and `|s| < |l|`. Tiny violations of
    /// orthogonality are projected out of `s`.
    pub fn new(l: Vec3, s: Vec3) -> Result<Self, KeplerError> {
        if !l.iter().chain(s.iter()).all(|c| c.is_finite()) {
            return Err(KeplerError::DegenerateOrbit("non-finite component"));
        }
        let ln = l.norm();
        if ln <= L_EPS {
            return Err(KeplerError::DegenerateOrbit("|l| vanishes"));
        }
        let dot = l.dot(&s);
        let s = if dot == 0.0 {
            s
        } else if dot.abs() < SNAP_TOL * ln * s.norm() {
            s - l * (dot / (ln * ln))
        } else {
            return Err(KeplerError::NotOrthogonal(dot));
        };
        let ecc = s.norm() / ln;
        if ecc >= 1.0 {
            return Err(KeplerError::NotElliptic(ecc));
        }
        Ok(Orbit { l, s })
    }

    /// Planar orbit with `l = (0, 0, lz)` and `s = (sx, sy, 0)`.
    pub fn planar(lz: f64, sx: f64, sy: f64) -> Result<Self, KeplerError> {
        Orbit::new(Vec3::new(0.0, 0.0, lz), Vec3::new(sx, sy, 0.0))
    }

    pub fn eccentricity(&self) -> f64 {
        self.s.norm() / self.l.norm()
    }

    /// `(s x l) / |l|^2`.
    pub fn eccentricity_vector(&self) -> Vec3 {
        self.s.cross(&self.l) / self.l.norm_squared()
    }

    pub fn inverse_radius_at(&self, rhat: &Vec3) -> f64 {
        self.l.norm_squared() + self.s.cross(&self.l).dot(rhat)
    }

    pub fn velocity_at(&self, rhat: &Vec3) -> Vec3 {
        self.s + self.l.cross(rhat)
    }

    pub fn scaled(&self, c: f64) -> Orbit {
        Orbit {
            l: self.l * c,
            s: self.s * c,
        }
    }

    pub fn rotated(&self, r: &Rotation) -> Orbit {
        Orbit {
            l: r * self.l,
            s: r * self.s,
        }
    }

    /// `|l| - |s|`, positive for ellipses.
    pub fn elliptic_margin(&self) -> f64 {
        self.l.norm() - self.s.norm()
    }
}

pub fn orbit_from_h_e(h: Vec3, e: Vec3, mu: f64) -> Result<Orbit, KeplerError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(KeplerError::InvalidParameter("mu must be positive"));
    }
    let h2 = h.norm_squared();
    if h2 == 0.0 {
        return Err(KeplerError::DegenerateOrbit("zero angular momentum"));
    }
    if e.norm() >= 1.0 {
        return Err(KeplerError::NotElliptic(e.norm()));
    }
    let l = h * (mu.sqrt() / h2);
    Orbit::new(l, l.cross(&e))
}

pub fn orbit_to_h_e(o: &Orbit, mu: f64) -> (Vec3, Vec3) {
    let l2 = o.l.norm_squared();
    (o.l * (mu.sqrt() / l2), o.eccentricity_vector())
}

/// A point of an orbit, given by its unit direction from the focus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    #[serde(flatten)]
    pub orbit: Orbit,
    pub rhat: Vec3,
}

impl OrbitPoint {
    pub fn new(orbit: Orbit, rhat: Vec3) -> Result<Self, KeplerError> {
        if (rhat.norm() - 1.0).abs() > 1e-12 {
            return Err(KeplerError::BadDirection("rhat is not a unit vector"));
        }
        if rhat.dot(&orbit.l).abs() > 1e-12 * orbit.l.norm() {
            return Err(KeplerError::BadDirection("rhat leaves the orbital plane"));
        }
        Ok(OrbitPoint { orbit, rhat })
    }

    pub fn radius_inverse(&self) -> f64 {
        self.orbit.inverse_radius_at(&self.rhat)
    }

    pub fn position(&self) -> Vec3 {
        self.rhat / self.radius_inverse()
    }

    pub fn velocity(&self) -> Vec3 {
        self.orbit.velocity_at(&self.rhat)
    }
}

pub fn radius_inverse(pt: &OrbitPoint) -> f64 {
    pt.radius_inverse()
}

pub fn velocity_at(pt: &OrbitPoint) -> Vec3 {
    pt.velocity()
}

/// Circular orbit of the given radius whose angular momentum points along
/// `axis`.
pub fn circular_orbit(radius: f64, axis: Vec3) -> Result<Orbit, KeplerError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(KeplerError::InvalidParameter("radius must be positive"));
    }
    let n = axis.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(KeplerError::InvalidParameter("axis must be nonzero"));
    }
    Orbit::new(axis * (1.0 / (n * radius.sqrt())), Vec3::zeros())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitGeometry {
    pub eccentricity: f64,
    pub semilatus: f64,
    /// `None` for (near) circular orbits.
    pub apogee_dir: Option<Vec3>,
}

pub fn orbit_geometry(o: &Orbit) -> OrbitGeometry {
    let eccentricity = o.eccentricity();
    let apogee_dir = if eccentricity < CIRCULAR_EPS {
        None
    } else {
        Some(-o.eccentricity_vector().normalize())
    };
    OrbitGeometry {
        eccentricity,
        semilatus: 1.0 / o.l.norm_squared(),
        apogee_dir,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_circle() {
        let o = orbit_from_h_e(Vec3::z(), Vec3::zeros(), 1.0).unwrap();
        assert_eq!(o.l, Vec3::z());
        assert_eq!(o.s, Vec3::zeros());
        let (h, e) = orbit_to_h_e(&o, 4.0);
        assert_relative_eq!(h.norm(), 2.0);
        assert_eq!(e, Vec3::zeros());
    }

    #[test]
    fn formula_values() {
        let o = orbit_from_h_e(Vec3::new(0.0, 0.0, 2.0), Vec3::new(0.5, 0.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(o.l, Vec3::new(0.0, 0.0, 0.5));
        assert_relative_eq!(o.s, Vec3::new(0.0, 0.25, 0.0));
        let (h, e) = orbit_to_h_e(&o, 1.0);
        assert_relative_eq!(h, Vec3::new(0.0, 0.0, 2.0), epsilon = 1e-15);
        assert_relative_eq!(e, Vec3::new(0.5, 0.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_orbits() {
        let r = orbit_from_h_e(Vec3::z(), Vec3::new(1.2, 0.0, 0.0), 1.0);
        assert!(matches!(r, Err(KeplerError::NotElliptic(_))));
        let r = orbit_from_h_e(Vec3::zeros(), Vec3::zeros(), 1.0);
        assert!(matches!(r, Err(KeplerError::DegenerateOrbit(_))));
        let r = Orbit::new(Vec3::z(), Vec3::new(0.0, 0.1, 1e-3));
        assert!(matches!(r, Err(KeplerError::NotOrthogonal(_))));
    }

    #[test]
    fn snaps_tiny_violations() {
        let o = Orbit::new(Vec3::z(), Vec3::new(0.3, 0.0, 1e-14)).unwrap();
        assert_eq!(o.l.dot(&o.s), 0.0);
    }

    #[test]
    fn radius_and_velocity() {
        let c = Orbit::planar(1.0, 0.0, 0.0).unwrap();
        let pt = OrbitPoint::new(c, Vec3::x()).unwrap();
        assert_eq!(pt.radius_inverse(), 1.0);
        assert_eq!(pt.velocity(), Vec3::y());

        let o = Orbit::planar(1.0, 0.0, 0.4).unwrap();
        let pt = OrbitPoint::new(o, Vec3::x()).unwrap();
        assert_relative_eq!(pt.radius_inverse(), 1.4);
    }

    #[test]
    fn circular_constructor() {
        assert_eq!(circular_orbit(1.0, Vec3::z()).unwrap().l, Vec3::z());
        assert_relative_eq!(circular_orbit(4.0, Vec3::z()).unwrap().l.norm(), 0.5);
        let r = circular_orbit(2.0, -Vec3::z()).unwrap();
        assert_relative_eq!(r.l, Vec3::new(0.0, 0.0, -0.5f64.sqrt()));
    }

    #[test]
    fn geometry() {
        let g = orbit_geometry(&Orbit::planar(1.0, 0.0, 0.0).unwrap());
        assert_eq!(g.eccentricity, 0.0);
        assert!(g.apogee_dir.is_none());
        let o = Orbit::new(Vec3::z(), Vec3::new(0.5, 0.0, 0.0)).unwrap();
        let g = orbit_geometry(&o);
        assert_relative_eq!(g.eccentricity, 0.5);
        // e = s x l = (0, -0.5, 0), apogee opposite.
        assert_relative_eq!(g.apogee_dir.unwrap(), Vec3::y());
        assert_relative_eq!(
            orbit_geometry(&Orbit::planar(0.5, 0.0, 0.0).unwrap()).semilatus,
            4.0
        );
    }

    #[test]
    fn json_shape() {
        let o = Orbit::planar(1.0, 0.25, 0.0).unwrap();
        let j = serde_json::to_string(&o).unwrap();
        assert_eq!(j, r#"{"l":[0.0,0.0,1.0],"s":[0.25,0.0,0.0]}"#);
        let pt = OrbitPoint::new(o, Vec3::x()).unwrap();
        let j = serde_json::to_value(pt).unwrap();
        assert_eq!(j["rhat"], serde_json::json!([1.0, 0.0, 0.0]));
        let back: OrbitPoint = serde_json::from_value(j).unwrap();
        assert_eq!(back, pt);
    }
}
