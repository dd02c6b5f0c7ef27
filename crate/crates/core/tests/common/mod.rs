#![allow(dead_code)]

use orbita_core::lambert::FramedLambert;
use orbita_core::oracle::{fixed_endpoint_min, CostKind, FixedEndpoints};
use orbita_core::Vec3;
use rand::Rng;

/// Random framed instance with near-circular endpoint velocities.
pub fn lambert_instance<R: Rng>(rng: &mut R) -> FramedLambert {
    let k0 = rng.gen_range(0.5..2.0);
    let k1 = rng.gen_range(0.5..2.0);
    let theta: f64 = rng.gen_range(0.3..std::f64::consts::PI - 0.3);
    let (y1, x1) = theta.sin_cos();
    let mut vel = |k: f64, radial: Vec3, tangent: Vec3| {
        radial * rng.gen_range(-0.3..0.3)
            + tangent * k.sqrt() * rng.gen_range(0.7..1.3)
            + Vec3::z() * rng.gen_range(-0.2..0.2)
    };
    let w0 = vel(k0, Vec3::x(), Vec3::y());
    let w1 = vel(k1, Vec3::new(x1, y1, 0.0), Vec3::new(-y1, x1, 0.0));
    FramedLambert::from_angle(k0, k1, theta, w0, w1)
}

/// Best `f2` over a dense scan of `l1z`.
pub fn lambert_oracle(f: &FramedLambert) -> f64 {
    let fe = FixedEndpoints {
        rhat0: Vec3::x(),
        rhat1: Vec3::new(f.x1, f.y1, 0.0),
        k0: f.k0,
        k1: f.k1,
        w0: f.w0,
        w1star: f.w1star,
    };
    fixed_endpoint_min(&fe, CostKind::F2, 100_000, None).map_or(f64::INFINITY, |r| r.cost)
}

/// Radius conditions of the framed system at `(l, sx, sy)`.
pub fn lambert_residuals(f: &FramedLambert, l: f64, sx: f64, sy: f64) -> (f64, f64) {
    (
        l * l + l * sy - f.k0,
        l * l + l * (f.x1 * sy - f.y1 * sx) - f.k1,
    )
}
