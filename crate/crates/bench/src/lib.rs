//! Fixed inputs shared by the benchmarks.

use orbita_core::lambert::FramedLambert;
use orbita_core::rotated::params_from_angle;
use orbita_core::{RotatedInput, Vec3};

/// A framed instance with both velocities near circular.
pub fn lambert_instance() -> FramedLambert {
    FramedLambert::from_angle(
        1.0,
        0.5,
        1.2,
        Vec3::new(0.05, 1.02, 0.1),
        Vec3::new(-0.6, 0.2, -0.05),
    )
}

/// `e = 0.5`, `alpha = 40` degrees.
pub fn rotated_instance() -> RotatedInput {
    params_from_angle(0.5, 40.0).expect("valid angle")
}
