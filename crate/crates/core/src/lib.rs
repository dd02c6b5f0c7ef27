//! Minimum-fuel two-impulse orbit transfers solved with exact polynomial
//! elimination, plus brute-force oracles to check the answers.

pub mod hohmann;
pub mod kepler;
pub mod lambert;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod rotated;
pub mod sweep;
pub mod transfer;

pub use hohmann::{best_transfer, HohmannBranch, HohmannBranchSolution, HohmannInput};
pub use kepler::{
    circular_orbit, orbit_from_h_e, orbit_geometry, orbit_to_h_e, radius_inverse, velocity_at,
    KeplerError, Orbit, OrbitGeometry, OrbitPoint, Rotation, Vec3,
};
pub use lambert::{solve_lambert, LambertCase, LambertInput, LambertSolution};
pub use rotated::{best_rotated_transfer, CaseTag, RotatedCandidate, RotatedInput};
pub use transfer::{
    impulses, rotate_plan, scale_plan, validate_plan, CostReport, PlanResiduals, TransferError,
    TransferPlan,
};
