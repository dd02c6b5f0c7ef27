//! Brute-force minimizers and a first-order stationarity check, used to
//! verify the algebraic solvers.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kepler::{Orbit, Vec3};
use crate::numeric::{golden_section, scan_then_refine};
use crate::poly::MPoly;
use crate::transfer::TransferPlan;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("orbits must be planar with l along z")]
    NotPlanar,
    #[error("no elliptic intermediate orbit within the bounds")]
    NoFeasible,
    #[error("invalid configuration: {0}")]
    BadConfig(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    F1,
    F2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub grid_points_per_dim: usize,
    /// Golden-section iterations per axis in each descent sweep.
    pub refine_iterations: usize,
    pub sweeps: usize,
    /// Grid minima that are refined; the best result wins.
    pub starts: usize,
    /// Levels of local grid zoom before the descent.
    pub zoom_levels: usize,
    /// Points per axis of each zoom grid.
    pub zoom_points: usize,
    pub seed: u64,
    /// Overrides the default bounds `[0, 2pi)` for the angles and
    /// `+-3 max|l|` for `l1z`.
    pub bounds: Option<Vec<(f64, f64)>>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_points_per_dim: 64,
            refine_iterations: 80,
            sweeps: 3,
            starts: 4,
            zoom_levels: 10,
            zoom_points: 9,
            seed: 0,
            bounds: None,
        }
    }
}

impl OracleConfig {
    pub fn with_grid(n: usize) -> Self {
        OracleConfig {
            grid_points_per_dim: n,
            ..Default::default()
        }
    }

    fn check(&self) -> Result<(), OracleError> {
        if self.grid_points_per_dim < 8 {
            return Err(OracleError::BadConfig(
                "grid_points_per_dim must be at least 8",
            ));
        }
        Ok(())
    }
}

/// Smallest `|l1z|` the oracles consider.
pub const L_EXCLUDE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub plan: TransferPlan,
    pub cost: f64,
    /// Best value on the grid, before refinement.
    pub grid_cost: f64,
}

/// Planar problem data: `(l0z, s0)` and `(l2z, s2)`.
#[derive(Clone, Copy, Debug)]
struct Planar {
    l0: f64,
    s0: (f64, f64),
    l2: f64,
    s2: (f64, f64),
    kind: CostKind,
}

fn velocity(lz: f64, s: (f64, f64), x: f64, y: f64) -> (f64, f64) {
    (s.0 - lz * y, s.1 + lz * x)
}

fn inv_radius(lz: f64, s: (f64, f64), x: f64, y: f64) -> f64 {
    lz * lz + lz * (s.1 * x - s.0 * y)
}

impl Planar {
    fn from_orbits(o0: &Orbit, o2: &Orbit, kind: CostKind) -> Result<Self, OracleError> {
        let flat = |o: &Orbit| o.l.x == 0.0 && o.l.y == 0.0 && o.s.z == 0.0 && o.l.z != 0.0;
        if !flat(o0) || !flat(o2) {
            return Err(OracleError::NotPlanar);
        }
        Ok(Planar {
            l0: o0.l.z,
            s0: (o0.s.x, o0.s.y),
            l2: o2.l.z,
            s2: (o2.s.x, o2.s.y),
            kind,
        })
    }

    /// `s1` from the two radius conditions, if the burn points are not
    /// parallel.
    fn s1(&self, t0: f64, t1: f64, l: f64) -> Option<(f64, f64)> {
        let (y0, x0) = t0.sin_cos();
        let (y1, x1) = t1.sin_cos();
        let det = x0 * y1 - y0 * x1;
        if det.abs() < 1e-12 || l.abs() < L_EXCLUDE {
            return None;
        }
        let r0 = (inv_radius(self.l0, self.s0, x0, y0) - l * l) / l;
        let r1 = (inv_radius(self.l2, self.s2, x1, y1) - l * l) / l;
        Some(((x1 * r0 - x0 * r1) / det, (y1 * r0 - y0 * r1) / det))
    }

    fn cost(&self, t0: f64, t1: f64, l: f64) -> f64 {
        let Some(s) = self.s1(t0, t1, l) else {
            return f64::INFINITY;
        };
        if s.0.hypot(s.1) >= l.abs() {
            return f64::INFINITY;
        }
        let (y0, x0) = t0.sin_cos();
        let (y1, x1) = t1.sin_cos();
        let a = velocity(self.l0, self.s0, x0, y0);
        let b = velocity(l, s, x0, y0);
        let c = velocity(l, s, x1, y1);
        let d = velocity(self.l2, self.s2, x1, y1);
        let d0 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
        let d1 = (c.0 - d.0).powi(2) + (c.1 - d.1).powi(2);
        match self.kind {
            CostKind::F1 => d0.sqrt() + d1.sqrt(),
            CostKind::F2 => d0 + d1,
        }
    }

    fn plan(&self, t0: f64, t1: f64, l: f64) -> Option<TransferPlan> {
        let s = self.s1(t0, t1, l)?;
        let (y0, x0) = t0.sin_cos();
        let (y1, x1) = t1.sin_cos();
        let orbit = |lz: f64, s: (f64, f64)| Orbit {
            l: Vec3::new(0.0, 0.0, lz),
            s: Vec3::new(s.0, s.1, 0.0),
        };
        Some(TransferPlan {
            orbits: vec![
                orbit(self.l0, self.s0),
                orbit(l, s),
                orbit(self.l2, self.s2),
            ],
            burn_points: vec![Vec3::new(x0, y0, 0.0), Vec3::new(x1, y1, 0.0)],
        })
    }
}

fn grid_value(lo: f64, hi: f64, n: usize, i: usize, closed: bool) -> f64 {
    let steps = if closed { n - 1 } else { n };
    lo + (hi - lo) * i as f64 / steps as f64
}

/// Golden-section coordinate descent from `x` within `+-h` per axis.
fn coordinate_descent<const D: usize, F: Fn(&[f64; D]) -> f64>(
    f: F,
    mut x: [f64; D],
    h: [f64; D],
    cfg: &OracleConfig,
) -> ([f64; D], f64) {
    let mut fx = f(&x);
    let mut width = h;
    for _ in 0..cfg.sweeps {
        for axis in 0..D {
            let c = x[axis];
            let (t, v) = golden_section(
                |t| {
                    let mut y = x;
                    y[axis] = t;
                    f(&y)
                },
                c - width[axis],
                c + width[axis],
                cfg.refine_iterations,
            );
            if v < fx {
                x[axis] = t;
                fx = v;
            }
        }
        for w in width.iter_mut() {
            *w *= 0.5;
        }
    }
    (x, fx)
}

/// Repeated local grids of `zoom_points^D` around the incumbent, each
/// spanning two cells of the previous one.
fn zoom<const D: usize, F: Fn(&[f64; D]) -> f64>(
    f: &F,
    mut x: [f64; D],
    mut h: [f64; D],
    cfg: &OracleConfig,
) -> ([f64; D], f64, [f64; D]) {
    let m = cfg.zoom_points.max(3);
    let mut fx = f(&x);
    let total = m.pow(D as u32);
    for _ in 0..cfg.zoom_levels {
        let centre = x;
        for idx in 0..total {
            let mut y = centre;
            let mut r = idx;
            for d in 0..D {
                let i = r % m;
                r /= m;
                y[d] += h[d] * (2.0 * i as f64 / (m - 1) as f64 - 1.0);
            }
            let v = f(&y);
            if v < fx {
                fx = v;
                x = y;
            }
        }
        for w in h.iter_mut() {
            *w *= 4.0 / (m - 1) as f64;
        }
    }
    (x, fx, h)
}

/// Zoom then descent.
fn refine<const D: usize, F: Fn(&[f64; D]) -> f64>(
    f: F,
    x: [f64; D],
    h: [f64; D],
    cfg: &OracleConfig,
) -> ([f64; D], f64) {
    let (x, _, h) = zoom(&f, x, h, cfg);
    coordinate_descent(f, x, h, cfg)
}

/// Grid search over `(theta0, theta1, l1z)` with `s1` solved from the radius
/// conditions, followed by coordinate descent from the best grid points.
pub fn planar_two_impulse_min(
    orbit0: &Orbit,
    orbit2: &Orbit,
    cost: CostKind,
    cfg: &OracleConfig,
) -> Result<OracleResult, OracleError> {
    cfg.check()?;
    let pb = Planar::from_orbits(orbit0, orbit2, cost)?;
    let tau = std::f64::consts::TAU;
    let lmax = 3.0 * pb.l0.abs().max(pb.l2.abs());
    let bounds = match &cfg.bounds {
        Some(b) if b.len() == 3 => [b[0], b[1], b[2]],
        Some(_) => return Err(OracleError::BadConfig("bounds need three intervals")),
        None => [(0.0, tau), (0.0, tau), (-lmax, lmax)],
    };
    let n = cfg.grid_points_per_dim;
    let point = |i: usize, j: usize, k: usize| {
        [
            grid_value(bounds[0].0, bounds[0].1, n, i, false),
            grid_value(bounds[1].0, bounds[1].1, n, j, false),
            grid_value(bounds[2].0, bounds[2].1, n, k, true),
        ]
    };
    let keep = cfg.starts.max(1);
    // Per-slab best lists, merged in index order for determinism.
    let slabs: Vec<Vec<(f64, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Vec<(f64, usize)> = Vec::new();
            for j in 0..n {
                for k in 0..n {
                    let p = point(i, j, k);
                    if p[2].abs() < L_EXCLUDE {
                        continue;
                    }
                    let v = pb.cost(p[0], p[1], p[2]);
                    if v.is_finite() {
                        push_best(&mut best, (v, (i * n + j) * n + k), keep);
                    }
                }
            }
            best
        })
        .collect();
    let mut best = Vec::new();
    for s in slabs {
        for e in s {
            push_best(&mut best, e, keep);
        }
    }
    let Some(&(grid_cost, _)) = best.first() else {
        return Err(OracleError::NoFeasible);
    };
    let h = [
        (bounds[0].1 - bounds[0].0) / n as f64,
        (bounds[1].1 - bounds[1].0) / n as f64,
        (bounds[2].1 - bounds[2].0) / (n - 1) as f64,
    ];
    let f = |x: &[f64; 3]| pb.cost(x[0], x[1], x[2]);
    let mut winner: Option<([f64; 3], f64)> = None;
    for &(_, idx) in &best {
        let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
        let r = refine(f, point(i, j, k), h, cfg);
        if winner.is_none_or(|w| r.1 < w.1) {
            winner = Some(r);
        }
    }
    let (x, v) = winner.unwrap();
    let mut out = OracleResult {
        plan: pb.plan(x[0], x[1], x[2]).ok_or(OracleError::NoFeasible)?,
        cost: v,
        grid_cost,
    };
    if let Some((plan, cost)) = antipodal_min(&pb, bounds[0], cfg) {
        if cost < out.cost {
            out.cost = cost;
            out.plan = plan;
        }
        out.grid_cost = out.grid_cost.min(cost);
    }
    Ok(out)
}

/// Burn points `rhat` and `-rhat`, where the radius conditions fix
/// `l1z^2 = (k0 + k1) / 2` and the component of `s1` along `rhat` is free.
/// Parametrised by `(theta0, t)` with `t` in `(-1, 1)` scaling that
/// component by `|l1z|`.
fn antipodal_min(
    pb: &Planar,
    theta: (f64, f64),
    cfg: &OracleConfig,
) -> Option<(TransferPlan, f64)> {
    let orbit_at = |th: f64, t: f64, sign: f64| -> Option<(f64, (f64, f64))> {
        let (y, x) = th.sin_cos();
        let k0 = inv_radius(pb.l0, pb.s0, x, y);
        let k1 = inv_radius(pb.l2, pb.s2, -x, -y);
        let l2 = 0.5 * (k0 + k1);
        if l2 <= L_EXCLUDE * L_EXCLUDE {
            return None;
        }
        let l = sign * l2.sqrt();
        let c = (k0 - k1) / (2.0 * l);
        let along = t * l.abs();
        Some((l, (along * x - c * y, along * y + c * x)))
    };
    let cost = |th: f64, t: f64, sign: f64| -> f64 {
        let Some((l, s)) = orbit_at(th, t, sign) else {
            return f64::INFINITY;
        };
        if s.0.hypot(s.1) >= l.abs() {
            return f64::INFINITY;
        }
        let (y, x) = th.sin_cos();
        let a = velocity(pb.l0, pb.s0, x, y);
        let b = velocity(l, s, x, y);
        let c = velocity(l, s, -x, -y);
        let d = velocity(pb.l2, pb.s2, -x, -y);
        let d0 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
        let d1 = (c.0 - d.0).powi(2) + (c.1 - d.1).powi(2);
        match pb.kind {
            CostKind::F1 => d0.sqrt() + d1.sqrt(),
            CostKind::F2 => d0 + d1,
        }
    };
    let n = cfg.grid_points_per_dim;
    let mut best: Option<(f64, [f64; 2], f64)> = None;
    for sign in [1.0, -1.0] {
        let mut grid_best: Option<(f64, [f64; 2])> = None;
        for i in 0..n {
            for j in 0..n {
                let th = grid_value(theta.0, theta.1, n, i, false);
                let t = -1.0 + 2.0 * (j as f64 + 0.5) / n as f64;
                let v = cost(th, t, sign);
                if v.is_finite() && grid_best.is_none_or(|b| v < b.0) {
                    grid_best = Some((v, [th, t]));
                }
            }
        }
        let Some((_, x)) = grid_best else { continue };
        let h = [(theta.1 - theta.0) / n as f64, 2.0 / n as f64];
        let (x, v) = refine(|p: &[f64; 2]| cost(p[0], p[1], sign), x, h, cfg);
        if best.is_none_or(|b| v < b.0) {
            best = Some((v, x, sign));
        }
    }
    let (v, x, sign) = best?;
    let (l, s) = orbit_at(x[0], x[1], sign)?;
    let (y, xx) = x[0].sin_cos();
    let orbit = |lz: f64, s: (f64, f64)| Orbit {
        l: Vec3::new(0.0, 0.0, lz),
        s: Vec3::new(s.0, s.1, 0.0),
    };
    let plan = TransferPlan {
        orbits: vec![orbit(pb.l0, pb.s0), orbit(l, s), orbit(pb.l2, pb.s2)],
        burn_points: vec![Vec3::new(xx, y, 0.0), Vec3::new(-xx, -y, 0.0)],
    };
    Some((plan, v))
}

/// Keeps the `keep` smallest entries, ties broken by the lower index.
fn push_best(best: &mut Vec<(f64, usize)>, e: (f64, usize), keep: usize) {
    let pos = best
        .iter()
        .position(|b| e.0 < b.0 || (e.0 == b.0 && e.1 < b.1))
        .unwrap_or(best.len());
    if pos < keep {
        best.insert(pos, e);
        best.truncate(keep);
    }
}

/// One-dimensional oracle for fixed burn directions `rhat0`, `rhat1` in the
/// plane `z = 0`: `s1` follows from the radius conditions at each `l1z`.
/// `k0`, `k1` are the inverse radii and `w0`, `w1star` the velocities on the
/// outer orbits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedEndpoints {
    pub rhat0: Vec3,
    pub rhat1: Vec3,
    pub k0: f64,
    pub k1: f64,
    pub w0: Vec3,
    pub w1star: Vec3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedEndpointResult {
    pub orbit: Orbit,
    pub cost: f64,
}

impl FixedEndpoints {
    fn orbit_at(&self, l: f64) -> Option<Orbit> {
        let (x0, y0, x1, y1) = (self.rhat0.x, self.rhat0.y, self.rhat1.x, self.rhat1.y);
        let det = x0 * y1 - y0 * x1;
        if det.abs() < 1e-14 || l.abs() < L_EXCLUDE {
            return None;
        }
        let r0 = (self.k0 - l * l) / l;
        let r1 = (self.k1 - l * l) / l;
        let s = Vec3::new((x1 * r0 - x0 * r1) / det, (y1 * r0 - y0 * r1) / det, 0.0);
        let l = Vec3::new(0.0, 0.0, l);
        (s.norm() < l.norm()).then_some(Orbit { l, s })
    }

    pub fn cost_at(&self, l: f64, kind: CostKind) -> f64 {
        let Some(o) = self.orbit_at(l) else {
            return f64::INFINITY;
        };
        let d0 = (o.velocity_at(&self.rhat0) - self.w0).norm_squared();
        let d1 = (self.w1star - o.velocity_at(&self.rhat1)).norm_squared();
        match kind {
            CostKind::F1 => d0.sqrt() + d1.sqrt(),
            CostKind::F2 => d0 + d1,
        }
    }
}

/// Scan of `l1z` over `[lo, hi]` (the default is `+-3 max(sqrt k)`) split
/// into a negative and a positive half, then golden-section refinement.
pub fn fixed_endpoint_min(
    input: &FixedEndpoints,
    cost: CostKind,
    points: usize,
    bounds: Option<(f64, f64)>,
) -> Result<FixedEndpointResult, OracleError> {
    let lmax = 3.0 * input.k0.max(input.k1).sqrt().max(1.0);
    let (lo, hi) = bounds.unwrap_or((-lmax, lmax));
    let mut best: Option<(f64, f64)> = None;
    let halves = [(lo, hi.min(-L_EXCLUDE)), (lo.max(L_EXCLUDE), hi)];
    for (a, b) in halves {
        if a >= b {
            continue;
        }
        let r = scan_then_refine(|l| input.cost_at(l, cost), a, b, points / 2);
        if r.1.is_finite() && best.is_none_or(|w| r.1 < w.1) {
            best = Some(r);
        }
    }
    let (l, v) = best.ok_or(OracleError::NoFeasible)?;
    Ok(FixedEndpointResult {
        orbit: input.orbit_at(l).ok_or(OracleError::NoFeasible)?,
        cost: v,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    pub lambdas: Vec<f64>,
    pub gradient_residual: f64,
    /// Smallest singular value of the constraint Jacobian; small values mean
    /// the point is near the singular set.
    pub min_singular_value: f64,
}

/// Least-squares multipliers for `grad cost = sum lambda_i grad c_i` at
/// `point` (values in the variable order of `cost`).
pub fn stationarity_check(
    constraints: &[MPoly],
    cost: &MPoly,
    point: &[f64],
) -> StationarityReport {
    let vars: Vec<String> = cost.vars().to_vec();
    let n = vars.len();
    let grad = |p: &MPoly| -> Vec<f64> {
        let p = p
            .with_vars(&vars)
            .expect("constraint variables are a subset of the cost variables");
        vars.iter()
            .map(|v| p.partial(v).unwrap().eval_f64(point))
            .collect()
    };
    let g = DVector::from_vec(grad(cost));
    if constraints.is_empty() {
        return StationarityReport {
            lambdas: Vec::new(),
            gradient_residual: g.norm(),
            min_singular_value: f64::INFINITY,
        };
    }
    let cols: Vec<Vec<f64>> = constraints.iter().map(grad).collect();
    let m = cols.len();
    let jt = DMatrix::from_fn(n, m, |r, c| cols[c][r]);
    let svd = jt.clone().svd(true, true);
    let min_sv = svd
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let lambdas = svd.solve(&g, 1e-14).unwrap_or_else(|_| DVector::zeros(m));
    let res = (&jt * &lambdas - &g).norm();
    StationarityReport {
        lambdas: lambdas.as_slice().to_vec(),
        gradient_residual: res,
        min_singular_value: min_sv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kepler::circular_orbit;

    #[test]
    fn identical_orbits_cost_nothing() {
        let o = Orbit::planar(1.0, 0.1, 0.2).unwrap();
        let r = planar_two_impulse_min(&o, &o, CostKind::F1, &OracleConfig::with_grid(24)).unwrap();
        assert!(r.cost < 1e-6, "{}", r.cost);
        assert!(r.cost <= r.grid_cost);
    }

    #[test]
    fn hohmann_one_to_two() {
        let a = circular_orbit(1.0, Vec3::z()).unwrap();
        let b = circular_orbit(2.0, Vec3::z()).unwrap();
        let cfg = OracleConfig::with_grid(48);
        let r = planar_two_impulse_min(&a, &b, CostKind::F1, &cfg).unwrap();
        let classic = ((4.0f64 / 3.0).sqrt() - 1.0) + (0.5f64.sqrt() - (1.0f64 / 3.0).sqrt());
        assert!((r.cost - classic).abs() < 1e-6, "{} {}", r.cost, classic);
    }

    #[test]
    fn deterministic() {
        let a = Orbit::planar(1.0, 0.3, 0.1).unwrap();
        let b = Orbit::planar(1.0, -0.3, 0.1).unwrap();
        let cfg = OracleConfig::with_grid(16);
        let r1 = planar_two_impulse_min(&a, &b, CostKind::F1, &cfg).unwrap();
        let r2 = planar_two_impulse_min(&a, &b, CostKind::F1, &cfg).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn small_grid_rejected() {
        let o = Orbit::planar(1.0, 0.0, 0.0).unwrap();
        let r = planar_two_impulse_min(&o, &o, CostKind::F1, &OracleConfig::with_grid(4));
        assert!(matches!(r, Err(OracleError::BadConfig(_))));
    }

    #[test]
    fn stationarity_of_quadratic() {
        let q: MPoly = "(x - 1)^2 + (y + 2)^2".parse().unwrap();
        let r = stationarity_check(&[], &q, &[1.0, -2.0]);
        assert!(r.gradient_residual < 1e-10);
        // On the line x = y the minimum is at x = y = -1/2.
        let c: MPoly = "x - y".parse().unwrap();
        let r = stationarity_check(std::slice::from_ref(&c), &q, &[-0.5, -0.5]);
        assert!(r.gradient_residual < 1e-12);
        let r = stationarity_check(&[c], &q, &[-0.499, -0.499]);
        assert!(r.gradient_residual > 1e-4);
    }

    #[test]
    fn fixed_endpoint_infeasible_bounds() {
        let fe = FixedEndpoints {
            rhat0: Vec3::x(),
            rhat1: Vec3::y(),
            k0: 1.0,
            k1: 1.0,
            w0: Vec3::y(),
            w1star: -Vec3::x(),
        };
        let r = fixed_endpoint_min(&fe, CostKind::F2, 1000, None).unwrap();
        assert!(r.cost < 1e-12);
        assert!(matches!(
            fixed_endpoint_min(&fe, CostKind::F2, 1000, Some((5.0, 6.0))),
            Err(OracleError::NoFeasible)
        ));
    }
}
