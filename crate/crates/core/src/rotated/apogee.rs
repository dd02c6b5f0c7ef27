//! Baseline transfer with both burns at the apogees.

use serde::{Deserialize, Serialize};

use super::{PlanarTransfer, RotatedError, RotatedInput};
use crate::numeric::scan_then_refine;
use crate::transfer::{impulses, TransferPlan};

const SCAN: usize = 4000;
const L_MAX: f64 = 3.0;
const L_MIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApogeeTransfer {
    pub f1: f64,
    pub plan: TransferPlan,
}

fn cost(t: &PlanarTransfer, inp: &RotatedInput) -> f64 {
    if t.s1x.hypot(t.s1y) >= t.l.abs() || !t.s1x.is_finite() || !t.s1y.is_finite() {
        return f64::INFINITY;
    }
    let (sx, sy) = (inp.sx(), inp.sy());
    let w = |ax: f64, ay: f64, lz: f64, x: f64, y: f64| (ax - lz * y, ay + lz * x);
    let (a0, b0) = w(sx, sy, 1.0, t.x0, t.y0);
    let (a1, b1) = w(t.s1x, t.s1y, t.l, t.x0, t.y0);
    let (a2, b2) = w(t.s1x, t.s1y, t.l, t.x1, t.y1);
    let (a3, b3) = w(-sx, sy, 1.0, t.x1, t.y1);
    (a0 - a1).hypot(b0 - b1) + (a2 - a3).hypot(b2 - b3)
}

/// Cheapest two-impulse transfer that burns at the apogee of the initial
/// ellipse and arrives at the apogee of the final one.
pub fn apogee_to_apogee_cost(inp: &RotatedInput) -> Result<ApogeeTransfer, RotatedError> {
    let (p0, p1) = inp.apogee_dirs().ok_or(RotatedError::DegenerateGeometry(
        "circular orbits have no apogee",
    ))?;
    let det = p0.x * p1.y - p0.y * p1.x;
    if (p0 - p1).norm() < 1e-12 {
        return Err(RotatedError::DegenerateGeometry(
            "apogee directions coincide",
        ));
    }
    let k = 1.0 - inp.e;
    let base = PlanarTransfer {
        x0: p0.x,
        y0: p0.y,
        x1: p1.x,
        y1: p1.y,
        l: 1.0,
        s1x: 0.0,
        s1y: 0.0,
    };
    let best = if det.abs() > 1e-12 {
        // -y s1x + x s1y = (k - l^2) / l at both apogees
        let at = |l: f64| {
            let r = (k - l * l) / l;
            PlanarTransfer {
                l,
                s1x: (p1.x * r - p0.x * r) / det,
                s1y: (p1.y * r - p0.y * r) / det,
                ..base
            }
        };
        let neg = scan_then_refine(|l| cost(&at(l), inp), -L_MAX, -L_MIN, SCAN);
        let pos = scan_then_refine(|l| cost(&at(l), inp), L_MIN, L_MAX, SCAN);
        let l = if pos.1 <= neg.1 { pos.0 } else { neg.0 };
        at(l)
    } else {
        // Opposite apogees: l^2 = k and s1 is free along the apsidal line.
        let mut best: Option<(f64, PlanarTransfer)> = None;
        for l in [k.sqrt(), -k.sqrt()] {
            let at = |t: f64| PlanarTransfer {
                l,
                s1x: t * p0.x,
                s1y: t * p0.y,
                ..base
            };
            let lim = l.abs() * (1.0 - 1e-12);
            let (t, v) = scan_then_refine(|t| cost(&at(t), inp), -lim, lim, SCAN);
            if best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, at(t)));
            }
        }
        best.unwrap().1
    };
    let plan = best.plan(inp);
    let report = impulses(&plan)
        .map_err(|_| RotatedError::DegenerateGeometry("no elliptic apogee transfer"))?;
    Ok(ApogeeTransfer {
        f1: report.f1,
        plan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use crate::rotated::axis_costs;

    #[test]
    fn half_turn_matches_axis_solution() {
        let inp = RotatedInput::from_rationals(rat(1, 2), rat(0, 1)).unwrap();
        let a = apogee_to_apogee_cost(&inp).unwrap();
        assert!((a.f1 - axis_costs(0.5).0).abs() < 1e-9);
    }
}
