//! Grid sweeps over eccentricity and rotation angle for rotated ellipses.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rotated::{
    apogee_to_apogee_cost, params_from_angle, solve_rotated, CaseTag, RotatedError, SolveOptions,
};

pub const CSV_HEADER: [&str; 11] = [
    "e",
    "alpha",
    "a",
    "b",
    "best_f1",
    "best_case",
    "separation_deg",
    "apogee_f1",
    "ratio_pct",
    "case1_found",
    "case2b_best_f1",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub e: f64,
    pub alpha_deg: f64,
    pub a: i64,
    pub b: i64,
    pub best_f1: f64,
    pub best_case: CaseTag,
    pub separation_deg: f64,
    /// NaN for circular orbits.
    pub apogee_f1: f64,
    pub ratio_pct: f64,
    pub case1_found: bool,
    /// NaN when case 2b produced nothing.
    pub case2b_best_f1: f64,
}

/// `x` rounded to `digits` significant digits, in positional notation.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    // Rounding can carry into a new digit, e.g. 9.9999 -> 10.000.
    let carried = s
        .parse::<f64>()
        .is_ok_and(|v| v.abs() >= 10f64.powi(mag as i32 + 1));
    let s = if decimals > 0 && carried {
        format!("{:.*}", decimals - 1, x)
    } else {
        s
    };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl SweepRecord {
    pub fn csv_row(&self) -> Vec<String> {
        let f = |x: f64| fmt_sig(x, 12);
        vec![
            f(self.e),
            f(self.alpha_deg),
            self.a.to_string(),
            self.b.to_string(),
            f(self.best_f1),
            self.best_case.to_string(),
            f(self.separation_deg),
            f(self.apogee_f1),
            f(self.ratio_pct),
            self.case1_found.to_string(),
            f(self.case2b_best_f1),
        ]
    }
}

/// One cell: every case, the apogee baseline and the comparison.
pub fn sweep_cell(
    e: f64,
    alpha_deg: f64,
    opts: &SolveOptions,
) -> Result<SweepRecord, RotatedError> {
    let inp = params_from_angle(e, alpha_deg)?;
    let sol = solve_rotated(&inp, opts)?;
    let apogee_f1 = apogee_to_apogee_cost(&inp).map_or(f64::NAN, |a| a.f1);
    let case2b_best_f1 = sol
        .all
        .iter()
        .filter(|c| matches!(c.case_tag, CaseTag::Case2bClosed | CaseTag::Case2bGeneral))
        .map(|c| c.f1)
        .fold(f64::NAN, f64::min);
    let w = &sol.winner;
    Ok(SweepRecord {
        e,
        alpha_deg,
        a: inp.a,
        b: inp.b,
        best_f1: w.f1,
        best_case: w.case_tag,
        separation_deg: w.separation_angle_deg,
        apogee_f1,
        ratio_pct: 100.0 * w.f1 / apogee_f1,
        case1_found: sol.all.iter().any(|c| c.case_tag == CaseTag::Case1),
        case2b_best_f1,
    })
}

/// Cells in e-major order, computed in parallel on the current rayon pool.
pub fn sweep(
    es: &[f64],
    alphas: &[f64],
    opts: &SolveOptions,
) -> Result<Vec<SweepRecord>, RotatedError> {
    let cells: Vec<(f64, f64)> = es
        .iter()
        .flat_map(|&e| alphas.iter().map(move |&a| (e, a)))
        .collect();
    cells
        .par_iter()
        .map(|&(e, a)| sweep_cell(e, a, opts))
        .collect()
}

/// `lo, lo + step, ...` up to `hi` inclusive, robust to rounding.
pub fn range_inclusive(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if step.is_nan() || step <= 0.0 || hi < lo {
        return vec![];
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| lo + step * i as f64)
        .map(|x| (x * 1e9).round() / 1e9)
        .collect()
}
