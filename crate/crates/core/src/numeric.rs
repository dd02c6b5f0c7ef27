//! Small floating-point helpers: damped Newton on polynomial systems and
//! golden-section line search.

use nalgebra::{DMatrix, DVector};

use crate::poly::{CompiledPoly, MPoly};

/// Polynomial system compiled to `f64` together with its Jacobian.
#[derive(Clone, Debug)]
pub struct PolySystem {
    eqs: Vec<CompiledPoly>,
    jac: Vec<Vec<CompiledPoly>>,
}

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl PolySystem {
    /// All equations must share the variable list `vars`, which fixes the
    /// order of the unknowns.
    pub fn new(eqs: &[MPoly], vars: &[&str]) -> Self {
        let eqs: Vec<MPoly> = eqs
            .iter()
            .map(|e| e.with_vars(vars).expect("variables of the system"))
            .collect();
        let jac = eqs
            .iter()
            .map(|e| {
                vars.iter()
                    .map(|v| e.partial(v).unwrap().compile())
                    .collect()
            })
            .collect();
        PolySystem {
            eqs: eqs.iter().map(|e| e.compile()).collect(),
            jac,
        }
    }

    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn residual(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.eqs.len(), self.eqs.iter().map(|e| e.eval(x)))
    }

    pub fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        DMatrix::from_fn(self.eqs.len(), n, |i, j| self.jac[i][j].eval(x))
    }

    /// Levenberg-Marquardt iteration from `x0`; stops once the residual norm
    /// is below `tol` or no further progress is made.
    pub fn solve(&self, x0: &[f64], tol: f64, max_iter: usize) -> NewtonOutcome {
        let n = x0.len();
        let mut x = DVector::from_column_slice(x0);
        let mut f = self.residual(x.as_slice());
        let mut norm = f.norm();
        let mut mu = 1e-6;
        let mut it = 0;
        while it < max_iter && norm > tol && norm.is_finite() {
            it += 1;
            let j = self.jacobian(x.as_slice());
            let jt = j.transpose();
            let g = &jt * &f;
            let jtj = &jt * &j;
            let mut improved = false;
            for _ in 0..12 {
                let mut a = jtj.clone();
                for k in 0..n {
                    a[(k, k)] += mu * (1.0 + jtj[(k, k)]);
                }
                let Some(step) = a.lu().solve(&(-&g)) else {
                    mu *= 10.0;
                    continue;
                };
                let xn = &x + &step;
                let fn_ = self.residual(xn.as_slice());
                let nn = fn_.norm();
                if nn.is_finite() && nn < norm {
                    let tiny = step.norm() <= 1e-16 * (1.0 + x.norm());
                    x = xn;
                    f = fn_;
                    norm = nn;
                    mu = (mu / 3.0).max(1e-15);
                    improved = !tiny;
                    break;
                }
                mu *= 4.0;
            }
            if !improved {
                break;
            }
        }
        NewtonOutcome {
            x: x.as_slice().to_vec(),
            residual: norm,
            iterations: it,
            converged: norm <= tol,
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[a, b]`. Returns
/// `(argmin, min)`.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Scans `f` on a grid of `n` points over `[a, b]`, then refines around the
/// best grid point (ties go to the lowest index). Non-finite values count as
/// `+inf`.
pub fn scan_then_refine<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> (f64, f64) {
    let n = n.max(3);
    let h = (b - a) / (n - 1) as f64;
    let mut best = (a, f64::INFINITY, 0usize);
    for i in 0..n {
        let x = a + h * i as f64;
        let v = f(x);
        let v = if v.is_finite() { v } else { f64::INFINITY };
        if v < best.1 {
            best = (x, v, i);
        }
    }
    if !best.1.is_finite() {
        return (best.0, f64::INFINITY);
    }
    let lo = (best.0 - h).max(a);
    let hi = (best.0 + h).min(b);
    let (x, v) = golden_section(
        |t| {
            let v = f(t);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        },
        lo,
        hi,
        200,
    );
    if v <= best.1 {
        (x, v)
    } else {
        (best.0, best.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -2.0, 5.0, 200);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-14);
        let (x, _) = scan_then_refine(|x| (x + 1.25).abs(), -3.0, 3.0, 50);
        assert!((x + 1.25).abs() < 1e-9);
    }

    #[test]
    fn newton_on_circle_and_line() {
        let c: MPoly = "x^2 + y^2 - 1".parse().unwrap();
        let l: MPoly = "x - y".parse().unwrap();
        let sys = PolySystem::new(&[c, l], &["x", "y"]);
        let out = sys.solve(&[2.0, 0.5], 1e-14, 50);
        assert!(out.converged);
        let h = 0.5f64.sqrt();
        assert!((out.x[0] - h).abs() < 1e-12 && (out.x[1] - h).abs() < 1e-12);
    }
}
