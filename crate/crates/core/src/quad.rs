//! Quadrature kernels: adaptive Simpson for the dephasing integral and a
//! fixed per-interval rule for cumulative speed integrals along a time grid.

use crate::error::{Error, Result};

const MAX_DEPTH: usize = 48;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`. Errors if the recursion depth limit is hit before the local error
/// estimate falls under the (subdivided) tolerance.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, fa, m, fm, b, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (b - a).abs() < f64::EPSILON * (a.abs() + b.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureTolerance {
            a,
            b,
            tolerance: tol,
            estimate: delta.abs() / 15.0,
        });
    }
    // Halving the budget per level underflows past what f64 sums can
    // resolve on deep recursions; floor it at the local round-off scale.
    let half = (0.5 * tol).max(0.5 * f64::EPSILON * whole.abs());
    Ok(recurse(f, a, fa, lm, flm, m, fm, left, half, depth - 1)?
        + recurse(f, m, fm, rm, frm, b, fb, right, half, depth - 1)?)
}

// 4-point Gauss-Legendre abscissae/weights on [-1, 1].
const GL4_X: [f64; 2] = [0.339_981_043_584_856_3, 0.861_136_311_594_052_6];
const GL4_W: [f64; 2] = [0.652_145_154_862_546_1, 0.347_854_845_137_453_85];

/// 4-point Gauss-Legendre quadrature on `[a, b]`. Open rule: never samples
/// the endpoints.
pub fn gauss4<F>(f: &F, a: f64, b: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (&x, &w) in GL4_X.iter().zip(GL4_W.iter()) {
        s += w * (f(c + h * x) + f(c - h * x));
    }
    s * h
}

/// Two-panel Simpson with Richardson extrapolation on `[a, b]`.
///
/// Clamped at zero so non-negative integrands always produce non-negative
/// increments.
pub fn simpson_cell<F>(f: &F, a: f64, b: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let h = b - a;
    let f0 = f(a);
    let f1 = f(a + 0.25 * h);
    let f2 = f(a + 0.5 * h);
    let f3 = f(a + 0.75 * h);
    let f4 = f(b);
    let coarse = h / 6.0 * (f0 + 4.0 * f2 + f4);
    let fine = h / 12.0 * (f0 + 4.0 * f1 + 2.0 * f2 + 4.0 * f3 + f4);
    (fine + (fine - coarse) / 15.0).max(0.0)
}

/// Cumulative integral of `f` along a strictly increasing grid.
///
/// Returns one value per grid point, starting at 0. The first cell uses the
/// open Gauss rule: the speed integrands can carry a removable discontinuity
/// at t = 0 (zero derivative over a vanishing population), and sampling the
/// t = 0 point directly would lose the first cell almost entirely.
pub fn cumulative_on_grid<F>(f: &F, grid: &[f64]) -> Vec<f64>
where
    F: Fn(f64) -> f64,
{
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..grid.len() {
        let (a, b) = (grid[i - 1], grid[i]);
        acc += if i == 1 {
            gauss4(f, a, b)
        } else {
            simpson_cell(f, a, b)
        };
        out.push(acc);
    }
    out
}

/// One extra cell past the end of a cumulative grid, `[a, b]` with `a` the
/// last grid point covered by `acc`.
pub fn extend_cell<F>(f: &F, a: f64, b: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if b <= a {
        0.0
    } else {
        simpson_cell(f, a, b)
    }
}
