//! Central-difference derivatives with one level of Richardson extrapolation.
//!
//! Every chart-backend derivative in the crate funnels through these helpers,
//! so the truncation-error estimate reported by [`partial_est`] bounds the
//! finite-difference error of any single differentiation level.

use crate::linalg::LinearCombine;

/// First partial derivative of `f` along coordinate axis `axis` at `x`.
///
/// Central stencil at steps `h` and `h/2`, Richardson-combined. Returns the
/// extrapolated value together with `|richardson - fine|` as an error estimate.
pub fn partial_est<T, F>(f: &F, x: &[f64], axis: usize, h: f64) -> (T, f64)
where
    T: LinearCombine,
    F: Fn(&[f64]) -> T + ?Sized,
{
    let coarse = central(f, x, axis, h);
    let fine = central(f, x, axis, h * 0.5);
    let rich = T::axpby(4.0 / 3.0, &fine, -1.0 / 3.0, &coarse);
    let est = T::axpby(1.0, &rich, -1.0, &fine).magnitude();
    (rich, est)
}

pub fn partial<T, F>(f: &F, x: &[f64], axis: usize, h: f64) -> T
where
    T: LinearCombine,
    F: Fn(&[f64]) -> T + ?Sized,
{
    partial_est(f, x, axis, h).0
}

fn central<T, F>(f: &F, x: &[f64], axis: usize, h: f64) -> T
where
    T: LinearCombine,
    F: Fn(&[f64]) -> T + ?Sized,
{
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[axis] += h;
    xm[axis] -= h;
    T::axpby(0.5 / h, &f(&xp), -0.5 / h, &f(&xm))
}

/// Directional derivative along a coordinate-basis combination `dir`.
pub fn directional<T, F>(f: &F, x: &[f64], dir: &[f64], h: f64) -> T
where
    T: LinearCombine,
    F: Fn(&[f64]) -> T + ?Sized,
{
    directional_est(f, x, dir, h).0
}

/// Directional derivative with Richardson error estimate.
///
/// Differentiates along the straight coordinate line `x + s*dir`, which keeps
/// the stencil one-dimensional regardless of the chart dimension.
pub fn directional_est<T, F>(f: &F, x: &[f64], dir: &[f64], h: f64) -> (T, f64)
where
    T: LinearCombine,
    F: Fn(&[f64]) -> T + ?Sized,
{
    let line = |s: f64| -> T {
        let p: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a + s * d).collect();
        f(&p)
    };
    let central1 = |step: f64| -> T { T::axpby(0.5 / step, &line(step), -0.5 / step, &line(-step)) };
    let coarse = central1(h);
    let fine = central1(h * 0.5);
    let rich = T::axpby(4.0 / 3.0, &fine, -1.0 / 3.0, &coarse);
    let est = T::axpby(1.0, &rich, -1.0, &fine).magnitude();
    (rich, est)
}
