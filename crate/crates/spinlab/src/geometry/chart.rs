//! Coordinate-chart backend with finite-difference tensor calculus.

use super::{require_dim, CurvatureData, FrameConnection};
use crate::error::{Result, SpinLabError};
use crate::fd;
use crate::linalg::{LinearCombine, RMatrix};
use std::sync::Arc;

pub type MetricFn = Arc<dyn Fn(&[f64]) -> RMatrix + Send + Sync>;
pub type FrameFn = Arc<dyn Fn(&[f64]) -> RMatrix + Send + Sync>;

/// A single-patch chart presentation of a manifold.
///
/// `metric(x)` returns coordinate components `g_ab`; the orthonormal frame is
/// metric Gram-Schmidt of the coordinate basis in fixed column order unless a
/// smooth `frame` override is supplied (circle bundles use the horizontal
/// lift frame, which Gram-Schmidt would not reproduce).
#[derive(Clone)]
pub struct ChartPatch {
    pub dim: usize,
    pub domain: Vec<(f64, f64)>,
    pub metric: MetricFn,
    pub frame: Option<FrameFn>,
    pub fd_step: f64,
    pub label: String,
}

impl ChartPatch {
    pub fn new(
        dim: usize,
        domain: Vec<(f64, f64)>,
        metric: MetricFn,
        label: impl Into<String>,
    ) -> Self {
        ChartPatch {
            dim,
            domain,
            metric,
            frame: None,
            fd_step: 1e-3,
            label: label.into(),
        }
    }

    pub fn with_frame(mut self, frame: FrameFn) -> Self {
        self.frame = Some(frame);
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && x.iter()
                .zip(self.domain.iter())
                .all(|(v, &(lo, hi))| *v >= lo && *v <= hi)
    }

    pub fn metric_at(&self, x: &[f64]) -> Result<RMatrix> {
        require_dim(self.dim, x.len())?;
        if !self.contains(x) {
            return Err(SpinLabError::OutsideDomain(x.to_vec()));
        }
        let g = (self.metric)(x);
        let min_eig = g
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig <= 0.0 {
            return Err(SpinLabError::DegenerateMetric(min_eig));
        }
        Ok(g)
    }

    /// Orthonormal frame at `x`; columns are frame vectors in the coordinate
    /// basis: `e_i = sum_a F[(a, i)] ∂_a`.
    pub fn frame_at(&self, x: &[f64]) -> RMatrix {
        if let Some(f) = &self.frame {
            return f(x);
        }
        gram_schmidt(&(self.metric)(x))
    }

    /// Frame with its first coordinate derivatives `(F, [∂_a F])`.
    pub fn frame_with_derivatives(&self, x: &[f64]) -> Result<(RMatrix, Vec<RMatrix>)> {
        require_dim(self.dim, x.len())?;
        self.metric_at(x)?;
        let f = self.frame_at(x);
        let frame_field = |y: &[f64]| self.frame_at(y);
        let derivs = (0..self.dim)
            .map(|a| fd::partial(&frame_field, x, a, self.fd_step))
            .collect();
        Ok((f, derivs))
    }

    /// Coordinate Christoffel symbols `Gamma[c][(a, b)]`.
    pub fn christoffel(&self, x: &[f64]) -> Result<Vec<RMatrix>> {
        require_dim(self.dim, x.len())?;
        let n = self.dim;
        let g = self.metric_at(x)?;
        let g_inv = g
            .clone()
            .try_inverse()
            .ok_or(SpinLabError::DegenerateMetric(0.0))?;
        let metric_fn = |y: &[f64]| (self.metric)(y);
        let dg: Vec<RMatrix> = (0..n)
            .map(|a| fd::partial(&metric_fn, x, a, self.fd_step))
            .collect();
        let mut gamma = vec![RMatrix::zeros(n, n); n];
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for d in 0..n {
                        s += g_inv[(c, d)] * (dg[a][(b, d)] + dg[b][(a, d)] - dg[d][(a, b)]);
                    }
                    gamma[c][(a, b)] = 0.5 * s;
                }
            }
        }
        Ok(gamma)
    }

    /// Connection 1-form components in the orthonormal frame.
    pub fn frame_connection(&self, x: &[f64]) -> Result<FrameConnection> {
        let n = self.dim;
        let g = self.metric_at(x)?;
        let f = self.frame_at(x);
        let gamma = self.christoffel(x)?;
        let frame_field = |y: &[f64]| self.frame_at(y);
        // nabla_{E_k} E_i in coordinate components.
        let mut omega = vec![RMatrix::zeros(n, n); n];
        for k in 0..n {
            let dir: Vec<f64> = (0..n).map(|a| f[(a, k)]).collect();
            let df: RMatrix = fd::directional(&frame_field, x, &dir, self.fd_step);
            for i in 0..n {
                // coordinate components of nabla_{E_k} E_i
                let mut cov = vec![0.0; n];
                for (c, cov_c) in cov.iter_mut().enumerate() {
                    *cov_c = df[(c, i)];
                    for b in 0..n {
                        for a in 0..n {
                            *cov_c += f[(b, k)] * f[(a, i)] * gamma[c][(b, a)];
                        }
                    }
                }
                for j in 0..n {
                    let mut s = 0.0;
                    for c in 0..n {
                        for d in 0..n {
                            s += cov[c] * g[(c, d)] * f[(d, j)];
                        }
                    }
                    omega[k][(i, j)] = s;
                }
            }
        }
        Ok(FrameConnection { omega })
    }

    /// Riemann curvature in frame components (see module docs for the sign
    /// convention).
    pub fn curvature(&self, x: &[f64]) -> Result<CurvatureData> {
        let n = self.dim;
        let g = self.metric_at(x)?;
        let f = self.frame_at(x);
        let gamma = self.christoffel(x)?;
        let gamma_field = |y: &[f64]| self.christoffel(y).expect("christoffel inside domain");
        let mut dgamma: Vec<Vec<RMatrix>> = Vec::with_capacity(n);
        let mut fd_error: f64 = 0.0;
        for a in 0..n {
            let (d, est) = fd::partial_est(&gamma_field, x, a, self.fd_step);
            fd_error = fd_error.max(est);
            dgamma.push(d);
        }
        // Coordinate Riemann, convention R(∂a,∂b)∂c = R^d_cab ∂d with
        // R^d_cab = ∂a Γ^d_bc - ∂b Γ^d_ac + Γ^d_ae Γ^e_bc - Γ^d_be Γ^e_ac.
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        let mut lower = vec![0.0; n * n * n * n]; // R_abcd = g_de R^e_cab
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut rd = dgamma[a][d][(b, c)] - dgamma[b][d][(a, c)];
                        for e in 0..n {
                            rd += gamma[d][(a, e)] * gamma[e][(b, c)]
                                - gamma[d][(b, e)] * gamma[e][(a, c)];
                        }
                        // accumulate lowered tensor R_abcd = g_de R^e_cab
                        for dd in 0..n {
                            lower[idx(a, b, c, dd)] += g[(dd, d)] * rd;
                        }
                    }
                }
            }
        }
        // Project to the frame and flip the sign to the crate convention.
        let mut riemann = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for a in 0..n {
                            for b in 0..n {
                                for c in 0..n {
                                    for d in 0..n {
                                        s += f[(a, i)]
                                            * f[(b, j)]
                                            * f[(c, k)]
                                            * f[(d, l)]
                                            * lower[idx(a, b, c, d)];
                                    }
                                }
                            }
                        }
                        riemann[idx(i, j, k, l)] = -s;
                    }
                }
            }
        }
        Ok(CurvatureData::from_riemann(
            riemann,
            n,
            x.to_vec(),
            fd_error,
        ))
    }

    pub(crate) fn frame_dirderiv<T: LinearCombine>(
        &self,
        field: &dyn Fn(&[f64]) -> T,
        x: &[f64],
        k: usize,
    ) -> T {
        let f = self.frame_at(x);
        let dir: Vec<f64> = (0..self.dim).map(|a| f[(a, k)]).collect();
        fd::directional(field, x, &dir, self.fd_step)
    }
}

/// Metric Gram-Schmidt of the coordinate basis in fixed column order.
fn gram_schmidt(g: &RMatrix) -> RMatrix {
    let n = g.nrows();
    let mut f = RMatrix::identity(n, n);
    for i in 0..n {
        let mut v = f.column(i).into_owned();
        for j in 0..i {
            let u = f.column(j).into_owned();
            let proj = (u.transpose() * g * &v)[(0, 0)];
            v -= u * proj;
        }
        let norm = (v.transpose() * g * &v)[(0, 0)].sqrt();
        f.set_column(i, &(v / norm));
    }
    f
}
