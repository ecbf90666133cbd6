//! Manifold backends and curvature.
//!
//! A manifold is presented either as a coordinate chart (metric closure,
//! numerically differentiated) or as a homogeneous frame algebra (structure
//! constants, exact algebra). All downstream tensor and spinor calculus is
//! done in orthonormal-frame components.
//!
//! Curvature sign convention: `R_{XY} = -∇_X ∇_Y + ∇_Y ∇_X + ∇_{[X,Y]}` and
//! `R(i,j,k,l) = g(R_{e_i e_j} e_k, e_l)`, anchored so the unit round sphere
//! has `R(i,j,i,j) = +1`. With this storage, constant-curvature spaces give
//! `R(i,j,k,l) = kappa (delta_ik delta_jl - delta_il delta_jk)`, the Ricci
//! contraction is `Ric_jl = sum_i R(i,j,i,l)`, and the tensor curvature
//! action is `(R̊h)_ij = sum_kl R(i,k,j,l) h_kl`.

mod chart;
mod homogeneous;

pub use chart::ChartPatch;
pub use homogeneous::HomogeneousFrame;

use crate::error::{Result, SpinLabError};
use crate::linalg::{LinearCombine, RMatrix};
use crate::rng::SplitMix64;
use std::sync::Arc;

/// Frame components of the Levi-Civita connection:
/// `omega[k][(i, j)] = g(∇_{e_k} e_i, e_j)`, antisymmetric in `(i, j)`.
#[derive(Debug, Clone)]
pub struct FrameConnection {
    pub omega: Vec<RMatrix>,
}

impl FrameConnection {
    pub fn antisymmetry_residual(&self) -> f64 {
        self.omega
            .iter()
            .map(|m| (m + m.transpose()).norm())
            .fold(0.0, f64::max)
    }
}

/// Frame components of the Riemann tensor plus its contractions at a point.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    dim: usize,
    riemann: Vec<f64>,
    pub ricci: RMatrix,
    pub scalar: f64,
    pub at_point: Vec<f64>,
    /// Finite-difference error estimate for the Riemann components
    /// (zero on exact backends).
    pub fd_error: f64,
}

impl CurvatureData {
    pub(crate) fn from_riemann(riemann: Vec<f64>, dim: usize, at_point: Vec<f64>, fd_error: f64) -> Self {
        let mut data = CurvatureData {
            dim,
            riemann,
            ricci: RMatrix::zeros(dim, dim),
            scalar: 0.0,
            at_point,
            fd_error,
        };
        let mut ricci = RMatrix::zeros(dim, dim);
        for j in 0..dim {
            for l in 0..dim {
                let mut s = 0.0;
                for i in 0..dim {
                    s += data.r(i, j, i, l);
                }
                ricci[(j, l)] = s;
            }
        }
        data.scalar = ricci.trace();
        data.ricci = ricci;
        data
    }

    #[inline]
    pub fn r(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.dim;
        self.riemann[((i * n + j) * n + k) * n + l]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(R̊h)_ij = sum_kl R(i,k,j,l) h_kl`.
    pub fn curvature_action(&self, h: &RMatrix) -> RMatrix {
        let n = self.dim;
        RMatrix::from_fn(n, n, |i, j| {
            let mut s = 0.0;
            for k in 0..n {
                for l in 0..n {
                    s += self.r(i, k, j, l) * h[(k, l)];
                }
            }
            s
        })
    }

    /// Max residual of the pair symmetries and the first Bianchi identity.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.r(i, j, k, l);
                        worst = worst.max((r + self.r(j, i, k, l)).abs());
                        worst = worst.max((r + self.r(i, j, l, k)).abs());
                        worst = worst.max((r - self.r(k, l, i, j)).abs());
                        let bianchi = r + self.r(j, k, i, l) + self.r(k, i, j, l);
                        worst = worst.max(bianchi.abs());
                    }
                }
            }
        }
        worst
    }
}

/// A manifold presentation.
#[derive(Clone)]
pub enum Backend {
    Chart(ChartPatch),
    Homogeneous(HomogeneousFrame),
}

impl Backend {
    pub fn dim(&self) -> usize {
        match self {
            Backend::Chart(c) => c.dim,
            Backend::Homogeneous(h) => h.dim,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Backend::Chart(c) => &c.label,
            Backend::Homogeneous(h) => &h.label,
        }
    }

    pub fn is_chart(&self) -> bool {
        matches!(self, Backend::Chart(_))
    }

    /// A canonical base point (origin for homogeneous backends, domain
    /// center for charts).
    pub fn base_point(&self) -> Vec<f64> {
        match self {
            Backend::Chart(c) => c.domain.iter().map(|&(a, b)| 0.5 * (a + b)).collect(),
            Backend::Homogeneous(h) => vec![0.0; h.dim],
        }
    }

    /// Deterministic sample points inside the domain (margin 0.1).
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        match self {
            Backend::Chart(c) => {
                let mut rng = SplitMix64::new(seed);
                (0..count).map(|_| rng.point_in(&c.domain, 0.1)).collect()
            }
            // Homogeneous spaces carry constant fields; one point represents all.
            Backend::Homogeneous(h) => vec![vec![0.0; h.dim]; count.min(1).max(1)],
        }
    }

    pub fn frame_connection(&self, x: &[f64]) -> Result<FrameConnection> {
        match self {
            Backend::Chart(c) => c.frame_connection(x),
            Backend::Homogeneous(h) => Ok(h.frame_connection()),
        }
    }

    pub fn curvature(&self, x: &[f64]) -> Result<CurvatureData> {
        match self {
            Backend::Chart(c) => c.curvature(x),
            Backend::Homogeneous(h) => Ok(h.curvature()),
        }
    }

    /// Directional derivative of a field of frame components along frame
    /// direction `k`. On homogeneous backends the fields are constant by
    /// construction and the derivative term vanishes exactly.
    pub fn frame_dirderiv<T: LinearCombine>(
        &self,
        f: &dyn Fn(&[f64]) -> T,
        x: &[f64],
        k: usize,
    ) -> T {
        match self {
            Backend::Chart(c) => c.frame_dirderiv(f, x, k),
            Backend::Homogeneous(_) => T::scale(0.0, &f(x)),
        }
    }

    /// Gradient components `(e_1 f, ..., e_n f)` of a scalar field.
    pub fn frame_gradient(&self, f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|k| self.frame_dirderiv(f, x, k))
            .collect()
    }

    /// Max over sample points of `|Ric - k g|` in the orthonormal frame.
    pub fn verify_einstein(&self, samples: &[Vec<f64>], k: f64) -> Result<f64> {
        let n = self.dim();
        let id = RMatrix::identity(n, n);
        let mut worst: f64 = 0.0;
        for x in samples {
            let curv = self.curvature(x)?;
            worst = worst.max((&curv.ricci - &id * k).norm());
        }
        Ok(worst)
    }
}

pub(crate) fn require_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(SpinLabError::DimensionMismatch { expected, got })
    } else {
        Ok(())
    }
}

pub type SharedBackend = Arc<Backend>;
