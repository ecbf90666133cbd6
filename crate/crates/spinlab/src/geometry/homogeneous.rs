//! Homogeneous frame-algebra backend: exact connection and curvature from
//! structure constants of a left-invariant orthonormal frame.

use super::{CurvatureData, FrameConnection};
use crate::error::{Result, SpinLabError};
use crate::linalg::RMatrix;

/// A homogeneous space presented by structure constants `c^k_{ij}` of an
/// orthonormal invariant frame: `[e_i, e_j] = c^k_{ij} e_k`, metric identity.
#[derive(Debug, Clone)]
pub struct HomogeneousFrame {
    pub dim: usize,
    /// `c[k][(i, j)] = c^k_{ij}`.
    pub structure_constants: Vec<RMatrix>,
    pub label: String,
    /// Koszul connection coefficients `conn[i][(j, k)] = g(∇_{e_i} e_j, e_k)`.
    conn: Vec<RMatrix>,
}

impl HomogeneousFrame {
    pub fn new(
        dim: usize,
        structure_constants: Vec<RMatrix>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if structure_constants.len() != dim {
            return Err(SpinLabError::DimensionMismatch {
                expected: dim,
                got: structure_constants.len(),
            });
        }
        let c = |k: usize, i: usize, j: usize| structure_constants[k][(i, j)];
        let mut anti: f64 = 0.0;
        for k in 0..dim {
            anti = anti.max((&structure_constants[k] + structure_constants[k].transpose()).norm());
        }
        if anti > 1e-12 {
            return Err(SpinLabError::BadStructureConstants("antisymmetry", anti));
        }
        // Jacobi: sum over cyclic (i,j,k) of c^m_{il} c^l_{jk} = 0.
        let mut jacobi: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for m in 0..dim {
                        let mut s = 0.0;
                        for l in 0..dim {
                            s += c(m, i, l) * c(l, j, k)
                                + c(m, j, l) * c(l, k, i)
                                + c(m, k, l) * c(l, i, j);
                        }
                        jacobi = jacobi.max(s.abs());
                    }
                }
            }
        }
        if jacobi > 1e-12 {
            return Err(SpinLabError::BadStructureConstants("Jacobi identity", jacobi));
        }
        // Koszul formula in an invariant orthonormal frame:
        // 2 g(∇_i e_j, e_k) = c^k_ij - c^i_jk + c^j_ki.
        let mut conn = vec![RMatrix::zeros(dim, dim); dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    conn[i][(j, k)] = 0.5 * (c(k, i, j) - c(i, j, k) + c(j, k, i));
                }
            }
        }
        Ok(HomogeneousFrame {
            dim,
            structure_constants,
            label: label.into(),
            conn,
        })
    }

    /// Round 3-sphere as SU(2): `c^k_{ij} = s * eps_ijk` for scale `s`.
    /// `s = -2` gives the unit sphere whose constant spinors are Killing
    /// with constant `+1/2`; `s = +2` gives the opposite orientation
    /// (Killing constant `-1/2`). Curvature is `+1` either way.
    pub fn s3(scale: f64) -> Self {
        let eps = |i: usize, j: usize, k: usize| -> f64 {
            match (i, j, k) {
                (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                _ => 0.0,
            }
        };
        let mut c = vec![RMatrix::zeros(3, 3); 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    c[k][(i, j)] = scale * eps(i, j, k);
                }
            }
        }
        HomogeneousFrame::new(3, c, format!("S3(su2,scale={scale})")).expect("su2 algebra")
    }

    pub fn connection_coefficient(&self, i: usize, j: usize, k: usize) -> f64 {
        self.conn[i][(j, k)]
    }

    pub fn frame_connection(&self) -> FrameConnection {
        FrameConnection {
            omega: self.conn.clone(),
        }
    }

    /// Torsion residual `∇_i e_j - ∇_j e_i - [e_i, e_j]` (zero for the
    /// Levi-Civita connection; exposed as a construction self-check).
    pub fn torsion_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let t = self.conn[i][(j, k)]
                        - self.conn[j][(i, k)]
                        - self.structure_constants[k][(i, j)];
                    worst = worst.max(t.abs());
                }
            }
        }
        worst
    }

    /// Exact curvature from the frame algebra (constant over the space).
    pub fn curvature(&self) -> CurvatureData {
        let n = self.dim;
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        let mut riemann = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        // common convention: R(e_i,e_j)e_k
                        //   = ∇_i ∇_j e_k - ∇_j ∇_i e_k - ∇_{[e_i,e_j]} e_k
                        let mut s = 0.0;
                        for m in 0..n {
                            s += self.conn[j][(k, m)] * self.conn[i][(m, l)]
                                - self.conn[i][(k, m)] * self.conn[j][(m, l)]
                                - self.structure_constants[m][(i, j)] * self.conn[m][(k, l)];
                        }
                        riemann[idx(i, j, k, l)] = -s;
                    }
                }
            }
        }
        CurvatureData::from_riemann(riemann, n, vec![0.0; n], 0.0)
    }
}
