//! Warped products `(R^{n-1} × R, e^{-4νt} δ + dt²)` over flat fibers, their
//! imaginary Killing spinors of type I, and the structural residual checks
//! (length function, q-invariant, Clifford orthogonality, t-action).
//!
//! Frame ordering: spatial fiber directions first, `e_n = ∂/∂t` last; the
//! t-direction gamma is the last generator, which fixes the embedding of the
//! fiber Clifford algebra into the total one:
//! - even fiber dimension `m`: total gammas `(γ^F_1..γ^F_m, i·ω_F)` on the
//!   fiber module, with `ω_F` the fiber volume element; the base spinor is a
//!   `+1` volume eigenvector;
//! - odd fiber dimension `m`: the doubled fiber module with
//!   `Γ_i = diag(γ^F_i, -γ^F_i)` and `Γ_t = [[0, I], [-I, 0]]`; the base
//!   spinor is `(ψ, iψ)/√2` for a unit fiber spinor ψ.
//! Both choices make `Γ_t σ₀ = i σ₀`, so `σ = e^{-νt} σ₀` has length
//! `f = e^{-2νt}` and Killing constant `μ = iν`.

use crate::clifford::CliffordRep;
use crate::error::{Result, SpinLabError};
use crate::geometry::{Backend, ChartPatch, SharedBackend};
use crate::linalg::{ceye, CMatrix, CVector, C64, RMatrix, I, ONE};
use crate::spinor::SpinorField;
use std::sync::Arc;

/// The warped-product space with its chart backend and total Clifford
/// representation.
#[derive(Clone)]
pub struct WarpedProduct {
    pub fiber_dim: usize,
    pub nu: f64,
    pub backend: SharedBackend,
    pub rep: Arc<CliffordRep>,
}

/// Summary of the q-invariant `q_σ = f² - |∇f|²/(4ν²)` over samples.
#[derive(Debug, Clone)]
pub struct QReport {
    pub mean: f64,
    pub spread: f64,
}

impl WarpedProduct {
    /// Build the chart `diag(e^{-4νt} Id_{n-1}, 1)` on
    /// `(-1,1)^{n-1} × (-1,1)` and the adapted Clifford representation.
    pub fn build(fiber_dim: usize, nu: f64) -> Result<Self> {
        if fiber_dim < 1 {
            return Err(SpinLabError::InvalidParameter(
                "fiber dimension must be >= 1".into(),
            ));
        }
        if !(nu > 0.0) {
            return Err(SpinLabError::InvalidParameter(format!(
                "warping rate nu must be positive, got {nu}"
            )));
        }
        let n = fiber_dim + 1;
        let metric = move |x: &[f64]| {
            let t = x[n - 1];
            let w = (-4.0 * nu * t).exp();
            RMatrix::from_fn(n, n, |i, j| {
                if i != j {
                    0.0
                } else if i < n - 1 {
                    w
                } else {
                    1.0
                }
            })
        };
        let chart = ChartPatch::new(
            n,
            vec![(-1.0, 1.0); n],
            Arc::new(metric),
            format!("warped(fiber={fiber_dim},nu={nu})"),
        );
        let fiber = CliffordRep::build(fiber_dim)?;
        let gammas: Vec<CMatrix> = if fiber_dim % 2 == 0 {
            let vol = fiber.volume_element();
            let mut g: Vec<CMatrix> = (0..fiber_dim).map(|i| fiber.gamma(i).clone()).collect();
            g.push(vol.matrix * I);
            g
        } else {
            let doubled = fiber.doubled()?;
            let ns = fiber.spinor_dim();
            let mut g: Vec<CMatrix> = (0..fiber_dim).map(|i| doubled.gamma(i).clone()).collect();
            let mut gt = CMatrix::zeros(2 * ns, 2 * ns);
            gt.view_mut((0, ns), (ns, ns)).copy_from(&ceye(ns));
            gt.view_mut((ns, 0), (ns, ns)).copy_from(&(ceye(ns) * -ONE));
            g.push(gt);
            g
        };
        let rep = Arc::new(CliffordRep::from_gammas(gammas)?);
        Ok(WarpedProduct {
            fiber_dim,
            nu,
            backend: Arc::new(Backend::Chart(chart)),
            rep,
        })
    }

    pub fn dim(&self) -> usize {
        self.fiber_dim + 1
    }

    /// Index of the `∂/∂t` frame direction.
    pub fn t_index(&self) -> usize {
        self.fiber_dim
    }

    /// Expected Einstein constant `-4ν²(n-1)`.
    pub fn einstein_constant(&self) -> f64 {
        -4.0 * self.nu * self.nu * (self.dim() as f64 - 1.0)
    }

    /// The unit base spinor `σ₀` with `Γ_t σ₀ = i σ₀`.
    pub fn base_spinor(&self) -> Result<CVector> {
        let m = self.fiber_dim;
        let fiber = CliffordRep::build(m)?;
        if m % 2 == 0 {
            // +1 eigenvector of the fiber volume element
            let (p_plus, _) = fiber.volume_element().projectors();
            let mut best: Option<CVector> = None;
            for c in 0..p_plus.ncols() {
                let col: CVector = p_plus.column(c).into_owned();
                if col.norm() > 0.5 {
                    best = Some(col.clone() / C64::from(col.norm()));
                    break;
                }
            }
            best.ok_or_else(|| {
                SpinLabError::EmptyEigenspace("fiber volume +1 eigenspace is empty".into())
            })
        } else {
            let ns = fiber.spinor_dim();
            let mut s = CVector::zeros(2 * ns);
            let inv_sqrt2 = C64::from(1.0 / 2.0f64.sqrt());
            s[0] = inv_sqrt2;
            s[ns] = I * inv_sqrt2;
            Ok(s)
        }
    }

    /// The type-I spinor `σ = e^{-νt} σ₀`.
    pub fn type1_spinor(&self) -> Result<SpinorField> {
        let s0 = self.base_spinor()?;
        let nu = self.nu;
        let t_idx = self.t_index();
        SpinorField::from_fn(
            self.backend.clone(),
            self.rep.clone(),
            Arc::new(move |x: &[f64]| &s0 * C64::from((-nu * x[t_idx]).exp())),
            format!("type1(nu={nu})"),
        )
    }

    /// The Killing constant `μ = iν`.
    pub fn mu(&self) -> C64 {
        I * self.nu
    }

    /// `q_σ = f² - |∇f|²/(4ν²)` over samples: mean and max deviation.
    pub fn q_sigma(&self, sigma: &SpinorField, samples: &[Vec<f64>]) -> QReport {
        let f = |y: &[f64]| sigma.length(y);
        let mut values = Vec::with_capacity(samples.len());
        for x in samples {
            let fx = sigma.length(x);
            let grad = self.backend.frame_gradient(&f, x);
            let grad2: f64 = grad.iter().map(|v| v * v).sum();
            values.push(fx * fx - grad2 / (4.0 * self.nu * self.nu));
        }
        let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
        let spread = values
            .iter()
            .map(|v| (v - mean).abs())
            .fold(0.0f64, f64::max);
        QReport { mean, spread }
    }

    /// Max residual of `Re⟨e_i·σ, e_j·σ⟩ = δ_ij f` over samples and pairs.
    pub fn orthogonality_residual(&self, sigma: &SpinorField, samples: &[Vec<f64>]) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for x in samples {
            let s = sigma.at(x);
            let f = sigma.length(x);
            let acted: Vec<CVector> = (0..n).map(|i| self.rep.gamma(i) * &s).collect();
            for i in 0..n {
                for j in 0..n {
                    let re = acted[i].dotc(&acted[j]).re;
                    let expect = if i == j { f } else { 0.0 };
                    worst = worst.max((re - expect).abs());
                }
            }
        }
        worst
    }

    /// Max residual of the length function against `e^{-2νt}` over samples.
    pub fn length_residual(&self, sigma: &SpinorField, samples: &[Vec<f64>]) -> f64 {
        samples
            .iter()
            .map(|x| (sigma.length(x) - (-2.0 * self.nu * x[self.t_index()]).exp()).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::t_eigen_residual;

    #[test]
    fn h3_model_has_constant_negative_curvature() {
        let w = WarpedProduct::build(2, 0.5).unwrap();
        let x = vec![0.2, -0.1, 0.3];
        let curv = w.backend.curvature(&x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(
                        (curv.r(i, j, i, j) + 1.0).abs() < 1e-6,
                        "R({i},{j},{i},{j}) = {}",
                        curv.r(i, j, i, j)
                    );
                }
            }
        }
        assert!((curv.scalar + 6.0).abs() < 1e-5);
        // Einstein constant -4ν²(n-1) = -2
        assert!(w.backend.verify_einstein(&[x], -2.0).unwrap() < 1e-6);
    }

    #[test]
    fn t0_slice_metric_is_identity() {
        let w = WarpedProduct::build(3, 0.7).unwrap();
        if let Backend::Chart(c) = w.backend.as_ref() {
            let g = c.metric_at(&[0.1, 0.2, -0.3, 0.0]).unwrap();
            assert!((g - RMatrix::identity(4, 4)).norm() < 1e-14);
        } else {
            panic!("warped backend must be a chart");
        }
    }

    #[test]
    fn type1_killing_residual_even_fiber() {
        let w = WarpedProduct::build(2, 0.5).unwrap();
        let sigma = w.type1_spinor().unwrap();
        let samples = w.backend.sample_points(5, 7);
        let res = sigma.killing_residual(w.mu(), &samples).unwrap();
        assert!(res <= 1e-7, "residual {res}");
        // negative control: wrong sign of nu
        let bad = sigma.killing_residual(-w.mu(), &samples).unwrap();
        assert!(bad > 0.1 * w.nu, "negative control too small: {bad}");
    }

    #[test]
    fn type1_killing_residual_odd_fiber() {
        let w = WarpedProduct::build(3, 0.3).unwrap();
        let sigma = w.type1_spinor().unwrap();
        let samples = w.backend.sample_points(5, 17);
        let res = sigma.killing_residual(w.mu(), &samples).unwrap();
        assert!(res <= 1e-7, "residual {res}");
        // scalar curvature 4 n (n-1) mu^2 with mu^2 = -nu^2
        let curv = w.backend.curvature(&samples[0]).unwrap();
        let expect = 4.0 * 4.0 * 3.0 * -(0.3f64 * 0.3);
        assert!((curv.scalar - expect).abs() < 1e-5, "{}", curv.scalar);
    }

    #[test]
    fn structural_facts_hold() {
        for (m, nu) in [(2usize, 0.5f64), (3, 0.3)] {
            let w = WarpedProduct::build(m, nu).unwrap();
            let sigma = w.type1_spinor().unwrap();
            let samples = w.backend.sample_points(10, 3);
            let q = w.q_sigma(&sigma, &samples);
            assert!(q.mean.abs() <= 1e-8, "q mean {}", q.mean);
            assert!(q.spread <= 1e-8, "q spread {}", q.spread);
            assert!(w.length_residual(&sigma, &samples) <= 1e-9);
            assert!(w.orthogonality_residual(&sigma, &samples) <= 1e-8);
            for x in &samples {
                assert!(t_eigen_residual(&sigma, w.t_index(), x) <= 1e-8);
            }
        }
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(WarpedProduct::build(0, 0.5).is_err());
        assert!(WarpedProduct::build(2, 0.0).is_err());
        assert!(WarpedProduct::build(2, -1.0).is_err());
    }
}
