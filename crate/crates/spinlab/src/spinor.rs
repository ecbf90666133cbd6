//! Spinor fields and spinor-valued 1-forms: spin connection, Killing
//! residuals, spinor-bundle curvature, the Φ map, the twisted Dirac operator,
//! and the Bochner-type identity verifier.
//!
//! Conventions, fixed once here:
//! - spin connection `∇^S_{e_k} σ = e_k(σ) + (1/4) Σ_{ij} ω_ij(e_k) γ_i γ_j σ`
//!   with `ω_ij(e_k) = g(∇_{e_k} e_i, e_j)`;
//! - curvature operator `R^S_{XY} = -∇^S_X ∇^S_Y + ∇^S_Y ∇^S_X + ∇^S_{[X,Y]}`,
//!   matching the sign stored by the geometry module;
//! - inner product on spinor-valued 1-forms: Hermitian on the spinor factor,
//!   Euclidean on the form factor, summed over the form index;
//! - the divergence term in the Bochner identity enters as the scalar
//!   multiple `-4μ (δh)_j σ ⊗ e^j` (no Clifford action on σ). This form is
//!   forced by expanding `-2μ (∇_k h)_ij e_i e_k · σ ⊗ e^j` over the Clifford
//!   relation: the `k = i` diagonal contributes `+2μ (∇_i h)_ij σ`, which
//!   combines with the symmetric off-diagonal part into
//!   `-4μ (δh)_j σ + 2μ e_k · Φ(∇_{e_k} h)`, a plain scalar on σ.

use crate::clifford::CliffordRep;
use crate::error::{Result, SpinLabError};
use crate::geometry::SharedBackend;
use crate::linalg::{hdot, mdot, CVector, C64, I};
use crate::tensor::SymTensorField;
use std::sync::Arc;

pub type SpinorComponents = Arc<dyn Fn(&[f64]) -> CVector + Send + Sync>;
pub type OneFormComponents = Arc<dyn Fn(&[f64]) -> Vec<CVector> + Send + Sync>;

/// A spinor-valued field in the lifted orthonormal frame.
#[derive(Clone)]
pub struct SpinorField {
    pub backend: SharedBackend,
    pub rep: Arc<CliffordRep>,
    value: SpinorComponents,
    pub label: String,
}

/// A section of (spinor bundle) ⊗ T*M: an array of `n` spinor components,
/// one per coframe element `e^j`.
#[derive(Clone)]
pub struct SpinorOneForm {
    pub backend: SharedBackend,
    pub rep: Arc<CliffordRep>,
    value: OneFormComponents,
    pub label: String,
}

/// Outcome of the real-Killing-constant pointwise integral identity on a
/// homogeneous backend with constant-component data.
#[derive(Debug, Clone)]
pub struct RealKillingReport {
    /// Residual of `⟨(∇*∇ - 2R̊)h, h⟩ = ⟨DΦ(h), DΦ(h)⟩ - 2μ Re⟨DΦ(h), Φ(h)⟩
    /// - n(n-2)μ² ⟨h, h⟩`.
    pub residual: f64,
    /// `|Im μ⟨DΦ(h), Φ(h)⟩|`, which the identity requires to vanish.
    pub cross_term_imag: f64,
}

impl SpinorField {
    pub fn from_fn(
        backend: SharedBackend,
        rep: Arc<CliffordRep>,
        value: SpinorComponents,
        label: impl Into<String>,
    ) -> Result<Self> {
        if rep.dim() != backend.dim() {
            return Err(SpinLabError::DimensionMismatch {
                expected: backend.dim(),
                got: rep.dim(),
            });
        }
        Ok(SpinorField {
            backend,
            rep,
            value,
            label: label.into(),
        })
    }

    pub fn constant(
        backend: SharedBackend,
        rep: Arc<CliffordRep>,
        s: CVector,
        label: impl Into<String>,
    ) -> Result<Self> {
        if s.len() != rep.spinor_dim() {
            return Err(SpinLabError::DimensionMismatch {
                expected: rep.spinor_dim(),
                got: s.len(),
            });
        }
        Self::from_fn(backend, rep, Arc::new(move |_| s.clone()), label)
    }

    /// Solve for a constant-component Killing spinor `∇^S_{e_k} s = μ γ_k s`
    /// on a homogeneous backend by linear algebra over constant spinors.
    pub fn solve_constant_killing(
        backend: SharedBackend,
        rep: Arc<CliffordRep>,
        mu: C64,
    ) -> Result<Self> {
        if backend.is_chart() {
            return Err(SpinLabError::UnsupportedBackend(
                "constant Killing solve needs a homogeneous backend".into(),
            ));
        }
        let n = backend.dim();
        let nspin = rep.spinor_dim();
        let x = backend.base_point();
        let conn = backend.frame_connection(&x)?;
        // Stack (A_k - mu gamma_k) with A_k the algebraic spin connection.
        let mut system = nalgebra::DMatrix::<C64>::zeros(n * nspin, nspin);
        for k in 0..n {
            let mut a_k = nalgebra::DMatrix::<C64>::zeros(nspin, nspin);
            for i in 0..n {
                for j in 0..n {
                    let w = conn.omega[k][(i, j)];
                    if w != 0.0 {
                        a_k += rep.gamma(i) * rep.gamma(j) * C64::from(0.25 * w);
                    }
                }
            }
            a_k -= rep.gamma(k) * mu;
            system
                .view_mut((k * nspin, 0), (nspin, nspin))
                .copy_from(&a_k);
        }
        let svd = system.svd(false, true);
        let (mut min_sv, mut arg) = (f64::INFINITY, 0);
        for (i, sv) in svd.singular_values.iter().enumerate() {
            if *sv < min_sv {
                min_sv = *sv;
                arg = i;
            }
        }
        if min_sv > 1e-10 {
            return Err(SpinLabError::EmptyEigenspace(format!(
                "no constant Killing spinor for mu={mu} (min singular value {min_sv:.3e})"
            )));
        }
        let v_t = svd.v_t.expect("requested");
        let s: CVector = v_t.row(arg).adjoint();
        Self::constant(backend, rep, s, format!("killing(mu={mu})"))
    }

    pub fn at(&self, x: &[f64]) -> CVector {
        (self.value)(x)
    }

    /// Length function `f(x) = ⟨σ, σ⟩`.
    pub fn length(&self, x: &[f64]) -> f64 {
        let s = self.at(x);
        hdot(&s, &s).re
    }

    /// `∇^S_{e_k} σ` at `x`.
    pub fn spin_covariant_derivative(&self, x: &[f64], k: usize) -> Result<CVector> {
        let conn = self.backend.frame_connection(x)?;
        let field = |y: &[f64]| self.at(y);
        let mut out = self.backend.frame_dirderiv(&field, x, k);
        let s = self.at(x);
        for i in 0..self.rep.dim() {
            for j in 0..self.rep.dim() {
                let w = conn.omega[k][(i, j)];
                if w != 0.0 {
                    out += self.rep.gamma(i) * (self.rep.gamma(j) * &s) * C64::from(0.25 * w);
                }
            }
        }
        Ok(out)
    }

    /// Max over samples and frame directions of `‖∇^S_{e_k}σ - μ e_k·σ‖`.
    pub fn killing_residual(&self, mu: C64, samples: &[Vec<f64>]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in samples {
            let s = self.at(x);
            for k in 0..self.rep.dim() {
                let lhs = self.spin_covariant_derivative(x, k)?;
                let rhs = self.rep.gamma(k) * &s * mu;
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }

    /// Residual of the spinor-bundle curvature identity
    /// `R^S_{e_i e_j} σ = (1/4) Σ_{kl} R(i,j,k,l) γ_k γ_l σ`,
    /// maximized over frame pairs at `x`.
    pub fn curvature_residual(&self, x: &[f64]) -> Result<f64> {
        let n = self.rep.dim();
        let conn = self.backend.frame_connection(x)?;
        let curv = self.backend.curvature(x)?;
        let first: Vec<CVector> = (0..n)
            .map(|k| self.spin_covariant_derivative(x, k))
            .collect::<Result<_>>()?;
        // second[(i, j)] = ∇^S_{e_i} (∇^S_{e_j} σ), differentiating the field
        // y -> ∇^S_{e_j} σ(y) as a spinor field.
        let mut second = vec![vec![CVector::zeros(self.rep.spinor_dim()); n]; n];
        for j in 0..n {
            let field = |y: &[f64]| -> CVector {
                self.spin_covariant_derivative(y, j)
                    .expect("inner derivative inside domain")
            };
            for (i, row) in second.iter_mut().enumerate() {
                let mut d = self.backend.frame_dirderiv(&field, x, i);
                for a in 0..n {
                    for b in 0..n {
                        let w = conn.omega[i][(a, b)];
                        if w != 0.0 {
                            d += self.rep.gamma(a)
                                * (self.rep.gamma(b) * &first[j])
                                * C64::from(0.25 * w);
                        }
                    }
                }
                row[j] = d;
            }
        }
        let s = self.at(x);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                // [e_i, e_j] = ∇_i e_j - ∇_j e_i in frame components.
                let mut lhs = &second[j][i] - &second[i][j];
                for m in 0..n {
                    let c = conn.omega[i][(j, m)] - conn.omega[j][(i, m)];
                    if c != 0.0 {
                        lhs += &first[m] * C64::from(c);
                    }
                }
                let mut rhs = CVector::zeros(self.rep.spinor_dim());
                for k in 0..n {
                    for l in 0..n {
                        let r = curv.r(i, j, k, l);
                        if r != 0.0 {
                            rhs += self.rep.gamma(k) * (self.rep.gamma(l) * &s) * C64::from(0.25 * r);
                        }
                    }
                }
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }

    /// `Φ(h) = Σ_i h_ij e_i · σ ⊗ e^j`.
    pub fn phi(&self, h: &SymTensorField) -> SpinorOneForm {
        let n = self.rep.dim();
        let rep = self.rep.clone();
        let me = self.clone();
        let hf = h.clone();
        SpinorOneForm {
            backend: self.backend.clone(),
            rep: self.rep.clone(),
            value: Arc::new(move |x: &[f64]| -> Vec<CVector> {
                let s = me.at(x);
                let hm = hf.at(x);
                (0..n)
                    .map(|j| {
                        let mut out = CVector::zeros(rep.spinor_dim());
                        for i in 0..n {
                            if hm[(i, j)] != 0.0 {
                                out += rep.gamma(i) * &s * C64::from(hm[(i, j)]);
                            }
                        }
                        out
                    })
                    .collect()
            }),
            label: format!("Phi({})", h.label),
        }
    }

    /// Residual of `Re⟨Φ(h), Φ(h̃)⟩ = ⟨h, h̃⟩ f` at `x`.
    pub fn re_inner_phi_residual(
        &self,
        h: &SymTensorField,
        ht: &SymTensorField,
        x: &[f64],
    ) -> f64 {
        let lhs = self.phi(h).inner_at(&self.phi(ht), x).re;
        let rhs = mdot(&h.at(x), &ht.at(x)) * self.length(x);
        (lhs - rhs).abs()
    }

    /// Residual of the Bochner-type identity for the twisted Dirac operator:
    /// `D(DΦ(h)) = Φ((∇*∇ - 2R̊)h) + n(n-2)μ² Φ(h) + 2μ DΦ(h)
    ///  + 4μ²(tr h) e_j·σ ⊗ e^j - 4μ (δh)_j σ ⊗ e^j` at `x`,
    /// for σ a Killing spinor with constant `μ`.
    pub fn bochner_residual(
        &self,
        h: &SymTensorField,
        mu: C64,
        x: &[f64],
    ) -> Result<(f64, f64)> {
        let n = self.rep.dim();
        let phi = self.phi(h);
        let d_phi = phi.twisted_dirac();
        let dd_phi = d_phi.twisted_dirac();
        let lhs = dd_phi.at(x);

        let s = self.at(x);
        let eh = h.einstein_operator(x)?;
        let dh = h.divergence(x)?;
        let trh = h.trace(x);
        let phi_x = phi.at(x);
        let d_phi_x = d_phi.at(x);
        let c_mass = mu * mu * C64::from((n * (n - 2)) as f64);
        let c_tr = mu * mu * C64::from(4.0 * trh);

        let mut residual = 0.0f64;
        let mut scale = 0.0f64;
        for j in 0..n {
            let mut rhs = CVector::zeros(self.rep.spinor_dim());
            for i in 0..n {
                if eh[(i, j)] != 0.0 {
                    rhs += self.rep.gamma(i) * &s * C64::from(eh[(i, j)]);
                }
            }
            rhs += &phi_x[j] * c_mass;
            rhs += &d_phi_x[j] * (mu * C64::from(2.0));
            rhs += self.rep.gamma(j) * &s * c_tr;
            rhs -= &s * (mu * C64::from(4.0 * dh[j]));
            residual += (&lhs[j] - &rhs).norm_squared();
            scale += lhs[j].norm_squared().max(rhs.norm_squared());
        }
        Ok((residual.sqrt(), scale.sqrt().max(1e-300)))
    }

    /// Pointwise form of the real-Killing-constant integral identity on a
    /// homogeneous backend with constant-component `h`.
    pub fn real_killing_identity(
        &self,
        h: &SymTensorField,
        mu: f64,
        x: &[f64],
    ) -> Result<RealKillingReport> {
        if self.backend.is_chart() {
            return Err(SpinLabError::UnsupportedBackend(
                "pointwise integral reduction needs a homogeneous backend".into(),
            ));
        }
        let n = self.rep.dim() as f64;
        let phi = self.phi(h);
        let d_phi = phi.twisted_dirac();
        let eh = h.einstein_operator(x)?;
        let hh = mdot(&h.at(x), &h.at(x));
        let lhs = mdot(&eh, &h.at(x));
        let dd = d_phi.inner_at(&d_phi, x).re;
        let cross = d_phi.inner_at(&phi, x);
        let rhs = dd - 2.0 * mu * cross.re - n * (n - 2.0) * mu * mu * hh;
        Ok(RealKillingReport {
            residual: (lhs - rhs).abs(),
            cross_term_imag: (C64::from(mu) * cross).im.abs(),
        })
    }

    /// `⟨(D - μ)² Φ(h), Φ(h)⟩ - (n-1)² μ² ⟨h, h⟩` at `x`: nonnegative values
    /// over an ensemble are the sampled form of the Dirac spectral gap.
    pub fn spectral_gap_value(&self, h: &SymTensorField, mu: f64, x: &[f64]) -> f64 {
        let n = self.rep.dim() as f64;
        let phi = self.phi(h);
        let d_phi = phi.twisted_dirac();
        let dd_phi = d_phi.twisted_dirac();
        let m = C64::from(mu);
        // (D - μ)² Ψ = D²Ψ - 2μ DΨ + μ² Ψ
        let shifted: Vec<CVector> = dd_phi
            .at(x)
            .into_iter()
            .zip(d_phi.at(x))
            .zip(phi.at(x))
            .map(|((dd, d), p)| dd - d * (m * C64::from(2.0)) + p * (m * m))
            .collect();
        let phi_x = phi.at(x);
        let quad: f64 = shifted
            .iter()
            .zip(phi_x.iter())
            .map(|(a, b)| hdot(b, a).re)
            .sum();
        let hh = mdot(&h.at(x), &h.at(x));
        quad - (n - 1.0) * (n - 1.0) * mu * mu * hh
    }
}

impl SpinorOneForm {
    pub fn from_fn(
        backend: SharedBackend,
        rep: Arc<CliffordRep>,
        value: OneFormComponents,
        label: impl Into<String>,
    ) -> Self {
        SpinorOneForm {
            backend,
            rep,
            value,
            label: label.into(),
        }
    }

    pub fn at(&self, x: &[f64]) -> Vec<CVector> {
        (self.value)(x)
    }

    /// `⟨Ψ, Θ⟩ = Σ_j ⟨Ψ^j, Θ^j⟩` (Hermitian in the first argument).
    pub fn inner_at(&self, other: &SpinorOneForm, x: &[f64]) -> C64 {
        self.at(x)
            .iter()
            .zip(other.at(x).iter())
            .map(|(a, b)| hdot(a, b))
            .sum()
    }

    pub fn norm_at(&self, x: &[f64]) -> f64 {
        self.inner_at(self, x).re.max(0.0).sqrt()
    }

    /// Tensor-product covariant derivative: spin connection on the spinor
    /// values, Levi-Civita on the form index.
    /// `(∇_{e_k} Ψ)^j = ∇^S_{e_k}(Ψ^j) - Σ_l ω_jl(e_k) Ψ^l`.
    pub fn covariant_derivative(&self, x: &[f64], k: usize) -> Result<Vec<CVector>> {
        let n = self.rep.dim();
        let conn = self.backend.frame_connection(x)?;
        let field = |y: &[f64]| self.at(y);
        let mut d = self.backend.frame_dirderiv(&field, x, k);
        let v = self.at(x);
        for (j, dj) in d.iter_mut().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    let w = conn.omega[k][(a, b)];
                    if w != 0.0 {
                        *dj += self.rep.gamma(a) * (self.rep.gamma(b) * &v[j]) * C64::from(0.25 * w);
                    }
                }
            }
            for l in 0..n {
                let w = conn.omega[k][(j, l)];
                if w != 0.0 {
                    *dj -= &v[l] * C64::from(w);
                }
            }
        }
        Ok(d)
    }

    /// Twisted Dirac operator `(DΨ)^j = Σ_k e_k · (∇_{e_k} Ψ)^j`, returned as
    /// a new field so it can be applied repeatedly.
    pub fn twisted_dirac(&self) -> SpinorOneForm {
        let me = self.clone();
        let rep = self.rep.clone();
        let n = self.rep.dim();
        SpinorOneForm {
            backend: self.backend.clone(),
            rep: self.rep.clone(),
            value: Arc::new(move |x: &[f64]| -> Vec<CVector> {
                let mut out = vec![CVector::zeros(rep.spinor_dim()); n];
                for k in 0..n {
                    let dk = me
                        .covariant_derivative(x, k)
                        .expect("derivative inside domain");
                    for (o, d) in out.iter_mut().zip(dk.into_iter()) {
                        *o += rep.gamma(k) * d;
                    }
                }
                out
            }),
            label: format!("D({})", self.label),
        }
    }

    /// Residual of the unit-length Clifford action of the frame direction
    /// `t_index`: `| ‖e_t · Ψ‖ - ‖Ψ‖ |` at `x`.
    pub fn unit_action_residual(&self, t_index: usize, x: &[f64]) -> f64 {
        let v = self.at(x);
        let acted: f64 = v
            .iter()
            .map(|c| (self.rep.gamma(t_index) * c).norm_squared())
            .sum();
        (acted.sqrt() - self.norm_at(x)).abs()
    }
}

/// Residual of the eigen-action `e_t · σ = i σ` at `x`.
pub fn t_eigen_residual(sigma: &SpinorField, t_index: usize, x: &[f64]) -> f64 {
    let s = sigma.at(x);
    (sigma.rep.gamma(t_index) * &s - &s * I).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Backend, ChartPatch, HomogeneousFrame};
    use crate::linalg::{RMatrix, ONE};
    use crate::rng::SplitMix64;

    fn flat(dim: usize) -> SharedBackend {
        Arc::new(Backend::Chart(ChartPatch::new(
            dim,
            vec![(-1.0, 1.0); dim],
            Arc::new(move |_: &[f64]| RMatrix::identity(dim, dim)),
            "flat",
        )))
    }

    fn s3() -> SharedBackend {
        Arc::new(Backend::Homogeneous(HomogeneousFrame::s3(-2.0)))
    }

    fn s3_killing() -> (SharedBackend, Arc<CliffordRep>, SpinorField) {
        let backend = s3();
        let rep = Arc::new(CliffordRep::build(3).unwrap());
        let sigma =
            SpinorField::solve_constant_killing(backend.clone(), rep.clone(), C64::from(0.5))
                .unwrap();
        (backend, rep, sigma)
    }

    #[test]
    fn flat_constant_spinor_is_parallel() {
        let backend = flat(3);
        let rep = Arc::new(CliffordRep::build(3).unwrap());
        let s = CVector::from_vec(vec![ONE, I]);
        let sigma = SpinorField::constant(backend.clone(), rep, s, "const").unwrap();
        let x = vec![0.1, -0.2, 0.3];
        for k in 0..3 {
            assert!(sigma.spin_covariant_derivative(&x, k).unwrap().norm() < 1e-10);
        }
        assert!(sigma.curvature_residual(&x).unwrap() < 1e-7);
        assert!(sigma.killing_residual(C64::from(0.0), &[x]).unwrap() < 1e-10);
    }

    #[test]
    fn s3_constant_killing_spinor_with_half() {
        let (backend, _, sigma) = s3_killing();
        let samples = backend.sample_points(1, 0);
        let res = sigma.killing_residual(C64::from(0.5), &samples).unwrap();
        assert!(res <= 1e-12, "residual {res}");
        // negative control: wrong Killing constant
        let bad = sigma.killing_residual(C64::from(-0.5), &samples).unwrap();
        assert!(bad > 0.1, "negative control too small: {bad}");
    }

    #[test]
    fn s3_spinor_curvature_identity_exact() {
        let (backend, _, sigma) = s3_killing();
        let x = backend.base_point();
        assert!(sigma.curvature_residual(&x).unwrap() <= 1e-12);
    }

    #[test]
    fn phi_of_metric_is_gamma_action() {
        let (backend, rep, sigma) = s3_killing();
        let g = SymTensorField::metric_field(backend.clone());
        let x = backend.base_point();
        let phi = sigma.phi(&g).at(&x);
        let s = sigma.at(&x);
        for j in 0..3 {
            assert!((&phi[j] - rep.gamma(j) * &s).norm() < 1e-14);
        }
    }

    #[test]
    fn re_inner_phi_matches_tensor_pairing_on_s3() {
        let (backend, _, sigma) = s3_killing();
        let x = backend.base_point();
        // unit-length sigma makes this the real-constant case f = 1
        assert!((sigma.length(&x) - 1.0).abs() < 1e-12);
        let mut rng = SplitMix64::new(31);
        for _ in 0..5 {
            let h = SymTensorField::constant(backend.clone(), rng.symmetric(3), "h").unwrap();
            let ht = SymTensorField::constant(backend.clone(), rng.symmetric(3), "ht").unwrap();
            assert!(sigma.re_inner_phi_residual(&h, &ht, &x) <= 1e-12);
        }
    }

    #[test]
    fn dirac_of_phi_metric_matches_killing_rearrangement() {
        // For parallel h = g, e_k·Φ(∇_k h) = 0, so DΦ(g) = (n-2)μ Φ(g).
        let (backend, _, sigma) = s3_killing();
        let g = SymTensorField::metric_field(backend.clone());
        let x = backend.base_point();
        let phi = sigma.phi(&g);
        let d = phi.twisted_dirac().at(&x);
        let p = phi.at(&x);
        for j in 0..3 {
            let rhs = &p[j] * C64::from((3.0 - 2.0) * 0.5);
            assert!((&d[j] - rhs).norm() <= 1e-12, "j={j}");
        }
    }

    #[test]
    fn twisted_dirac_is_linear() {
        let (backend, _, sigma) = s3_killing();
        let x = backend.base_point();
        let mut rng = SplitMix64::new(77);
        let h1 = SymTensorField::constant(backend.clone(), rng.symmetric(3), "h1").unwrap();
        let h2 = SymTensorField::constant(backend.clone(), rng.symmetric(3), "h2").unwrap();
        let combo = SymTensorField::constant(
            backend.clone(),
            h1.at(&x) * 2.0 + h2.at(&x) * -0.7,
            "combo",
        )
        .unwrap();
        let d1 = sigma.phi(&h1).twisted_dirac().at(&x);
        let d2 = sigma.phi(&h2).twisted_dirac().at(&x);
        let dc = sigma.phi(&combo).twisted_dirac().at(&x);
        for j in 0..3 {
            let lin = &d1[j] * C64::from(2.0) + &d2[j] * C64::from(-0.7);
            assert!((&dc[j] - lin).norm() <= 1e-10);
        }
    }

    #[test]
    fn bochner_identity_on_s3_exact_backend() {
        let (backend, _, sigma) = s3_killing();
        let x = backend.base_point();
        let mu = C64::from(0.5);
        // h = g: exercises the trace term (tr h = 3) with zero divergence.
        let g = SymTensorField::metric_field(backend.clone());
        let (res, scale) = sigma.bochner_residual(&g, mu, &x).unwrap();
        assert!(res <= 1e-10 * scale.max(1.0), "metric residual {res}");
        // random symmetric h, generally non-TT (trace and divergence terms).
        let mut rng = SplitMix64::new(99);
        for trial in 0..10 {
            let h = SymTensorField::constant(backend.clone(), rng.symmetric(3), "h").unwrap();
            let (res, scale) = sigma.bochner_residual(&h, mu, &x).unwrap();
            assert!(res <= 1e-10 * scale.max(1.0), "trial {trial}: residual {res}");
        }
    }

    #[test]
    fn real_killing_identity_on_s3() {
        let (backend, _, sigma) = s3_killing();
        let x = backend.base_point();
        let mut rng = SplitMix64::new(123);
        for trial in 0..10 {
            let h =
                SymTensorField::constant(backend.clone(), rng.symmetric_traceless(3), "tt").unwrap();
            // constant traceless fields on this frame are transverse
            assert!(h.divergence(&x).unwrap().norm() < 1e-13);
            let report = sigma.real_killing_identity(&h, 0.5, &x).unwrap();
            assert!(report.residual <= 1e-10, "trial {trial}: {report:?}");
            assert!(report.cross_term_imag <= 1e-10);
        }
    }

    #[test]
    fn spectral_gap_nonnegative_on_s3() {
        let (backend, _, sigma) = s3_killing();
        let x = backend.base_point();
        let mut rng = SplitMix64::new(321);
        for _ in 0..10 {
            let h =
                SymTensorField::constant(backend.clone(), rng.symmetric_traceless(3), "tt").unwrap();
            let gap = sigma.spectral_gap_value(&h, 0.5, &x);
            assert!(gap >= -1e-9, "gap {gap}");
        }
        let zero = SymTensorField::constant(backend.clone(), RMatrix::zeros(3, 3), "0").unwrap();
        assert!(sigma.spectral_gap_value(&zero, 0.5, &x).abs() < 1e-14);
    }
}
