//! Complex Clifford algebra representations.
//!
//! Generators satisfy the relation `g_i g_j + g_j g_i = -2 delta_ij` and are
//! anti-Hermitian unitaries, so Clifford multiplication by a unit vector is an
//! isometry of the Hermitian inner product on spinors. The construction is
//! recursive doubling over Pauli matrices: every entry lies in {0, ±1, ±i},
//! so the defining relations hold to rounding error only.

use crate::error::{Result, SpinLabError};
use crate::linalg::{ceye, kron_c, CMatrix, CVector, C64, RVector, I, ONE};

pub const MAX_DIM: usize = 12;

/// A gamma-matrix realization of `Cl(n) ⊗ C` on spinor space of dimension
/// `2^floor(n/2)` (or an explicitly supplied module of larger dimension).
#[derive(Debug, Clone)]
pub struct CliffordRep {
    dim: usize,
    spinor_dim: usize,
    gammas: Vec<CMatrix>,
}

/// Normalized volume element `omega = i^parity_exponent * g_1 ... g_n` with
/// `omega^2 = Id`.
#[derive(Debug, Clone)]
pub struct VolumeElement {
    pub matrix: CMatrix,
    pub parity_exponent: u32,
}

fn pauli() -> (CMatrix, CMatrix, CMatrix) {
    let s1 = CMatrix::from_row_slice(2, 2, &[C64::from(0.0), ONE, ONE, C64::from(0.0)]);
    let s2 = CMatrix::from_row_slice(2, 2, &[C64::from(0.0), -I, I, C64::from(0.0)]);
    let s3 = CMatrix::from_row_slice(2, 2, &[ONE, C64::from(0.0), C64::from(0.0), -ONE]);
    (s1, s2, s3)
}

impl CliffordRep {
    /// Build the standard representation for `1 <= n <= 12`.
    ///
    /// Hermitian generators `e_j` come from the Jordan-Wigner chain
    /// `e_{2a-1} = s3^(a-1) ⊗ s1 ⊗ I..`, `e_{2a} = s3^(a-1) ⊗ s2 ⊗ I..`
    /// (plus `e_n = s3^(n/2)` for odd `n`); the anti-Hermitian gammas are
    /// `g_j = i e_j`.
    pub fn build(n: usize) -> Result<Self> {
        if n < 1 || n > MAX_DIM {
            return Err(SpinLabError::DimensionOutOfRange(n, 1, MAX_DIM));
        }
        let m = n / 2; // number of Pauli slots
        let nspin = 1usize << m.max(0);
        let (s1, s2, s3) = pauli();
        let mut hermitian: Vec<CMatrix> = Vec::with_capacity(n);
        let slot = |a: usize, mid: &CMatrix| -> CMatrix {
            // s3^(a) ⊗ mid ⊗ Id of the remaining slots
            let mut acc = ceye(1);
            for _ in 0..a {
                acc = kron_c(&acc, &s3);
            }
            acc = kron_c(&acc, mid);
            let rem = nspin / acc.nrows();
            kron_c(&acc, &ceye(rem))
        };
        for a in 0..m {
            hermitian.push(slot(a, &s1));
            hermitian.push(slot(a, &s2));
        }
        if n % 2 == 1 {
            let mut acc = ceye(1);
            for _ in 0..m {
                acc = kron_c(&acc, &s3);
            }
            hermitian.push(acc);
        }
        let gammas = hermitian.into_iter().map(|e| e * I).collect();
        Self::from_gammas(gammas)
    }

    /// Wrap explicitly supplied gamma matrices, validating the Clifford
    /// relation and anti-Hermiticity. Used by the warped-product embedding,
    /// whose module can be larger than the minimal spinor dimension.
    pub fn from_gammas(gammas: Vec<CMatrix>) -> Result<Self> {
        let n = gammas.len();
        if n == 0 {
            return Err(SpinLabError::InvalidParameter("no gamma matrices".into()));
        }
        let nspin = gammas[0].nrows();
        for g in &gammas {
            if g.nrows() != nspin || g.ncols() != nspin {
                return Err(SpinLabError::DimensionMismatch {
                    expected: nspin,
                    got: g.nrows(),
                });
            }
        }
        let rep = Self {
            dim: n,
            spinor_dim: nspin,
            gammas,
        };
        let res = rep.max_relation_residual();
        if res > 1e-12 {
            return Err(SpinLabError::InvalidParameter(format!(
                "gamma matrices violate the Clifford relation (residual {res:.3e})"
            )));
        }
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spinor_dim(&self) -> usize {
        self.spinor_dim
    }

    pub fn gamma(&self, i: usize) -> &CMatrix {
        &self.gammas[i]
    }

    /// Max over `i, j` of `|g_i g_j + g_j g_i + 2 delta_ij|` plus the
    /// anti-Hermiticity defects.
    pub fn max_relation_residual(&self) -> f64 {
        let n = self.dim;
        let id2 = ceye(self.spinor_dim) * C64::from(2.0);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            worst = worst.max((self.gammas[i].adjoint() + &self.gammas[i]).norm());
            for j in i..n {
                let mut anti = &self.gammas[i] * &self.gammas[j] + &self.gammas[j] * &self.gammas[i];
                if i == j {
                    anti += &id2;
                }
                worst = worst.max(anti.norm());
            }
        }
        worst
    }

    /// Clifford multiplication `(sum_i v_i g_i) s`.
    pub fn mult(&self, v: &RVector, s: &CVector) -> Result<CVector> {
        if v.len() != self.dim {
            return Err(SpinLabError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if s.len() != self.spinor_dim {
            return Err(SpinLabError::DimensionMismatch {
                expected: self.spinor_dim,
                got: s.len(),
            });
        }
        let mut out = CVector::zeros(self.spinor_dim);
        for (i, g) in self.gammas.iter().enumerate() {
            if v[i] != 0.0 {
                out += g * s * C64::from(v[i]);
            }
        }
        Ok(out)
    }

    /// Residual of the contraction identity
    /// `sum_l g_l g_i g_l s = (n-2) g_i s`.
    pub fn sandwich_identity_check(&self, s: &CVector, i: usize) -> Result<f64> {
        if i >= self.dim {
            return Err(SpinLabError::DimensionMismatch {
                expected: self.dim,
                got: i,
            });
        }
        let gi_s = &self.gammas[i] * s;
        let mut lhs = CVector::zeros(self.spinor_dim);
        for g in &self.gammas {
            lhs += g * (&self.gammas[i] * (g * s));
        }
        let rhs = gi_s * C64::from(self.dim as f64 - 2.0);
        Ok((lhs - rhs).norm())
    }

    /// Normalized volume element. The power of `i` is chosen operationally so
    /// that the square is the identity; only the eigenspace splitting matters
    /// downstream.
    pub fn volume_element(&self) -> VolumeElement {
        let mut prod = ceye(self.spinor_dim);
        for g in &self.gammas {
            prod = prod * g;
        }
        // prod^2 = ±Id for anticommuting unit generators.
        let sq = (&prod * &prod)[(0, 0)];
        let parity_exponent = if sq.re < 0.0 { 1 } else { 0 };
        let matrix = if parity_exponent == 1 { prod * I } else { prod };
        VolumeElement {
            matrix,
            parity_exponent,
        }
    }

    /// Sum of the two inequivalent irreducible modules, for odd `n`:
    /// `G_i = diag(g_i, -g_i)` acting on `C^(2N)`.
    pub fn doubled(&self) -> Result<CliffordRep> {
        if self.dim % 2 == 0 {
            return Err(SpinLabError::EvenDimension(self.dim));
        }
        let n2 = self.spinor_dim * 2;
        let gammas = self
            .gammas
            .iter()
            .map(|g| {
                let mut big = CMatrix::zeros(n2, n2);
                big.view_mut((0, 0), (self.spinor_dim, self.spinor_dim))
                    .copy_from(g);
                big.view_mut(
                    (self.spinor_dim, self.spinor_dim),
                    (self.spinor_dim, self.spinor_dim),
                )
                .copy_from(&(-g));
                big
            })
            .collect();
        CliffordRep::from_gammas(gammas)
    }

    /// The involution exchanging the two irreducible summands of [`doubled`],
    /// for odd `n`.
    ///
    /// On the sum of the two irreducible modules the swap `(u, v) -> (v, u)`
    /// satisfies `hat(G_i s) = -G_i hat(s)` and `hat ∘ hat = Id`. No linear
    /// (or antilinear, when `n ≡ 3 mod 4`) map with that anticommutation
    /// property exists on a single irreducible module, because negating the
    /// generators lands in the other irreducible summand; the swap on the
    /// doubled module is the map the two-component spinor construction
    /// actually uses.
    ///
    /// [`doubled`]: CliffordRep::doubled
    pub fn hat_isomorphism(&self) -> Result<CMatrix> {
        if self.dim % 2 == 0 {
            return Err(SpinLabError::EvenDimension(self.dim));
        }
        let n = self.spinor_dim;
        let mut swap = CMatrix::zeros(2 * n, 2 * n);
        for k in 0..n {
            swap[(k, n + k)] = ONE;
            swap[(n + k, k)] = ONE;
        }
        Ok(swap)
    }
}

impl VolumeElement {
    /// Chirality projectors `P± = (Id ± omega)/2`.
    pub fn projectors(&self) -> (CMatrix, CMatrix) {
        let n = self.matrix.nrows();
        let half = C64::from(0.5);
        let id = ceye(n);
        (
            (&id + &self.matrix) * half,
            (&id - &self.matrix) * half,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn one_dimensional_generator_squares_to_minus_one() {
        let rep = CliffordRep::build(1).unwrap();
        assert_eq!(rep.spinor_dim(), 1);
        let sq = rep.gamma(0) * rep.gamma(0);
        assert!((sq[(0, 0)] + ONE).norm() < 1e-15);
    }

    #[test]
    fn relations_hold_for_all_supported_dims() {
        for n in 1..=9 {
            let rep = CliffordRep::build(n).unwrap();
            assert_eq!(rep.spinor_dim(), 1 << (n / 2));
            assert!(
                rep.max_relation_residual() <= 1e-13,
                "n={n} residual {}",
                rep.max_relation_residual()
            );
        }
    }

    #[test]
    fn n8_relation_residuals() {
        let rep = CliffordRep::build(8).unwrap();
        assert_eq!(rep.spinor_dim(), 16);
        assert!(rep.max_relation_residual() <= 1e-13);
    }

    #[test]
    fn out_of_range_dimension_rejected() {
        assert!(CliffordRep::build(0).is_err());
        assert!(CliffordRep::build(13).is_err());
    }

    #[test]
    fn mult_is_an_isometry_for_unit_vectors() {
        let mut rng = SplitMix64::new(11);
        for n in [2usize, 3, 5, 8] {
            let rep = CliffordRep::build(n).unwrap();
            for _ in 0..20 {
                let mut v = rng.vector(n);
                v /= v.norm();
                let s = rng.cvector(rep.spinor_dim());
                let vs = rep.mult(&v, &s).unwrap();
                assert!((vs.norm() / s.norm() - 1.0).abs() <= 1e-13);
                // Applying a basis vector twice negates.
                let mut e = RVector::zeros(n);
                e[1 % n] = 1.0;
                let twice = rep.mult(&e, &rep.mult(&e, &s).unwrap()).unwrap();
                assert!((twice + &s).norm() < 1e-13);
            }
        }
        let rep = CliffordRep::build(4).unwrap();
        let zero = rep
            .mult(&RVector::zeros(4), &rng.cvector(rep.spinor_dim()))
            .unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn sandwich_identity_all_small_dims() {
        let mut rng = SplitMix64::new(23);
        for n in 1..=9usize {
            let rep = CliffordRep::build(n).unwrap();
            for _ in 0..10 {
                let s = rng.cvector(rep.spinor_dim());
                for i in 0..n {
                    let res = rep.sandwich_identity_check(&s, i).unwrap();
                    assert!(res <= 1e-12 * s.norm().max(1.0), "n={n} i={i} res={res}");
                }
            }
        }
    }

    #[test]
    fn sandwich_identity_vanishes_in_dim_two() {
        let rep = CliffordRep::build(2).unwrap();
        let mut rng = SplitMix64::new(5);
        let s = rng.cvector(2);
        // n-2 = 0, so both sides vanish.
        let mut lhs = CVector::zeros(2);
        for l in 0..2 {
            lhs += rep.gamma(l) * (rep.gamma(0) * (rep.gamma(l) * &s));
        }
        assert!(lhs.norm() < 1e-14);
    }

    #[test]
    fn volume_element_squares_to_identity() {
        for n in 1..=9usize {
            let rep = CliffordRep::build(n).unwrap();
            let vol = rep.volume_element();
            let sq = &vol.matrix * &vol.matrix;
            assert!((sq - ceye(rep.spinor_dim())).norm() <= 1e-13, "n={n}");
        }
    }

    #[test]
    fn volume_element_parity_commutation() {
        for n in 2..=9usize {
            let rep = CliffordRep::build(n).unwrap();
            let vol = rep.volume_element();
            for i in 0..n {
                let comm = &vol.matrix * rep.gamma(i)
                    - rep.gamma(i) * &vol.matrix * C64::from(if n % 2 == 1 { 1.0 } else { -1.0 });
                assert!(comm.norm() <= 1e-13, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn even_volume_is_traceless_with_proper_projectors() {
        let rep = CliffordRep::build(6).unwrap();
        let vol = rep.volume_element();
        assert!(vol.matrix.trace().norm() <= 1e-13);
        let (p, m) = vol.projectors();
        assert!((&p * &p - &p).norm() <= 1e-13);
        assert!((&m * &m - &m).norm() <= 1e-13);
        assert!((&p * &m).norm() <= 1e-13);
    }

    #[test]
    fn n2_volume_is_i_g1_g2() {
        let rep = CliffordRep::build(2).unwrap();
        let vol = rep.volume_element();
        let direct = rep.gamma(0) * rep.gamma(1) * I;
        assert!((&vol.matrix - direct).norm() <= 1e-14);
        assert_eq!(vol.parity_exponent, 1);
    }

    #[test]
    fn hat_swaps_and_anticommutes_on_doubled_module() {
        for n in [1usize, 3, 5, 7] {
            let rep = CliffordRep::build(n).unwrap();
            let doubled = rep.doubled().unwrap();
            let hat = rep.hat_isomorphism().unwrap();
            assert!((&hat * &hat - ceye(2 * rep.spinor_dim())).norm() < 1e-14);
            for i in 0..n {
                let anti = &hat * doubled.gamma(i) + doubled.gamma(i) * &hat;
                assert!(anti.norm() <= 1e-13, "n={n} i={i}");
            }
        }
        assert!(CliffordRep::build(4).unwrap().hat_isomorphism().is_err());
    }

    #[test]
    fn no_single_module_intertwiner_in_dim_three() {
        // Solving hat*g_i = -g_i*hat over the 2x2 complex matrices by brute
        // linear algebra yields only the zero map; the hat must live on the
        // doubled module.
        let rep = CliffordRep::build(3).unwrap();
        // Build the 12x8 real system for the 4 complex unknowns.
        let mut rows: Vec<f64> = Vec::new();
        for i in 0..3 {
            let g = rep.gamma(i);
            // equation: H g + g H = 0, entrywise (2x2 complex -> 8 real eqs)
            for r in 0..2 {
                for c in 0..2 {
                    // coefficient of H[(a,b)] in (H g + g H)[(r,c)]
                    let mut coeffs = [C64::from(0.0); 4];
                    for a in 0..2 {
                        for b in 0..2 {
                            let mut coef = C64::from(0.0);
                            if a == r {
                                coef += g[(b, c)];
                            }
                            if b == c {
                                coef += g[(r, a)];
                            }
                            coeffs[2 * a + b] = coef;
                        }
                    }
                    for part in 0..2 {
                        let mut row = vec![0.0; 8];
                        for (k, co) in coeffs.iter().enumerate() {
                            if part == 0 {
                                row[2 * k] = co.re;
                                row[2 * k + 1] = -co.im;
                            } else {
                                row[2 * k] = co.im;
                                row[2 * k + 1] = co.re;
                            }
                        }
                        rows.push(row[0]);
                        rows.extend_from_slice(&row[1..]);
                    }
                }
            }
        }
        let mat = nalgebra::DMatrix::from_row_slice(rows.len() / 8, 8, &rows);
        let svd = mat.svd(false, false);
        let min_sv = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(min_sv > 0.5, "unexpected nontrivial intertwiner, sv={min_sv}");
    }
}
