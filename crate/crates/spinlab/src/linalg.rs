//! Shared linear-algebra types and small helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const I: C64 = Complex::new(0.0, 1.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);

/// Values that finite-difference stencils can combine linearly.
pub trait LinearCombine: Clone {
    fn axpby(a: f64, x: &Self, b: f64, y: &Self) -> Self;
    fn scale(a: f64, x: &Self) -> Self;
    fn magnitude(&self) -> f64;
}

impl LinearCombine for f64 {
    fn axpby(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        a * x + b * y
    }
    fn scale(a: f64, x: &Self) -> Self {
        a * x
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl LinearCombine for RVector {
    fn axpby(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * a + y * b
    }
    fn scale(a: f64, x: &Self) -> Self {
        x * a
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl LinearCombine for RMatrix {
    fn axpby(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * a + y * b
    }
    fn scale(a: f64, x: &Self) -> Self {
        x * a
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl LinearCombine for CVector {
    fn axpby(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * C64::from(a) + y * C64::from(b)
    }
    fn scale(a: f64, x: &Self) -> Self {
        x * C64::from(a)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl LinearCombine for CMatrix {
    fn axpby(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x * C64::from(a) + y * C64::from(b)
    }
    fn scale(a: f64, x: &Self) -> Self {
        x * C64::from(a)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl<T: LinearCombine> LinearCombine for Vec<T> {
    fn axpby(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        x.iter()
            .zip(y.iter())
            .map(|(u, v)| T::axpby(a, u, b, v))
            .collect()
    }
    fn scale(a: f64, x: &Self) -> Self {
        x.iter().map(|u| T::scale(a, u)).collect()
    }
    fn magnitude(&self) -> f64 {
        self.iter()
            .map(|u| u.magnitude().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Hermitian inner product `<u, v> = sum conj(u_i) v_i`.
pub fn hdot(u: &CVector, v: &CVector) -> C64 {
    u.dotc(v)
}

/// Frobenius inner product of real matrices.
pub fn mdot(a: &RMatrix, b: &RMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Symmetrize a square matrix.
pub fn symmetrize(a: &RMatrix) -> RMatrix {
    (a + a.transpose()) * 0.5
}

pub fn kron_c(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Complex identity matrix.
pub fn ceye(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}
