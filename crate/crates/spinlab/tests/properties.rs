//! Property-based checks of the algebraic layers: Clifford multiplication,
//! curvature symmetries, and deterministic sampling.

use nalgebra::DVector;
use proptest::prelude::*;
use spinlab::clifford::CliffordRep;
use spinlab::geometry::{Backend, ChartPatch, HomogeneousFrame};
use spinlab::linalg::RMatrix;
use spinlab::rng::SplitMix64;
use spinlab::tensor::SymTensorField;
use std::sync::Arc;

proptest! {
    /// Clifford square law: (v·)² s = -|v|² s for every vector and spinor.
    #[test]
    fn clifford_multiplication_squares_to_minus_norm(
        n in 2usize..=5,
        coords in prop::collection::vec(-2.0f64..2.0, 5),
        seed in 0u64..1_000,
    ) {
        let rep = CliffordRep::build(n).unwrap();
        let v = DVector::from_vec(coords[..n].to_vec());
        let s = SplitMix64::new(seed).cvector(rep.spinor_dim());
        let twice = rep.mult(&v, &rep.mult(&v, &s).unwrap()).unwrap();
        let expect = &s * nalgebra::Complex::from(-v.norm_squared());
        prop_assert!((twice - expect).norm() <= 1e-12 * (1.0 + v.norm_squared()));
    }

    /// The exact-backend curvature satisfies the pair symmetries and the
    /// first Bianchi identity for any frame-algebra scale.
    #[test]
    fn homogeneous_curvature_symmetries(scale in 0.25f64..4.0) {
        let curv = HomogeneousFrame::s3(scale).curvature();
        prop_assert!(curv.symmetry_residual() <= 1e-12);
    }

    /// Deterministic sampling stays inside the domain with its margin.
    #[test]
    fn sample_points_respect_domain(seed in 0u64..10_000) {
        let chart = ChartPatch::new(
            3,
            vec![(-1.0, 2.0), (0.0, 1.0), (-0.5, 0.5)],
            Arc::new(|_: &[f64]| RMatrix::identity(3, 3)),
            "box",
        );
        let backend = Backend::Chart(chart);
        for x in backend.sample_points(8, seed) {
            prop_assert!(x[0] >= -1.0 && x[0] <= 2.0);
            prop_assert!(x[1] >= 0.0 && x[1] <= 1.0);
            prop_assert!(x[2] >= -0.5 && x[2] <= 0.5);
        }
    }

    /// Random traceless constant fields really are traceless, and the tensor
    /// inner product is symmetric.
    #[test]
    fn tensor_inner_product_is_symmetric(seed in 0u64..1_000) {
        let backend = Arc::new(Backend::Homogeneous(HomogeneousFrame::s3(-2.0)));
        let h = SymTensorField::random_constant_traceless(backend.clone(), seed);
        let k = SymTensorField::random_constant_traceless(backend.clone(), seed + 1);
        let x = backend.base_point();
        prop_assert!(h.trace(&x).abs() <= 1e-13);
        prop_assert!((h.inner(&k, &x) - k.inner(&h, &x)).abs() <= 1e-13);
    }
}
