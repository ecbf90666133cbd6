//! Numerical laboratory for spin geometry.
//!
//! The crate constructs explicit Clifford representations, manifold backends
//! (coordinate charts and homogeneous frame algebras), symmetric 2-tensor
//! calculus with the Einstein operator, Killing spinor fields on warped
//! products, and regular Sasaki circle bundles over Kähler-Einstein bases.
//! Every construction ships with residual checks that certify the defining
//! identities numerically, up to explicitly reported tolerances.

pub mod clifford;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod harness;
pub mod linalg;
pub mod rng;
pub mod sasaki;
pub mod spinor;
pub mod tensor;
pub mod warped;

pub use error::SpinLabError;
