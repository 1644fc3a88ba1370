//! Neumann eigenvalues of the Hermite (Ornstein–Uhlenbeck) operator
//! −Δu + x·∇u on axis-symmetric planar domains under Gaussian measure.
//!
//! The linear-algebra, quadrature and extrapolation kernels are generic over
//! [`Scalar`] (`f32`/`f64`); geometry and the PDE solvers work in `f64`.

// `!(x > 0.0)` is deliberate throughout: NaN must take the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod eigen;
pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod richardson;
pub mod scalar;
pub mod solver1d;
pub mod solver2d;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type SymTriMatrix = eigen::SymTriMatrix<f64>;
pub type DenseSymPair = eigen::DenseSymPair<f64>;
pub type EigenResult = eigen::EigenResult<f64>;
pub type QuadratureRule = gaussian::QuadratureRule<f64>;
pub type TriangleRule = gaussian::TriangleRule<f64>;
pub type Extrapolation = richardson::Extrapolation<f64>;
