//! Galerkin boundary-element assembly for the 3D Laplace equation.
//!
//! Builds the mass matrix M, the single-layer matrix V and the double-layer
//! matrix K over triangulated surfaces. Singular pair integrals are evaluated
//! by semi-analytical closed forms; a fully numerical regularized quadrature
//! serves as an independent reference throughout.

pub mod assembly;
pub mod dlp;
pub mod error;
pub mod mesh;
pub mod oracle;
pub mod quad;
pub mod slp;

pub use error::{Error, Result};
pub use mesh::{PairCase, PairClassification, SurfaceMesh, TriangleGeometry};

/// 3D vector; mesh points are stored as vectors from the origin.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Dense row/column matrix used for M, V and K.
pub type DenseMatrix = nalgebra::DMatrix<f64>;

/// Dense vector used for boundary data and solution coefficients.
pub type DenseVector = nalgebra::DVector<f64>;
