//! Exact homological perturbation for bigraded A∞-algebras.

pub mod ainfty;
pub mod bar;
pub mod complex;
pub mod error;
pub mod factory;
pub mod homology;
pub mod interchange;
pub mod linalg;
pub mod map;
pub mod multilinear;
pub mod naturality;
pub mod perturbation;
pub mod scalar;
pub mod space;

pub use complex::{map_differential, suspend, tensor_complex, Complex, Suspension, DIFFERENTIAL};
pub use error::{Error, Result};
pub use map::{GradedMap, SparseVec};
pub use scalar::{Field, Scalar};
pub use space::{BasisElement, Bidegree, BigradedSpace, Space};
