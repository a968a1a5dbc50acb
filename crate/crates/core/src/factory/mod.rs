//! Builders for complexes, algebras and contractions.

pub mod elimination;
pub mod quiver;
pub mod simplicial;

pub use elimination::{gaussian_contraction, gaussian_reduction};
pub use quiver::{massey_instance, massey_quiver, path_dga, Arrow, Quiver};
pub use simplicial::{cochain_dga, SimplicialComplexDescription};
pub mod random;

pub use random::{random_suite, SuiteInstance};
