//! Exact and Monte Carlo integration of polynomials in the matrix entries of
//! Haar-distributed unitary, orthogonal and symplectic matrices, and in the
//! entries of their irreducible representations.

pub mod alphabet;
pub mod entanglement;
pub mod error;
pub mod group;
pub mod haar_sampler;
pub mod irrep_engine;
pub mod linalg;
pub mod scalar;
pub mod su2_wigner;
pub mod tableaux;
pub mod weingarten_engine;
pub mod tensor_algebra;

pub use error::{Error, Result};
pub use group::Group;
