//! Hadamard-product indexes of positive semidefinite matrices: the minimal
//! index I(A), the norm indexes I(N, A) for Schatten and Ky Fan norms, and
//! the optimal constant M(S) in the operator inequality
//! ||STS + S^-1 T S^-1|| >= M(S) ||T||.

pub mod cli;
pub mod error;
pub mod gauge;
pub mod io;
pub mod matrix;
pub mod minimal;
pub mod nnls;
pub mod norms;
pub mod opineq;
pub mod oracle;
pub mod selftest;
pub mod spectral;

pub use error::{Error, Result};
pub use gauge::NormDescriptor;
pub use matrix::{hadamard, inflation, kronecker, principal_submatrix, HermitianMatrix, VectorC};
pub use minimal::{minimal_index, MinimalIndexResult};
pub use oracle::OracleConfig;
pub use spectral::{spectral_index_combinatorial, spectral_index_search, SpectralIndexResult};
