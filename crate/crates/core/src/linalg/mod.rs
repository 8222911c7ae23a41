//! Dense linear algebra: complex eigensolver, singular values and Schatten
//! norms, weighted `L^p -> L^p'` norm estimation, and tridiagonal solvers.

pub mod eig;
pub mod opnorm;
pub mod schatten;
pub mod tridiag;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub use eig::{eig, eigvals, max_residual, schur, EigenDecomposition, Schur};
pub use opnorm::{lp_norm, opnorm_map, opnorm_p_pprime, FourierMultiplier, LinearMap, OpNormEstimate, OpNormOptions};
pub use schatten::{schatten_norm, singular_values, SchattenReport};
pub use tridiag::{solve_tridiagonal, SymTridiagonal};
