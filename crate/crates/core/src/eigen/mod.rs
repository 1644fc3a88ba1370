mod dense;
mod tridiag;

pub use dense::{eigs_generalized_sym, DenseSymPair, DENSE_CAP};
pub use tridiag::{
    bisect_eigenvalue, eigs_path_pencil, eigs_sym_tridiagonal, inverse_iteration, sturm_eigenvalues,
    PathPencil, SturmCount, SymTriMatrix,
};

/// Ascending eigenvalues, optional eigenvectors, and per-pair residuals
/// ‖Kv − λMv‖ / ‖Mv‖.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult<T> {
    pub values: Vec<T>,
    pub vectors: Option<Vec<Vec<T>>>,
    pub residuals: Vec<T>,
}
