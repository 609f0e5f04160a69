//! Dense complex Hermitian linear algebra.

mod calculus;
mod eigen;
mod io;
mod matrix;
mod polar;
pub mod random;
mod symmetric;

pub use calculus::{
    apply_to_eigen, matrix_function, matrix_function_with, psd_eigenvalues, psd_function, psd_function_with,
};
pub use eigen::{eigenvalues, eigh, psd_margin, EigenDecomposition};
pub use io::{load_matrix, matrix_from_csv, matrix_from_json, matrix_to_json, MatrixFile};
pub use matrix::{unitarity_defect, ComplexMatrix, HermitianMatrix, UnitaryMatrix, C64, UNITARY_TOL};
pub use polar::{contraction_to_unitaries, modulus, operator_norm, polar, singular_values, svd, Polar, Svd};
pub use random::haar_unitary;
pub use symmetric::{elementary_symmetric, elementary_symmetric_all};
