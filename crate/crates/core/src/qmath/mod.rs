//! Dense complex linear algebra for small tensor-product Hilbert spaces.

mod eigen;
mod matrix;
mod subsystem;

pub use eigen::{
    eig_hermitian, trace_norm, vn_entropy, ENTROPY_CLAMP, ENTROPY_REJECT, HERMITIAN_INPUT_TOL,
    JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL,
};
pub use matrix::{
    ComplexMatrix, DensityMatrix, StateVector, DENSITY_EIGEN_FLOOR, DENSITY_HERMITIAN_TOL,
    DENSITY_TRACE_TOL,
};
pub use subsystem::{partial_trace, partial_transpose, partial_transpose_matrix, SubsystemShape};

pub use num_complex::Complex64;
