//! Operator Krylov-space tools: Lanczos coefficients of the Heisenberg
//! evolution of an operator, the Krylov variance of those coefficients, and
//! the single-particle dynamics they generate on the Krylov chain.
//!
//! Everything works at infinite temperature, with the operator inner product
//! `(A|B) = Tr[A^dagger B] / N`.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod lanczos;
mod linalg;
pub mod models;
pub mod observables;
pub mod oracles;

pub use algebra::{
    apply_liouvillian, apply_liouvillian_tilde, hermitize, inner_product, normalize, Hamiltonian,
    HilbertSpace, OperatorState,
};
pub use error::{KrylovError, Result};
pub use lanczos::{
    orthogonality_error, run_lanczos, run_lanczos_in, run_with_backend, Backend, BackendRun, DenseSpace, KrylovSpace, LanczosConfig,
    MAX_ORTHOGONALIZATION_PASSES,
    LanczosResult, LiouvillianKind, SpectralMeasure, SpectralVector, Termination,
};
pub use linalg::DENSE_EIGEN_LIMIT;
