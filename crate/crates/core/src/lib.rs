//! State evolution over weighted digraphs, from marbles to qubits.
//!
//! Three regimes share one picture: a column vector describes the state and
//! a square matrix moves it forward one time click.
//!
//! - [`Regime::Deterministic`]: boolean matrices with one 1 per column move
//!   marble counts.
//! - [`Regime::Stochastic`]: doubly stochastic matrices move probabilities.
//! - [`Regime::Quantum`]: unitary matrices move complex amplitudes, whose
//!   modulus squares are the measurement probabilities.
//!
//! On top of that sit qubits and gates ([`gates`]), measurement
//! ([`measurement`]) and Deutsch's algorithm ([`deutsch`]).
//!
//! ```
//! use marbles::{mat_vec, DenseMatrix, StateVector};
//!
//! let m = marbles::experiments::fixtures::marble_matrix();
//! let x = StateVector::from_real(&[6., 2., 1., 5., 3., 10.]).unwrap();
//! let y = mat_vec(&m, &x).unwrap();
//! assert_eq!(y, StateVector::from_real(&[0., 0., 12., 5., 1., 9.]).unwrap());
//! # let _ = DenseMatrix::identity(1);
//! ```

pub mod algebra;
pub mod deutsch;
pub mod dynamics;
mod error;
pub mod experiments;
pub mod gates;
pub mod measurement;

pub use algebra::{
    adjoint, bool_mat_mul, kron, mat_mul, mat_vec, modulus_squared, norm, normalize, validate,
    DenseMatrix, MatrixClass, StateVector, Validation, Violation, C64, DEFAULT_TOL,
};
pub use dynamics::{
    compose_parallel, compose_sequential, evolve, state_tensor, step, MarbleState, Mode,
    ProbabilityState, QuantumState, Regime, RegimeSystem, State,
};
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/deterministic.md")]
    mod deterministic {}
    #[doc = include_str!("../../../book/src/probabilistic.md")]
    mod probabilistic {}
    #[doc = include_str!("../../../book/src/quantum.md")]
    mod quantum {}
    #[doc = include_str!("../../../book/src/combining.md")]
    mod combining {}
    #[doc = include_str!("../../../book/src/measurement.md")]
    mod measurement {}
    #[doc = include_str!("../../../book/src/gates.md")]
    mod gates {}
    #[doc = include_str!("../../../book/src/deutsch.md")]
    mod deutsch {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
