//! Numerical workbench for Grunsky operators and quasiconformal maps.
//!
//! The crate builds univalent functions with prescribed quasiconformal
//! extension by solving the Beltrami equation, extracts their Grunsky
//! matrices and norms, and evaluates the derived quasiinvariants (Fredholm
//! eigenvalues, reflection coefficients, hyperbolic distances) together
//! with Schwarzian-derivative and orthonormal-basis machinery for special
//! domains.
//!
//! Data-parallel inner loops (FFT passes, quadrature sums, parameter
//! sweeps) run on rayon when the default `parallel` feature is enabled and
//! degrade to sequential loops without it.

pub mod analysis;
pub mod beltrami;
pub mod domains;
pub mod error;
pub mod extremal;
pub mod grunsky;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod schwarzian;
pub mod series;

pub mod verify;

pub(crate) mod par;

pub use error::{Error, Result};
pub use num_complex::Complex64;
