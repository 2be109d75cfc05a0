//! Exact evaluation of Krawtchouk, Tratnik and λ-Griffiths polynomials and
//! mechanical verification of their bispectral identities.

pub mod error;
pub mod exact;
pub mod griffiths;
pub mod krawtchouk;
pub mod operators;
pub mod oscillator;
pub mod stencil;
pub mod suites;
pub mod tratnik;

pub use error::{Error, Result};
pub use exact::{Matrix, Rational, TriangleGrid};
