//! Exact symbolic engine for Jordan and Lie conformal superalgebras.
//!
//! The crate builds the generalized Poisson superalgebras `P(m, n)`, their
//! Kantor–King–McCrimmon doubles, `js(1,1)`, and the conformal superalgebras
//! `Cur 𝔞`, `J_n`, `JS_1`, `K_n`, `CK_6`, `JCK_4`, and checks their defining
//! identities as exact zero residuals.

pub mod annihilation;
pub mod brackets;
pub mod conformal;
pub mod constructions;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod superpoly;

pub use error::{AlgebraError, Result};
pub use scalar::{FieldElem, Rat};
pub use superpoly::{Parity, SPoly, Signature, Var};
