//! Exact point counting by the p-adic determinant method.
//!
//! The crate is layered bottom-up: exact coefficients and polynomials,
//! Gröbner staircases, integral models and local multiplicities, brute-force
//! enumeration, determinant certificates, geometric condition checks, and
//! the counting pipelines that tie them together.

pub mod bivariate;
pub mod coeff;
pub mod detmethod;
pub mod enumerate;
pub mod error;
pub mod geometry;
pub mod ext;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod pipeline;
pub mod point;
pub mod poly;
pub mod roots;
pub mod solve;
pub mod staircase;
pub mod univariate;
pub mod zmodel;

pub use coeff::{Coeff, FieldCoeff, FiniteField, Fp, Fq, FqField};
pub use error::{Error, Result};
pub use monomial::{ExponentVec, MonomialOrder, TermOrder};
pub use point::IntPoint;
pub use poly::{Polynomial, QPoly, VarStyle, ZPoly};
