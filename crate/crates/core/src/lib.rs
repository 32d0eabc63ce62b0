//! Exact arithmetic for traces of Hecke operators on cusp forms of level
//! 3 and 9, computed by independent routes — class-number sums, elliptic
//! curve family sums, Gaussian hypergeometric character sums, and weight
//! recursions — together with the eta-product Fourier coefficients and
//! the point counts of the threefold x^3 = y1 y2 y3 (y1+1)(y2+1)(y3+1)
//! that tie them together.

pub mod characters;
pub mod classnum;
pub mod eisenstein;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod hypergeom;
pub mod modularity;
pub mod trace;

pub use eisenstein::Rational;
pub use error::{Error, Result};
pub use field::{build_field, build_field_with_bound, FieldCtx, DEFAULT_FIELD_BOUND};
