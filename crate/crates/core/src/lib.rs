//! Exact characteristic-2 computations with rank-2 bundles on hyperelliptic
//! curves whose Frobenius pull-back is not semi-stable.

pub mod cli;
pub mod constructions;
pub mod curve;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod lattice;
pub mod linalg;
pub mod picard;
pub mod poly;
pub mod quot;
pub mod ratfunc;
pub mod series;
pub mod sheaves;
pub mod stability;

pub use error::{Error, Result};
pub use field::Fe;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use curve::{load_curve, CurveConfig, CurveModel, Func, Place, PlaceKind};
pub use picard::{Divisor, DivisorClass};
