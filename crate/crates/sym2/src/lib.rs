//! Numerical reproduction of the first moment of symmetric square L-functions at the
//! central point over level-one Hecke eigenforms of weight k.

pub mod arith;
pub mod asymptotics;
pub mod error;
pub mod harness;
pub mod lvalues;
pub mod modforms;
pub mod mp;
pub mod precision;
pub mod specfun;

pub use error::{Error, Result};
pub use precision::PrecisionPolicy;
