//! Hecke characters over small number fields and the compatible systems of
//! one-dimensional mod-p representations attached to them.

pub mod algebra;
pub mod arith;
pub mod codec;
pub mod compatsys;
pub mod error;
pub mod finite_field;
pub mod fp_poly;
pub mod hecke;
pub mod intmat;
pub mod multdep;
pub mod rayclass;
pub mod reconstruct;

pub use error::{Error, Result};
