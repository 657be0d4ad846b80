//! Exact linear algebra over `Q`, finite-dimensional algebras given by quivers
//! with relations, their module categories, and derived-equivalence
//! certificates for triangular matrix algebras.

pub mod algebra;
pub mod ar;
pub mod certificate;
pub mod derived;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod glue;
pub mod linalg;
pub mod module;
pub mod recollement;

pub use error::{Error, Result};
