//! Pointwise numerical checks for selfsimilar, conical, radiant and Hessian
//! structures on coordinate charts.

pub mod catalog;
pub mod cli;
pub mod cone;
pub mod error;
pub mod expr;
pub mod families;
pub mod hessian;
pub mod par;
pub mod report;
pub mod tensor;
pub mod theorems;

pub use error::{Error, Result};
