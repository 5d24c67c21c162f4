//! Exact computations with smooth affine quadrics over the rationals and
//! their A1-connected components.

pub mod arith;
pub mod connect;
pub mod error;
pub mod field;
pub mod forms;
pub mod homotopy;
pub mod linalg;
pub mod numfield;
pub mod poly;
pub mod qvt;
pub mod quadrics;
pub mod search;

pub use error::{Error, Result};
