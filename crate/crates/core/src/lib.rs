//! Intrinsic multi-qubit phase gates on exchange-coupled spin-qubit arrays.

pub mod algebra;
pub mod apps;
pub mod basis;
pub mod calib;
pub mod cli;
pub mod error;
pub mod model;
pub mod sim;

pub use error::{Error, Result};
