//! Locally recoverable codes with availability built from fiber products of
//! curves over finite fields.

pub mod bounds;
pub mod code_builder;
pub mod curves;
pub mod distance;
pub mod error;
pub mod family;
pub mod gf;
pub mod linalg;
pub mod recovery;
pub mod tables;

pub use error::{Error, Result};
