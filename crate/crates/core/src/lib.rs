pub mod cyclo;
pub mod dieudonne;
pub mod division;
pub mod error;
pub mod galois;
pub mod gl;
pub mod harness;
pub mod local;
pub mod parity;
pub mod report;

pub use error::{Error, Result};
