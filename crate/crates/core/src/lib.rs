pub mod algebra;
pub mod bae;
pub mod bethe;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod numeric;
pub mod polyring;
pub mod quasiexp;
pub mod scalar;
pub mod spectral;
pub mod util;

pub use error::{Error, Result};
