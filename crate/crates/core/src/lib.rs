pub mod algebra;
pub mod decide;
pub mod error;
pub mod hardness;
pub mod lrs;
pub mod numeric;
pub mod relations;
pub mod report;
pub mod selftest;
pub mod spectral;

pub use error::{Error, Result};
