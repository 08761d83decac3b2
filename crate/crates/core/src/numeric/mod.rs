//! Certified numerics: dyadic rationals, real intervals and complex boxes.

pub mod cbox;
pub mod dyadic;
pub mod interval;

pub use cbox::CBox;
pub use dyadic::{Dyadic, Round};
pub use interval::Interval;
