//! Exact polynomial and algebraic-number machinery.

pub mod algebraic;
pub mod lll;
pub mod matrix;
pub mod poly;
pub mod resultant;
pub mod roots;

pub use poly::{mignotte_gap, squarefree_decompose, IntPoly, QPoly};
