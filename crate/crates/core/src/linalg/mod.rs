//! Linear algebra over `Z/N` and `Z`.

pub mod howell;
pub mod smith;

pub use howell::{kernel, solve, HowellBasis, Solution};
pub use smith::{smith, Smith};
