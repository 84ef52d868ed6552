pub mod abelian;
pub mod center;
pub mod cli;
pub mod clifford;
pub mod cohomology;
pub mod config;
pub mod error;
pub mod linalg;
pub mod orthogonal;
pub mod quadratic;
pub mod scalars;
pub mod subgroups;

pub use error::{Error, Result};
