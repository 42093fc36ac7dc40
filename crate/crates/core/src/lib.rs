pub mod cli;
pub mod error;
pub mod group;
pub mod hurwitz;
pub mod koszul;
pub mod linalg;
pub mod presentation;
pub mod rings;
pub mod stability;

pub use error::{Error, Result};
