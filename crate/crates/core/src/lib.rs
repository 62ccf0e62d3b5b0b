pub mod cli;
pub mod cohomology;
pub mod error;
pub mod etale;
pub mod field;
pub mod json;
pub mod lifting;
pub mod sample;
pub mod util;
pub mod verify;
pub mod weyl;
pub mod witt;

pub use error::{Error, Result};
