pub mod budget;
pub mod determinants;
pub mod error;
pub mod hopf;
pub mod localization;
pub mod points;
pub mod presentation;
pub mod qspaces;
pub mod ring;
pub mod scalars;

pub use error::{Error, Result};
