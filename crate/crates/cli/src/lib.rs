//! Command-line front end: expression parsing, suite orchestration and
//! machine-readable reports.

pub mod expr;
pub mod suite;
