//! Command-line front end for `rpp-core` and the acceptance-suite driver.

pub mod app;
pub mod input;
pub mod manifest;
pub mod suite;

pub use app::{dispatch, Outcome};
