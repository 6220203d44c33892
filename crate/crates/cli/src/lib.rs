//! Command-line front end: batch computations over matrix files, random test
//! sets and a throughput benchmark. See [`app::run`].

pub mod app;
pub mod bench;
pub mod format;
pub mod record;

pub use app::{run, Exit};
