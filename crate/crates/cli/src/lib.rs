//! Command-line front end for `hermann-core`.

pub mod commands;
pub mod datum_file;
pub mod render;
pub mod svg;

pub use commands::run;
