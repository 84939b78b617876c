//! File formats and command-line front end for the `muxsynth` compiler.

pub mod app;
pub mod corpus;
pub mod format;
