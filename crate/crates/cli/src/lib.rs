//! Command line driver for the kummerian engine: the bundled corpus, the
//! corpus report, and the individual commands.

pub mod commands;
pub mod corpus;
pub mod report;

pub use report::{run_corpus, Report};
