//! Command line, file formats and batch experiments on top of [`entroute_core`].

pub mod cli;
pub mod format;
pub mod report;
pub mod sweep;
