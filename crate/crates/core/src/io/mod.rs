//! Configuration input and table output.

pub mod config;
pub mod format;
pub mod units;
