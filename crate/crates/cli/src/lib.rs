//! Library side of the `hyperdet` binary: the input schema, the subcommands,
//! a rayon executor and the seeded random suites.

pub mod commands;
pub mod exec;
pub mod report;
pub mod schema;
pub mod suite;
