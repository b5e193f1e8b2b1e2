//! Library half of the `plucker-dss` command: configuration, file encoding,
//! snapshots and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod error;
pub mod snapshot;
pub mod symbols;

pub use commands::{cmd_gen_assignment, cmd_goodmatrix, cmd_run, cmd_store, cmd_verify_assignment, Format, Outcome};
pub use config::{ConfigFile, Loaded, Overrides};
pub use error::{CliError, CliResult};
pub use snapshot::Snapshot;
