//! Problem files and subcommands for the `egvi` tool.

pub mod commands;
pub mod config;

pub use commands::{cmd_audit, cmd_compare, cmd_oracle, cmd_run, Console, ExitStatus};
pub use config::{parse_config, serialize, ConfigError, ProblemConfig};
