//! Command-line front end for `dirimul`: the series expression language, the
//! command implementations, and the `verify` battery.

pub mod commands;
pub mod expr;
pub mod verify;

pub use commands::{run, Cli, Command, Global, Output};
pub use expr::{parse_constant, parse_series, print_series};
pub use verify::{run_verify, Check, Status, VerifyReport};
