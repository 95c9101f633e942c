//! Text format and command surface for the `polyqudit` binary.

pub mod commands;
pub mod text;

pub use commands::{execute, Cli, Command, Output};
pub use text::{parse_lopp, parse_qudit, print_lopp, print_qudit, TextError};
