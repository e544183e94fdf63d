//! File formats and command-line front end for `wmk-core`.

pub mod cli;
pub mod io;

pub use cli::{run, Status};
pub use io::{Input, InputError};
