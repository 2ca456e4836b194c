//! Command implementations and file formats behind the `troprank` binary.
//!
//! The binary in `main.rs` is a thin argument parser over [`commands`];
//! integration tests and other tooling call the same functions directly.

pub mod commands;
pub mod format;
