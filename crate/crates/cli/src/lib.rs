//! Library surface of the `cartier` command-line tool: document parsing,
//! report structures, the bundled corpus and the command implementations.
//! The binary in `main.rs` is a thin argument-parsing wrapper.

pub mod commands;
pub mod corpus;
pub mod doc;
pub mod report;
