//! JSON documents and command implementations behind the `cybe` binary.

pub mod commands;
pub mod document;
