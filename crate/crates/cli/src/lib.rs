//! Command line, acceptance suite and HTTP service over `qpcat-core`.

pub mod builders;
pub mod commands;
pub mod oracle;
pub mod server;
pub mod verify;
