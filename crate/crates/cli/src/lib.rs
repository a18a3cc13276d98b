//! Command line front end and local session service for `qcluster-core`.

pub mod commands;
pub mod error;
pub mod exec;
pub mod json;
pub mod server;
pub mod verify;
