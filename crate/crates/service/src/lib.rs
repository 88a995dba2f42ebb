//! Operational surface of `argus-core`: the `argus` command line and the
//! HTTP session service behind it.

pub mod cli;
pub mod http;
pub mod session;
pub mod store;
