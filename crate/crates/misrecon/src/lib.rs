//! File formats, a seeded experiment harness and lower-bound demos on top of
//! [`misrecon_core`].

pub mod demos;
pub mod experiment;
pub mod format;
pub mod verify;

pub use misrecon_core as core;
