//! Library surface of the batch front-end: flag-value parsers, the
//! command implementations, and the deterministic table writers. The
//! binary in `main.rs` is a thin argument-handling shell over this.

pub mod config;
pub mod output;
pub mod run;
