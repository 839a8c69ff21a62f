//! Serialization formats and terminal rendering for `duosched` artifacts.
//!
//! The binary in this package wires the scheduler, oracle, and verifier
//! into subcommands; this library holds the parts worth reusing and
//! testing on their own: the JSON documents instances and schedules travel
//! in, a small DOT reader for graphs without explicit levels, and the
//! ASCII Gantt renderer.

pub mod gantt;
pub mod io;
