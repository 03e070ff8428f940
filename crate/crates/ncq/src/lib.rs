//! Invariant suite and report plumbing for the `ncq` command line.

pub mod suite;
