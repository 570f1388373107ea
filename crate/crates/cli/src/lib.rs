//! File formats, configuration, and experiment drivers for the `mecsize`
//! command-line tool. The algorithmic core lives in `mecsize-core`; this
//! crate adds everything that touches the filesystem or a terminal.

pub mod config;
pub mod experiments;
pub mod format;
