//! File formats, rendering and the `sseq` command line for `sseq-core` charts.

pub mod cli;
pub mod dsl;
pub mod render;
